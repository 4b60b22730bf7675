use serde::Serialize;

use super::PlumbingError;
use crate::arith::{gcd, is_prime};
use crate::graph::{intersection_matrix, is_negative_definite, is_potentially_taut, DualGraph};

/// Where a neighboring arm meets the projective line of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Slot {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "inf")]
    Infinity,
    #[serde(rename = "1")]
    One,
}

impl Slot {
    pub const ORDER: [Slot; 3] = [Slot::Zero, Slot::Infinity, Slot::One];

    /// Chart hosting the point: `0` for slots 0 and 1, `1` for infinity.
    pub fn chart(self) -> u8 {
        match self {
            Slot::Zero | Slot::One => 0,
            Slot::Infinity => 1,
        }
    }

    /// Whether the local coordinate is `x - 1` rather than `x`.
    pub fn shifted(self) -> bool {
        self == Slot::One
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexChart {
    /// Negated self-intersection, the twist in `y_0 = x_1^nu y_1`.
    pub nu: u64,
    pub valence: usize,
    pub multiplicity: u64,
}

/// Chart data of the plumbing scheme: one thickened line per vertex, arms at
/// the slots recorded per edge end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingModel {
    vertices: Vec<VertexChart>,
    edges: Vec<(usize, usize)>,
    /// `slots[e] = [slot at edges[e].0, slot at edges[e].1]`.
    slots: Vec<[Slot; 2]>,
    primes: Vec<u64>,
}

impl PlumbingModel {
    pub fn vertices(&self) -> &[VertexChart] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &VertexChart {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Slot occupied by edge `e` on the line of vertex `v`.
    pub fn slot(&self, e: usize, v: usize) -> Slot {
        let (a, b) = self.edges[e];
        if v == a {
            self.slots[e][0]
        } else {
            assert_eq!(v, b, "vertex {v} is not an end of edge {e}");
            self.slots[e][1]
        }
    }

    /// `(edge, slot)` pairs at `v`, in edge order.
    pub fn slots_at(&self, v: usize) -> Vec<(usize, Slot)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(e, _)| (e, self.slot(e, v)))
            .collect()
    }

    /// Reassigns slots at `v`: the k-th incident edge (by neighbor index, then
    /// edge index) takes `assignment[k]`.
    pub fn with_slot_assignment(mut self, v: usize, assignment: &[Slot]) -> Result<Self, PlumbingError> {
        let incident = sorted_incident(&self.edges, v);
        if assignment.len() != incident.len() {
            return Err(PlumbingError::InvalidSlots { vertex: v, reason: "wrong number of slots".into() });
        }
        for (&(_, e), &slot) in incident.iter().zip(assignment) {
            let (a, _) = self.edges[e];
            self.slots[e][if a == v { 0 } else { 1 }] = slot;
        }
        self.validate_slots(v)?;
        Ok(self)
    }

    fn validate_slots(&self, v: usize) -> Result<(), PlumbingError> {
        let slots: Vec<Slot> = self.slots_at(v).into_iter().map(|(_, s)| s).collect();
        let t = slots.len();
        let bad = |reason: &str| Err(PlumbingError::InvalidSlots { vertex: v, reason: reason.into() });
        for (i, s) in slots.iter().enumerate() {
            if slots[..i].contains(s) {
                return bad("slot used twice");
            }
            match s {
                Slot::One if t < 3 => return bad("slot 1 needs valence 3"),
                Slot::Infinity if t < 2 => return bad("slot infinity needs valence at least 2"),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn intersection_point_count(&self) -> usize {
        self.edges.len()
    }

    /// Maximal multiplicity, used for sizing.
    pub fn max_multiplicity(&self) -> u64 {
        self.vertices.iter().map(|v| v.multiplicity).max().unwrap_or(0)
    }
}

/// `(neighbor, edge)` at `v`, sorted by neighbor index then edge index.
fn sorted_incident(edges: &[(usize, usize)], v: usize) -> Vec<(usize, usize)> {
    let mut inc: Vec<(usize, usize)> = edges
        .iter()
        .enumerate()
        .filter_map(|(e, &(a, b))| {
            if a == v {
                Some((b, e))
            } else if b == v {
                Some((a, e))
            } else {
                None
            }
        })
        .collect();
    inc.sort_unstable();
    inc
}

/// Plumbing model for `jE` (every multiplicity equal to the prime `j`).
pub fn build_model(g: &DualGraph, j: u64, primes: &[u64]) -> Result<PlumbingModel, PlumbingError> {
    if !is_prime(j) {
        return Err(PlumbingError::NotPrime(j));
    }
    build_model_with_multiplicities(g, &vec![j; g.vertex_count()], primes)
}

/// Plumbing model with arbitrary positive multiplicities.
pub fn build_model_with_multiplicities(
    g: &DualGraph,
    multiplicities: &[u64],
    primes: &[u64],
) -> Result<PlumbingModel, PlumbingError> {
    if multiplicities.len() != g.vertex_count() {
        return Err(PlumbingError::MultiplicityCount { expected: g.vertex_count(), got: multiplicities.len() });
    }
    if !g.is_connected() {
        return Err(PlumbingError::NotConnected);
    }
    let pre = is_potentially_taut(g);
    if !pre.potentially_taut {
        return Err(PlumbingError::NotPotentiallyTaut(
            pre.violations.iter().map(|v| format!("{}: {}", v.vertex, v.reason)).collect::<Vec<_>>().join(", "),
        ));
    }
    if !is_negative_definite(&intersection_matrix(g)) {
        return Err(PlumbingError::NotNegativeDefinite);
    }
    for &p in primes {
        for (l, &n) in multiplicities.iter().enumerate() {
            if n == 0 {
                return Err(PlumbingError::ZeroMultiplicity(l));
            }
            if p > 1 && gcd(p, n) != 1 {
                return Err(PlumbingError::GcdViolation { prime: p, vertex: l, multiplicity: n });
            }
        }
    }
    let vertices: Vec<VertexChart> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(l, v)| VertexChart {
            nu: (-v.self_intersection) as u64,
            valence: g.valence(l),
            multiplicity: multiplicities[l],
        })
        .collect();
    let edges = g.edges().to_vec();
    let mut slots = vec![[Slot::Zero; 2]; edges.len()];
    for v in 0..vertices.len() {
        for (k, (_, e)) in sorted_incident(&edges, v).into_iter().enumerate() {
            let (a, _) = edges[e];
            slots[e][if a == v { 0 } else { 1 }] = Slot::ORDER[k];
        }
    }
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    Ok(PlumbingModel { vertices, edges, slots, primes })
}
