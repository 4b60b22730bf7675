//! Resolution dual graphs: data model, text format, intersection form and
//! the structural checks every analysis starts with.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate vertex id `{id}`")]
    DuplicateVertex { line: usize, id: String },
    #[error("line {line}: edge references unknown vertex `{id}`")]
    UnknownVertex { line: usize, id: String },
    #[error("line {line}: loop edge at vertex `{id}`")]
    LoopEdge { line: usize, id: String },
    #[error("edge ({0}, {1}) is out of range or a loop")]
    InvalidEdge(usize, usize),
    #[error("invalid vertex decoration: {0}")]
    InvalidVertex(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

/// Decorations of one exceptional component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexData {
    pub id: String,
    pub genus: u32,
    pub self_intersection: i64,
    pub multiplicity: Option<u64>,
}

impl VertexData {
    pub fn new(id: impl Into<String>, genus: u32, self_intersection: i64) -> Result<Self, GraphError> {
        let id = id.into();
        if self_intersection >= 0 {
            return Err(GraphError::InvalidVertex(format!(
                "vertex `{id}` has non-negative self-intersection {self_intersection}"
            )));
        }
        Ok(VertexData { id, genus, self_intersection, multiplicity: None })
    }

    pub fn with_multiplicity(mut self, mult: u64) -> Result<Self, GraphError> {
        if mult == 0 {
            return Err(GraphError::InvalidVertex(format!("vertex `{}` has multiplicity 0", self.id)));
        }
        self.multiplicity = Some(mult);
        Ok(self)
    }
}

/// Weighted multigraph without loops. Vertex order is declaration order and
/// fixes every downstream index space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<VertexData>,
    edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn new(vertices: Vec<VertexData>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for v in &vertices {
            if v.self_intersection >= 0 {
                return Err(GraphError::InvalidVertex(format!(
                    "vertex `{}` has non-negative self-intersection {}",
                    v.id, v.self_intersection
                )));
            }
        }
        for &(a, b) in &edges {
            if a == b || a >= vertices.len() || b >= vertices.len() {
                return Err(GraphError::InvalidEdge(a, b));
            }
        }
        Ok(DualGraph { vertices, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &VertexData {
        &self.vertices[i]
    }

    /// Edges as stored: one entry per edge, parallel edges repeated.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Valence counting edge multiplicity.
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// `(neighbor, edge index)` for every edge at `v`, in edge order.
    pub fn incident(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
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
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graph with vertices reordered so that new vertex `i` is old vertex `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> DualGraph {
        assert_eq!(order.len(), self.vertices.len());
        let mut inverse = vec![usize::MAX; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let vertices = order.iter().map(|&old| self.vertices[old].clone()).collect();
        let edges = self.edges.iter().map(|&(a, b)| (inverse[a], inverse[b])).collect();
        DualGraph { vertices, edges }
    }

    pub fn to_text(&self) -> String {
        serialize_graph(self)
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_graph(self))
    }
}

fn parse_int<T: std::str::FromStr>(value: &str, key: &str, line: usize) -> Result<T, GraphError> {
    value.parse::<T>().map_err(|_| GraphError::Syntax { line, message: format!("invalid value `{value}` for `{key}`") })
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// vertex <id> genus=<int>=0> selfint=<int<0> [mult=<int>=1>]
/// edge <id1> <id2>
/// ```
pub fn parse_graph(text: &str) -> Result<DualGraph, GraphError> {
    let mut vertices: Vec<VertexData> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = content.split_whitespace();
        let Some(keyword) = tokens.next() else { continue };
        match keyword {
            "vertex" => {
                let id =
                    tokens.next().ok_or_else(|| GraphError::Syntax { line, message: "missing vertex id".into() })?;
                let mut genus = None;
                let mut selfint = None;
                let mut mult = None;
                for tok in tokens {
                    let (key, value) = tok.split_once('=').ok_or_else(|| GraphError::Syntax {
                        line,
                        message: format!("expected key=value, found `{tok}`"),
                    })?;
                    let slot = match key {
                        "genus" => &mut genus,
                        "selfint" => &mut selfint,
                        "mult" => &mut mult,
                        _ => return Err(GraphError::Syntax { line, message: format!("unknown key `{key}`") }),
                    };
                    if slot.is_some() {
                        return Err(GraphError::Syntax { line, message: format!("repeated key `{key}`") });
                    }
                    *slot = Some(value);
                }
                let genus: u32 = parse_int(
                    genus.ok_or_else(|| GraphError::Syntax { line, message: "missing genus".into() })?,
                    "genus",
                    line,
                )?;
                let selfint: i64 = parse_int(
                    selfint.ok_or_else(|| GraphError::Syntax { line, message: "missing selfint".into() })?,
                    "selfint",
                    line,
                )?;
                if selfint >= 0 {
                    return Err(GraphError::Syntax {
                        line,
                        message: format!("selfint must be negative, got {selfint}"),
                    });
                }
                let mult = match mult {
                    Some(m) => {
                        let m: u64 = parse_int(m, "mult", line)?;
                        if m == 0 {
                            return Err(GraphError::Syntax { line, message: "mult must be at least 1".into() });
                        }
                        Some(m)
                    }
                    None => None,
                };
                if index.contains_key(id) {
                    return Err(GraphError::DuplicateVertex { line, id: id.to_string() });
                }
                index.insert(id.to_string(), vertices.len());
                vertices.push(VertexData { id: id.to_string(), genus, self_intersection: selfint, multiplicity: mult });
            }
            "edge" => {
                let ids: Vec<&str> = tokens.collect();
                if ids.len() != 2 {
                    return Err(GraphError::Syntax { line, message: "edge needs exactly two vertex ids".into() });
                }
                let lookup = |id: &str| {
                    index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex { line, id: id.to_string() })
                };
                let a = lookup(ids[0])?;
                let b = lookup(ids[1])?;
                if a == b {
                    return Err(GraphError::LoopEdge { line, id: ids[0].to_string() });
                }
                edges.push((a, b));
            }
            other => {
                return Err(GraphError::Syntax { line, message: format!("unknown statement `{other}`") });
            }
        }
    }
    Ok(DualGraph { vertices, edges })
}

pub fn serialize_graph(g: &DualGraph) -> String {
    let mut out = String::new();
    for v in &g.vertices {
        out.push_str(&format!("vertex {} genus={} selfint={}", v.id, v.genus, v.self_intersection));
        if let Some(m) = v.multiplicity {
            out.push_str(&format!(" mult={m}"));
        }
        out.push('\n');
    }
    for &(a, b) in &g.edges {
        out.push_str(&format!("edge {} {}\n", g.vertices[a].id, g.vertices[b].id));
    }
    out
}

/// Symmetric integer matrix `(E_i . E_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntersectionMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "intersection matrix must be square");
            data.extend(r);
        }
        IntersectionMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `E_i . Z` for a coefficient vector `z`.
    pub fn dot_row(&self, i: usize, z: &[u64]) -> i64 {
        (0..self.n).map(|j| self.get(i, j) * z[j] as i64).sum()
    }

    /// `Z . E_i` for every `i`.
    pub fn apply(&self, z: &[u64]) -> Vec<i64> {
        (0..self.n).map(|i| self.dot_row(i, z)).collect()
    }

    /// `x^T M x` for a signed vector.
    pub fn quadratic_form(&self, x: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += x[i] * self.get(i, j) * x[j];
            }
        }
        acc
    }
}

pub fn intersection_matrix(g: &DualGraph) -> IntersectionMatrix {
    let n = g.vertex_count();
    let mut data = vec![0i64; n * n];
    for (i, v) in g.vertices().iter().enumerate() {
        data[i * n + i] = v.self_intersection;
    }
    for &(a, b) in g.edges() {
        data[a * n + b] += 1;
        data[b * n + a] += 1;
    }
    IntersectionMatrix { n, data }
}

/// Leading principal minors, computed exactly by fraction-free elimination.
pub fn leading_minors(m: &IntersectionMatrix) -> Vec<BigInt> {
    let n = m.dim();
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(m.get(i, j))).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            // Remaining leading minors need the unpivoted matrix; fall back to
            // computing each one from scratch.
            for size in (k + 2)..=n {
                minors.push(determinant(m, size));
            }
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Determinant of the leading `size x size` block via Bareiss with row pivoting.
fn determinant(m: &IntersectionMatrix, size: usize) -> BigInt {
    let mut a: Vec<Vec<BigInt>> = (0..size).map(|i| (0..size).map(|j| BigInt::from(m.get(i, j))).collect()).collect();
    let mut prev = BigInt::from(1);
    let mut sign = 1;
    for k in 0..size {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..size {
            for j in (k + 1)..size {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if size == 0 {
        return BigInt::from(1);
    }
    a[size - 1][size - 1].clone() * sign
}

/// True iff the form is negative definite: the k-th leading minor has sign `(-1)^k`.
pub fn is_negative_definite(m: &IntersectionMatrix) -> bool {
    if m.dim() == 0 {
        return false;
    }
    leading_minors(m).iter().enumerate().all(|(k, d)| if (k + 1) % 2 == 1 { d.is_negative() } else { d.is_positive() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TautnessPrecheck {
    pub potentially_taut: bool,
    pub violations: Vec<Violation>,
}

/// Necessary condition for tautness: genus 0 everywhere and valence at most 3.
pub fn is_potentially_taut(g: &DualGraph) -> TautnessPrecheck {
    let mut violations = Vec::new();
    for (i, v) in g.vertices().iter().enumerate() {
        if v.genus > 0 {
            violations.push(Violation { vertex: v.id.clone(), reason: "genus>0".into() });
        }
        if g.valence(i) > 3 {
            violations.push(Violation { vertex: v.id.clone(), reason: "valence>3".into() });
        }
    }
    TautnessPrecheck { potentially_taut: violations.is_empty(), violations }
}
