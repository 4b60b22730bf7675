use serde::Serialize;

use super::{PlumbingError, PlumbingModel, Slot};
use crate::arith::gcd;

/// Local description of a point on one of its two lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointSide {
    pub vertex: usize,
    pub chart: u8,
    pub shifted: bool,
}

/// The transversal intersection of the lines of the two ends of an edge.
/// `sides[0]` is the canonical side (smaller vertex index) that expresses
/// the row window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntersectionPoint {
    pub edge: usize,
    pub sides: [PointSide; 2],
}

impl IntersectionPoint {
    pub fn canonical(&self) -> usize {
        self.sides[0].vertex
    }

    pub fn arm(&self) -> usize {
        self.sides[1].vertex
    }

    pub fn touches(&self, v: usize) -> bool {
        self.canonical() == v || self.arm() == v
    }
}

pub fn enumerate_points(m: &PlumbingModel) -> Vec<IntersectionPoint> {
    m.edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let side = |v: usize| {
                let slot: Slot = m.slot(e, v);
                PointSide { vertex: v, chart: slot.chart(), shifted: slot.shifted() }
            };
            let (c, o) = if a < b { (a, b) } else { (b, a) };
            IntersectionPoint { edge: e, sides: [side(c), side(o)] }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    #[serde(rename = "dx")]
    Dx,
    #[serde(rename = "dy")]
    Dy,
}

/// Row basis element `x^e1 y^e2 d/dkind` on the canonical side of `point`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowIndex {
    pub point: usize,
    pub kind: Kind,
    pub exponents: (u64, u64),
}

#[derive(Debug, Clone, Copy)]
struct Window {
    offset: usize,
    n_arm: u64,
    n_vertex: u64,
}

impl Window {
    fn dx_len(&self) -> usize {
        ((self.n_arm - 1) * self.n_vertex) as usize
    }

    fn dy_len(&self) -> usize {
        (self.n_arm * (self.n_vertex - 1)) as usize
    }
}

/// Row windows of all points, concatenated in edge order. Per point the dx
/// block (`s` in `[1, n_arm)`, `t` in `[0, n_vertex)`) precedes the dy block
/// (`u` in `[0, n_arm)`, `v` in `[1, n_vertex)`).
#[derive(Debug, Clone)]
pub struct RowSpace {
    windows: Vec<Window>,
    len: usize,
}

impl RowSpace {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point_count(&self) -> usize {
        self.windows.len()
    }

    /// Row of `x^e1 y^e2 d/dkind` at `point`, if it lies in the window.
    pub fn index(&self, point: usize, kind: Kind, e1: u64, e2: u64) -> Option<usize> {
        let w = self.windows[point];
        match kind {
            Kind::Dx => {
                (e1 >= 1 && e1 < w.n_arm && e2 < w.n_vertex).then(|| w.offset + ((e1 - 1) * w.n_vertex + e2) as usize)
            }
            Kind::Dy => (e1 < w.n_arm && e2 >= 1 && e2 < w.n_vertex)
                .then(|| w.offset + w.dx_len() + (e1 * (w.n_vertex - 1) + e2 - 1) as usize),
        }
    }

    /// Inverse of [`RowSpace::index`].
    pub fn row(&self, r: usize) -> RowIndex {
        assert!(r < self.len, "row {r} out of range");
        let point = self.windows.partition_point(|w| w.offset <= r) - 1;
        let w = self.windows[point];
        let local = r - w.offset;
        if local < w.dx_len() {
            let local = local as u64;
            RowIndex { point, kind: Kind::Dx, exponents: (local / w.n_vertex + 1, local % w.n_vertex) }
        } else {
            let local = (local - w.dx_len()) as u64;
            let width = w.n_vertex - 1;
            RowIndex { point, kind: Kind::Dy, exponents: (local / width, local % width + 1) }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = RowIndex> + '_ {
        (0..self.len).map(|r| self.row(r))
    }
}

/// Row space of the model. Fails when some analysis prime divides a
/// multiplicity, where the window would need the unsupported `delta = 0` rows.
pub fn row_space(m: &PlumbingModel) -> Result<RowSpace, PlumbingError> {
    for &p in m.primes() {
        for (l, v) in m.vertices().iter().enumerate() {
            if p > 1 && gcd(p, v.multiplicity) != 1 {
                return Err(PlumbingError::DeltaZero { prime: p, vertex: l });
            }
        }
    }
    let mut windows = Vec::new();
    let mut offset = 0;
    for pt in enumerate_points(m) {
        let w =
            Window { offset, n_arm: m.vertex(pt.arm()).multiplicity, n_vertex: m.vertex(pt.canonical()).multiplicity };
        offset += w.dx_len() + w.dy_len();
        windows.push(w);
    }
    Ok(RowSpace { windows, len: offset })
}
