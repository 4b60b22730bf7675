use num_bigint::BigInt;
use serde::Serialize;

use super::{IntersectionPoint, Kind, PlumbingError, PlumbingModel, RowSpace, Slot};
use crate::sparse::IntValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Y,
    X12,
    X1extra,
    X3,
}

/// One generator of the stalk of the tangent sheaf along a line, written in
/// chart 0 as
///
/// ```text
/// Y        x^a y^b d/dy
/// X12      x^a y^b d/dx
/// X1extra  -x^(nu b + 2) y^b d/dx + nu x^(nu b + 1) y^(b + 1) d/dy
/// X3       (x - 1) x^a y^b d/dx
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorColumn {
    pub vertex: usize,
    pub family: Family,
    pub a: u64,
    pub b: u64,
}

/// All generators with `b < n_l`, ordered by vertex, family, `b`, `a`.
pub fn enumerate_generators(m: &PlumbingModel) -> Vec<GeneratorColumn> {
    let mut out = Vec::new();
    for (l, v) in m.vertices().iter().enumerate() {
        let (nu, n) = (v.nu, v.multiplicity);
        let mut push = |family, a, b| out.push(GeneratorColumn { vertex: l, family, a, b });
        for b in 1..n {
            for a in 0..=nu * (b - 1) {
                push(Family::Y, a, b);
            }
        }
        if matches!(v.valence, 1 | 2) {
            for b in 0..n {
                for a in 1..=nu * b + 1 {
                    push(Family::X12, a, b);
                }
            }
        }
        if v.valence == 1 {
            for b in 0..n {
                push(Family::X1extra, 0, b);
            }
        }
        if v.valence == 3 {
            for b in 1..n {
                for a in 1..=nu * b {
                    push(Family::X3, a, b);
                }
            }
        }
    }
    out
}

/// Exact binomials `C(a, i)` for `a <= max_a`, `i < width`, with their
/// negatives, so expansions share one copy of every large value.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    width: usize,
    rows: Vec<Vec<IntValue>>,
    negated: Vec<Vec<IntValue>>,
}

impl BinomialTable {
    pub fn new(max_a: u64, width: u64) -> Self {
        let width = width as usize;
        let mut rows: Vec<Vec<IntValue>> = Vec::with_capacity(max_a as usize + 1);
        let mut prev: Vec<BigInt> = Vec::new();
        for a in 0..=max_a as usize {
            let len = width.min(a + 1);
            let cur: Vec<BigInt> = (0..len)
                .map(|i| {
                    if i == 0 || i == a {
                        BigInt::from(1)
                    } else {
                        let right = prev.get(i).cloned().unwrap_or_default();
                        &prev[i - 1] + right
                    }
                })
                .collect();
            rows.push(cur.iter().cloned().map(IntValue::from_bigint).collect());
            prev = cur;
        }
        let negated = rows.iter().map(|r| r.iter().map(|v| v.scaled(-1)).collect()).collect();
        BinomialTable { width, rows, negated }
    }

    /// Table large enough for every expansion of `m`.
    pub fn for_model(m: &PlumbingModel) -> Self {
        let max_a = m.vertices().iter().map(|v| v.nu * v.multiplicity.saturating_sub(1) + 2).max().unwrap_or(0);
        BinomialTable::new(max_a, m.max_multiplicity())
    }

    pub fn get(&self, a: u64, i: u64) -> &IntValue {
        assert!((i as usize) < self.width, "binomial C({a}, {i}) outside table width");
        &self.rows[a as usize][i as usize]
    }

    /// `c * C(a, i)`, shared with the table when `c = +-1`.
    pub fn scaled(&self, a: u64, i: u64, c: i64) -> IntValue {
        match c {
            1 => self.get(a, i).clone(),
            -1 => self.negated[a as usize][i as usize].clone(),
            _ => self.get(a, i).scaled(c),
        }
    }

    /// Bytes held by the large entries of the table.
    pub fn heap_bytes(&self) -> u64 {
        self.rows
            .iter()
            .chain(&self.negated)
            .flatten()
            .map(|v| match v {
                IntValue::Big(b) => 48 + b.bits().div_ceil(64) * 8,
                IntValue::Small(_) => 0,
            })
            .sum()
    }
}

/// A monomial vector field term in local coordinates `(x, y)` at a point,
/// `x` along the generator's line (shifted at slot 1), `y` transversal.
#[derive(Debug, Clone)]
struct Term {
    kind: Kind,
    x: u64,
    y: u64,
    coeff: IntValue,
}

fn small(kind: Kind, x: u64, y: u64, c: i64) -> Term {
    Term { kind, x, y, coeff: IntValue::Small(c) }
}

/// `c * sum_i C(e, i) x^i y^ye d/dkind` for `i < x_limit`; `shift` offsets the
/// x-exponent by one.
#[allow(clippy::too_many_arguments)]
fn binomial_sum(
    out: &mut Vec<Term>,
    table: &BinomialTable,
    kind: Kind,
    e: u64,
    shift: u64,
    ye: u64,
    c: i64,
    x_limit: u64,
) {
    for i in 0..=e {
        if i + shift >= x_limit {
            break;
        }
        out.push(Term { kind, x: i + shift, y: ye, coeff: table.scaled(e, i, c) });
    }
}

/// Terms of `sign * g` at a point in `slot` with exponents below
/// `(x_limit, y_limit)`.
fn local_terms(
    g: &GeneratorColumn,
    nu: u64,
    slot: Slot,
    sign: i64,
    (x_limit, y_limit): (u64, u64),
    table: &BinomialTable,
) -> Vec<Term> {
    let (a, b) = (g.a, g.b);
    let nu_i = nu as i64;
    let small = |kind, x, y, c: i64| small(kind, x, y, c * sign);
    let mut out = Vec::new();
    match slot {
        Slot::Zero => match g.family {
            Family::Y => out.push(small(Kind::Dy, a, b, 1)),
            Family::X12 => out.push(small(Kind::Dx, a, b, 1)),
            Family::X1extra => {
                out.push(small(Kind::Dx, nu * b + 2, b, -1));
                out.push(small(Kind::Dy, nu * b + 1, b + 1, nu_i));
            }
            Family::X3 => {
                out.push(small(Kind::Dx, a + 1, b, 1));
                out.push(small(Kind::Dx, a, b, -1));
            }
        },
        Slot::Infinity => match g.family {
            Family::Y => out.push(small(Kind::Dy, nu * (b - 1) - a, b, 1)),
            Family::X12 => {
                out.push(small(Kind::Dx, nu * b + 2 - a, b, -1));
                out.push(small(Kind::Dy, nu * b + 1 - a, b + 1, nu_i));
            }
            Family::X1extra => out.push(small(Kind::Dx, 0, b, 1)),
            Family::X3 => {
                out.push(small(Kind::Dx, nu * b + 2 - a, b, 1));
                out.push(small(Kind::Dx, nu * b + 1 - a, b, -1));
                out.push(small(Kind::Dy, nu * b + 1 - a, b + 1, -nu_i));
                out.push(small(Kind::Dy, nu * b - a, b + 1, nu_i));
            }
        },
        Slot::One => {
            if b >= y_limit {
                return out;
            }
            match g.family {
                Family::Y => binomial_sum(&mut out, table, Kind::Dy, a, 0, b, sign, x_limit),
                Family::X12 => binomial_sum(&mut out, table, Kind::Dx, a, 0, b, sign, x_limit),
                Family::X1extra => {
                    binomial_sum(&mut out, table, Kind::Dx, nu * b + 2, 0, b, -sign, x_limit);
                    if b + 1 < y_limit {
                        binomial_sum(&mut out, table, Kind::Dy, nu * b + 1, 0, b + 1, nu_i * sign, x_limit);
                    }
                }
                // (x - 1) x^a = xbar (xbar + 1)^a
                Family::X3 => binomial_sum(&mut out, table, Kind::Dx, a, 1, b, sign, x_limit),
            }
        }
    }
    out.retain(|t| t.x < x_limit && t.y < y_limit);
    out
}

/// Expansion of `col` at `pt` as `(row, value)` pairs in the point's row
/// window. A point on a neighbor's line that misses `col.vertex` gives the
/// empty expansion.
pub fn expand_at_point(
    col: &GeneratorColumn,
    pt: &IntersectionPoint,
    m: &PlumbingModel,
    rows: &RowSpace,
    table: &BinomialTable,
) -> Result<Vec<(usize, IntValue)>, PlumbingError> {
    let v = col.vertex;
    if !pt.touches(v) {
        let neighbor = m.edges().iter().any(|&(a, b)| (a == v && pt.touches(b)) || (b == v && pt.touches(a)));
        return if neighbor {
            Ok(Vec::new())
        } else {
            Err(PlumbingError::PointNotIncident { point: pt.edge, vertex: v })
        };
    }
    let on_canonical = pt.canonical() == v;
    let other = if on_canonical { pt.arm() } else { pt.canonical() };
    let chart = m.vertex(v);
    let slot = m.slot(pt.edge, v);
    let sign = if on_canonical { 1 } else { -1 };
    let limits = (m.vertex(other).multiplicity, chart.multiplicity);
    let terms = local_terms(col, chart.nu, slot, sign, limits, table);
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        // Across the gluing xbar and y trade places, so d/dx on one side is
        // d/dy on the other.
        let (kind, e1, e2) = if on_canonical {
            (t.kind, t.x, t.y)
        } else {
            let kind = match t.kind {
                Kind::Dx => Kind::Dy,
                Kind::Dy => Kind::Dx,
            };
            (kind, t.y, t.x)
        };
        let coeff = t.coeff;
        let r = rows.index(pt.edge, kind, e1, e2).ok_or(PlumbingError::OutsideWindow { point: pt.edge })?;
        out.push((r, coeff));
    }
    Ok(out)
}
