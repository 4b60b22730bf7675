use serde::Serialize;

use super::generators::BinomialTable;
use super::{
    enumerate_generators, enumerate_points, expand_at_point, row_space, GeneratorColumn, IntersectionPoint,
    PlumbingError, PlumbingModel, Slot,
};
use crate::sparse::{IntValue, SparseIntMatrix};

/// Assembled matrix with the generator behind each surviving column.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub matrix: SparseIntMatrix,
    pub columns: Vec<GeneratorColumn>,
    /// Generators enumerated before zero columns were dropped.
    pub generated: usize,
}

impl Assembly {
    pub fn density(&self) -> f64 {
        self.matrix.density()
    }
}

/// Upper bounds on the assembled matrix, computed without expanding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Footprint {
    pub rows: usize,
    pub generators: usize,
    pub nnz: u64,
    pub big_entries: u64,
    /// Peak bytes during assembly, counting expanded columns and the final matrix.
    pub bytes: u64,
}

const ENTRY_BYTES: u64 = 8 + 16;

fn incident_points(points: &[IntersectionPoint], v: usize) -> impl Iterator<Item = &IntersectionPoint> {
    points.iter().filter(move |p| p.touches(v))
}

pub fn estimate_footprint(m: &PlumbingModel) -> Result<Footprint, PlumbingError> {
    let rows = row_space(m)?;
    let points = enumerate_points(m);
    let gens = enumerate_generators(m);
    let table = BinomialTable::for_model(m);
    let (mut nnz, mut big) = (0u64, 0u64);
    for g in &gens {
        let v = m.vertex(g.vertex);
        for pt in incident_points(&points, g.vertex) {
            let other = if pt.canonical() == g.vertex { pt.arm() } else { pt.canonical() };
            let x_limit = m.vertex(other).multiplicity;
            match m.slot(pt.edge, g.vertex) {
                Slot::One => {
                    let (e, shift) = match g.family {
                        super::Family::X3 => (g.a, 1),
                        super::Family::X1extra => (v.nu * g.b + 2, 0),
                        _ => (g.a, 0),
                    };
                    let count = (e + 1).min(x_limit.saturating_sub(shift));
                    nnz += count;
                    big += (0..count).filter(|&i| matches!(table.get(e, i), IntValue::Big(_))).count() as u64;
                }
                _ => nnz += 4,
            }
        }
    }
    // large values are shared with the binomial table
    let bytes = nnz * ENTRY_BYTES * 2 + table.heap_bytes() + gens.len() as u64 * 40;
    Ok(Footprint { rows: rows.len(), generators: gens.len(), nnz, big_entries: big, bytes })
}

/// Builds the matrix: one row per window element, one column per generator
/// with a nonzero expansion. Columns keep generator order; entries are summed
/// over every point on the generator's line. `mem_cap` bounds the estimated
/// peak footprint in bytes.
pub fn assemble_matrix(m: &PlumbingModel, mem_cap: Option<u64>) -> Result<Assembly, PlumbingError> {
    if let Some(cap) = mem_cap {
        let fp = estimate_footprint(m)?;
        if fp.bytes > cap {
            return Err(PlumbingError::MemoryBudget { needed: fp.bytes, cap });
        }
    }
    let rows = row_space(m)?;
    let points = enumerate_points(m);
    let gens = enumerate_generators(m);
    let table = BinomialTable::for_model(m);
    let generated = gens.len();

    let mut by_vertex: Vec<&[GeneratorColumn]> = Vec::new();
    let mut start = 0;
    while start < gens.len() {
        let v = gens[start].vertex;
        let end = start + gens[start..].iter().take_while(|g| g.vertex == v).count();
        by_vertex.push(&gens[start..end]);
        start = end;
    }

    type Expanded = Vec<(GeneratorColumn, Vec<(usize, IntValue)>)>;
    let chunks: Vec<Result<Expanded, PlumbingError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = by_vertex
            .iter()
            .map(|chunk| {
                let (rows, points, table) = (&rows, &points, &table);
                scope.spawn(move || -> Result<Expanded, PlumbingError> {
                    let mut out = Vec::new();
                    for g in chunk.iter() {
                        let mut entries = Vec::new();
                        for pt in incident_points(points, g.vertex) {
                            entries.extend(expand_at_point(g, pt, m, rows, table)?);
                        }
                        entries.sort_unstable_by_key(|(r, _)| *r);
                        entries.dedup_by(|later, earlier| {
                            if later.0 == earlier.0 {
                                earlier.1 = IntValue::from_bigint(earlier.1.to_bigint() + later.1.to_bigint());
                                true
                            } else {
                                false
                            }
                        });
                        entries.retain(|(_, v)| !v.is_zero());
                        if !entries.is_empty() {
                            out.push((*g, entries));
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("assembly worker panicked")).collect()
    });

    let mut columns = Vec::new();
    let mut entries = Vec::new();
    for chunk in chunks {
        for (g, col) in chunk? {
            columns.push(g);
            entries.push(col);
        }
    }
    let matrix = SparseIntMatrix::from_columns(rows.len(), entries).expect("expansions stay inside the row space");
    log::debug!(
        "assembled {}x{} matrix, {} nonzeros, {} of {} generators kept",
        matrix.nrows(),
        matrix.ncols(),
        matrix.nnz(),
        columns.len(),
        generated
    );
    Ok(Assembly { matrix, columns, generated })
}
