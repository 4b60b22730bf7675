//! Built-in ADE dual graphs together with the anti-ample cycles used for the
//! reference computations.

use crate::cycles::{anti_ample_cycle, Cycle};
use crate::graph::{DualGraph, GraphError, VertexData};

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub graph: DualGraph,
    pub cycle: Cycle,
}

type TableEntry = (usize, Vec<(usize, usize)>, Vec<u64>);

/// `(vertex count, edges, anti-ample coefficients)` in declaration order. The trivalent
/// vertex of each D graph is index 2; E graphs list the long chain with the
/// short arm (index 3) hanging off index 2.
fn table(name: &str) -> Option<TableEntry> {
    let d_chain = |n: usize| {
        let mut edges = vec![(0, 2), (1, 2)];
        edges.extend((2..n - 1).map(|i| (i, i + 1)));
        edges
    };
    let e_chain = |n: usize| {
        let mut edges = vec![(0, 1), (1, 2), (2, 4)];
        edges.extend((4..n - 1).map(|i| (i, i + 1)));
        edges.push((2, 3));
        edges
    };
    let entry = match name {
        "D4" => (4, d_chain(4), vec![3, 3, 5, 3]),
        "D5" => (5, d_chain(5), vec![5, 5, 9, 7, 4]),
        "D6" => (6, d_chain(6), vec![8, 8, 15, 13, 10, 6]),
        "D7" => (7, d_chain(7), vec![11, 11, 21, 19, 16, 12, 7]),
        "E6" => (6, e_chain(6), vec![8, 15, 21, 11, 15, 8]),
        "E7" => (7, e_chain(7), vec![18, 35, 51, 26, 40, 28, 15]),
        "E8" => (8, e_chain(8), vec![46, 91, 135, 68, 110, 84, 57, 29]),
        _ => return None,
    };
    Some(entry)
}

fn normalize(name: &str) -> String {
    name.trim().replace('_', "").to_ascii_uppercase()
}

fn minus_two_graph(n: usize, edges: Vec<(usize, usize)>) -> DualGraph {
    let vertices = (0..n).map(|i| VertexData::new(format!("e{}", i + 1), 0, -2).expect("valid decoration")).collect();
    DualGraph::new(vertices, edges).expect("preset edges are valid")
}

/// Looks up `A<n>` (n >= 1), `D4`..`D7` or `E6`..`E8`; underscores and case are ignored.
pub fn preset(name: &str) -> Result<Preset, GraphError> {
    let key = normalize(name);
    if let Some(rest) = key.strip_prefix('A') {
        let n: usize = rest.parse().map_err(|_| GraphError::UnknownPreset(name.to_string()))?;
        if n == 0 {
            return Err(GraphError::UnknownPreset(name.to_string()));
        }
        let graph = minus_two_graph(n, (0..n - 1).map(|i| (i, i + 1)).collect());
        let cycle = anti_ample_cycle(&graph).expect("A_n chains are negative definite");
        return Ok(Preset { name: format!("A{n}"), graph, cycle });
    }
    let (n, edges, coeffs) = table(&key).ok_or_else(|| GraphError::UnknownPreset(name.to_string()))?;
    Ok(Preset { name: key, graph: minus_two_graph(n, edges), cycle: Cycle::new(coeffs) })
}

pub const TABLE_PRESETS: [&str; 7] = ["D4", "D5", "D6", "D7", "E6", "E7", "E8"];
