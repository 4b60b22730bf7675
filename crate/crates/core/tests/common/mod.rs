//! Independent reference implementations used by the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use taut_core::graph::{DualGraph, VertexData};
use taut_core::linalg::{rank_report, RankOptions};
use taut_core::plumbing::{assemble_matrix, build_model_with_multiplicities, row_space, PlumbingModel, Slot};
use taut_core::sparse::SparseIntMatrix;

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime in every caller
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Row-echelon rank of a dense matrix over the field with `p` elements.
pub fn dense_rank(rows: &[Vec<BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| {
                    let mut x = v % &pb;
                    if x.is_negative() {
                        x += &pb;
                    }
                    x.to_u64().unwrap()
                })
                .collect()
        })
        .collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c], p);
        let pivot = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = (row[c] as u128 * inv as u128 % p as u128) as u64;
                for (x, &y) in row.iter_mut().zip(&pivot).skip(c) {
                    let sub = (f as u128 * y as u128 % p as u128) as u64;
                    *x = (*x + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense_rank_i64(rows: &[Vec<i64>], p: u64) -> usize {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    dense_rank(&big, p)
}

pub fn sparse_dense_rank(m: &SparseIntMatrix, p: u64) -> usize {
    dense_rank(&m.to_dense_bigint(), p)
}

/// Determinant by permutation expansion; fine for the tiny matrices used here.
pub fn permutation_det(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    fn go(k: usize, perm: &mut Vec<usize>, a: &[Vec<i64>], sign: i128, total: &mut i128) {
        let n = perm.len();
        if k == n {
            *total += sign * (0..n).map(|i| a[i][perm[i]] as i128).product::<i128>();
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            go(k + 1, perm, a, if i == k { sign } else { -sign }, total);
            perm.swap(k, i);
        }
    }
    go(0, &mut perm, a, 1, &mut total);
    total
}

/// Sylvester's criterion on `-a`.
pub fn negative_definite_by_minors(a: &[Vec<i64>]) -> bool {
    (1..=a.len()).all(|k| {
        let minor: Vec<Vec<i64>> = a[..k].iter().map(|r| r[..k].iter().map(|v| -v).collect()).collect();
        permutation_det(&minor) > 0
    })
}

pub fn form(g: &DualGraph) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0i64; n]; n];
    for (i, v) in g.vertices().iter().enumerate() {
        a[i][i] = v.self_intersection;
    }
    for &(u, v) in g.edges() {
        a[u][v] += 1;
        a[v][u] += 1;
    }
    a
}

fn products(n: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

/// All full-support cycles with coefficients in `1..=bound` meeting every
/// component non-positively.
pub fn semi_negative_cycles(g: &DualGraph, bound: u64) -> Vec<Vec<u64>> {
    let a = form(g);
    products(g.vertex_count(), 1, bound)
        .into_iter()
        .filter(|z| a.iter().all(|row| row.iter().zip(z).map(|(x, &c)| x * c as i64).sum::<i64>() <= 0))
        .collect()
}

/// Connected loop-free graphs on `n` vertices, every edge set, every choice of
/// self-intersection from `selfints`. Two-vertex graphs also get a double edge.
pub fn small_graphs(n: usize, selfints: &[i64]) -> Vec<DualGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut edge_sets: Vec<Vec<(usize, usize)>> = (0u32..1 << pairs.len())
        .map(|mask| pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect())
        .collect();
    if n == 2 {
        edge_sets.push(vec![(0, 1), (0, 1)]);
    }
    let mut out = Vec::new();
    for edges in edge_sets {
        for decor in products(n, 0, selfints.len() as u64 - 1) {
            let vertices = decor
                .iter()
                .enumerate()
                .map(|(i, &k)| VertexData::new(format!("v{i}"), 0, selfints[k as usize]).unwrap())
                .collect();
            let g = DualGraph::new(vertices, edges.clone()).unwrap();
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

pub fn minus_two_chain(n: usize) -> DualGraph {
    let vertices = (0..n).map(|i| VertexData::new(format!("c{i}"), 0, -2).unwrap()).collect();
    DualGraph::new(vertices, (1..n).map(|i| (i - 1, i)).collect()).unwrap()
}

/// `(h1 of the j-window matrix, h1 of the 2j-window matrix with every row
/// outside the j-window killed by a unit column)`, both by dense elimination.
pub fn truncation_pair(g: &DualGraph, j: u64, p: u64) -> (usize, usize) {
    let n = g.vertex_count();
    let small = build_model_with_multiplicities(g, &vec![j; n], &[]).unwrap();
    let windowed = assemble_matrix(&small, None).unwrap().matrix;
    let h_small = windowed.nrows() - sparse_dense_rank(&windowed, p);

    let big = build_model_with_multiplicities(g, &vec![2 * j; n], &[]).unwrap();
    let rows = row_space(&big).unwrap();
    let mut dense = assemble_matrix(&big, None).unwrap().matrix.to_dense_bigint();
    let outside: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, idx)| idx.exponents.0 >= j || idx.exponents.1 >= j)
        .map(|(r, _)| r)
        .collect();
    assert!(!outside.is_empty(), "enlarged window adds no rows");
    for (k, row) in dense.iter_mut().enumerate() {
        row.extend(outside.iter().map(|&r| BigInt::from(u8::from(r == k))));
    }
    let h_big = rows.len() - dense_rank(&dense, p);
    (h_small, h_big)
}

/// Deterministic sparse integer matrices: dimensions up to 60, entries in
/// `[-20, 20]`, density drawn per matrix, paired with a prime from
/// `{2, 3, 5, 7, 101}`.
pub fn random_sparse_cases(count: usize, seed: u64) -> Vec<(Vec<Vec<i64>>, u64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let primes = [2u64, 3, 5, 7, 101];
    (0..count)
        .map(|k| {
            let (r, c) = (rng.gen_range(1..=60), rng.gen_range(1..=60));
            let density: f64 = rng.gen_range(0.02..0.35);
            let mut a = vec![vec![0i64; c]; r];
            for row in &mut a {
                for v in row.iter_mut() {
                    if rng.gen_bool(density) {
                        *v = rng.gen_range(-20..=20);
                    }
                }
            }
            // every third case gets dependent rows so ranks are not all full
            if k % 3 == 0 && r >= 2 {
                let f = rng.gen_range(-3..=3);
                let (src, dst) = (rng.gen_range(0..r), rng.gen_range(0..r));
                let copy = a[src].clone();
                for (d, s) in a[dst].iter_mut().zip(copy) {
                    *d = (*d + f * s).clamp(-20, 20);
                }
            }
            (a, primes[k % primes.len()])
        })
        .collect()
}

/// `(key, rank, h1)` for `q` and the primes 2, 3, 5, 7.
pub fn model_ranks(m: &PlumbingModel) -> Vec<(String, usize, usize)> {
    let asm = assemble_matrix(m, None).unwrap();
    let r = rank_report(&asm.matrix, &[2, 3, 5, 7], &RankOptions::default()).unwrap();
    r.results.into_iter().map(|(k, v)| (k, v.rank, v.h1)).collect()
}

fn permutations(items: &[Slot]) -> Vec<Vec<Slot>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every slot assignment the model admits: the slot set of a vertex is fixed
/// by its valence and may be permuted freely.
pub fn all_slot_assignments(m: &PlumbingModel) -> Vec<PlumbingModel> {
    let mut models = vec![m.clone()];
    for v in 0..m.vertices().len() {
        let set = match m.vertex(v).valence {
            1 => vec![Slot::Zero],
            2 => vec![Slot::Zero, Slot::Infinity],
            3 => vec![Slot::Zero, Slot::Infinity, Slot::One],
            _ => continue,
        };
        models = models
            .into_iter()
            .flat_map(|model| {
                permutations(&set).into_iter().map(move |a| model.clone().with_slot_assignment(v, &a).unwrap())
            })
            .collect();
    }
    models
}
