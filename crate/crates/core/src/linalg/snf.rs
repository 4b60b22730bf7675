use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use serde::Serialize;

use super::LinalgError;
use crate::arith::is_prime;
use crate::sparse::SparseIntMatrix;

pub const SNF_DIM_CAP: usize = 2000;

/// Nonzero invariant factors of `m` over the integers, positive and each
/// dividing the next. Unit pivots are eliminated sparsely; what remains is
/// reduced densely, so the input is limited to `max(rows, cols) <= dim_cap`.
pub fn elementary_divisors(m: &SparseIntMatrix, dim_cap: usize) -> Result<Vec<BigInt>, LinalgError> {
    let dim = m.nrows().max(m.ncols());
    if dim > dim_cap {
        return Err(LinalgError::DimensionCap { dim, cap: dim_cap });
    }
    let (units, residual) = eliminate_units(m);
    let mut out = vec![BigInt::one(); units];
    out.extend(smith_diagonal(residual));
    Ok(out)
}

/// Invariant factors condensed for reporting, with the primes dividing any of
/// them: exactly the primes at which the rank drops below the rational rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorSummary {
    pub units: usize,
    /// Factors other than 1, as decimal strings.
    pub non_units: Vec<String>,
    pub bad_primes: Vec<u64>,
    /// False when the largest factor kept a cofactor that trial division could not split.
    pub complete: bool,
}

const TRIAL_BOUND: u64 = 1_000_000;

pub fn summarize_divisors(divisors: &[BigInt]) -> DivisorSummary {
    let units = divisors.iter().filter(|d| d.is_one()).count();
    let non_units = divisors.iter().filter(|d| !d.is_one()).map(BigInt::to_string).collect();
    let mut rest = divisors.last().cloned().unwrap_or_else(BigInt::one);
    let mut bad_primes = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND && !rest.is_one() {
        let bp = BigInt::from(p);
        if rest.is_multiple_of(&bp) {
            bad_primes.push(p);
            while rest.is_multiple_of(&bp) {
                rest /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let complete = match u64::try_from(&rest) {
        _ if rest.is_one() => true,
        Ok(q) if is_prime(q) => {
            bad_primes.push(q);
            true
        }
        _ => false,
    };
    DivisorSummary { units, non_units, bad_primes, complete }
}

/// Pivots on entries equal to +-1, cheapest fill first, until none is left.
/// Each pivot contributes an invariant factor 1 and removes its row and
/// column. Returns the pivot count and the remaining nonzero block.
fn eliminate_units(m: &SparseIntMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.nrows()];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.ncols()];
    for (r, c, v) in m.iter() {
        rows[r].insert(c, v.to_bigint());
        cols[c].insert(r);
    }
    let mut units = 0;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                if v.magnitude().is_one() {
                    let cost = (row.len() - 1) * (cols[c].len() - 1);
                    if best.is_none_or(|(b, _, _)| cost < b) {
                        best = Some((cost, r, c));
                    }
                }
            }
        }
        let Some((_, r, c)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[r]);
        let u = pivot_row[&c].clone();
        for &k in &pivot_row.keys().copied().collect::<Vec<_>>() {
            cols[k].remove(&r);
        }
        let others: Vec<usize> = cols[c].iter().copied().collect();
        for i in others {
            let f = &rows[i][&c] * &u;
            for (&k, v) in &pivot_row {
                let entry = rows[i].entry(k).or_insert_with(BigInt::zero);
                *entry -= &f * v;
                if entry.is_zero() {
                    rows[i].remove(&k);
                    cols[k].remove(&i);
                } else {
                    cols[k].insert(i);
                }
            }
        }
        debug_assert!(cols[c].is_empty());
        units += 1;
    }
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    let residual = live_rows
        .iter()
        .map(|&r| live_cols.iter().map(|c| rows[r].get(c).cloned().unwrap_or_else(BigInt::zero)).collect())
        .collect();
    (units, residual)
}

/// Exact rank and `|D|` for a nonzero `r x r` minor, by fraction-free
/// elimination with full pivoting (the last pivot is that minor).
fn rank_and_minor(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut k = 0;
    while k < nrows.min(ncols) {
        let pivot = (k..nrows).flat_map(|i| (k..ncols).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pr = &top[k];
        for row in rest.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..ncols {
                let v = &pr[k] * &row[j] - &f * &pr[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
        k += 1;
    }
    (k, prev.abs())
}

fn reduce(v: &BigInt, d: &BigInt) -> BigInt {
    v.mod_floor(d)
}

/// Diagonal of the Smith form over `Z/dZ`, as `gcd(entry, d)`, stopping at the
/// first all-zero block. Every entry stays below `d`.
fn smith_mod(mut a: Vec<Vec<BigInt>>, d: &BigInt) -> Vec<BigInt> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v = reduce(v, d);
        }
    }
    let mut diag = Vec::new();
    for k in 0..nrows.min(ncols) {
        // pivot: entry whose gcd with d is smallest
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if v.is_zero() {
                    continue;
                }
                let g = v.gcd(d);
                if best.as_ref().is_none_or(|(_, _, b)| g < *b) {
                    best = Some((i, j, g));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            // column k: combine each row with the pivot row by a Bezout step
            for i in k + 1..nrows {
                if a[i][k].is_zero() {
                    continue;
                }
                let ext = a[k][k].extended_gcd(&a[i][k]);
                let (s, t) = (ext.x, ext.y);
                let (u, w) = (&a[i][k] / &ext.gcd, &a[k][k] / &ext.gcd);
                let (top, rest) = a.split_at_mut(i);
                for j in k..ncols {
                    let (x, y) = (&top[k][j], &rest[0][j]);
                    let nk = reduce(&(&s * x + &t * y), d);
                    let ni = reduce(&(&w * y - &u * x), d);
                    top[k][j] = nk;
                    rest[0][j] = ni;
                }
            }
            // row k, the same with columns
            for j in k + 1..ncols {
                if a[k][j].is_zero() {
                    continue;
                }
                let ext = a[k][k].extended_gcd(&a[k][j]);
                let (s, t) = (ext.x, ext.y);
                let (u, w) = (&a[k][j] / &ext.gcd, &a[k][k] / &ext.gcd);
                for row in a.iter_mut().skip(k) {
                    let (x, y) = (&row[k], &row[j]);
                    let nk = reduce(&(&s * x + &t * y), d);
                    let nj = reduce(&(&w * y - &u * x), d);
                    row[k] = nk;
                    row[j] = nj;
                }
            }
            if (k + 1..nrows).any(|i| !a[i][k].is_zero()) {
                continue;
            }
            let g = a[k][k].gcd(d);
            let bad = (k + 1..nrows).find(|&i| a[i][k + 1..].iter().any(|v| !v.is_multiple_of(&g)));
            match bad {
                Some(i) => {
                    let (top, rest) = a.split_at_mut(i);
                    for j in k..ncols {
                        let t = reduce(&(&top[k][j] + &rest[0][j]), d);
                        top[k][j] = t;
                    }
                }
                None => break,
            }
        }
        if a[k][k].is_zero() {
            break;
        }
        diag.push(a[k][k].gcd(d));
    }
    diag
}

fn smith_diagonal(a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let (rank, minor) = rank_and_minor(a.clone());
    if rank == 0 {
        return Vec::new();
    }
    if minor.is_one() {
        return vec![BigInt::one(); rank];
    }
    // Every invariant factor up to the rank divides the minor, so working mod
    // the minor loses only factors equal to it, which are restored by padding.
    let mut diag = smith_mod(a, &minor);
    diag.truncate(rank);
    diag.sort();
    diag.resize(rank, minor);
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(rows: &[Vec<i64>]) -> Vec<i64> {
        elementary_divisors(&SparseIntMatrix::from_dense(rows), SNF_DIM_CAP)
            .unwrap()
            .into_iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(divisors(&[vec![2, 0], vec![0, 6]]), vec![2, 6]);
        assert_eq!(divisors(&[vec![2, 0], vec![0, 0]]), vec![2]);
        assert_eq!(divisors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(divisors(&[vec![4, 6], vec![6, 4]]), vec![2, 10]);
        assert_eq!(divisors(&[vec![0, 0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn summaries() {
        let s = summarize_divisors(&[1, 1, 2, 6].map(BigInt::from));
        assert_eq!(
            (s.units, s.non_units.clone(), s.bad_primes.clone(), s.complete),
            (2, vec!["2".into(), "6".into()], vec![2, 3], true)
        );
        let big_prime = BigInt::from(1_000_000_007u64) * 4;
        assert_eq!(summarize_divisors(&[big_prime]).bad_primes, vec![2, 1_000_000_007]);
        let semiprime = BigInt::from(1_000_000_007u64) * BigInt::from(1_000_000_009u64);
        assert!(!summarize_divisors(&[semiprime]).complete);
        assert!(summarize_divisors(&[]).bad_primes.is_empty());
    }

    #[test]
    fn unit_presolve_leaves_the_hard_block() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 2, 0], vec![3, 4, 0], vec![0, 0, 4]]);
        let (units, rest) = eliminate_units(&m);
        assert_eq!(units, 1);
        assert_eq!(rest.len(), 2);
        assert_eq!(divisors(&[vec![1, 2, 0], vec![3, 4, 0], vec![0, 0, 4]]), vec![1, 2, 4]);
    }

    #[test]
    fn cap() {
        let m = SparseIntMatrix::zeros(3, 5);
        assert!(matches!(elementary_divisors(&m, 4), Err(LinalgError::DimensionCap { dim: 5, cap: 4 })));
    }
}
