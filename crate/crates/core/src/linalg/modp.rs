use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::LinalgError;
use crate::arith::{is_prime, pow_mod};
use crate::sparse::SparseIntMatrix;

/// Tuning for [`rank_mod_p_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliminationConfig {
    /// Switch to dense elimination once this few active rows remain...
    pub dense_rows: usize,
    /// ...or the active block is at least this dense (percent).
    pub dense_percent: u32,
    /// Largest dense block (rows times columns) ever allocated.
    pub dense_cells: usize,
    /// Cap on the bytes held by active sparse rows.
    pub mem_cap: Option<u64>,
}

impl Default for EliminationConfig {
    fn default() -> Self {
        EliminationConfig { dense_rows: 4096, dense_percent: 20, dense_cells: 1 << 26, mem_cap: None }
    }
}

/// Rank of `m` over `F_p`.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> Result<usize, LinalgError> {
    rank_mod_p_with(m, p, &EliminationConfig::default())
}

pub fn rank_mod_p_with(m: &SparseIntMatrix, p: u64, cfg: &EliminationConfig) -> Result<usize, LinalgError> {
    if !is_prime(p) || p >= 1 << 32 {
        return Err(LinalgError::BadModulus(p));
    }
    rank_of_rows(m.rows_mod(p), m.ncols(), p, cfg)
}

/// Rank of rows given as sorted `(col, residue)` lists with nonzero residues.
pub fn rank_of_rows(
    rows: Vec<Vec<(u32, u32)>>,
    ncols: usize,
    p: u64,
    cfg: &EliminationConfig,
) -> Result<usize, LinalgError> {
    let mut e = Eliminator::new(rows, ncols, p);
    let mut rank = 0;
    let mut since_check = 0usize;
    loop {
        if since_check == 0 {
            since_check = 256;
            if let Some(cap) = cfg.mem_cap {
                let bytes = e.active_nnz as u64 * 8;
                if bytes > cap {
                    return Err(LinalgError::MemoryBudget { needed: bytes, cap });
                }
            }
            if e.wants_dense(cfg) {
                let dense_rank = e.finish_dense();
                log::debug!("dense tail contributed rank {dense_rank}");
                return Ok(rank + dense_rank);
            }
        }
        since_check -= 1;
        let Some(col) = e.next_pivot_column() else { return Ok(rank) };
        e.eliminate(col);
        rank += 1;
    }
}

struct Eliminator {
    p: u64,
    rows: Vec<Vec<(u32, u32)>>,
    active: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    active_rows: usize,
    active_cols: usize,
    active_nnz: usize,
}

impl Eliminator {
    fn new(rows: Vec<Vec<(u32, u32)>>, ncols: usize, p: u64) -> Self {
        let mut col_rows = vec![Vec::new(); ncols];
        let mut col_count = vec![0u32; ncols];
        let mut active = vec![false; rows.len()];
        let mut active_nnz = 0;
        for (r, row) in rows.iter().enumerate() {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            if !row.is_empty() {
                active[r] = true;
                active_nnz += row.len();
            }
            for &(c, _) in row {
                col_rows[c as usize].push(r as u32);
                col_count[c as usize] += 1;
            }
        }
        let heap = col_count.iter().enumerate().filter(|(_, &n)| n > 0).map(|(c, &n)| Reverse((n, c as u32))).collect();
        Eliminator {
            p,
            active_rows: active.iter().filter(|&&a| a).count(),
            active_cols: col_count.iter().filter(|&&n| n > 0).count(),
            rows,
            active,
            col_rows,
            col_count,
            heap,
            active_nnz,
        }
    }

    fn wants_dense(&self, cfg: &EliminationConfig) -> bool {
        let cells = self.active_rows.saturating_mul(self.active_cols);
        if self.active_rows == 0 || cells > cfg.dense_cells {
            return false;
        }
        self.active_rows <= cfg.dense_rows || self.active_nnz as u128 * 100 >= cells as u128 * cfg.dense_percent as u128
    }

    /// Column with the fewest active entries; ties go to the lower index.
    fn next_pivot_column(&mut self) -> Option<u32> {
        while let Some(Reverse((n, c))) = self.heap.pop() {
            if n > 0 && self.col_count[c as usize] == n {
                return Some(c);
            }
        }
        None
    }

    fn value_at(&self, r: u32, c: u32) -> Option<u32> {
        let row = &self.rows[r as usize];
        row.binary_search_by_key(&c, |&(cc, _)| cc).ok().map(|i| row[i].1)
    }

    fn set_count(&mut self, c: u32, delta: i32) {
        let n = &mut self.col_count[c as usize];
        let before = *n;
        *n = (*n as i32 + delta) as u32;
        if before == 0 && *n > 0 {
            self.active_cols += 1;
        } else if before > 0 && *n == 0 {
            self.active_cols -= 1;
        }
        if *n > 0 {
            self.heap.push(Reverse((*n, c)));
        }
    }

    fn eliminate(&mut self, col: u32) {
        let mut holders = std::mem::take(&mut self.col_rows[col as usize]);
        holders.retain(|&r| self.active[r as usize] && self.value_at(r, col).is_some());
        holders.sort_unstable();
        holders.dedup();
        let pivot = *holders.iter().min_by_key(|&&r| (self.rows[r as usize].len(), r)).expect("column has entries");
        let pivot_row = std::mem::take(&mut self.rows[pivot as usize]);
        let p = self.p;
        let inv = pow_mod(self.value_at_in(&pivot_row, col) as u64, p - 2, p);

        for &r in &holders {
            if r == pivot {
                continue;
            }
            let old = std::mem::take(&mut self.rows[r as usize]);
            let f = (self.value_at_in(&old, col) as u64 * inv) % p;
            let neg = p - f;
            let mut new = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let ci = old.get(i).map_or(u32::MAX, |e| e.0);
                let cj = pivot_row.get(j).map_or(u32::MAX, |e| e.0);
                if ci < cj {
                    new.push(old[i]);
                    i += 1;
                } else if cj < ci {
                    let v = (pivot_row[j].1 as u64 * neg) % p;
                    new.push((cj, v as u32));
                    self.set_count(cj, 1);
                    self.col_rows[cj as usize].push(r);
                    j += 1;
                } else {
                    let v = (old[i].1 as u64 + pivot_row[j].1 as u64 * neg) % p;
                    if v == 0 {
                        self.set_count(ci, -1);
                    } else {
                        new.push((ci, v as u32));
                    }
                    i += 1;
                    j += 1;
                }
            }
            self.active_nnz = self.active_nnz + new.len() - old.len();
            if new.is_empty() {
                self.active[r as usize] = false;
                self.active_rows -= 1;
            }
            self.rows[r as usize] = new;
        }

        self.active[pivot as usize] = false;
        self.active_rows -= 1;
        self.active_nnz -= pivot_row.len();
        for &(c, _) in &pivot_row {
            self.set_count(c, -1);
        }
        debug_assert_eq!(self.col_count[col as usize], 0);
    }

    fn value_at_in(&self, row: &[(u32, u32)], c: u32) -> u32 {
        row[row.binary_search_by_key(&c, |&(cc, _)| cc).expect("entry present")].1
    }

    fn finish_dense(&mut self) -> usize {
        let mut map = vec![u32::MAX; self.col_count.len()];
        let mut width = 0usize;
        for (c, &n) in self.col_count.iter().enumerate() {
            if n > 0 {
                map[c] = width as u32;
                width += 1;
            }
        }
        let mut dense: Vec<Vec<u64>> = Vec::with_capacity(self.active_rows);
        for (r, row) in self.rows.iter().enumerate() {
            if self.active[r] {
                let mut d = vec![0u64; width];
                for &(c, v) in row {
                    d[map[c as usize] as usize] = v as u64;
                }
                dense.push(d);
            }
        }
        dense_rank_mod_p(dense, self.p)
    }
}

/// Rank of a dense matrix over `F_p` by row reduction; entries must be `< p`.
pub fn dense_rank_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let x = row[c];
            if x == 0 {
                continue;
            }
            let neg = p - (x * inv) % p;
            for k in c..ncols {
                let y = pivot[k];
                if y != 0 {
                    row[k] = (row[k] + y * neg) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}
