use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{rank_mod_p_with, EliminationConfig, LinalgError};
use crate::arith::is_prime;
use crate::sparse::SparseIntMatrix;

pub const DEFAULT_SEED: u64 = 0x7a07_5eed;
pub const CERTIFY_DIM_CAP: usize = 2000;

/// Rank over the rationals together with the moduli that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalRank {
    pub rank: usize,
    pub primes: Vec<u64>,
    /// True when the primes used rule out any larger rank.
    pub certified: bool,
}

/// `trials` distinct primes in `(2^30, 2^31)` drawn from a seeded generator.
pub fn random_large_primes(trials: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        let c = rng.gen_range((1u64 << 30) + 1..1u64 << 31) | 1;
        if is_prime(c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn max_rank_over(m: &SparseIntMatrix, primes: &[u64], cfg: &EliminationConfig) -> Result<usize, LinalgError> {
    let mut best = 0;
    for r in super::parallel_map(primes, |&q| rank_mod_p_with(m, q, cfg)) {
        best = best.max(r?);
    }
    Ok(best)
}

/// Monte Carlo rank over the rationals: the largest rank modulo `trials`
/// random large primes. Never exceeds the true rank, and misses it only if
/// every prime divides all maximal nonzero minors.
pub fn rank_over_q(
    m: &SparseIntMatrix,
    trials: usize,
    seed: u64,
    cfg: &EliminationConfig,
) -> Result<RationalRank, LinalgError> {
    if trials == 0 {
        return Err(LinalgError::NoTrials);
    }
    let primes = random_large_primes(trials, seed);
    let rank = max_rank_over(m, &primes, cfg)?;
    let certified = rank == m.nrows().min(m.ncols());
    Ok(RationalRank { rank, primes, certified })
}

/// Prefix sums of `ceil(log2 |v|)` over the rows and over the columns of
/// `m`, longest first. Entry `k` bounds every `(k x k)` minor by Hadamard.
struct HadamardBound {
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl HadamardBound {
    fn new(m: &SparseIntMatrix) -> Self {
        let mut row_sq = vec![BigInt::from(0); m.nrows()];
        let mut col_sq = vec![BigInt::from(0); m.ncols()];
        for (r, c, v) in m.iter() {
            let b = v.to_bigint();
            let sq = &b * &b;
            row_sq[r] += &sq;
            col_sq[c] += sq;
        }
        let prefix = |norms: Vec<BigInt>| -> Vec<u64> {
            let mut bits: Vec<u64> = norms.iter().map(|n| n.bits().div_ceil(2)).collect();
            bits.sort_unstable_by(|a, b| b.cmp(a));
            std::iter::once(0)
                .chain(bits.into_iter().scan(0, |acc, b| {
                    *acc += b;
                    Some(*acc)
                }))
                .collect()
        };
        HadamardBound { rows: prefix(row_sq), cols: prefix(col_sq) }
    }

    fn bits(&self, k: usize) -> u64 {
        let pick = |v: &[u64]| v[k.min(v.len() - 1)];
        pick(&self.rows).min(pick(&self.cols))
    }
}

/// `log2` bound on the absolute value of any `(k x k)` minor of `m`.
pub fn hadamard_bits(m: &SparseIntMatrix, k: usize) -> u64 {
    HadamardBound::new(m).bits(k)
}

/// Exact rank over the rationals. Moduli are taken from below `2^31` until
/// their product exceeds the Hadamard bound on the minors one size above the
/// best rank seen, so no nonzero such minor can vanish modulo all of them.
pub fn certified_rank_over_q(m: &SparseIntMatrix, cfg: &EliminationConfig) -> Result<RationalRank, LinalgError> {
    let dim = m.nrows().max(m.ncols());
    if dim > CERTIFY_DIM_CAP {
        return Err(LinalgError::DimensionCap { dim, cap: CERTIFY_DIM_CAP });
    }
    let full = m.nrows().min(m.ncols());
    let mut rank = 0;
    let mut primes: Vec<u64> = Vec::new();
    let mut covered_bits = 0u64;
    let mut candidate = 1u64 << 31;
    let bound = HadamardBound::new(m);
    loop {
        if rank == full || covered_bits > bound.bits(rank + 1) {
            return Ok(RationalRank { rank, primes, certified: true });
        }
        let mut batch = Vec::new();
        while batch.len() < 8 {
            candidate -= 1;
            if is_prime(candidate) {
                batch.push(candidate);
            }
        }
        let r = max_rank_over(m, &batch, cfg)?;
        if r > rank {
            rank = r;
        }
        // every prime so far has rank <= `rank`, each contributes 30 bits
        covered_bits += 30 * batch.len() as u64;
        primes.extend(batch);
    }
}
