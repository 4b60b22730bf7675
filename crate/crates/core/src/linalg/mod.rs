//! Exact ranks of sparse integer matrices over `F_p` and over the rationals,
//! plus Smith normal form for small instances.

mod modp;
mod rational;
mod snf;

use std::sync::atomic::{AtomicUsize, Ordering};

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

pub use modp::{dense_rank_mod_p, rank_mod_p, rank_mod_p_with, rank_of_rows, EliminationConfig};
pub use rational::{
    certified_rank_over_q, hadamard_bits, random_large_primes, rank_over_q, RationalRank, CERTIFY_DIM_CAP, DEFAULT_SEED,
};
pub use snf::{elementary_divisors, summarize_divisors, DivisorSummary, SNF_DIM_CAP};

use crate::sparse::SparseIntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime below 2^32")]
    BadModulus(u64),
    #[error("elimination needs about {needed} bytes, cap is {cap}")]
    MemoryBudget { needed: u64, cap: u64 },
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("at least one trial prime is required")]
    NoTrials,
    #[error("rank {rank} exceeds row count {rows}")]
    RankExceedsRows { rows: usize, rank: usize },
}

pub fn h1_from_rank(rows: usize, rank: usize) -> Result<usize, LinalgError> {
    rows.checked_sub(rank).ok_or(LinalgError::RankExceedsRows { rows, rank })
}

/// `f` over `items` on at most `available_parallelism` threads, results in
/// input order.
pub(crate) fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut out: Vec<(usize, R)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= items.len() {
                            return done;
                        }
                        done.push((i, f(&items[i])));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    out.sort_unstable_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}

/// Rank modulo each prime, computed concurrently, in input order.
pub fn ranks_mod_primes(
    m: &SparseIntMatrix,
    primes: &[u64],
    cfg: &EliminationConfig,
) -> Result<Vec<usize>, LinalgError> {
    parallel_map(primes, |&p| rank_mod_p_with(m, p, cfg)).into_iter().collect()
}

/// Candidates whose rank drops below `rank_q`. Only the given candidates are
/// tested; primes outside the list are not examined.
pub fn bad_primes(
    m: &SparseIntMatrix,
    candidates: &[u64],
    rank_q: usize,
    cfg: &EliminationConfig,
) -> Result<Vec<u64>, LinalgError> {
    let ranks = ranks_mod_primes(m, candidates, cfg)?;
    Ok(candidates.iter().zip(ranks).filter(|(_, r)| *r < rank_q).map(|(&p, _)| p).collect())
}

/// Rank modulo `p` read off the invariant factors: those not divisible by `p`.
pub fn rank_from_divisors(divisors: &[BigInt], p: u64) -> usize {
    let p = BigInt::from(p);
    divisors.iter().filter(|d| !d.is_multiple_of(&p)).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacteristicRank {
    pub rank: usize,
    pub h1: usize,
}

/// Ranks and `h^1` for the rationals and each prime, keyed `q`, `p2`, `p3`, ...
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rows: usize,
    pub cols: usize,
    pub results: IndexMap<String, CharacteristicRank>,
    pub bad_primes: Vec<u64>,
    pub rational: RationalRank,
    pub method: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOptions {
    pub trials: usize,
    pub seed: u64,
    pub certify: bool,
    pub elimination: EliminationConfig,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { trials: 3, seed: DEFAULT_SEED, certify: false, elimination: EliminationConfig::default() }
    }
}

/// Rational rank (Monte Carlo, or certified when asked) and every prime rank.
/// Each stage fans out over the primes it needs.
pub fn rank_report(m: &SparseIntMatrix, primes: &[u64], opts: &RankOptions) -> Result<RankReport, LinalgError> {
    let cfg = &opts.elimination;
    let rational =
        if opts.certify { certified_rank_over_q(m, cfg)? } else { rank_over_q(m, opts.trials, opts.seed, cfg)? };
    let per_prime = ranks_mod_primes(m, primes, cfg)?;
    let rows = m.nrows();
    let mut results = IndexMap::new();
    results.insert("q".to_string(), CharacteristicRank { rank: rational.rank, h1: h1_from_rank(rows, rational.rank)? });
    for (&p, &rank) in primes.iter().zip(&per_prime) {
        results.insert(format!("p{p}"), CharacteristicRank { rank, h1: h1_from_rank(rows, rank)? });
    }
    let bad_primes = primes.iter().zip(&per_prime).filter(|(_, &r)| r < rational.rank).map(|(&p, _)| p).collect();
    let method = if opts.certify {
        "sparse elimination mod p; rational rank certified by Hadamard-bounded multimodular ranks"
    } else if rational.certified {
        "sparse elimination mod p; rational rank sampled at random large primes and exact because it is full"
    } else {
        "sparse elimination mod p; rational rank as the maximum over random large primes"
    };
    Ok(RankReport { rows, cols: m.ncols(), results, bad_primes, rational, method: method.to_string() })
}
