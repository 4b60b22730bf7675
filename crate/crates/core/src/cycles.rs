//! Cycles supported on the exceptional locus and the numeric invariants that
//! bound the thickening needed before isomorphisms extend automatically.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{gcd, next_prime_above};
use crate::graph::{intersection_matrix, is_negative_definite, DualGraph, IntersectionMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("cycle has {got} coefficients, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cycle is not anti-ample: Z.E_{vertex} = {value} >= 0")]
    NotAntiAmple { vertex: usize, value: i64 },
    #[error("cycle does not have full support (coefficient 0 at vertex {0})")]
    NotFullSupport(usize),
    #[error("{0} is neither 1 nor a prime")]
    NotPrime(u64),
    #[error("exhaustive search needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("cycle iteration did not terminate after {0} steps")]
    NoConvergence(usize),
}

/// Nonnegative coefficient vector `sum n_l E_l` in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Cycle(Vec<u64>);

impl Cycle {
    pub fn new(coefficients: Vec<u64>) -> Self {
        Cycle(coefficients)
    }

    pub fn reduced(n: usize) -> Self {
        Cycle(vec![1; n])
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_coefficient(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn has_full_support(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    pub fn scaled(&self, k: u64) -> Cycle {
        Cycle(self.0.iter().map(|&c| c * k).collect())
    }

    /// `Z . E_i` for all `i`.
    pub fn intersections(&self, m: &IntersectionMatrix) -> Vec<i64> {
        m.apply(&self.0)
    }

    pub fn is_anti_ample(&self, m: &IntersectionMatrix) -> bool {
        self.has_full_support() && self.intersections(m).iter().all(|&d| d < 0)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_len(g: &DualGraph, z: &Cycle) -> Result<(), CycleError> {
    if z.len() != g.vertex_count() {
        return Err(CycleError::LengthMismatch { expected: g.vertex_count(), got: z.len() });
    }
    Ok(())
}

fn checked_form(g: &DualGraph) -> Result<IntersectionMatrix, CycleError> {
    if !g.is_connected() {
        return Err(CycleError::NotConnected);
    }
    let m = intersection_matrix(g);
    if !is_negative_definite(&m) {
        return Err(CycleError::NotNegativeDefinite);
    }
    Ok(m)
}

const MAX_ITERATIONS: usize = 10_000_000;

/// Adds `E_i` (lowest index first) while `violates(Z.E_i)` holds for some `i`.
fn laufer_iteration(
    m: &IntersectionMatrix,
    mut z: Vec<u64>,
    violates: impl Fn(i64) -> bool,
) -> Result<Cycle, CycleError> {
    let mut dots = m.apply(&z);
    for _ in 0..MAX_ITERATIONS {
        let Some(i) = dots.iter().position(|&d| violates(d)) else {
            return Ok(Cycle(z));
        };
        z[i] += 1;
        for (k, d) in dots.iter_mut().enumerate() {
            *d += m.get(k, i);
        }
    }
    Err(CycleError::NoConvergence(MAX_ITERATIONS))
}

/// Smallest full-support `Z` with `Z.E_i <= 0` for all `i`.
pub fn fundamental_cycle(g: &DualGraph) -> Result<Cycle, CycleError> {
    let m = checked_form(g)?;
    laufer_iteration(&m, vec![1; g.vertex_count()], |d| d > 0)
}

/// Some full-support `Z` with `Z.E_i < 0` for all `i`, grown from the fundamental cycle.
pub fn anti_ample_cycle(g: &DualGraph) -> Result<Cycle, CycleError> {
    let m = checked_form(g)?;
    let start = laufer_iteration(&m, vec![1; g.vertex_count()], |d| d > 0)?;
    let z = laufer_iteration(&m, start.0, |d| d >= 0)?;
    assert!(z.is_anti_ample(&m), "anti-ample iteration produced {z}");
    Ok(z)
}

fn require_anti_ample(m: &IntersectionMatrix, z: &Cycle) -> Result<(), CycleError> {
    if let Some(i) = z.0.iter().position(|&c| c == 0) {
        return Err(CycleError::NotFullSupport(i));
    }
    for (i, d) in z.intersections(m).into_iter().enumerate() {
        if d >= 0 {
            return Err(CycleError::NotAntiAmple { vertex: i, value: d });
        }
    }
    Ok(())
}

/// `max_i E_i . (sum of E_j, j != i)`.
fn off_diagonal_row_max(m: &IntersectionMatrix) -> u64 {
    (0..m.dim()).map(|i| (0..m.dim()).filter(|&j| j != i).map(|j| m.get(i, j)).sum::<i64>()).max().unwrap_or(0).max(0)
        as u64
}

/// Anti-ample cycle with every coefficient prime to `p` (`p = 1` is the
/// characteristic-zero exponent). Cycles already prime to `p` pass through.
pub fn make_coprime(g: &DualGraph, z: &Cycle, p: u64) -> Result<Cycle, CycleError> {
    check_len(g, z)?;
    if p != 1 && !crate::arith::is_prime(p) {
        return Err(CycleError::NotPrime(p));
    }
    let m = intersection_matrix(g);
    require_anti_ample(&m, z)?;
    if p == 1 || z.0.iter().all(|&c| c % p != 0) {
        return Ok(z.clone());
    }
    let t = off_diagonal_row_max(&m);
    let out = Cycle(z.scaled(t + 1).0.into_iter().map(|c| if c % p == 0 { c + 1 } else { c }).collect());
    assert!(out.is_anti_ample(&m), "coprime adjustment lost anti-ampleness: {out}");
    assert!(out.0.iter().all(|&c| c % p != 0));
    Ok(out)
}

/// Anti-ample cycle prime to every entry of `primes` at once.
///
/// Scales by `D*t + 1` and bumps each coefficient by the least `d <= D`
/// reaching a value prime to all of `primes`; each bump raises `Z.E_i` by at
/// most `D*t`, so strict negativity survives. `D` grows until every
/// coefficient finds its bump. With a single prime this is [`make_coprime`].
pub fn make_coprime_all(g: &DualGraph, z: &Cycle, primes: &[u64]) -> Result<Cycle, CycleError> {
    check_len(g, z)?;
    let primes: Vec<u64> = primes.iter().copied().filter(|&p| p != 1).collect();
    for &p in &primes {
        if !crate::arith::is_prime(p) {
            return Err(CycleError::NotPrime(p));
        }
    }
    let m = intersection_matrix(g);
    require_anti_ample(&m, z)?;
    let coprime = |c: u64| primes.iter().all(|&p| !c.is_multiple_of(p));
    if z.0.iter().all(|&c| coprime(c)) {
        return Ok(z.clone());
    }
    let t = off_diagonal_row_max(&m);
    let mut window = 1u64;
    loop {
        let scaled = z.scaled(window * t + 1);
        let bumps: Vec<u64> =
            scaled.0.iter().map(|&c| (0..).find(|&d| coprime(c + d)).expect("coprime value exists")).collect();
        let needed = bumps.iter().copied().max().unwrap_or(0);
        if needed <= window {
            let out = Cycle(scaled.0.iter().zip(&bumps).map(|(c, d)| c + d).collect());
            assert!(out.is_anti_ample(&m), "coprime adjustment lost anti-ampleness: {out}");
            assert!(out.0.iter().all(|&c| coprime(c)));
            return Ok(out);
        }
        window = needed;
    }
}

/// `max_l {0, 2(2 p_a - 2), 2 p_a - 2 - E_l^2}`.
pub fn lambda_bound(g: &DualGraph) -> i64 {
    g.vertices()
        .iter()
        .map(|v| {
            let pa = v.genus as i64;
            0.max(2 * (2 * pa - 2)).max(2 * pa - 2 - v.self_intersection)
        })
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauResult {
    pub tau: i64,
    /// Build order `beta_0, ..., beta_{r-1}`.
    pub beta_sequence: Vec<usize>,
}

/// Greedy build order: start at vertex 0, then repeatedly take the lowest-index
/// vertex below its target maximizing `E_b . (Z_current + E_b)`.
pub fn greedy_tau(g: &DualGraph, z: &Cycle) -> Result<TauResult, CycleError> {
    check_len(g, z)?;
    if let Some(i) = z.0.iter().position(|&c| c == 0) {
        return Err(CycleError::NotFullSupport(i));
    }
    let m = intersection_matrix(g);
    let n = g.vertex_count();
    let mut current = vec![0u64; n];
    current[0] = 1;
    let mut dots: Vec<i64> = (0..n).map(|k| m.get(k, 0)).collect();
    let mut beta = vec![0usize];
    let mut tau: Option<i64> = None;
    let steps = z.total() - 1;
    for _ in 0..steps {
        let mut best: Option<(usize, i64)> = None;
        for b in 0..n {
            if current[b] >= z.0[b] {
                continue;
            }
            let score = dots[b] + m.get(b, b);
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((b, score));
            }
        }
        let (b, _) = best.expect("target not yet reached");
        tau = Some(tau.map_or(dots[b], |t| t.max(dots[b])));
        current[b] += 1;
        for (k, d) in dots.iter_mut().enumerate() {
            *d += m.get(k, b);
        }
        beta.push(b);
    }
    debug_assert_eq!(current, z.0);
    Ok(TauResult { tau: tau.unwrap_or(0), beta_sequence: beta })
}

/// Exact minimum of `tau` over every admissible build order (any start vertex).
pub fn exhaustive_tau_min(g: &DualGraph, z: &Cycle, step_budget: u64) -> Result<i64, CycleError> {
    check_len(g, z)?;
    if let Some(i) = z.0.iter().position(|&c| c == 0) {
        return Err(CycleError::NotFullSupport(i));
    }
    if z.total() > step_budget {
        return Err(CycleError::BudgetExceeded { needed: z.total(), budget: step_budget });
    }
    if z.total() == 1 {
        return Ok(0);
    }
    let m = intersection_matrix(g);
    let mut memo: HashMap<Vec<u64>, i64> = HashMap::new();

    // Best achievable max over the remaining steps from `state`.
    fn best(m: &IntersectionMatrix, target: &[u64], state: &mut Vec<u64>, memo: &mut HashMap<Vec<u64>, i64>) -> i64 {
        if state.as_slice() == target {
            return i64::MIN;
        }
        if let Some(&v) = memo.get(state.as_slice()) {
            return v;
        }
        let mut result = i64::MAX;
        for b in 0..target.len() {
            if state[b] >= target[b] {
                continue;
            }
            let step = m.dot_row(b, state);
            if step >= result {
                continue;
            }
            state[b] += 1;
            let rest = best(m, target, state, memo);
            state[b] -= 1;
            result = result.min(step.max(rest));
        }
        memo.insert(state.clone(), result);
        result
    }

    let mut result = i64::MAX;
    for start in 0..g.vertex_count() {
        let mut state = vec![0u64; g.vertex_count()];
        state[start] = 1;
        result = result.min(best(&m, z.coefficients(), &mut state, &mut memo));
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `nu = max(lambda + tau + 1, 2)`, as used for the reference table.
    #[default]
    Paper,
    /// Smallest `nu >= lambda + tau + 1` prime to `p`, and `nu >= 2` when some coefficient is 1.
    Strict,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Paper => "paper",
            Mode::Strict => "strict",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Mode::Paper),
            "strict" => Ok(Mode::Strict),
            other => Err(format!("unknown mode `{other}` (expected paper or strict)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "method")]
pub enum TauMethod {
    Greedy,
    Exhaustive { step_budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignificantMultiplicity {
    pub lambda: i64,
    pub tau: i64,
    pub beta_sequence: Vec<usize>,
    pub nu: u64,
    pub mode: Mode,
}

fn nu_floor(lambda: i64, tau: i64, z: &Cycle, mode: Mode) -> u64 {
    let bound = (lambda + tau + 1).max(1) as u64;
    match mode {
        Mode::Paper => bound.max(2),
        Mode::Strict if z.0.contains(&1) => bound.max(2),
        Mode::Strict => bound,
    }
}

fn tau_for(g: &DualGraph, z: &Cycle, method: TauMethod) -> Result<TauResult, CycleError> {
    let greedy = greedy_tau(g, z)?;
    match method {
        TauMethod::Greedy => Ok(greedy),
        TauMethod::Exhaustive { step_budget } => {
            let tau = exhaustive_tau_min(g, z, step_budget)?;
            Ok(TauResult { tau, beta_sequence: greedy.beta_sequence })
        }
    }
}

/// Significant multiplicity of `z` for characteristic exponent `p`.
pub fn significant_multiplicity(
    g: &DualGraph,
    z: &Cycle,
    p: u64,
    mode: Mode,
    method: TauMethod,
) -> Result<SignificantMultiplicity, CycleError> {
    significant_multiplicity_all(g, z, &[p], mode, method)
}

/// As [`significant_multiplicity`], but in strict mode `nu` is prime to every
/// exponent in `primes` simultaneously.
pub fn significant_multiplicity_all(
    g: &DualGraph,
    z: &Cycle,
    primes: &[u64],
    mode: Mode,
    method: TauMethod,
) -> Result<SignificantMultiplicity, CycleError> {
    check_len(g, z)?;
    let lambda = lambda_bound(g);
    let TauResult { tau, beta_sequence } = tau_for(g, z, method)?;
    let mut nu = nu_floor(lambda, tau, z, mode);
    if mode == Mode::Strict {
        while primes.iter().any(|&p| p > 1 && gcd(p, nu) != 1) {
            nu += 1;
        }
    }
    Ok(SignificantMultiplicity { lambda, tau, beta_sequence, nu, mode })
}

/// Smallest prime strictly above both `nu * n_max` and every analysis prime.
pub fn choose_j(nu: u64, n_max: u64, primes: &[u64]) -> u64 {
    let floor = (nu * n_max).max(primes.iter().copied().max().unwrap_or(0));
    next_prime_above(floor)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityPlan {
    pub lambda: i64,
    pub tau: i64,
    pub beta_sequence: Vec<usize>,
    pub nu: u64,
    pub mode: Mode,
    pub n_max: u64,
    pub j: u64,
}

impl MultiplicityPlan {
    pub fn new(sig: SignificantMultiplicity, n_max: u64, primes: &[u64]) -> Self {
        let j = choose_j(sig.nu, n_max, primes);
        MultiplicityPlan {
            lambda: sig.lambda,
            tau: sig.tau,
            beta_sequence: sig.beta_sequence,
            nu: sig.nu,
            mode: sig.mode,
            n_max,
            j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepVanishing {
    /// `2(2 p_a - 2) + E_l0 . C < 0`
    pub cond1: bool,
    /// `2 p_a - 2 - E_l0^2 + E_l0 . C < 0`
    pub cond2: bool,
    /// `cond2` only matters once the coefficient at `l0` is at least 2.
    pub cond2_applicable: bool,
}

/// Numeric vanishing criteria for one thickening step at `l0` over a full-support `c`.
pub fn step_vanishing_check(g: &DualGraph, c: &Cycle, l0: usize) -> Result<StepVanishing, CycleError> {
    check_len(g, c)?;
    if l0 >= g.vertex_count() {
        return Err(CycleError::VertexOutOfRange(l0));
    }
    if let Some(i) = c.0.iter().position(|&x| x == 0) {
        return Err(CycleError::NotFullSupport(i));
    }
    let m = intersection_matrix(g);
    let v = g.vertex(l0);
    let pa = v.genus as i64;
    let dot = m.dot_row(l0, c.coefficients());
    Ok(StepVanishing {
        cond1: 2 * (2 * pa - 2) + dot < 0,
        cond2: 2 * pa - 2 - v.self_intersection + dot < 0,
        cond2_applicable: c.0[l0] >= 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, VertexData};
    use crate::preset::{preset, TABLE_PRESETS};

    fn chain(selfints: &[i64]) -> DualGraph {
        let vertices =
            selfints.iter().enumerate().map(|(i, &s)| VertexData::new(format!("v{i}"), 0, s).unwrap()).collect();
        DualGraph::new(vertices, (1..selfints.len()).map(|i| (i - 1, i)).collect()).unwrap()
    }

    #[test]
    fn fundamental_small() {
        assert_eq!(fundamental_cycle(&chain(&[-2])).unwrap().coefficients(), &[1]);
        assert_eq!(fundamental_cycle(&chain(&[-2, -2])).unwrap().coefficients(), &[1, 1]);
        assert_eq!(fundamental_cycle(&preset("D4").unwrap().graph).unwrap().coefficients(), &[1, 1, 2, 1]);
        assert_eq!(fundamental_cycle(&preset("E8").unwrap().graph).unwrap().coefficients(), &[2, 4, 6, 3, 5, 4, 3, 2]);
    }

    #[test]
    fn fundamental_errors() {
        let g = parse_graph("vertex a genus=0 selfint=-1\nvertex b genus=0 selfint=-1\nedge a b\n").unwrap();
        assert_eq!(fundamental_cycle(&g), Err(CycleError::NotNegativeDefinite));
        let g = parse_graph("vertex a genus=0 selfint=-2\nvertex b genus=0 selfint=-2\n").unwrap();
        assert_eq!(anti_ample_cycle(&g), Err(CycleError::NotConnected));
    }

    #[test]
    fn anti_ample_small() {
        assert_eq!(anti_ample_cycle(&chain(&[-2])).unwrap().coefficients(), &[1]);
        assert_eq!(anti_ample_cycle(&chain(&[-2, -2])).unwrap().coefficients(), &[1, 1]);
        let d4 = preset("D4").unwrap();
        let m = intersection_matrix(&d4.graph);
        assert_eq!(d4.cycle.intersections(&m), vec![-1, -1, -1, -1]);
        assert!(anti_ample_cycle(&d4.graph).unwrap().is_anti_ample(&m));
    }

    #[test]
    fn coprime_recipe() {
        let a2 = chain(&[-2, -2]);
        let z = Cycle::new(vec![1, 1]);
        assert_eq!(make_coprime(&a2, &z, 1).unwrap(), z);
        assert_eq!(make_coprime(&a2, &z, 2).unwrap(), z);
        let out = make_coprime(&a2, &Cycle::new(vec![2, 2]), 2).unwrap();
        assert_eq!(out.coefficients(), &[5, 5]);
        assert_eq!(out.intersections(&intersection_matrix(&a2)), vec![-5, -5]);

        let d4 = preset("D4").unwrap();
        assert_eq!(make_coprime(&d4.graph, &d4.cycle, 7).unwrap(), d4.cycle);
        // t = 3 on D4, so (3,3,5,3) -> (12,12,20,12) -> (13,13,20,13) for p = 3
        assert_eq!(make_coprime(&d4.graph, &d4.cycle, 3).unwrap().coefficients(), &[13, 13, 20, 13]);
        assert_eq!(
            make_coprime(&a2, &Cycle::new(vec![1, 2]), 2),
            Err(CycleError::NotAntiAmple { vertex: 0, value: 0 })
        );
        assert_eq!(make_coprime(&a2, &z, 4), Err(CycleError::NotPrime(4)));
    }

    #[test]
    fn coprime_all_primes() {
        for name in TABLE_PRESETS {
            let p = preset(name).unwrap();
            let m = intersection_matrix(&p.graph);
            let out = make_coprime_all(&p.graph, &p.cycle, &[2, 3, 5, 7]).unwrap();
            assert!(out.is_anti_ample(&m), "{name}");
            assert!(out.coefficients().iter().all(|&c| [2, 3, 5, 7].iter().all(|&q| c % q != 0)), "{name}");
        }
        let a2 = chain(&[-2, -2]);
        let z = Cycle::new(vec![1, 1]);
        assert_eq!(make_coprime_all(&a2, &z, &[2]).unwrap(), make_coprime(&a2, &z, 2).unwrap());
    }

    #[test]
    fn lambda_values() {
        for name in TABLE_PRESETS {
            assert_eq!(lambda_bound(&preset(name).unwrap().graph), 0);
        }
        assert_eq!(lambda_bound(&chain(&[-3])), 1);
        assert_eq!(lambda_bound(&chain(&[-2])), 0);
    }

    #[test]
    fn greedy_tau_values() {
        for name in TABLE_PRESETS {
            let p = preset(name).unwrap();
            let res = greedy_tau(&p.graph, &p.cycle).unwrap();
            assert_eq!(res.tau, 1, "{name}");
            assert_eq!(res.beta_sequence.len() as u64, p.cycle.total());
            assert_eq!(res.beta_sequence[0], 0);
        }
        let single = greedy_tau(&chain(&[-2]), &Cycle::new(vec![1])).unwrap();
        assert_eq!(single, TauResult { tau: 0, beta_sequence: vec![0] });
        assert_eq!(greedy_tau(&chain(&[-2, -2]), &Cycle::new(vec![1, 0])), Err(CycleError::NotFullSupport(1)));
    }

    #[test]
    fn exhaustive_tau_values() {
        assert_eq!(exhaustive_tau_min(&chain(&[-2]), &Cycle::new(vec![2]), 10).unwrap(), -2);
        // A_2, (1,1): both orders give E_b . E_a = 1.
        assert_eq!(exhaustive_tau_min(&chain(&[-2, -2]), &Cycle::new(vec![1, 1]), 10).unwrap(), 1);
        let d4 = preset("D4").unwrap().graph;
        let z = Cycle::new(vec![1, 1, 2, 1]);
        let exhaustive = exhaustive_tau_min(&d4, &z, 10).unwrap();
        assert!(exhaustive <= greedy_tau(&d4, &z).unwrap().tau);
        assert_eq!(exhaustive_tau_min(&d4, &z, 3), Err(CycleError::BudgetExceeded { needed: 5, budget: 3 }));
    }

    #[test]
    fn significant_multiplicity_modes() {
        let d4 = preset("D4").unwrap();
        let paper = significant_multiplicity(&d4.graph, &d4.cycle, 1, Mode::Paper, TauMethod::Greedy).unwrap();
        assert_eq!((paper.lambda, paper.tau, paper.nu), (0, 1, 2));
        let strict = significant_multiplicity(&d4.graph, &d4.cycle, 2, Mode::Strict, TauMethod::Greedy).unwrap();
        assert_eq!(strict.nu, 3);
        let single =
            significant_multiplicity(&chain(&[-2]), &Cycle::new(vec![1]), 1, Mode::Strict, TauMethod::Greedy).unwrap();
        assert_eq!(single.nu, 2);
        let all =
            significant_multiplicity_all(&d4.graph, &d4.cycle, &[2, 3, 5, 7], Mode::Strict, TauMethod::Greedy).unwrap();
        assert_eq!(all.nu, 11);
    }

    #[test]
    fn j_choice() {
        assert_eq!(choose_j(2, 5, &[2, 3, 5, 7]), 11);
        assert_eq!(choose_j(2, 9, &[2, 3, 5, 7]), 19);
        assert_eq!(choose_j(2, 135, &[2, 3, 5, 7]), 271);
        assert_eq!(choose_j(2, 1, &[2, 3, 5, 7]), 11);
    }

    #[test]
    fn step_vanishing() {
        let d4 = preset("D4").unwrap().graph;
        let c = Cycle::new(vec![1, 1, 2, 1]);
        let r = step_vanishing_check(&d4, &c, 2).unwrap();
        assert!(r.cond1 && r.cond2 && r.cond2_applicable);
        assert!(!step_vanishing_check(&d4, &c, 0).unwrap().cond2_applicable);

        // genus 0 with E.C = 4: -4 + 4 = 0 is not < 0
        let g = chain(&[-1, -1, -1, -1, -1, -1]);
        let star = DualGraph::new(g.vertices().to_vec(), vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let c = Cycle::new(vec![1, 1, 1, 1, 1, 1]);
        // E_0 . C = -1 + 5 = 4
        assert!(!step_vanishing_check(&star, &c, 0).unwrap().cond1);

        // genus 1, E^2 = -1, E.C = 0: 2(2-2) + 0 = 0 is not < 0
        let torus = DualGraph::new(
            vec![VertexData::new("t", 1, -1).unwrap(), VertexData::new("u", 0, -1).unwrap()],
            vec![(0, 1)],
        )
        .unwrap();
        let r = step_vanishing_check(&torus, &Cycle::new(vec![1, 1]), 0).unwrap();
        assert!(!r.cond1);
        assert!(step_vanishing_check(&d4, &Cycle::new(vec![1, 0, 1, 1]), 0).is_err());
    }
}
