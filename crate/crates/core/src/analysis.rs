//! The end-to-end pipeline: graph checks, cycles, multiplicity plan, plumbing
//! model, matrix assembly and ranks.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::arith::is_prime;
use crate::cycles::{
    anti_ample_cycle, fundamental_cycle, make_coprime_all, significant_multiplicity_all, Cycle, CycleError, Mode,
    MultiplicityPlan, TauMethod,
};
use crate::graph::{intersection_matrix, is_negative_definite, is_potentially_taut, DualGraph, GraphError, Violation};
use crate::linalg::{
    elementary_divisors, rank_report, summarize_divisors, DivisorSummary, EliminationConfig, LinalgError, RankOptions,
    DEFAULT_SEED, SNF_DIM_CAP,
};
use crate::plumbing::{
    assemble_matrix, build_model, estimate_footprint, Assembly, Footprint, PlumbingError, PlumbingModel,
};
use crate::preset::preset;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("options: {0}")]
    Options(String),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("graph: {0}")]
    Refused(String),
    #[error("cycles: {0}")]
    Cycles(#[from] CycleError),
    #[error("plumbing: {0}")]
    Plumbing(#[from] PlumbingError),
    #[error("ranks: {0}")]
    Linalg(#[from] LinalgError),
    #[error("export: {0}")]
    Io(#[from] std::io::Error),
}

impl AnalysisError {
    pub fn stage(&self) -> &'static str {
        match self {
            AnalysisError::Options(_) => "options",
            AnalysisError::Graph(_) | AnalysisError::Refused(_) => "graph",
            AnalysisError::Cycles(_) => "cycles",
            AnalysisError::Plumbing(_) => "plumbing",
            AnalysisError::Linalg(_) => "ranks",
            AnalysisError::Io(_) => "export",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Preset(String),
    Graph { label: String, graph: DualGraph },
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub primes: Vec<u64>,
    pub mode: Mode,
    pub j: Option<u64>,
    pub certify: bool,
    pub mem_cap: Option<u64>,
    pub trials: usize,
    pub seed: u64,
    pub tau: TauMethod,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            primes: vec![2, 3, 5, 7],
            mode: Mode::Paper,
            j: None,
            certify: false,
            mem_cap: None,
            trials: 3,
            seed: DEFAULT_SEED,
            tau: TauMethod::Greedy,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub connected: bool,
    pub negative_definite: bool,
    pub potentially_taut: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleSummary {
    pub fundamental: Cycle,
    /// `preset` or `computed`.
    pub origin: &'static str,
    pub anti_ample: Cycle,
    /// The anti-ample cycle actually used, after any coprimality adjustment.
    pub used: Cycle,
    pub coprime_adjusted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixSummary {
    pub points: usize,
    pub rows: usize,
    pub cols: usize,
    pub generators: usize,
    pub nonzeros: usize,
    pub density: f64,
    pub max_entry_bits: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacteristicResult {
    /// 0 for the rationals.
    pub characteristic: u64,
    pub rank: usize,
    pub h1: usize,
}

/// Consequence of `h^1` at one characteristic. Vanishing proves tautness;
/// the class count for nonzero `h^1` is conjectural and flagged as such.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub characteristic: String,
    pub verdict: String,
    pub conjectural: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isomorphism_classes: Option<usize>,
}

impl Verdict {
    pub fn from_h1(key: &str, h1: usize) -> Self {
        if h1 == 0 {
            Verdict {
                characteristic: key.to_string(),
                verdict: "taut".into(),
                conjectural: false,
                isomorphism_classes: None,
            }
        } else {
            Verdict {
                characteristic: key.to_string(),
                verdict: "not combinatorially rigid; conjecturally 1 + h1 isomorphism classes".into(),
                conjectural: true,
                isomorphism_classes: Some(1 + h1),
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RationalMethod {
    pub primes: Vec<u64>,
    pub certified: bool,
    pub method: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub source: String,
    pub graph: GraphSummary,
    pub cycles: CycleSummary,
    pub plan: MultiplicityPlan,
    pub matrix: MatrixSummary,
    pub results: IndexMap<String, CharacteristicResult>,
    pub bad_primes: Vec<u64>,
    pub rational: RationalMethod,
    /// Present with `certify` when the matrix fits the invariant factor cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<DivisorSummary>,
    pub verdicts: Vec<Verdict>,
}

/// Everything up to, but excluding, matrix assembly.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub label: String,
    pub graph: DualGraph,
    pub summary: GraphSummary,
    pub cycles: CycleSummary,
    pub plan: MultiplicityPlan,
    pub model: PlumbingModel,
}

impl Prepared {
    pub fn footprint(&self) -> Result<Footprint, AnalysisError> {
        Ok(estimate_footprint(&self.model)?)
    }
}

fn check_options(opts: &AnalyzeOptions) -> Result<(), AnalysisError> {
    if let Some(&p) = opts.primes.iter().find(|&&p| !is_prime(p) || p >= 1 << 32) {
        return Err(AnalysisError::Options(format!("{p} is not a prime below 2^32")));
    }
    if opts.trials == 0 {
        return Err(AnalysisError::Options("at least one rational trial is required".into()));
    }
    if let Some(j) = opts.j {
        if !is_prime(j) {
            return Err(AnalysisError::Options(format!("j = {j} is not prime")));
        }
        if opts.primes.contains(&j) {
            return Err(AnalysisError::Options(format!("j = {j} is one of the analysis primes")));
        }
    }
    Ok(())
}

fn summarize(g: &DualGraph) -> GraphSummary {
    let pre = is_potentially_taut(g);
    GraphSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        connected: g.is_connected(),
        negative_definite: is_negative_definite(&intersection_matrix(g)),
        potentially_taut: pre.potentially_taut,
        violations: pre.violations,
    }
}

pub fn prepare(source: &Source, opts: &AnalyzeOptions) -> Result<Prepared, AnalysisError> {
    check_options(opts)?;
    let (label, graph, preset_cycle) = match source {
        Source::Preset(name) => {
            let p = preset(name)?;
            (p.name, p.graph, Some(p.cycle))
        }
        Source::Graph { label, graph } => (label.clone(), graph.clone(), None),
    };
    let summary = summarize(&graph);
    if graph.vertex_count() == 0 {
        return Err(AnalysisError::Refused("graph has no vertices".into()));
    }
    if !summary.connected {
        return Err(AnalysisError::Refused("graph is not connected".into()));
    }
    if !summary.potentially_taut {
        let v: Vec<String> = summary.violations.iter().map(|v| format!("{} ({})", v.vertex, v.reason)).collect();
        return Err(AnalysisError::Refused(format!("not potentially taut: {}", v.join(", "))));
    }
    if !summary.negative_definite {
        return Err(AnalysisError::Refused(
            "intersection form is not negative definite, so no singularity has this graph".into(),
        ));
    }

    let fundamental = fundamental_cycle(&graph)?;
    let (origin, anti_ample) = match preset_cycle {
        Some(c) => ("preset", c),
        None => ("computed", anti_ample_cycle(&graph)?),
    };
    // The reference presets are used verbatim in paper mode; everything else
    // is made prime to the analysis primes.
    let used = if origin == "preset" && opts.mode == Mode::Paper {
        anti_ample.clone()
    } else {
        make_coprime_all(&graph, &anti_ample, &opts.primes)?
    };
    let cycles = CycleSummary { fundamental, origin, coprime_adjusted: used != anti_ample, anti_ample, used };

    let sig = significant_multiplicity_all(&graph, &cycles.used, &opts.primes, opts.mode, opts.tau)?;
    let mut plan = MultiplicityPlan::new(sig, cycles.used.max_coefficient(), &opts.primes);
    if let Some(j) = opts.j {
        if j != plan.j {
            log::warn!("using j = {j} instead of the planned {}", plan.j);
        }
        plan.j = j;
    }
    let model = build_model(&graph, plan.j, &opts.primes)?;
    Ok(Prepared { label, graph, summary, cycles, plan, model })
}

pub fn assemble(prep: &Prepared, opts: &AnalyzeOptions) -> Result<Assembly, AnalysisError> {
    Ok(assemble_matrix(&prep.model, opts.mem_cap)?)
}

pub fn analyze_prepared(prep: &Prepared, opts: &AnalyzeOptions) -> Result<AnalysisReport, AnalysisError> {
    let asm = assemble(prep, opts)?;
    report_for(prep, &asm, opts)
}

/// Ranks of an already assembled matrix, packaged as a report.
pub fn report_for(prep: &Prepared, asm: &Assembly, opts: &AnalyzeOptions) -> Result<AnalysisReport, AnalysisError> {
    let m = &asm.matrix;
    let rank_opts = RankOptions {
        trials: opts.trials,
        seed: opts.seed,
        certify: opts.certify,
        elimination: EliminationConfig { mem_cap: opts.mem_cap, ..Default::default() },
    };
    let ranks = rank_report(m, &opts.primes, &rank_opts)?;
    let mut results = IndexMap::new();
    let mut verdicts = Vec::new();
    for (key, r) in &ranks.results {
        let characteristic = key.strip_prefix('p').map_or(0, |p| p.parse().expect("prime key"));
        results.insert(key.clone(), CharacteristicResult { characteristic, rank: r.rank, h1: r.h1 });
        verdicts.push(Verdict::from_h1(key, r.h1));
    }
    let invariant_factors = if opts.certify && m.nrows().max(m.ncols()) <= SNF_DIM_CAP {
        let d = elementary_divisors(m, SNF_DIM_CAP)?;
        assert_eq!(d.len(), ranks.rational.rank, "invariant factors disagree with the rational rank");
        Some(summarize_divisors(&d))
    } else {
        None
    };
    Ok(AnalysisReport {
        source: prep.label.clone(),
        graph: prep.summary.clone(),
        cycles: prep.cycles.clone(),
        plan: prep.plan.clone(),
        matrix: MatrixSummary {
            points: prep.model.intersection_point_count(),
            rows: m.nrows(),
            cols: m.ncols(),
            generators: asm.generated,
            nonzeros: m.nnz(),
            density: m.density(),
            max_entry_bits: m.max_abs_bits(),
        },
        results,
        bad_primes: ranks.bad_primes,
        rational: RationalMethod {
            primes: ranks.rational.primes,
            certified: ranks.rational.certified,
            method: ranks.method,
        },
        invariant_factors,
        verdicts,
    })
}

pub fn analyze(source: &Source, opts: &AnalyzeOptions) -> Result<AnalysisReport, AnalysisError> {
    analyze_prepared(&prepare(source, opts)?, opts)
}

/// Writes the matrix in the sparse text format.
pub fn export_matrix(asm: &Assembly, path: &Path) -> Result<(), AnalysisError> {
    asm.matrix.write_text(BufWriter::new(File::create(path)?))?;
    Ok(())
}
