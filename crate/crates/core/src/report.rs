//! Rendering of analysis reports for people (text) and programs (JSON).

use std::fmt::Write;
use std::str::FromStr;

use crate::analysis::AnalysisReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "structured" | "json" => Ok(Format::Structured),
            other => Err(format!("unknown format `{other}` (expected text or structured)")),
        }
    }
}

pub fn render(r: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Text => render_text(r),
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let g = &r.graph;
    let _ = writeln!(out, "source: {}", r.source);
    let _ = writeln!(
        out,
        "graph: {} vertices, {} edges, negative definite: {}, potentially taut: {}",
        g.vertices, g.edges, g.negative_definite, g.potentially_taut
    );
    let c = &r.cycles;
    let _ = writeln!(out, "fundamental cycle: ({})", join(c.fundamental.coefficients()));
    let _ = writeln!(out, "anti-ample cycle ({}): ({})", c.origin, join(c.anti_ample.coefficients()));
    if c.coprime_adjusted {
        let _ = writeln!(out, "coprime cycle used: ({})", join(c.used.coefficients()));
    }
    let p = &r.plan;
    let _ = writeln!(
        out,
        "plan: lambda = {}, tau = {}, beta = ({}), nu = {} ({} mode), n_max = {}, j = {}",
        p.lambda,
        p.tau,
        join(&p.beta_sequence),
        p.nu,
        p.mode,
        p.n_max,
        p.j
    );
    let m = &r.matrix;
    let _ = writeln!(
        out,
        "matrix: {} points, {} x {} ({} generators before dropping zero columns), {} nonzeros, density {:.3e}",
        m.points, m.rows, m.cols, m.generators, m.nonzeros, m.density
    );
    let _ = writeln!(out, "{:<6} {:>12} {:>8}  verdict", "char", "rank", "h1");
    for (key, res) in &r.results {
        let label = if res.characteristic == 0 { "Q".to_string() } else { format!("p={}", res.characteristic) };
        let verdict = r.verdicts.iter().find(|v| &v.characteristic == key).map_or("", |v| v.verdict.as_str());
        let _ = writeln!(out, "{label:<6} {:>12} {:>8}  {verdict}", res.rank, res.h1);
    }
    let bad = if r.bad_primes.is_empty() { "none".to_string() } else { join(&r.bad_primes) };
    let _ = writeln!(out, "bad primes among candidates: {bad}");
    let _ = writeln!(
        out,
        "rational rank: {} ({}; primes {})",
        if r.rational.certified { "exact" } else { "Monte Carlo" },
        r.rational.method,
        join(&r.rational.primes)
    );
    if let Some(f) = &r.invariant_factors {
        let rest = if f.non_units.is_empty() { String::new() } else { format!(", then {}", f.non_units.join(", ")) };
        let _ = writeln!(out, "invariant factors: {} ones{rest}", f.units);
        let bad = if f.bad_primes.is_empty() { "none".to_string() } else { join(&f.bad_primes) };
        let qualifier = if f.complete { "" } else { " (a large cofactor was not factored)" };
        let _ = writeln!(out, "all bad primes: {bad}{qualifier}");
    }
    if r.verdicts.iter().any(|v| v.conjectural) {
        let _ = writeln!(out, "note: class counts for nonzero h1 are conjectural");
    }
    out
}
