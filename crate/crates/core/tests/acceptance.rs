//! Acceptance criteria, one PASS/FAIL line each.
//!
//! The E8 run needs about 2 GB and under a minute of one core in an optimized
//! build. Set `TAUT_SKIP_SLOW=1` to skip it; the line then reads SKIP.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::{
    all_slot_assignments, dense_rank_i64, form, minus_two_chain, model_ranks, negative_definite_by_minors,
    random_sparse_cases, semi_negative_cycles, small_graphs, truncation_pair,
};
use taut_core::analysis::{analyze, prepare, AnalysisReport, AnalyzeOptions, Source};
use taut_core::cycles::{anti_ample_cycle, fundamental_cycle, make_coprime_all};
use taut_core::graph::{intersection_matrix, DualGraph};
use taut_core::linalg::rank_mod_p;
use taut_core::plumbing::build_model;
use taut_core::preset::preset;
use taut_core::sparse::SparseIntMatrix;

type Outcome = Result<String, String>;

struct Expected {
    name: &'static str,
    rows: usize,
    ranks: [usize; 4],
    h1: [usize; 4],
}

const FAST: [Expected; 4] = [
    Expected { name: "D4", rows: 660, ranks: [659, 660, 660, 660], h1: [1, 0, 0, 0] },
    Expected { name: "D5", rows: 2736, ranks: [2735, 2736, 2736, 2736], h1: [1, 0, 0, 0] },
    Expected { name: "D6", rows: 9300, ranks: [9298, 9300, 9300, 9300], h1: [2, 0, 0, 0] },
    Expected { name: "E6", rows: 18060, ranks: [18059, 18059, 18060, 18060], h1: [1, 1, 0, 0] },
];

const SLOW: [Expected; 3] = [
    Expected { name: "D7", rows: 21672, ranks: [21670, 21672, 21672, 21672], h1: [2, 0, 0, 0] },
    Expected { name: "E7", rows: 126072, ranks: [126069, 126071, 126072, 126072], h1: [3, 1, 0, 0] },
    Expected { name: "E8", rows: 1024380, ranks: [1024376, 1024378, 1024379, 1024380], h1: [4, 2, 1, 0] },
];

const PLAN_J: [(&str, u64); 7] = [("D4", 11), ("D5", 19), ("D6", 31), ("E6", 43), ("D7", 43), ("E7", 103), ("E8", 271)];

fn skip_slow() -> bool {
    std::env::var("TAUT_SKIP_SLOW").is_ok_and(|v| !v.is_empty() && v != "0")
}

/// Every report produced during the run, for the criteria that quantify over all of them.
#[derive(Default)]
struct Runs {
    reports: BTreeMap<String, AnalysisReport>,
}

impl Runs {
    fn analyze(&mut self, label: &str, source: Source, opts: &AnalyzeOptions) -> Result<&AnalysisReport, String> {
        if !self.reports.contains_key(label) {
            let start = Instant::now();
            let r = analyze(&source, opts).map_err(|e| format!("{label}: {e}"))?;
            eprintln!("  analyzed {label} in {:.1}s", start.elapsed().as_secs_f64());
            self.reports.insert(label.to_string(), r);
        }
        Ok(&self.reports[label])
    }

    fn preset(&mut self, name: &str) -> Result<&AnalysisReport, String> {
        self.analyze(name, Source::Preset(name.into()), &AnalyzeOptions::default())
    }
}

fn check_table_row(runs: &mut Runs, e: &Expected) -> Result<(), String> {
    let r = runs.preset(e.name)?;
    let ranks: Vec<usize> = ["p2", "p3", "p5", "p7"].iter().map(|k| r.results[*k].rank).collect();
    let h1: Vec<usize> = ["p2", "p3", "p5", "p7"].iter().map(|k| r.results[*k].h1).collect();
    if r.matrix.rows != e.rows || ranks != e.ranks || h1 != e.h1 {
        return Err(format!(
            "{}: r_P {} ranks {:?} h1 {:?}, expected {} {:?} {:?}",
            e.name, r.matrix.rows, ranks, h1, e.rows, e.ranks, e.h1
        ));
    }
    Ok(())
}

fn criterion_1(runs: &mut Runs) -> Outcome {
    for e in &FAST {
        check_table_row(runs, e)?;
    }
    Ok("D4, D5, D6, E6 match r_P, ranks and h1".into())
}

fn criterion_2(runs: &mut Runs) -> Outcome {
    let mut done = Vec::new();
    for e in &SLOW {
        if e.name == "E8" && skip_slow() {
            continue;
        }
        check_table_row(runs, e)?;
        done.push(e.name);
    }
    Ok(format!("{} match", done.join(", ")))
}

fn criterion_3(runs: &mut Runs) -> Outcome {
    for (label, r) in &runs.reports {
        let (pt, j) = (r.matrix.points, r.plan.j as usize);
        if r.matrix.rows != 2 * pt * (j * j - j) {
            return Err(format!("{label}: {} rows, 2*{pt}*({j}^2-{j}) expected", r.matrix.rows));
        }
    }
    Ok(format!("r_P = 2 pt (j^2 - j) on all {} analyzed models", runs.reports.len()))
}

fn criterion_4(runs: &mut Runs) -> Outcome {
    let opts = AnalyzeOptions { j: Some(11), ..Default::default() };
    for n in 1..=6 {
        let label = format!("A{n}");
        let r = runs.analyze(&label, Source::Preset(label.clone()), &opts)?;
        if let Some((k, _)) = r.results.iter().find(|(_, c)| c.h1 != 0) {
            return Err(format!("{label}: h1 nonzero for {k}"));
        }
        if r.plan.j != 11 {
            return Err(format!("{label}: ran with j = {}", r.plan.j));
        }
    }
    for (label, r) in &runs.reports {
        let q = r.results["q"].rank;
        if let Some((k, c)) = r.results.iter().find(|(_, c)| c.rank > q) {
            return Err(format!("{label}: rank {} for {k} exceeds rational rank {q}", c.rank));
        }
    }
    Ok(format!("rank_p <= rank_Q on {} runs; A1..A6 at j = 11 have h1 = 0", runs.reports.len()))
}

fn criterion_5() -> Outcome {
    let cases = random_sparse_cases(200, 0x5eed);
    for (k, (a, p)) in cases.iter().enumerate() {
        let got = rank_mod_p(&SparseIntMatrix::from_dense(a), *p).map_err(|e| e.to_string())?;
        let want = dense_rank_i64(a, *p);
        if got != want {
            return Err(format!("case {k} mod {p}: {got} vs dense {want}"));
        }
    }
    Ok(format!("{} random matrices agree with dense elimination", cases.len()))
}

fn criterion_6() -> Outcome {
    let mut models = 0;
    for name in ["D4", "A3"] {
        let g = preset(name).map_err(|e| e.to_string())?.graph;
        let base = build_model(&g, 11, &[2, 3, 5, 7]).map_err(|e| e.to_string())?;
        let want = model_ranks(&base);
        for m in all_slot_assignments(&base) {
            if model_ranks(&m) != want {
                return Err(format!("{name}: slot assignment changes ranks"));
            }
            models += 1;
        }
    }
    let g = preset("D4").map_err(|e| e.to_string())?.graph;
    let want = model_ranks(&build_model(&g, 11, &[2, 3, 5, 7]).map_err(|e| e.to_string())?);
    let leaves = [0, 1, 3];
    for a in leaves {
        for b in leaves {
            for c in leaves {
                if a == b || b == c || a == c {
                    continue;
                }
                let h = g.permuted(&[a, b, 2, c]);
                let m = build_model(&h, 11, &[2, 3, 5, 7]).map_err(|e| e.to_string())?;
                if model_ranks(&m) != want {
                    return Err(format!("D4 leaf order {:?} changes ranks", [a, b, c]));
                }
                models += 1;
            }
        }
    }
    Ok(format!("{models} relabelled or re-slotted models agree"))
}

fn cycle_postconditions(g: &DualGraph) -> Result<(), String> {
    let m = intersection_matrix(g);
    let z = anti_ample_cycle(g).map_err(|e| e.to_string())?;
    if !z.has_full_support() || z.intersections(&m).iter().any(|&d| d >= 0) {
        return Err(format!("anti-ample cycle {z} fails Z.E_i < 0"));
    }
    let c = make_coprime_all(g, &z, &[2, 3, 5, 7]).map_err(|e| e.to_string())?;
    if !c.is_anti_ample(&m) || c.coefficients().iter().any(|&x| [2, 3, 5, 7].iter().any(|p| x % p == 0)) {
        return Err(format!("coprime cycle {c} fails its postcondition"));
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut graphs = 0;
    for g in (1..=4).flat_map(|n| small_graphs(n, &[-1, -2, -3])) {
        if !negative_definite_by_minors(&form(&g)) {
            continue;
        }
        let z = fundamental_cycle(&g).map_err(|e| e.to_string())?;
        let found = semi_negative_cycles(&g, 6);
        match found.iter().find(|c| found.iter().all(|o| c.iter().zip(o).all(|(a, b)| a <= b))) {
            Some(least) if z.coefficients() != least.as_slice() => {
                return Err(format!("fundamental cycle {z} but brute force gives {least:?}"));
            }
            None if z.max_coefficient() <= 6 => return Err(format!("{z} missed by brute force")),
            _ => {}
        }
        cycle_postconditions(&g)?;
        graphs += 1;
    }
    for name in ["D4", "D5", "D6", "D7", "E6", "E7", "E8"] {
        cycle_postconditions(&preset(name).map_err(|e| e.to_string())?.graph)?;
    }
    Ok(format!("{graphs} small negative definite graphs plus the table presets"))
}

fn criterion_8() -> Outcome {
    let g = minus_two_chain(2);
    for p in [2, 3, 5, 7, 1_000_000_007] {
        let (windowed, enlarged) = truncation_pair(&g, 5, p);
        if windowed != enlarged {
            return Err(format!("p = {p}: windowed h1 {windowed}, enlarged {enlarged}"));
        }
    }
    Ok("A2, j = 5: windowed and enlarged h1 agree for 2, 3, 5, 7 and 1000000007".into())
}

fn criterion_9() -> Outcome {
    for (name, j) in PLAN_J {
        let prep = prepare(&Source::Preset(name.into()), &AnalyzeOptions::default()).map_err(|e| e.to_string())?;
        let p = &prep.plan;
        if (p.lambda, p.tau, p.nu, p.j) != (0, 1, 2, j) {
            return Err(format!("{name}: lambda {} tau {} nu {} j {}, expected 0 1 2 {j}", p.lambda, p.tau, p.nu, p.j));
        }
    }
    Ok("lambda 0, tau 1, nu 2 and j = 11, 19, 31, 43, 43, 103, 271".into())
}

#[test]
fn acceptance() {
    let mut runs = Runs::default();
    let mut outcomes: BTreeMap<usize, Outcome> = BTreeMap::new();
    outcomes.insert(1, criterion_1(&mut runs));
    outcomes.insert(2, criterion_2(&mut runs));
    outcomes.insert(5, criterion_5());
    outcomes.insert(6, criterion_6());
    outcomes.insert(7, criterion_7());
    outcomes.insert(8, criterion_8());
    outcomes.insert(9, criterion_9());
    // these quantify over every run above, so they go last
    outcomes.insert(4, criterion_4(&mut runs));
    outcomes.insert(3, criterion_3(&mut runs));
    let mut lines = Vec::new();
    for (n, outcome) in outcomes {
        lines.push(match outcome {
            Ok(detail) => format!("PASS criterion {n}: {detail}"),
            Err(detail) => format!("FAIL criterion {n}: {detail}"),
        });
        if n == 2 && skip_slow() {
            lines.push("SKIP criterion 2: E8 (TAUT_SKIP_SLOW is set)".into());
        }
    }
    for line in &lines {
        println!("{line}");
    }
    let failed: Vec<&String> = lines.iter().filter(|l| l.starts_with("FAIL")).collect();
    assert!(failed.is_empty(), "{} criteria failed", failed.len());
}
