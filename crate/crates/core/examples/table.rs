//! Prints matrix sizes and ranks modulo 2, 3, 5, 7 for the named presets.

use std::time::Instant;

use taut_core::linalg::{rank_mod_p, rank_over_q, EliminationConfig, DEFAULT_SEED};
use taut_core::plumbing::{assemble_matrix, build_model};
use taut_core::preset::preset;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    for spec in &args {
        let (name, j) = spec.split_once(':').expect("usage: NAME:J ...");
        let j: u64 = j.parse().expect("j");
        let p = preset(name).expect("preset");
        let t = Instant::now();
        let model = build_model(&p.graph, j, &[2, 3, 5, 7]).expect("model");
        let asm = assemble_matrix(&model, None).expect("assembly");
        let m = &asm.matrix;
        println!("{name} j={j}: {}x{} nnz={} ({:.2?})", m.nrows(), m.ncols(), m.nnz(), t.elapsed());
        for q in [2u64, 3, 5, 7] {
            let t = Instant::now();
            println!("  p={q}: rank {} ({:.2?})", rank_mod_p(m, q).unwrap(), t.elapsed());
        }
        let t = Instant::now();
        let r = rank_over_q(m, 1, DEFAULT_SEED, &EliminationConfig::default()).unwrap();
        println!("  q: rank {} ({:.2?})", r.rank, t.elapsed());
    }
    if let Ok(status) = std::fs::read_to_string("/proc/self/status") {
        if let Some(line) = status.lines().find(|l| l.starts_with("VmHWM")) {
            println!("{line}");
        }
    }
}
