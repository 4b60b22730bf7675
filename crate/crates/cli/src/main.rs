use std::fs;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use taut_core::analysis::{assemble, export_matrix, prepare, report_for, AnalysisError, AnalyzeOptions, Source};
use taut_core::cycles::Mode;
use taut_core::graph::parse_graph;
use taut_core::linalg::{rank_report, RankOptions};
use taut_core::report::{render, Format};
use taut_core::sparse::SparseIntMatrix;

#[derive(Parser)]
#[command(name = "taut", version, about = "Tautness of surface singularities from their dual graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the plumbing matrix of a dual graph and report h^1 per characteristic.
    Analyze(AnalyzeArgs),
    /// Ranks of a matrix file in the sparse text format.
    Rank(RankArgs),
}

#[derive(Clone)]
struct PrimeList(Vec<u64>);

fn parse_primes(s: &str) -> Result<PrimeList, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<u64>().map_err(|_| format!("invalid prime `{t}`")))
        .collect::<Result<_, _>>()
        .map(PrimeList)
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Graph file (`vertex <id> genus=<g> selfint=<e>` and `edge <id> <id>` lines).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    graph: Option<PathBuf>,
    /// Built-in graph: A<n>, D4..D7, E6..E8.
    #[arg(long)]
    preset: Option<String>,
    /// Candidate primes, comma separated.
    #[arg(long, default_value = "2,3,5,7", value_parser = parse_primes)]
    primes: PrimeList,
    /// `paper` reproduces the reference plan; `strict` makes nu prime to every candidate.
    #[arg(long, default_value = "paper")]
    mode: Mode,
    /// Override the multiplicity j (must be prime and not a candidate).
    #[arg(long)]
    j: Option<u64>,
    /// Write the assembled matrix in the sparse text format.
    #[arg(long)]
    export_matrix: Option<PathBuf>,
    /// Prove the rational rank and list the invariant factors (at most 2000 rows and columns).
    #[arg(long)]
    certify: bool,
    /// Refuse to assemble or eliminate beyond this many bytes.
    #[arg(long)]
    mem_cap: Option<u64>,
    /// `text` or `structured` (JSON).
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct RankArgs {
    /// Matrix file; `-` reads standard input.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value = "2,3,5,7", value_parser = parse_primes)]
    primes: PrimeList,
    /// Prove the rational rank instead of sampling it (at most 2000 rows and columns).
    #[arg(long)]
    certify: bool,
}

fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let source = match (&args.graph, &args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let graph = parse_graph(&text).map_err(AnalysisError::from)?;
            Source::Graph { label: path.display().to_string(), graph }
        }
        (None, Some(name)) => Source::Preset(name.clone()),
        (None, None) => bail!("one of --graph or --preset is required"),
    };
    let opts = AnalyzeOptions {
        primes: args.primes.0,
        mode: args.mode,
        j: args.j,
        certify: args.certify,
        mem_cap: args.mem_cap,
        ..Default::default()
    };
    let prep = prepare(&source, &opts)?;
    let fp = prep.footprint()?;
    eprintln!(
        "estimated footprint: {} rows, {} generators, at most {} nonzeros, about {} MiB",
        fp.rows,
        fp.generators,
        fp.nnz,
        fp.bytes.div_ceil(1 << 20)
    );
    let asm = assemble(&prep, &opts)?;
    if let Some(path) = &args.export_matrix {
        export_matrix(&asm, path)?;
        eprintln!("wrote {}x{} matrix to {}", asm.matrix.nrows(), asm.matrix.ncols(), path.display());
    }
    let report = report_for(&prep, &asm, &opts)?;
    io::stdout().write_all(render(&report, args.format).as_bytes())?;
    Ok(())
}

fn run_rank(args: RankArgs) -> Result<()> {
    let matrix = if args.matrix.as_os_str() == "-" {
        SparseIntMatrix::read_text(io::stdin().lock())?
    } else {
        let file = fs::File::open(&args.matrix).with_context(|| format!("opening {}", args.matrix.display()))?;
        SparseIntMatrix::read_text(BufReader::new(file))?
    };
    let report = rank_report(&matrix, &args.primes.0, &RankOptions { certify: args.certify, ..Default::default() })?;
    println!("{} x {}, {} nonzeros", matrix.nrows(), matrix.ncols(), matrix.nnz());
    for (key, r) in &report.results {
        println!("{key}: rank {} h1 {}", r.rank, r.h1);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Rank(args) => run_rank(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match e.downcast_ref::<AnalysisError>() {
                Some(a) => eprintln!("error: {a}"),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::FAILURE
        }
    }
}
