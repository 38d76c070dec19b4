//! Command-line driver for the bounded-arboricity edge sampler.
//!
//! Exit codes: 0 when every requested check passed, 1 when a run completed
//! but flagged a violation (failed certification, 5-sigma deviation, no
//! layered partition, retry budget exhausted), 2 on input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use arbo_sample::generators::{generate, GenSpec};
use arbo_sample::harness::{
    analyze_graph, bench, bench_csv, estimate_edge_count, verify,
};
use arbo_sample::layering::compute_layering;
use arbo_sample::sampler::{
    rejection_baseline, sample_edge, tvd_baseline_repeat, SamplerError,
};
use arbo_sample::{Graph, OracleSession, SamplerParams};

#[derive(Parser)]
#[command(name = "arbo-sample", version, about = "Almost-uniform edge sampling under arboricity bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family to an edge-list file plus a .meta.json sidecar.
    Gen(GenArgs),
    /// Compute a (theta, beta)-layered partition and print vertex levels.
    Layering(LayeringArgs),
    /// Draw edges and print one "u v attempts queries" line per sample.
    Sample(SampleArgs),
    /// Exact analysis: per-edge probabilities, bounds, certification report.
    Analyze(AnalyzeArgs),
    /// Monte-Carlo verification of the sampler against the exact law.
    Verify(VerifyArgs),
    /// Query-cost benchmark over a JSON list of generator specs.
    Bench(BenchArgs),
    /// Estimate the edge count from the attempt success rate.
    EstimateM(EstimateArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Family: path|star|complete|kary_tree|alpha_forests|matching_plus_regular|disjointness_embedding
    #[arg(long)]
    family: String,
    /// Family parameters as comma-separated k=v integers, e.g. n=64,alpha=2
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge-list path; metadata goes to the same path with a
    /// .meta.json extension.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LayeringArgs {
    graph: PathBuf,
    #[arg(long, conflicts_with_all = ["alpha", "eps", "auto"])]
    theta: Option<u64>,
    #[arg(long, requires = "theta")]
    beta: Option<f64>,
    /// Derive theta and beta from --alpha and --eps.
    #[arg(long, requires_all = ["alpha", "eps"])]
    auto: bool,
    #[arg(long)]
    alpha: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct SampleArgs {
    graph: PathBuf,
    #[arg(long)]
    alpha: u64,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// paper|rejection|tvd
    #[arg(long, default_value = "paper")]
    algo: String,
}

#[derive(Args)]
struct AnalyzeArgs {
    graph: PathBuf,
    #[arg(long)]
    alpha: u64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    #[arg(long)]
    alpha: u64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON config: {"eps": .., "trials": .., "seed": .., "specs": [..]}
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    graph: PathBuf,
    #[arg(long)]
    alpha: u64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    attempts: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct BenchConfig {
    eps: f64,
    trials: u64,
    #[serde(default)]
    seed: u64,
    specs: Vec<GenSpec>,
}

/// Outcome of a subcommand: whether all checks passed.
enum Outcome {
    Clean,
    Flagged(String),
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read graph file {}", path.display()))?;
    Graph::parse_edge_list(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn parse_kv_params(text: &str) -> Result<BTreeMap<String, u64>> {
    let mut out = BTreeMap::new();
    for piece in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| anyhow!("bad parameter {piece:?}, expected k=v"))?;
        let v: u64 = v
            .trim()
            .parse()
            .with_context(|| format!("parameter {k} is not an integer"))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn run_gen(args: &GenArgs) -> Result<Outcome> {
    let spec = GenSpec {
        family: args.family.clone(),
        params: parse_kv_params(&args.params)?,
        seed: args.seed,
    };
    let generated = generate(&spec)?;
    std::fs::write(&args.out, generated.graph.to_edge_list_string())
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    let meta_path = args.out.with_extension("meta.json");
    std::fs::write(&meta_path, serde_json::to_string_pretty(&generated.meta)?)
        .with_context(|| format!("cannot write {}", meta_path.display()))?;
    println!(
        "wrote {} (n={}, m={}, alpha<={}) and {}",
        args.out.display(),
        generated.meta.n,
        generated.meta.m,
        generated.meta.declared_alpha,
        meta_path.display()
    );
    Ok(Outcome::Clean)
}

fn run_layering(args: &LayeringArgs) -> Result<Outcome> {
    let g = load_graph(&args.graph)?;
    let (theta, beta) = if args.auto {
        let params = SamplerParams::derive(
            g.n(),
            args.alpha.expect("clap enforces --alpha with --auto"),
            args.eps.expect("clap enforces --eps with --auto"),
        )?;
        (params.theta, params.beta)
    } else {
        match (args.theta, args.beta) {
            (Some(t), Some(b)) => (t, b),
            _ => bail!("pass either --auto --alpha A --eps E or --theta T --beta B"),
        }
    };
    match compute_layering(&g, theta, beta) {
        Ok(part) => {
            for v in 0..g.n() as u32 {
                println!("{v} {}", part.level(v));
            }
            println!("depth={}", part.depth());
            Ok(Outcome::Clean)
        }
        Err(e @ arbo_sample::layering::LayeringError::NotCovered { .. }) => {
            Ok(Outcome::Flagged(e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_sample(args: &SampleArgs) -> Result<Outcome> {
    let g = load_graph(&args.graph)?;
    let params = SamplerParams::derive(g.n(), args.alpha, args.eps)?;
    let max_attempts = params.default_max_attempts(Some(g.m() as u64));
    let mut session = OracleSession::new(&g, args.seed);
    for _ in 0..args.count {
        let before = session.counts().total();
        let (edge, attempts) = match args.algo.as_str() {
            "paper" => {
                let got = match sample_edge(&mut session, &params, max_attempts) {
                    Ok(got) => got,
                    Err(e @ SamplerError::Exhausted { .. }) => {
                        return Ok(Outcome::Flagged(e.to_string()))
                    }
                    Err(e) => return Err(e.into()),
                };
                (got.edge, got.attempts)
            }
            "rejection" => {
                // the harness supplies dmax offline; here that is the file
                let dmax = g.max_degree().max(1) as u64;
                rejection_baseline(&mut session, dmax, max_attempts)?
            }
            "tvd" => tvd_baseline_repeat(&mut session, args.eps, max_attempts)?,
            other => bail!("unknown algorithm {other:?} (expected paper|rejection|tvd)"),
        };
        let queries = session.counts().total() - before;
        println!("{} {} {attempts} {queries}", edge.0, edge.1);
    }
    Ok(Outcome::Clean)
}

fn run_analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    let g = load_graph(&args.graph)?;
    let params = SamplerParams::derive(g.n(), args.alpha, args.eps)?;
    let report = analyze_graph(&g, &params, &args.graph.display().to_string());
    std::fs::write(&args.out, serde_json::to_string_pretty(&report)?)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    println!(
        "analyze: n={} m={} theta={} ell={} rho={} success_p~{:.6e} -> {}",
        report.n,
        report.m,
        params.theta,
        params.ell,
        params.rho,
        report.success_probability.approx,
        if report.pass { "PASS" } else { "FAIL" }
    );
    if report.pass {
        Ok(Outcome::Clean)
    } else {
        let why = report
            .certificate_unavailable
            .clone()
            .unwrap_or_else(|| "certification found violations".to_string());
        Ok(Outcome::Flagged(why))
    }
}

fn run_verify(args: &VerifyArgs) -> Result<Outcome> {
    let g = load_graph(&args.graph)?;
    let params = SamplerParams::derive(g.n(), args.alpha, args.eps)?;
    let report = verify(
        &g,
        &params,
        args.trials,
        args.seed,
        &args.graph.display().to_string(),
    )?;
    std::fs::write(&args.out, serde_json::to_string_pretty(&report)?)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    let cert_ok = report.certificate.as_ref().map(|c| c.pass).unwrap_or(false);
    println!(
        "verify: trials={} failures={} max|z|={:.3} flagged={} certificate={}",
        report.trials,
        report.failures,
        report.max_abs_z,
        report.flagged.len(),
        if cert_ok { "PASS" } else { "FAIL" }
    );
    if report.all_within_5_sigma && cert_ok {
        Ok(Outcome::Clean)
    } else if !report.all_within_5_sigma {
        Ok(Outcome::Flagged(format!(
            "{} edge(s) beyond 5 sigma (max |z| = {:.3})",
            report.flagged.len(),
            report.max_abs_z
        )))
    } else {
        Ok(Outcome::Flagged(
            report
                .certificate_unavailable
                .unwrap_or_else(|| "certification found violations".to_string()),
        ))
    }
}

fn run_bench(args: &BenchArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&args.spec)
        .with_context(|| format!("cannot read {}", args.spec.display()))?;
    let config: BenchConfig = serde_json::from_str(&text)
        .with_context(|| format!("bad bench config {}", args.spec.display()))?;
    let rows = bench(&config.specs, config.eps, config.trials, config.seed)?;
    std::fs::write(&args.out, bench_csv(&rows))
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    for row in &rows {
        println!(
            "{}: n={} m={} alpha={} queries/edge={:.1} (bound {:.1}) attempts={:.1}",
            row.family,
            row.n,
            row.m,
            row.alpha,
            row.mean_queries_per_edge,
            row.predicted_bound,
            row.mean_attempts
        );
    }
    Ok(Outcome::Clean)
}

fn run_estimate(args: &EstimateArgs) -> Result<Outcome> {
    let g = load_graph(&args.graph)?;
    let params = SamplerParams::derive(g.n(), args.alpha, args.eps)?;
    let mut session = OracleSession::new(&g, args.seed);
    let est = estimate_edge_count(&mut session, &params, args.attempts)?;
    println!("{}", serde_json::to_string(&est)?);
    Ok(Outcome::Clean)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Layering(a) => run_layering(a),
        Command::Sample(a) => run_sample(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Verify(a) => run_verify(a),
        Command::Bench(a) => run_bench(a),
        Command::EstimateM(a) => run_estimate(a),
    };
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Flagged(why)) => {
            eprintln!("flagged: {why}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
