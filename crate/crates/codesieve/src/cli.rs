//! Command-line front-end: a thin dispatcher over the library modules.
//!
//! Exit codes: 0 on success, 1 on validation or usage errors, 2 when a
//! run computes an infeasible or collapsed outcome (with JSON
//! diagnostics on stderr).

use crate::codes::sample_random_code;
use crate::combinatorics::{self, ExactRatio};
use crate::costmodel::AlgorithmKind;
use crate::hamming::{sample_sphere, Seed};
use crate::lsf::{all_pairs_solutions, derive_nns_params, nns_solve};
use crate::optimizer::{
    curve_to_csv, hardest_from_curve, isd_claim_check, sweep_with_tol, OptimizationResult,
    DEFAULT_TOL,
};
use crate::sieve::{solve_dp, SieveError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_OUTCOME: i32 = 2;

#[derive(Parser)]
#[command(
    name = "codesieve",
    about = "Code sieving, Hamming-metric near-neighbor search, and asymptotic cost models",
    version
)]
struct Cli {
    /// Worker threads (also via CODESIEVE_THREADS); default: all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format for structured results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    All,
    Classical,
    Grover,
    Qw,
    Sparse,
}

impl AlgoArg {
    fn kinds(self) -> Vec<AlgorithmKind> {
        match self {
            AlgoArg::All => AlgorithmKind::NNS_KINDS.to_vec(),
            AlgoArg::Classical => vec![AlgorithmKind::Classical],
            AlgoArg::Grover => vec![AlgorithmKind::Grover],
            AlgoArg::Qw => vec![AlgorithmKind::QwLsf],
            AlgoArg::Sparse => vec![AlgorithmKind::QwLsfSparse],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact combinatorial values (decimal counts, reduced fractions).
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Random linear codes.
    Code {
        #[command(subcommand)]
        action: CodeAction,
    },
    /// One near-neighbor search run with recall against brute force.
    Nns(NnsArgs),
    /// The code sieve.
    Sieve(SieveArgs),
    /// Asymptotic cost tables and curves.
    Cost {
        #[command(subcommand)]
        what: CostWhat,
    },
    /// The sieving-ISD lower bound versus quantum Prange.
    IsdBound(IsdArgs),
}

#[derive(Subcommand)]
enum OracleQuery {
    /// C(n, k).
    Binom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Sphere size |S_w^n|.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
    },
    /// Cap size: weight-w vectors with overlap alpha against a fixed
    /// weight-cw center.
    Cap {
        #[arg(long)]
        n: usize,
        #[arg(long = "center-weight")]
        center_weight: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        alpha: usize,
    },
    /// Wedge size for weight-w vectors with mutual overlap wstar.
    Wedge {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        wstar: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        alpha: usize,
    },
    /// In-bucket solution-pair probability p.
    P {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        alpha: usize,
    },
    /// Residual filter probability p_beta.
    Pbeta {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        vprime: usize,
        #[arg(long)]
        beta: usize,
    },
    /// Residual wedge probability W.
    W {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        estar: usize,
        #[arg(long)]
        vprime: usize,
        #[arg(long)]
        beta: usize,
    },
    /// The dominant triple-overlap value e*.
    Estar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        alpha: usize,
    },
}

#[derive(Subcommand)]
enum CodeAction {
    /// Sample a random [n, k] code; rows as tagged hex.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct NnsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    w: usize,
    #[arg(long = "N")]
    list_size: u64,
    #[arg(long)]
    seed: u64,
    /// Polynomial slack standing in for the subexponential factors.
    #[arg(long)]
    slack: Option<u64>,
    /// Override the derived number of filter rounds.
    #[arg(long)]
    rounds: Option<u64>,
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    w: usize,
    #[arg(long = "N")]
    list_size: usize,
    #[arg(long)]
    seed: u64,
    /// Write the per-level trace records to this JSON file.
    #[arg(long)]
    trace: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum CostWhat {
    /// Hardest-instance exponents per algorithm.
    Table {
        #[arg(long, value_enum, default_value_t = AlgoArg::All)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Sweep curve as CSV.
    Curve {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Output path, or `-` for stdout.
        #[arg(long)]
        out: String,
    },
}

#[derive(Args)]
struct IsdArgs {
    /// Code rate(s) kappa = k/n; repeatable.
    #[arg(long = "kappa", required = true)]
    kappas: Vec<f64>,
}

/// Parses `argv` and runs the requested subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads.or_else(|| {
        std::env::var("CODESIEVE_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(t) = threads {
        if t == 0 {
            eprintln!("--threads must be positive");
            return EXIT_USAGE;
        }
        // ignore the error if a pool was already installed in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match dispatch(cli.command, cli.format, threads) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            EXIT_USAGE
        }
    }
}

fn ratio_strings(r: &ExactRatio) -> (String, f64) {
    let fraction = format!("{}/{}", r.numer(), r.denom());
    let approx = parse_big_f64(&r.numer().to_string()) / parse_big_f64(&r.denom().to_string());
    (fraction, approx)
}

fn parse_big_f64(s: &str) -> f64 {
    s.parse::<f64>().unwrap_or(f64::INFINITY)
}

fn dispatch(command: Command, format: Format, threads: Option<usize>) -> Result<i32, String> {
    match command {
        Command::Oracle { query } => run_oracle(query, format),
        Command::Code { action } => run_code(action, format),
        Command::Nns(args) => run_nns(args, format, threads),
        Command::Sieve(args) => run_sieve(args, format, threads),
        Command::Cost { what } => run_cost(what, format, threads),
        Command::IsdBound(args) => run_isd(args, format),
    }
}

fn emit_count(op: &str, args: serde_json::Value, value: &combinatorics::ExactInt, format: Format) {
    match format {
        Format::Text => println!("{value}"),
        Format::Json => println!(
            "{}",
            json!({"op": op, "args": args, "value": value.to_string()})
        ),
    }
}

fn emit_ratio(op: &str, args: serde_json::Value, value: &ExactRatio, format: Format) {
    let (fraction, approx) = ratio_strings(value);
    match format {
        Format::Text => println!("{fraction}"),
        Format::Json => println!(
            "{}",
            json!({
                "op": op,
                "args": args,
                "num": value.numer().to_string(),
                "den": value.denom().to_string(),
                "approx": approx,
            })
        ),
    }
}

fn run_oracle(query: OracleQuery, format: Format) -> Result<i32, String> {
    let fail = |e: combinatorics::CountError| e.to_string();
    match query {
        OracleQuery::Binom { n, k } => {
            emit_count("binom", json!({"n": n, "k": k}), &combinatorics::binomial(n, k), format);
        }
        OracleQuery::Sphere { n, w } => {
            let v = combinatorics::sphere_area(n, w).map_err(fail)?;
            emit_count("sphere", json!({"n": n, "w": w}), &v, format);
        }
        OracleQuery::Cap {
            n,
            center_weight,
            w,
            alpha,
        } => {
            let v = combinatorics::cap_area(n, center_weight, w, alpha).map_err(fail)?;
            emit_count(
                "cap",
                json!({"n": n, "center_weight": center_weight, "w": w, "alpha": alpha}),
                &v,
                format,
            );
        }
        OracleQuery::Wedge { n, w, wstar, v, alpha } => {
            let val = combinatorics::wedge_area(n, w, wstar, v, alpha).map_err(fail)?;
            emit_count(
                "wedge",
                json!({"n": n, "w": w, "wstar": wstar, "v": v, "alpha": alpha}),
                &val,
                format,
            );
        }
        OracleQuery::P { n, w, v, alpha } => {
            let val = combinatorics::bucket_pair_prob(n, w, v, alpha).map_err(fail)?;
            emit_ratio("p", json!({"n": n, "w": w, "v": v, "alpha": alpha}), &val, format);
        }
        OracleQuery::Pbeta { v, alpha, vprime, beta } => {
            let val = combinatorics::residual_filter_prob(v, alpha, vprime, beta).map_err(fail)?;
            emit_ratio(
                "pbeta",
                json!({"v": v, "alpha": alpha, "vprime": vprime, "beta": beta}),
                &val,
                format,
            );
        }
        OracleQuery::W { v, alpha, estar, vprime, beta } => {
            let val =
                combinatorics::residual_wedge_prob(v, alpha, estar, vprime, beta).map_err(fail)?;
            emit_ratio(
                "w",
                json!({"v": v, "alpha": alpha, "estar": estar, "vprime": vprime, "beta": beta}),
                &val,
                format,
            );
        }
        OracleQuery::Estar { n, w, v, alpha } => {
            let val = combinatorics::best_overlap_estar(n, w, v, alpha).map_err(fail)?;
            match format {
                Format::Text => println!("{val}"),
                Format::Json => println!(
                    "{}",
                    json!({"op": "estar", "args": {"n": n, "w": w, "v": v, "alpha": alpha}, "value": val})
                ),
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_code(action: CodeAction, format: Format) -> Result<i32, String> {
    match action {
        CodeAction::Sample { n, k, seed } => {
            let mut rng = Seed::new(seed).rng();
            let code = sample_random_code(n, k, &mut rng).map_err(|e| e.to_string())?;
            let generator: Vec<String> = code.generator().iter().map(|r| r.to_hex_tagged()).collect();
            let parity: Vec<String> = code.parity().iter().map(|r| r.to_hex_tagged()).collect();
            let doc = json!({
                "config": {"n": n, "k": k, "seed": seed},
                "generator": generator,
                "parity": parity,
            });
            match format {
                Format::Text | Format::Json => println!("{doc}"),
            }
            Ok(EXIT_OK)
        }
    }
}

/// Brute-force recall is only attempted up to this dimension.
const RECALL_ORACLE_MAX_DIM: usize = 48;

fn run_nns(args: NnsArgs, format: Format, threads: Option<usize>) -> Result<i32, String> {
    let slack = args.slack.unwrap_or(args.n as u64);
    let mut params =
        derive_nns_params(args.n, args.w, args.list_size, slack).map_err(|e| e.to_string())?;
    if let Some(rounds) = args.rounds {
        params.rounds = rounds;
    }
    let seed = Seed::new(args.seed);
    let mut rng = seed.split(u64::MAX).rng();
    let list: Vec<_> = (0..args.list_size)
        .map(|_| sample_sphere(args.n, args.w, &mut rng))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let outcome = nns_solve(&list, args.w, &params, seed).map_err(|e| e.to_string())?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let recall = if args.n <= RECALL_ORACLE_MAX_DIM {
        let truth = all_pairs_solutions(&list, args.w).map_err(|e| e.to_string())?;
        if truth.is_empty() {
            Some(1.0)
        } else {
            Some(outcome.pairs.len() as f64 / truth.len() as f64)
        }
    } else {
        None
    };
    let doc = json!({
        "config": {
            "n": args.n, "w": args.w, "N": args.list_size, "seed": args.seed,
            "slack": slack, "rounds": params.rounds,
            "threads": threads,
        },
        "params": params,
        "found_pairs": outcome.pairs.len(),
        "recall": recall,
        "meters": outcome.meters,
        "wall_time_ms": wall_ms,
    });
    match format {
        Format::Text | Format::Json => println!("{doc}"),
    }
    Ok(EXIT_OK)
}

fn run_sieve(args: SieveArgs, format: Format, threads: Option<usize>) -> Result<i32, String> {
    let seed = Seed::new(args.seed);
    let config = json!({
        "n": args.n, "k": args.k, "w": args.w, "N": args.list_size,
        "seed": args.seed, "threads": threads,
    });
    match solve_dp(args.n, args.k, args.w, args.list_size, seed) {
        Ok((_, words, trace)) => {
            if let Some(path) = &args.trace {
                write_trace(path, &trace.levels)?;
            }
            let doc = json!({
                "config": config,
                "output_size": words.len(),
                "words": words.iter().map(|w| w.to_hex_tagged()).collect::<Vec<_>>(),
                "warnings": trace.warnings,
                "levels": trace.levels,
            });
            match format {
                Format::Text | Format::Json => println!("{doc}"),
            }
            Ok(EXIT_OK)
        }
        Err(SieveError::Collapse { level, total, trace }) => {
            if let Some(path) = &args.trace {
                write_trace(path, &trace.levels)?;
            }
            let diag = json!({
                "error": "list collapse",
                "config": config,
                "level": level,
                "levels_total": total,
                "warnings": trace.warnings,
                "trace": trace.levels,
            });
            eprintln!("{diag}");
            Ok(EXIT_OUTCOME)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn write_trace(path: &std::path::Path, levels: &[crate::sieve::SieveLevelRecord]) -> Result<(), String> {
    let body = serde_json::to_string_pretty(levels).map_err(|e| e.to_string())?;
    std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn table_row_text(r: &OptimizationResult) -> String {
    let cell = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
    format!(
        "{:<14} {:>8.4} {:>9.6} {:>9.6} {:>9} {:>9} {:>9}",
        r.kind.label(),
        r.omega,
        r.report.time,
        r.report.mem_classical,
        cell(r.report.mem_quantum),
        cell(r.report.mem_qracm),
        cell(r.report.mem_qraqm),
    )
}

fn run_cost(what: CostWhat, format: Format, threads: Option<usize>) -> Result<i32, String> {
    match what {
        CostWhat::Table { algo, points, tol } => {
            if tol <= 0.0 {
                return Err("--tol must be positive".into());
            }
            let rows: Vec<OptimizationResult> = algo
                .kinds()
                .into_iter()
                .map(|kind| {
                    let curve = sweep_with_tol(kind, points, tol);
                    hardest_from_curve(&curve, points, tol)
                })
                .collect();
            let infeasible = rows.iter().any(|r| !r.report.time.is_finite());
            match format {
                Format::Text => {
                    println!(
                        "{:<14} {:>8} {:>9} {:>9} {:>9} {:>9} {:>9}",
                        "algorithm", "omega", "time", "M_C", "M_Q", "M_QRACM", "M_QRAQM"
                    );
                    for r in &rows {
                        println!("{}", table_row_text(r));
                    }
                }
                Format::Json => {
                    let doc = json!({
                        "config": {"points": points, "tol": tol, "threads": threads},
                        "rows": rows,
                    });
                    println!("{doc}");
                }
            }
            if infeasible {
                eprintln!("{}", json!({"error": "infeasible optimization point"}));
                return Ok(EXIT_OUTCOME);
            }
            Ok(EXIT_OK)
        }
        CostWhat::Curve { algo, points, tol, out } => {
            if tol <= 0.0 {
                return Err("--tol must be positive".into());
            }
            let kinds = algo.kinds();
            if kinds.len() != 1 {
                return Err("cost curve needs a single --algo".into());
            }
            if points < 2 {
                return Err("--points must be at least 2".into());
            }
            let curve = sweep_with_tol(kinds[0], points, tol);
            let csv = curve_to_csv(&curve);
            if out == "-" {
                print!("{csv}");
                std::io::stdout().flush().ok();
            } else {
                std::fs::write(&out, csv).map_err(|e| format!("cannot write {out}: {e}"))?;
            }
            if curve.points.iter().any(|p| !p.report.time.is_finite()) {
                eprintln!("{}", json!({"error": "infeasible sweep point"}));
                return Ok(EXIT_OUTCOME);
            }
            Ok(EXIT_OK)
        }
    }
}

fn run_isd(args: IsdArgs, format: Format) -> Result<i32, String> {
    for &kappa in &args.kappas {
        if !(0.0..1.0).contains(&kappa) || kappa == 0.0 {
            return Err(format!("kappa {kappa} must lie in (0, 1)"));
        }
    }
    let points = isd_claim_check(&args.kappas);
    match format {
        Format::Text => {
            println!(
                "{:>6} {:>9} {:>10} {:>10} {:>10} {:>10} {:>10}",
                "kappa", "omega", "prange", "min_bound", "gap", "nu_p*", "omega_p*"
            );
            for p in &points {
                println!(
                    "{:>6.3} {:>9.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                    p.kappa,
                    p.omega,
                    p.quantum_prange,
                    p.min_bound,
                    p.gap,
                    p.argmin_nu_p,
                    p.argmin_omega_p
                );
            }
        }
        Format::Json => println!("{}", json!({"points": points})),
    }
    Ok(EXIT_OK)
}
