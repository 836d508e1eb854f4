//! Sweep of the optimized time exponent over the relative weight for
//! one algorithm, emitted as CSV.
//!
//! Run with: `cargo run --release --example sweep_curve -- [algo] [points]`
//! where `algo` is one of classical, grover, qw-lsf, qw-lsf-sparse.

use codesieve::costmodel::AlgorithmKind;
use codesieve::optimizer::{curve_to_csv, sweep_with_tol};

fn main() {
    let mut args = std::env::args().skip(1);
    let kind = match args.next().as_deref() {
        None | Some("classical") => AlgorithmKind::Classical,
        Some("grover") => AlgorithmKind::Grover,
        Some("qw-lsf") => AlgorithmKind::QwLsf,
        Some("qw-lsf-sparse") => AlgorithmKind::QwLsfSparse,
        Some(other) => {
            eprintln!("unknown algorithm {other}");
            std::process::exit(1);
        }
    };
    let points: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let curve = sweep_with_tol(kind, points, 1e-4);
    print!("{}", curve_to_csv(&curve));
}
