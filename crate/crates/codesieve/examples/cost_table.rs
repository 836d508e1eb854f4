//! Hardest-instance time and memory exponents for the four bucket-search
//! cost models (the published-table reproduction).
//!
//! Run with: `cargo run --release --example cost_table -- [sweep-points]`
//! The default 50 sweep points take a couple of minutes on one core.

use codesieve::costmodel::AlgorithmKind;
use codesieve::optimizer::{hardest_from_curve, sweep_with_tol};

fn main() {
    let points: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let tol = 1e-4;
    println!(
        "{:<14} {:>8} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "algorithm", "omega", "time", "M_C", "M_Q", "M_QRACM", "M_QRAQM"
    );
    for kind in AlgorithmKind::NNS_KINDS {
        let curve = sweep_with_tol(kind, points, tol);
        let row = hardest_from_curve(&curve, points, tol);
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<14} {:>8.4} {:>9.6} {:>9.6} {:>9} {:>9} {:>9}",
            kind.label(),
            row.omega,
            row.report.time,
            row.report.mem_classical,
            cell(row.report.mem_quantum),
            cell(row.report.mem_qracm),
            cell(row.report.mem_qraqm),
        );
    }
}
