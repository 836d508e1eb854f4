//! The sieving-ISD runtime lower bound against quantum Prange: the
//! minimized bound never beats Prange, and the minimizer sits at the
//! Prange corner (punctured length = code dimension, punctured weight 0).
//!
//! Run with: `cargo run --release --example isd_bound`

use codesieve::optimizer::isd_claim_check;

fn main() {
    println!(
        "{:>6} {:>9} {:>10} {:>10} {:>10} {:>9} {:>9}",
        "kappa", "omega", "prange", "min_bound", "gap", "nu_p*", "omega_p*"
    );
    for p in isd_claim_check(&[0.3, 0.5, 0.7]) {
        println!(
            "{:>6.2} {:>9.6} {:>10.6} {:>10.6} {:>10.6} {:>9.4} {:>9.5}",
            p.kappa, p.omega, p.quantum_prange, p.min_bound, p.gap, p.argmin_nu_p, p.argmin_omega_p
        );
        assert!(p.gap >= -1e-4, "the bound dipped below quantum Prange");
    }
    println!("\nthe minimized lower bound never beats quantum Prange, and the");
    println!("argmin hugs (nu_p, omega_p) = (kappa, 0), the Prange corner");
}
