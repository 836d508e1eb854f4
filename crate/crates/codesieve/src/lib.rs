//! Code sieving and near-neighbor search over Hamming spheres.
//!
//! The crate has two halves that share a common vocabulary of spheres,
//! caps and wedges in `F_2^n`:
//!
//! * a concrete, desk-scale half: exact counting ([`combinatorics`]),
//!   fixed-length binary words and samplers ([`hamming`]), random linear
//!   codes and code towers ([`codes`]), locality-sensitive filtering with
//!   random product codes ([`lsf`]), and the code sieve itself
//!   ([`sieve`]); everything here is checked against brute-force
//!   enumeration oracles;
//! * an asymptotic half: the exponent calculus for the classical,
//!   Grover and quantum-walk bucket-search cost models ([`costmodel`])
//!   and the numerical optimizer that minimizes those exponents, sweeps
//!   them over the relative weight, and evaluates the sieving-ISD lower
//!   bound ([`optimizer`]).
//!
//! See the `examples/` directory for one runnable program per
//! capability, and the `codesieve` binary for a thin command-line
//! front-end over the same functions.

pub mod cli;
pub mod codes;
pub mod combinatorics;
pub mod costmodel;
pub mod hamming;
pub mod lsf;
pub mod optimizer;
pub mod sieve;

pub use codes::{build_tower, puncture, sample_random_code, CodeTower, LinearCode};
pub use combinatorics::{
    best_overlap_estar, binomial, bucket_pair_prob, bucket_pair_prob_component, cap_area,
    enumerate_wedge, expected_pairs, min_list_size, pair_prob, residual_filter_prob,
    residual_wedge_prob, shared_center_prob, sphere_area, wedge_area,
};
pub use costmodel::{
    entropy, nns_exponent, quantum_prange_exponent, rate_binom, sievingisd_bound_exponent,
    varying_list_check, AlgorithmKind, ExponentReport, RateBundle, Rates,
};
pub use hamming::{sample_region, sample_sphere, Seed, Word};
pub use lsf::{
    bucket_all, derive_nns_params, find_solutions_bucket, find_valid_centers, nns_solve,
    sample_rpc, BucketTable, NnsOutcome, NnsParams, RandomProductCode, SolutionPair,
};
pub use optimizer::{hardest, isd_claim_check, optimize, sweep, OptimizationResult, SweepCurve};
pub use sieve::{sieve, solve_dp, SieveTrace};
