//! The code sieve end to end: find weight-8 codewords of a random
//! [24, 14] code and print the per-level list trajectory.
//!
//! Run with: `cargo run --release --example code_sieve`

use codesieve::combinatorics::min_list_size;
use codesieve::hamming::Seed;
use codesieve::sieve::solve_dp;
use num_traits::ToPrimitive;

fn main() {
    let (n, k, w) = (24usize, 14usize, 8usize);
    let target = min_list_size(n, w).unwrap().to_usize().unwrap();
    println!("sieving a random [{n},{k}] code for {target} weight-{w} codewords");
    let (code, words, trace) = solve_dp(n, k, w, target, Seed::new(7)).unwrap();

    println!("level  input  pairs  kept  output");
    for r in &trace.levels {
        println!(
            "{:>5} {:>6} {:>6} {:>5} {:>7}",
            r.level, r.input_size, r.pairs_found, r.survivors, r.output_size
        );
    }
    for warning in &trace.warnings {
        println!("warning: {warning}");
    }
    println!("returned {} codewords; verifying...", words.len());
    for x in &words {
        assert_eq!(x.weight(), w);
        assert!(code.contains(x).unwrap());
    }
    println!("all outputs are weight-{w} codewords");
    if let Some(first) = words.first() {
        println!("first: {}", first.to_hex_tagged());
    }
}
