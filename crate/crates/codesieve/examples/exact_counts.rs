//! Exact sphere/cap/wedge counting, cross-checked against brute-force
//! enumeration, plus the derived sieve quantities.
//!
//! Run with: `cargo run --release --example exact_counts`

use codesieve::combinatorics::{
    best_overlap_estar, bucket_pair_prob, bucket_pair_prob_component, cap_area, enumerate_wedge,
    min_list_size, pair_prob, sphere_area, wedge_area,
};
use codesieve::hamming::Word;

fn main() {
    let n = 14;
    let w = 6;
    println!("|S_{w}^{n}|            = {}", sphere_area(n, w).unwrap());
    println!(
        "cap(cw=5, alpha=2)   = {}",
        cap_area(n, 5, w, 2).unwrap()
    );

    // the wedge formula against exhaustive enumeration of S_5^14
    let x = Word::from_support(n, &[0, 1, 2, 3, 4, 5]).unwrap();
    let y = Word::from_support(n, &[0, 1, 2, 6, 7, 8]).unwrap();
    let formula = wedge_area(n, w, 3, 5, 2).unwrap();
    let enumerated = enumerate_wedge(&x, &y, 5, 2).unwrap();
    println!("wedge(w*=3, v=5, alpha=2) = {formula} (enumeration: {enumerated})");
    assert_eq!(formula, enumerated);

    // solution-pair probabilities, unconditioned and inside a bucket
    println!("pair_prob({n},{w})     = {}", pair_prob(n, w).unwrap());
    let p = bucket_pair_prob(n, w, 5, 2).unwrap();
    println!("bucket p(v=5,alpha=2) = {p}");
    let e_star = best_overlap_estar(n, w, 5, 2).unwrap();
    let p_star = bucket_pair_prob_component(n, w, 5, 2, e_star).unwrap();
    println!("dominant e* = {e_star} with p(e*) = {p_star}");
    assert!(p_star <= p);

    // the minimal sieve list size for a desk-scale instance
    println!(
        "min sieve list size at (24, 8): {}",
        min_list_size(24, 8).unwrap()
    );
}
