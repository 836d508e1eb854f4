//! One near-neighbor search run: derive filter parameters, solve, and
//! compare with the all-pairs oracle.
//!
//! Run with: `cargo run --release --example nns_search`

use codesieve::combinatorics::min_list_size;
use codesieve::hamming::{sample_sphere, Seed};
use codesieve::lsf::{all_pairs_solutions, derive_nns_params, nns_solve};
use num_traits::ToPrimitive;

fn main() {
    let (n, w) = (40usize, 12usize);
    let list_size = min_list_size(n, w).unwrap().to_u64().unwrap();
    let params = derive_nns_params(n, w, list_size, n as u64).unwrap();
    println!("derived params: {params:?}");

    let seed = Seed::new(2024);
    let mut rng = seed.split(u64::MAX).rng();
    let list: Vec<_> = (0..list_size)
        .map(|_| sample_sphere(n, w, &mut rng).unwrap())
        .collect();

    let outcome = nns_solve(&list, w, &params, seed).unwrap();
    let truth = all_pairs_solutions(&list, w).unwrap();
    println!(
        "found {} of {} solution pairs over {} rounds (recall {:.3})",
        outcome.pairs.len(),
        truth.len(),
        outcome.rounds_run,
        outcome.pairs.len() as f64 / truth.len() as f64
    );
    println!(
        "cost meters: {} center enumerations, {} pair comparisons (brute force would use {})",
        outcome.meters.center_enumerations,
        outcome.meters.pair_comparisons,
        list_size * (list_size - 1) / 2
    );
    // every reported pair really is a solution pair
    for p in &outcome.pairs {
        assert_eq!(list[p.i].add(&list[p.j]).unwrap().weight(), w);
    }
}
