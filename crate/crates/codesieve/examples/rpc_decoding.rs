//! Random product codes: valid-center decoding against the
//! filter-by-definition oracle, and the mean valid-center count against
//! the exact prediction.
//!
//! Run with: `cargo run --release --example rpc_decoding`

use codesieve::combinatorics::binomial;
use codesieve::hamming::{sample_sphere, Seed};
use codesieve::lsf::{find_valid_centers, sample_rpc};
use num_rational::Ratio;
use num_traits::ToPrimitive;

fn main() {
    let (n, v, t) = (24usize, 8usize, 4usize);
    let size = 5u64.pow(t as u32);
    let mut rng = Seed::new(42).rng();
    let rpc = sample_rpc(n, v, t, size, &mut rng).unwrap();
    println!(
        "({n},{v},{t})-RPC of size {} ({} codewords per block over S_{}^{})",
        rpc.size(),
        rpc.per_block(),
        rpc.block_weight(),
        rpc.block_len()
    );

    let w = 10usize;
    let alpha = 3usize;
    // decode a few queries and replay the definition
    let mut total = 0usize;
    let queries = 500usize;
    for i in 0..queries {
        let x = sample_sphere(n, w, &mut rng).unwrap();
        let fast = find_valid_centers(&rpc, &x, alpha).unwrap();
        if i < 50 {
            let slow: Vec<u64> = rpc
                .center_ids()
                .filter(|&id| rpc.center(id).overlap(&x).unwrap() == alpha)
                .collect();
            assert_eq!(fast, slow, "decoder disagrees with the definition");
        }
        total += fast.len();
    }
    let p_bucket = Ratio::new(
        binomial(v, alpha) * binomial(n - v, w - alpha),
        binomial(n, w),
    );
    let p = p_bucket.numer().to_f64().unwrap() / p_bucket.denom().to_f64().unwrap();
    println!(
        "mean |VC_alpha(x)| over {queries} queries: {:.3} (prediction {:.3})",
        total as f64 / queries as f64,
        size as f64 * p
    );
}
