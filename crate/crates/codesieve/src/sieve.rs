//! The code sieve: iterated near-neighbor search down a code tower,
//! turning a list of random weight-`w` vectors into weight-`w`
//! codewords.
//!
//! Each level keeps the pairwise sums that land in the next code of the
//! tower; the per-level record makes the heuristic list-size trajectory
//! inspectable.

use crate::codes::{build_tower, sample_random_code, CodeError, LinearCode};
use crate::combinatorics::{self, CountError};
use crate::hamming::{sample_sphere, Seed, Word, WordError};
use crate::lsf::{derive_nns_params, nns_solve, LsfError, NnsParams};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

/// One sieving iteration, as recorded in the trace.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SieveLevelRecord {
    /// Iteration index, starting at 1.
    pub level: usize,
    /// Size of the list fed to the NNS oracle.
    pub input_size: usize,
    /// Solution pairs returned by the NNS oracle.
    pub pairs_found: usize,
    /// Pairs whose sum passed the level's code constraint.
    pub survivors: usize,
    /// List size after dedup and truncation to the target.
    pub output_size: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SieveTrace {
    pub levels: Vec<SieveLevelRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("list collapsed to zero at level {level} of {total}")]
    Collapse {
        level: usize,
        total: usize,
        trace: SieveTrace,
    },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Lsf(#[from] LsfError),
    #[error(transparent)]
    Word(#[from] WordError),
}

fn truncate_uniform<R: Rng>(words: &mut Vec<Word>, target: usize, rng: &mut R) {
    if words.len() <= target {
        return;
    }
    for i in 0..target {
        let j = rng.gen_range(i..words.len());
        words.swap(i, j);
    }
    words.truncate(target);
}

/// Runs the sieve for `code`, aiming at `target` weight-`w` codewords.
///
/// Every returned word satisfies the weight and membership checks
/// exactly; recall is the only probabilistic quantity. A list that dies
/// before the last level is reported as [`SieveError::Collapse`]
/// carrying the trace gathered so far.
pub fn sieve(
    code: &LinearCode,
    w: usize,
    target: usize,
    seed: Seed,
) -> Result<(Vec<Word>, SieveTrace), SieveError> {
    let n = code.n();
    let k = code.k();
    let mut trace = SieveTrace::default();
    if target == 0 {
        return Ok((Vec::new(), trace));
    }
    match combinatorics::min_list_size(n, w) {
        Ok(min_n) => {
            if BigUint::from(target as u64) < min_n {
                trace.warnings.push(format!(
                    "list size {target} is below the sieve lower bound {min_n}; expect collapse"
                ));
            }
        }
        Err(e) => trace.warnings.push(format!("no pair-yield bound: {e}")),
    }
    // expected number of weight-w codewords is C(n,w) / 2^(n-k)
    let expected = combinatorics::binomial(n, w) >> (n - k);
    if BigUint::from(target as u64) > expected {
        trace.warnings.push(format!(
            "list size {target} exceeds the expected codeword count {expected}"
        ));
    }

    let mut rng = seed.split(0).rng();
    let tower = build_tower(code, &mut rng);
    let mut list: Vec<Word> = (0..target)
        .map(|_| sample_sphere(n, w, &mut rng))
        .collect::<Result<_, _>>()?;
    // (n, w, target) are level-invariant, so the NNS parameters are too
    let params: NnsParams = derive_nns_params(n, w, target as u64, n as u64)?;

    for level in 1..=tower.levels() {
        let input_size = list.len();
        let outcome = nns_solve(&list, w, &params, seed.split(level as u64))?;
        let pairs_found = outcome.pairs.len();
        let mut produced: Vec<Word> = Vec::new();
        for pair in &outcome.pairs {
            let sum = list[pair.i].add(&list[pair.j])?;
            if tower.contains_prefix(level, &sum)? {
                produced.push(sum);
            }
        }
        let survivors = produced.len();
        produced.sort_unstable();
        produced.dedup();
        let mut level_rng = seed.split(1_000_000 + level as u64).rng();
        truncate_uniform(&mut produced, target, &mut level_rng);
        trace.levels.push(SieveLevelRecord {
            level,
            input_size,
            pairs_found,
            survivors,
            output_size: produced.len(),
        });
        if produced.is_empty() && level < tower.levels() {
            return Err(SieveError::Collapse {
                level,
                total: tower.levels(),
                trace,
            });
        }
        list = produced;
    }

    debug_assert!(list
        .iter()
        .all(|x| x.weight() == w && code.contains(x).unwrap()));
    Ok((list, trace))
}

/// Samples a random `[n, k]` code and sieves it for `target` weight-`w`
/// codewords; returns the code alongside the list so callers can replay
/// the membership checks.
pub fn solve_dp(
    n: usize,
    k: usize,
    w: usize,
    target: usize,
    seed: Seed,
) -> Result<(LinearCode, Vec<Word>, SieveTrace), SieveError> {
    let mut rng = seed.split(u64::MAX).rng();
    let code = sample_random_code(n, k, &mut rng)?;
    let (list, trace) = sieve(&code, w, target, seed)?;
    Ok((code, list, trace))
}

/// Convenience: `min_list_size` clamped into `usize`.
pub fn recommended_list_size(n: usize, w: usize) -> Result<usize, CountError> {
    let min_n = combinatorics::min_list_size(n, w)?;
    Ok(min_n.to_usize().unwrap_or(usize::MAX))
}
