//! Locality-sensitive filtering with random product codes: bucketing,
//! per-bucket checking, and the repeated-rounds near-neighbor solver.
//!
//! An `(n, v, t)` random product code holds `t` independent block
//! codebooks over the sub-spheres `S_{v/t}^{n/t}`; a full center is the
//! concatenation of one codeword per block. Valid centers for a query
//! are enumerated block-wise over overlap compositions, so decoding time
//! is proportional to the output size plus composition overhead.

use crate::combinatorics::{self, CountError};
use crate::hamming::{sample_sphere, Seed, Word, WordError};
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LsfError {
    #[error("block count {t} must divide both n={n} and v={v}")]
    BlockMismatch { t: usize, n: usize, v: usize },
    #[error("code size {size} is not a perfect {t}-th power")]
    NotAPower { size: u64, t: usize },
    #[error("per-block size {per_block} exceeds the block sphere |S_{block_weight}^{block_len}|")]
    BlockTooLarge {
        per_block: u64,
        block_len: usize,
        block_weight: usize,
    },
    #[error("overlap alpha={alpha} exceeds min(v={v}, |x|={w})")]
    BadOverlap { alpha: usize, v: usize, w: usize },
    #[error("list members must share length {n} and weight {w}")]
    MixedList { n: usize, w: usize },
    #[error("no feasible (v, alpha) with a nonzero wedge")]
    NoFeasibleParams,
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Identifier of a product-code center: the mixed-radix index over the
/// per-block codeword positions (block 0 most significant).
pub type CenterId = u64;

/// A `(n, v, t)` random product code of `per_block^t` weight-`v` centers.
#[derive(Clone, Debug)]
pub struct RandomProductCode {
    n: usize,
    v: usize,
    t: usize,
    block_len: usize,
    block_weight: usize,
    blocks: Vec<Vec<Word>>,
}

impl RandomProductCode {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn block_weight(&self) -> usize {
        self.block_weight
    }

    pub fn per_block(&self) -> u64 {
        self.blocks[0].len() as u64
    }

    pub fn size(&self) -> u64 {
        self.per_block().pow(self.t as u32)
    }

    /// Assembles the full center word for a mixed-radix id.
    pub fn center(&self, id: CenterId) -> Word {
        let per = self.per_block();
        let mut rem = id;
        let mut parts = vec![0usize; self.t];
        for b in (0..self.t).rev() {
            parts[b] = (rem % per) as usize;
            rem /= per;
        }
        let mut acc = Word::zero(0).unwrap();
        for (b, &pos) in parts.iter().enumerate() {
            acc = acc.concat(&self.blocks[b][pos]).unwrap();
        }
        acc
    }

    /// All center ids in ascending order.
    pub fn center_ids(&self) -> impl Iterator<Item = CenterId> {
        0..self.size()
    }
}

/// Samples an `(n, v, t)`-RPC of the given size: `t` independent uniform
/// block codebooks of `size^(1/t)` distinct words each.
pub fn sample_rpc<R: Rng>(
    n: usize,
    v: usize,
    t: usize,
    size: u64,
    rng: &mut R,
) -> Result<RandomProductCode, LsfError> {
    if t == 0 || n % t != 0 || v % t != 0 {
        return Err(LsfError::BlockMismatch { t, n, v });
    }
    let per_block = integer_root(size, t).ok_or(LsfError::NotAPower { size, t })?;
    let block_len = n / t;
    let block_weight = v / t;
    let sphere = combinatorics::binomial(block_len, block_weight);
    if BigUint::from(per_block) > sphere {
        return Err(LsfError::BlockTooLarge {
            per_block,
            block_len,
            block_weight,
        });
    }
    let sphere_small = sphere.to_u64();
    let mut blocks = Vec::with_capacity(t);
    for _ in 0..t {
        let mut chosen: Vec<Word> = Vec::with_capacity(per_block as usize);
        if sphere_small.is_some_and(|s| per_block * 2 >= s) {
            // dense request: enumerate the block sphere and partial-shuffle
            let mut all = enumerate_block_sphere(block_len, block_weight);
            for i in 0..per_block as usize {
                let j = rng.gen_range(i..all.len());
                all.swap(i, j);
            }
            all.truncate(per_block as usize);
            chosen = all;
        } else {
            let mut seen = HashSet::new();
            while chosen.len() < per_block as usize {
                let w = sample_sphere(block_len, block_weight, rng)?;
                if seen.insert(w.clone()) {
                    chosen.push(w);
                }
            }
        }
        blocks.push(chosen);
    }
    Ok(RandomProductCode {
        n,
        v,
        t,
        block_len,
        block_weight,
        blocks,
    })
}

fn enumerate_block_sphere(len: usize, weight: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut support: Vec<usize> = (0..weight).collect();
    if weight == 0 {
        return vec![Word::zero(len).unwrap()];
    }
    loop {
        out.push(Word::from_support(len, &support).unwrap());
        // next combination in lexicographic order
        let mut i = weight;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if support[i] != i + len - weight {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        support[i] += 1;
        for j in i + 1..weight {
            support[j] = support[j - 1] + 1;
        }
    }
}

fn integer_root(size: u64, t: usize) -> Option<u64> {
    if t == 1 {
        return Some(size);
    }
    let guess = (size as f64).powf(1.0 / t as f64).round() as u64;
    for cand in guess.saturating_sub(2)..=guess + 2 {
        if cand.checked_pow(t as u32) == Some(size) {
            return Some(cand);
        }
    }
    None
}

/// Exactly the centers `c` of the code with `|x AND c| = alpha`,
/// enumerated by per-block overlap compositions with early pruning of
/// empty blocks. Ids are returned in ascending order.
pub fn find_valid_centers(
    rpc: &RandomProductCode,
    x: &Word,
    alpha: usize,
) -> Result<Vec<CenterId>, LsfError> {
    if x.len() != rpc.n {
        return Err(LsfError::Word(WordError::LengthMismatch(x.len(), rpc.n)));
    }
    if alpha > rpc.v.min(x.weight()) {
        return Err(LsfError::BadOverlap {
            alpha,
            v: rpc.v,
            w: x.weight(),
        });
    }
    // index the block codewords by their overlap with the query chunk
    let mut by_overlap: Vec<BTreeMap<usize, Vec<usize>>> = Vec::with_capacity(rpc.t);
    for b in 0..rpc.t {
        let chunk = x.slice(b * rpc.block_len, rpc.block_len)?;
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (pos, cw) in rpc.blocks[b].iter().enumerate() {
            map.entry(chunk.overlap(cw)?).or_default().push(pos);
        }
        by_overlap.push(map);
    }
    // residual bounds for pruning: what later blocks can still absorb
    let mut max_tail = vec![0usize; rpc.t + 1];
    let mut min_tail = vec![0usize; rpc.t + 1];
    for b in (0..rpc.t).rev() {
        let hi = by_overlap[b].keys().next_back().copied().unwrap_or(0);
        let lo = by_overlap[b].keys().next().copied().unwrap_or(0);
        max_tail[b] = max_tail[b + 1] + hi;
        min_tail[b] = min_tail[b + 1] + lo;
    }
    let per = rpc.per_block();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, CenterId)> = vec![(0, alpha, 0)];
    while let Some((b, remaining, prefix)) = stack.pop() {
        if b == rpc.t {
            if remaining == 0 {
                out.push(prefix);
            }
            continue;
        }
        // iterate keys in descending order so that the stack pops
        // ascending overlaps first and ids come out sorted
        for (&ov, positions) in by_overlap[b].iter().rev() {
            if ov > remaining || remaining - ov > max_tail[b + 1] {
                continue;
            }
            if remaining - ov < min_tail[b + 1] {
                continue;
            }
            for &pos in positions.iter().rev() {
                stack.push((b + 1, remaining - ov, prefix * per + pos as u64));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Buckets: center id -> indices of the list members whose overlap with
/// that center is exactly alpha.
#[derive(Clone, Debug, Default)]
pub struct BucketTable {
    buckets: BTreeMap<CenterId, Vec<usize>>,
    insertions: u64,
}

impl BucketTable {
    pub fn buckets(&self) -> &BTreeMap<CenterId, Vec<usize>> {
        &self.buckets
    }

    /// Total number of (vector, bucket) insertions.
    pub fn insertions(&self) -> u64 {
        self.insertions
    }

    pub fn load(&self, id: CenterId) -> usize {
        self.buckets.get(&id).map_or(0, |v| v.len())
    }
}

/// Runs the bucketing phase: every list member is inserted into each of
/// its valid centers' buckets.
pub fn bucket_all(
    list: &[Word],
    rpc: &RandomProductCode,
    alpha: usize,
) -> Result<BucketTable, LsfError> {
    let mut table = BucketTable::default();
    if list.is_empty() {
        return Ok(table);
    }
    let n = list[0].len();
    let w = list[0].weight();
    for x in list {
        if x.len() != n || x.weight() != w {
            return Err(LsfError::MixedList { n, w });
        }
    }
    for (i, x) in list.iter().enumerate() {
        for id in find_valid_centers(rpc, x, alpha)? {
            table.buckets.entry(id).or_default().push(i);
            table.insertions += 1;
        }
    }
    Ok(table)
}

/// An unordered solution pair of list indices (`i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SolutionPair {
    pub i: usize,
    pub j: usize,
}

impl SolutionPair {
    pub fn new(a: usize, b: usize) -> Self {
        SolutionPair {
            i: a.min(b),
            j: a.max(b),
        }
    }
}

/// All-pairs scan of one bucket: returns the pairs with `|x + y| = w`
/// (indices are positions within `bucket`) and the number of pair
/// comparisons performed.
pub fn find_solutions_bucket(bucket: &[Word], w: usize) -> (Vec<SolutionPair>, u64) {
    let mut pairs = Vec::new();
    let mut comparisons = 0u64;
    for a in 0..bucket.len() {
        for b in a + 1..bucket.len() {
            comparisons += 1;
            if bucket[a].add(&bucket[b]).map(|s| s.weight()) == Ok(w) {
                pairs.push(SolutionPair::new(a, b));
            }
        }
    }
    (pairs, comparisons)
}

/// Parameters of one NNS run, as derived by [`derive_nns_params`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NnsParams {
    /// Center weight of the filter code.
    pub v: usize,
    /// Bucketing overlap.
    pub alpha: usize,
    /// Number of product blocks.
    pub t: usize,
    /// Distinct codewords per block.
    pub per_block: u64,
    /// Total centers per round, `per_block^t`.
    pub code_size: u64,
    /// Independent filter rounds.
    pub rounds: u64,
    /// The polynomial slack standing in for the subexponential factors.
    pub slack: u64,
}

/// Cost meters accumulated by [`nns_solve`].
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct CostMeters {
    /// Valid-center enumerations: total (vector, bucket) insertions.
    pub center_enumerations: u64,
    /// Pair comparisons across all buckets and rounds.
    pub pair_comparisons: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NnsOutcome {
    pub pairs: Vec<SolutionPair>,
    pub meters: CostMeters,
    pub rounds_run: u64,
}

/// Largest divisor of both `n` and `v` that does not exceed
/// `round(sqrt(n))`; the block count for the RPC.
fn block_count(n: usize, v: usize) -> usize {
    let cap = (n as f64).sqrt().round() as usize;
    let g = n.gcd(&v.max(1));
    let mut best = 1;
    for d in 1..=g.min(cap.max(1)) {
        if n % d == 0 && (v == 0 || v % d == 0) {
            best = d;
        }
    }
    best
}

fn ratio_to_f64(r: &Ratio<BigUint>) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::INFINITY);
    let den = r.denom().to_f64().unwrap_or(f64::INFINITY);
    num / den
}

/// Chooses `(v, alpha)` minimizing the predicted concrete cost meter and
/// instantiates the subexponential factors as the explicit `slack`
/// multiplier: the code covers `slack * sphere / cap` centers (clipped
/// at the sphere size, rounded up to a perfect `t`-th power) and runs
/// `slack * cap / wedge` rounds.
pub fn derive_nns_params(
    n: usize,
    w: usize,
    list_size: u64,
    slack: u64,
) -> Result<NnsParams, LsfError> {
    if w == 0 || w % 2 != 0 || w > n {
        return Err(LsfError::Count(CountError::OddWeight { w }));
    }
    let mut best: Option<(Ratio<BigUint>, NnsParams)> = None;
    let big_n = BigUint::from(list_size);
    let big_slack = BigUint::from(slack.max(1));
    for v in 0..=n {
        for alpha in 0..=v.min(w) {
            if w - alpha > n - v {
                continue;
            }
            let wedge = combinatorics::wedge_area(n, w, w / 2, v, alpha)?;
            if wedge.is_zero() {
                continue;
            }
            let sphere_v = combinatorics::binomial(n, v);
            // centers valid for a fixed weight-w vector
            let cap = combinatorics::binomial(w, alpha) * combinatorics::binomial(n - w, v - alpha);
            if cap.is_zero() {
                continue;
            }
            let t = block_count(n, v);
            // target code size, clipped at the number of distinct centers
            let target = (&big_slack * &sphere_v).div_ceil(&cap).min(sphere_v.clone());
            let Some(target_u64) = target.to_u64() else {
                continue;
            };
            let per_block = nth_root_ceil(target_u64, t);
            let block_sphere = combinatorics::binomial(n / t, v / t);
            if BigUint::from(per_block) > block_sphere {
                continue;
            }
            let code_size = per_block.pow(t as u32);
            let rounds_big = (&big_slack * &cap).div_ceil(&wedge);
            let Some(rounds) = rounds_big.to_u64() else {
                continue;
            };
            // predicted meters per round, in exact arithmetic:
            //   insertions   N * E[VC] = N * code_size * p_bucket
            //   comparisons  code_size * E[B](E[B]+1) with E[B] = N * p_bucket
            let p_bucket = Ratio::new(
                combinatorics::binomial(v, alpha) * combinatorics::binomial(n - v, w - alpha),
                combinatorics::binomial(n, w),
            );
            let e_vc = Ratio::from_integer(BigUint::from(code_size)) * &p_bucket;
            let e_b = Ratio::from_integer(big_n.clone()) * &p_bucket;
            let one = Ratio::from_integer(BigUint::from(1u32));
            let per_round = Ratio::from_integer(big_n.clone()) * (&one + &e_vc)
                + Ratio::from_integer(BigUint::from(code_size)) * &e_b * (&e_b + &one);
            let cost = per_round * Ratio::from_integer(BigUint::from(rounds));
            let params = NnsParams {
                v,
                alpha,
                t,
                per_block,
                code_size,
                rounds,
                slack,
            };
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, params));
            }
        }
    }
    best.map(|(_, p)| p).ok_or(LsfError::NoFeasibleParams)
}

fn nth_root_ceil(x: u64, t: usize) -> u64 {
    if t == 1 || x <= 1 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / t as f64).floor() as u64;
    while r.saturating_pow(t as u32) < x {
        r += 1;
    }
    while r > 1 && (r - 1).saturating_pow(t as u32) >= x {
        r -= 1;
    }
    r
}

/// Predicted per-run cost meter for a parameter choice, used by the
/// optimality spot-checks.
pub fn predicted_cost(n: usize, w: usize, list_size: u64, params: &NnsParams) -> f64 {
    let p_bucket = Ratio::new(
        combinatorics::binomial(params.v, params.alpha)
            * combinatorics::binomial(n - params.v, w - params.alpha),
        combinatorics::binomial(n, w),
    );
    let p = ratio_to_f64(&p_bucket);
    let e_vc = params.code_size as f64 * p;
    let e_b = list_size as f64 * p;
    params.rounds as f64
        * (list_size as f64 * (1.0 + e_vc) + params.code_size as f64 * e_b * (e_b + 1.0))
}

/// Runs `params.rounds` independent RPC rounds of bucket-then-check on
/// `list` and returns the deduplicated pairs with the accumulated cost
/// meters. No false positives: every returned pair satisfies
/// `|x_i + x_j| = w` by the final check.
pub fn nns_solve(
    list: &[Word],
    w: usize,
    params: &NnsParams,
    seed: Seed,
) -> Result<NnsOutcome, LsfError> {
    let mut found: HashSet<SolutionPair> = HashSet::new();
    let mut meters = CostMeters::default();
    if list.is_empty() {
        return Ok(NnsOutcome {
            pairs: Vec::new(),
            meters,
            rounds_run: params.rounds,
        });
    }
    let n = list[0].len();
    for round in 0..params.rounds {
        let mut rng = seed.split(round).rng();
        let rpc = sample_rpc(n, params.v, params.t, params.code_size, &mut rng)?;
        let table = bucket_all(list, &rpc, params.alpha)?;
        meters.center_enumerations += table.insertions();
        for members in table.buckets().values() {
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    meters.pair_comparisons += 1;
                    let (i, j) = (members[a], members[b]);
                    if list[i].add(&list[j])?.weight() == w {
                        found.insert(SolutionPair::new(i, j));
                    }
                }
            }
        }
    }
    let mut pairs: Vec<SolutionPair> = found.into_iter().collect();
    pairs.sort_unstable();
    Ok(NnsOutcome {
        pairs,
        meters,
        rounds_run: params.rounds,
    })
}

/// Brute-force all-pairs oracle for `NNS`: every unordered pair with
/// `|x_i + x_j| = w`.
pub fn all_pairs_solutions(list: &[Word], w: usize) -> Result<Vec<SolutionPair>, LsfError> {
    let mut out = Vec::new();
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if list[i].add(&list[j])?.weight() == w {
                out.push(SolutionPair::new(i, j));
            }
        }
    }
    Ok(out)
}
