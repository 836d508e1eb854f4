//! Exact counting and probability formulas over Hamming spheres, caps
//! and wedges.
//!
//! Everything here is arbitrary-precision and exact: counts are
//! [`BigUint`], probabilities are reduced [`Ratio<BigUint>`] in `[0, 1]`.
//! There are no floating-point fast paths; rate-level approximations
//! live in [`crate::costmodel`].
//!
//! Out-of-range binomials evaluate to 0 rather than erroring, so the
//! wedge sum can skip impossible terms the way the closed form does.

use crate::hamming::Word;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact non-negative count.
pub type ExactInt = BigUint;
/// Exact probability (reduced, in `[0, 1]` whenever it represents one).
pub type ExactRatio = Ratio<BigUint>;

/// Hard cap on the dimension accepted by the enumeration oracles.
pub const ENUMERATION_MAX_DIM: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("weight {w} exceeds dimension {n}")]
    WeightExceedsDimension { w: usize, n: usize },
    #[error("weight {w} must be even")]
    OddWeight { w: usize },
    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),
    #[error("empty region: {0}")]
    EmptyRegion(String),
    #[error("empty overlap range for e")]
    EmptyOverlapRange,
    #[error("enumeration dimension {n} exceeds the guard of {ENUMERATION_MAX_DIM}")]
    EnumerationGuard { n: usize },
}

/// `C(n, k)`, with the convention that `k > n` gives 0.
pub fn binomial(n: usize, k: usize) -> ExactInt {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `|S_w^n| = C(n, w)`.
pub fn sphere_area(n: usize, w: usize) -> Result<ExactInt, CountError> {
    if w > n {
        return Err(CountError::WeightExceedsDimension { w, n });
    }
    Ok(binomial(n, w))
}

/// Surface area of the spherical cap: the number of weight-`vec_weight`
/// vectors with overlap exactly `alpha` against a fixed center of weight
/// `center_weight`, i.e. `C(cw, alpha) * C(n - cw, vw - alpha)`.
pub fn cap_area(
    n: usize,
    center_weight: usize,
    vec_weight: usize,
    alpha: usize,
) -> Result<ExactInt, CountError> {
    if center_weight > n {
        return Err(CountError::WeightExceedsDimension {
            w: center_weight,
            n,
        });
    }
    if vec_weight > n {
        return Err(CountError::WeightExceedsDimension { w: vec_weight, n });
    }
    if alpha > center_weight.min(vec_weight) {
        return Err(CountError::Inconsistent(format!(
            "overlap {alpha} exceeds min(center weight {center_weight}, vector weight {vec_weight})"
        )));
    }
    Ok(binomial(center_weight, alpha) * binomial(n - center_weight, vec_weight - alpha))
}

/// Surface area of the spherical wedge for `x, y` of weight `w` with
/// `|x AND y| = w_star`: the number of weight-`v` centers having overlap
/// exactly `alpha` with both.
pub fn wedge_area(
    n: usize,
    w: usize,
    w_star: usize,
    v: usize,
    alpha: usize,
) -> Result<ExactInt, CountError> {
    if w > n {
        return Err(CountError::WeightExceedsDimension { w, n });
    }
    if v > n {
        return Err(CountError::WeightExceedsDimension { w: v, n });
    }
    if w_star > w {
        return Err(CountError::Inconsistent(format!(
            "overlap w*={w_star} exceeds weight w={w}"
        )));
    }
    if 2 * w - w_star > n {
        // |x OR y| = 2w - w* cannot exceed the dimension
        return Err(CountError::Inconsistent(format!(
            "no pair in S_{w}^{n} has overlap {w_star}"
        )));
    }
    if alpha > v || alpha > w {
        return Err(CountError::Inconsistent(format!(
            "overlap alpha={alpha} exceeds min(v={v}, w={w})"
        )));
    }
    let e_lo = (2 * alpha).saturating_sub(v);
    let e_hi = alpha.min(w_star);
    let mut total = BigUint::zero();
    for e in e_lo..=e_hi {
        let tail = binomial(w - w_star, alpha - e);
        total +=
            binomial(w_star, e) * &tail * &tail * binomial(n + w_star - 2 * w, v + e - 2 * alpha);
    }
    Ok(total)
}

fn low_mask(x: &Word) -> u32 {
    let mut m = 0u32;
    for i in x.support() {
        m |= 1 << i;
    }
    m
}

/// Brute-force oracle for [`wedge_area`]: counts all `c` with `|c| = v`
/// and `|x AND c| = |y AND c| = alpha` by exhausting `S_v^n`.
pub fn enumerate_wedge(
    x: &Word,
    y: &Word,
    v: usize,
    alpha: usize,
) -> Result<ExactInt, CountError> {
    let n = x.len();
    if y.len() != n {
        return Err(CountError::Inconsistent(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.weight() != y.weight() {
        return Err(CountError::Inconsistent(format!(
            "|x|={} differs from |y|={}",
            x.weight(),
            y.weight()
        )));
    }
    if n > ENUMERATION_MAX_DIM {
        return Err(CountError::EnumerationGuard { n });
    }
    if v > n {
        return Err(CountError::WeightExceedsDimension { w: v, n });
    }
    let xm = low_mask(x);
    let ym = low_mask(y);
    let mut count: u64 = 0;
    for_each_mask_of_weight(n, v, |c| {
        if (xm & c).count_ones() as usize == alpha && (ym & c).count_ones() as usize == alpha {
            count += 1;
        }
    });
    Ok(BigUint::from(count))
}

/// Visits every `n`-bit mask of popcount `w` (Gosper's hack).
pub(crate) fn for_each_mask_of_weight(n: usize, w: usize, mut visit: impl FnMut(u32)) {
    assert!(n <= 31 && w <= n);
    if w == 0 {
        visit(0);
        return;
    }
    let limit = 1u32 << n;
    let mut c = (1u32 << w) - 1;
    while c < limit {
        visit(c);
        let lsb = c & c.wrapping_neg();
        let ripple = c + lsb;
        if ripple >= limit && ripple != 0 {
            break;
        }
        c = ripple | (((c ^ ripple) >> 2) / lsb);
        if c >= limit {
            break;
        }
    }
}

/// Probability that two independent uniform draws from `S_w^n` sum to
/// weight `w`: `C(w, w/2) C(n-w, w/2) / C(n, w)`.
pub fn pair_prob(n: usize, w: usize) -> Result<ExactRatio, CountError> {
    if w % 2 != 0 {
        return Err(CountError::OddWeight { w });
    }
    if w == 0 || w > n {
        return Err(CountError::WeightExceedsDimension { w, n });
    }
    let num = binomial(w, w / 2) * binomial(n - w, w / 2);
    Ok(Ratio::new(num, binomial(n, w)))
}

/// Expected number of ordered solution pairs among `N` uniform draws.
pub fn expected_pairs(list_size: &ExactInt, n: usize, w: usize) -> Result<ExactRatio, CountError> {
    Ok(pair_prob(n, w)? * Ratio::from_integer(list_size * list_size))
}

/// Minimal sieve list size `ceil(4 / pair_prob)`, the lower bound under
/// which the expected per-iteration yield drops below the list size.
pub fn min_list_size(n: usize, w: usize) -> Result<ExactInt, CountError> {
    let p = pair_prob(n, w)?;
    if p.numer().is_zero() {
        return Err(CountError::EmptyRegion(format!(
            "no solution pairs exist on S_{w}^{n}"
        )));
    }
    let four = BigUint::from(4u32);
    Ok((four * p.denom()).div_ceil(p.numer()))
}

fn bucket_pair_prefactor(
    n: usize,
    w: usize,
    v: usize,
    alpha: usize,
) -> Result<ExactRatio, CountError> {
    if w % 2 != 0 {
        return Err(CountError::OddWeight { w });
    }
    if w == 0 || w > n {
        return Err(CountError::WeightExceedsDimension { w, n });
    }
    if v > n {
        return Err(CountError::WeightExceedsDimension { w: v, n });
    }
    if alpha > v.min(w) {
        return Err(CountError::Inconsistent(format!(
            "overlap alpha={alpha} exceeds min(v={v}, w={w})"
        )));
    }
    let den = binomial(v, alpha)
        * binomial(n - v, w - alpha)
        * binomial(w, alpha)
        * binomial(n - w, v - alpha);
    if den.is_zero() {
        return Err(CountError::EmptyRegion(format!(
            "no weight-{w} vector has overlap {alpha} with a weight-{v} center in dimension {n}"
        )));
    }
    let num = binomial(w, w / 2) * binomial(n - w, w / 2);
    Ok(Ratio::new(num, den))
}

/// Single-`e` term of the in-bucket pair probability: the probability
/// that an ordered uniform pair from the bucket's region is a solution
/// pair with `|x AND y AND c| = e`.
pub fn bucket_pair_prob_component(
    n: usize,
    w: usize,
    v: usize,
    alpha: usize,
    e: usize,
) -> Result<ExactRatio, CountError> {
    let pre = bucket_pair_prefactor(n, w, v, alpha)?;
    let e_lo = (2 * alpha).saturating_sub(v);
    let e_hi = alpha.min(w / 2);
    if e < e_lo || e > e_hi || pre.numer().is_zero() {
        // zero prefactor also means no solution pair fits in S_w^n
        return Ok(Ratio::from_integer(BigUint::zero()));
    }
    let tail = binomial(w / 2, alpha - e);
    let term = binomial(w / 2, e) * &tail * &tail * binomial(n - 3 * w / 2, v + e - 2 * alpha);
    Ok(pre * Ratio::from_integer(term))
}

/// Probability `p` that an ordered pair of independent uniform draws
/// from the region `{x in S_w^n : |x AND c| = alpha}` (for a weight-`v`
/// center `c`, draws taken with replacement) is a solution pair.
pub fn bucket_pair_prob(
    n: usize,
    w: usize,
    v: usize,
    alpha: usize,
) -> Result<ExactRatio, CountError> {
    let pre = bucket_pair_prefactor(n, w, v, alpha)?;
    if pre.numer().is_zero() {
        // no solution pair fits in S_w^n at all
        return Ok(pre);
    }
    let wedge = wedge_area(n, w, w / 2, v, alpha)?;
    Ok(pre * Ratio::from_integer(wedge))
}

/// The dominant in-bucket triple-overlap value `e*`: the argmax of
/// [`bucket_pair_prob_component`] over the admissible range, ties broken
/// toward the smallest `e`.
pub fn best_overlap_estar(
    n: usize,
    w: usize,
    v: usize,
    alpha: usize,
) -> Result<usize, CountError> {
    bucket_pair_prefactor(n, w, v, alpha)?;
    let e_lo = (2 * alpha).saturating_sub(v);
    let e_hi = alpha.min(w / 2);
    if e_hi < e_lo {
        return Err(CountError::EmptyOverlapRange);
    }
    let mut best_e = e_lo;
    let mut best = bucket_pair_prob_component(n, w, v, alpha, e_lo)?;
    for e in (e_lo + 1)..=e_hi {
        let cand = bucket_pair_prob_component(n, w, v, alpha, e)?;
        if cand > best {
            best = cand;
            best_e = e;
        }
    }
    Ok(best_e)
}

/// Probability that a uniform weight-`v_prime` center in `F_2^v` has
/// overlap exactly `beta` with a fixed weight-`alpha` vector:
/// `C(alpha, beta) C(v - alpha, v' - beta) / C(v, v')`.
pub fn residual_filter_prob(
    v: usize,
    alpha: usize,
    v_prime: usize,
    beta: usize,
) -> Result<ExactRatio, CountError> {
    if alpha > v {
        return Err(CountError::WeightExceedsDimension { w: alpha, n: v });
    }
    if v_prime > v {
        return Err(CountError::EmptyRegion(format!(
            "empty sphere: S_{v_prime}^{v}"
        )));
    }
    if beta > alpha.min(v_prime) {
        return Err(CountError::Inconsistent(format!(
            "overlap beta={beta} exceeds min(alpha={alpha}, v'={v_prime})"
        )));
    }
    let num = binomial(alpha, beta) * binomial(v - alpha, v_prime - beta);
    Ok(Ratio::new(num, binomial(v, v_prime)))
}

/// Probability that a uniform weight-`v_prime` center in `F_2^v` has
/// overlap `beta` with both members of a weight-`alpha` pair whose own
/// overlap is `e_star`: `wedge / C(v, v')`.
pub fn residual_wedge_prob(
    v: usize,
    alpha: usize,
    e_star: usize,
    v_prime: usize,
    beta: usize,
) -> Result<ExactRatio, CountError> {
    if v_prime > v {
        return Err(CountError::EmptyRegion(format!(
            "empty sphere: S_{v_prime}^{v}"
        )));
    }
    let wedge = wedge_area(v, alpha, e_star, v_prime, beta)?;
    Ok(Ratio::new(wedge, binomial(v, v_prime)))
}

/// Probability that at least one of `code_size` independently placed
/// centers captures a fixed pair whose per-center capture probability is
/// `w_prob`: `1 - (1 - W)^{|C_f'|}`.
pub fn shared_center_prob(
    code_size: u64,
    w_prob: &ExactRatio,
) -> Result<ExactRatio, CountError> {
    let one = Ratio::from_integer(BigUint::one());
    if w_prob > &one {
        return Err(CountError::Inconsistent(format!(
            "W = {w_prob} exceeds 1"
        )));
    }
    let mut base = &one - w_prob;
    let mut acc = one.clone();
    let mut k = code_size;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    Ok(one - acc)
}

/// The exponent-space surrogate for [`shared_center_prob`]:
/// `min(1, code_size * W)`.
pub fn shared_center_prob_linear(
    code_size: u64,
    w_prob: &ExactRatio,
) -> Result<ExactRatio, CountError> {
    let one = Ratio::from_integer(BigUint::one());
    if w_prob > &one {
        return Err(CountError::Inconsistent(format!(
            "W = {w_prob} exceeds 1"
        )));
    }
    let linear = w_prob * Ratio::from_integer(BigUint::from(code_size));
    Ok(linear.min(one))
}
