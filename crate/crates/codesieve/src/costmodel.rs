//! Asymptotic exponent calculus for the NNS cost models and the
//! sieving-ISD lower bound.
//!
//! Every quantity is a coefficient of `n` in `log2`: a set of size
//! `2^(c n + o(n))` is represented by the rate `c`. Infeasible rate
//! combinations surface as sentinels ordered above every feasible
//! exponent (`f64::INFINITY` for times, `f64::NEG_INFINITY` for
//! log-probabilities), so the optimizer can treat constraints uniformly.

use serde::{Deserialize, Serialize};

/// Sentinel for an infeasible time exponent.
pub const INFEASIBLE: f64 = f64::INFINITY;

/// Binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)`, with
/// `h(0) = h(1) = 0`. Inputs a hair outside `[0, 1]` from floating-point
/// noise are clamped; anything further out panics.
pub fn entropy(x: f64) -> f64 {
    assert!(
        (-1e-9..=1.0 + 1e-9).contains(&x),
        "entropy argument {x} outside [0, 1]"
    );
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Rate of `C(a n, b n)`: `a h(b/a)`, with 0 at `a = b = 0` and
/// `NEG_INFINITY` when `b` falls outside `[0, a]`.
pub fn rate_binom(a: f64, b: f64) -> f64 {
    if b < -1e-12 || b > a + 1e-12 {
        return f64::NEG_INFINITY;
    }
    if a <= 1e-15 {
        return 0.0;
    }
    a * entropy((b / a).clamp(0.0, 1.0))
}

/// The asymptotic parameter vector; all fields are fractions of `n`
/// except `sigma`, which is `(log2 s)/n` for the walk's vertex size `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// Relative weight of the list vectors, `w/n`.
    pub omega: f64,
    /// Relative weight of the first-layer filter centers, `v/n`.
    pub nu: f64,
    /// First-layer bucketing overlap, `alpha/n`.
    pub alpha_bar: f64,
    /// Relative weight of the second-layer centers, `v'/n`.
    pub nu_prime: f64,
    /// Second-layer bucketing overlap, `beta/n`.
    pub beta_hat: f64,
    /// Walk vertex-size rate, `(log2 s)/n`.
    pub sigma: f64,
}

impl Rates {
    /// A first-layer-only point (the quantum-walk fields zeroed).
    pub fn first_layer(omega: f64, nu: f64, alpha_bar: f64) -> Self {
        Rates {
            omega,
            nu,
            alpha_bar,
            nu_prime: 0.0,
            beta_hat: 0.0,
            sigma: 0.0,
        }
    }
}

/// The named rates shared by all cost formulas.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateBundle {
    /// `h(omega)`: the list sphere.
    pub sphere: f64,
    /// `h(nu)`: the center sphere.
    pub centers_sphere: f64,
    /// Cap rate: centers valid for a fixed weight-`omega` word.
    pub cap: f64,
    /// Log-probability that a word lands in a fixed center's bucket.
    pub bucket_membership: f64,
    /// Wedge rate, maximized over the triple-overlap fraction.
    pub wedge: f64,
    /// The maximizing triple-overlap fraction `epsilon*`.
    pub epsilon_star: f64,
    /// Log-probability `rho_p` that an in-bucket pair is a solution.
    pub pair: f64,
    /// Second-layer filter log-probability `pi_beta`.
    pub residual_filter: f64,
    /// Second-layer wedge log-probability `rho_W`.
    pub residual_wedge: f64,
    /// List-size rate `l(omega)` (the minimal sieve list).
    pub list: f64,
    /// Filter-code size rate `c_f`.
    pub centers_count: f64,
    /// Repetition rate `rho_R`.
    pub repetitions: f64,
    /// Expected bucket-size rate `b`, clipped at 0.
    pub bucket_size: f64,
}

/// Maximizes the wedge-shaped concave sum
/// `g(e) = rate_binom(a1, e) + 2 rate_binom(a2, c - e) + rate_binom(a3, d + e)`
/// over `[lo, hi]`, where the bracket already keeps every binomial
/// argument in range. `g` is concave there, so its derivative is
/// strictly decreasing and a sign bisection finds the maximizer.
fn maximize_wedge_form(
    a1: f64,
    a2: f64,
    c: f64,
    a3: f64,
    d: f64,
    lo: f64,
    hi: f64,
) -> (f64, f64) {
    let g = |e: f64| rate_binom(a1, e) + 2.0 * rate_binom(a2, c - e) + rate_binom(a3, d + e);
    let width = hi - lo;
    if width < 1e-12 {
        return (lo, g(lo));
    }
    // the derivative is log((a1-e)(c-e)^2(a3-d-e)) - log(e(a2-c+e)^2(d+e)),
    // so only the product comparison is needed for its sign
    let rising = |e: f64| {
        let up = (c - e) * (c - e) * (a1 - e) * (a3 - d - e);
        let down = (a2 - c + e) * (a2 - c + e) * e * (d + e);
        up > down
    };
    let margin = width * 1e-9;
    let mut a = lo + margin;
    let mut b = hi - margin;
    if !rising(a) {
        return (lo, g(lo).max(g(a)));
    }
    if rising(b) {
        return (hi, g(hi).max(g(b)));
    }
    for _ in 0..45 {
        let mid = 0.5 * (a + b);
        if rising(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}

/// First-layer rates: everything that depends only on
/// `(omega, nu, alpha_bar)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FirstLayer {
    pub cap: f64,
    pub bucket_membership: f64,
    pub wedge: f64,
    pub epsilon_star: f64,
    pub pair: f64,
    pub list: f64,
    pub centers_count: f64,
    pub repetitions: f64,
    pub bucket_size: f64,
}

pub(crate) fn first_layer(omega: f64, nu: f64, alpha_bar: f64) -> Option<FirstLayer> {
    if !(0.0..=0.5).contains(&omega) || !(0.0..=1.0).contains(&nu) {
        return None;
    }
    if alpha_bar < 0.0 || alpha_bar > nu.min(omega) + 1e-12 {
        return None;
    }
    let alpha_bar = alpha_bar.min(nu.min(omega));
    let cap = rate_binom(omega, alpha_bar) + rate_binom(1.0 - omega, nu - alpha_bar);
    let bucket_membership =
        rate_binom(nu, alpha_bar) + rate_binom(1.0 - nu, omega - alpha_bar) - entropy(omega);
    if !cap.is_finite() || !bucket_membership.is_finite() {
        return None;
    }
    // admissible range for the triple-overlap fraction: every binomial
    // argument of the wedge term must stay in range
    let free = 1.0 - 1.5 * omega;
    if free < -1e-12 {
        return None;
    }
    let e_lo = (2.0 * alpha_bar - nu)
        .max(alpha_bar - 0.5 * omega)
        .max(0.0);
    let e_hi = alpha_bar
        .min(0.5 * omega)
        .min(2.0 * alpha_bar - nu + free.max(0.0));
    if e_hi < e_lo - 1e-12 {
        return None;
    }
    let e_hi = e_hi.max(e_lo);
    let (epsilon_star, wedge) = maximize_wedge_form(
        0.5 * omega,
        0.5 * omega,
        alpha_bar,
        free.max(0.0),
        nu - 2.0 * alpha_bar,
        e_lo,
        e_hi,
    );
    if !wedge.is_finite() {
        return None;
    }
    let pair = rate_binom(omega, 0.5 * omega) + rate_binom(1.0 - omega, 0.5 * omega)
        - (rate_binom(nu, alpha_bar)
            + rate_binom(1.0 - nu, omega - alpha_bar)
            + rate_binom(omega, alpha_bar)
            + rate_binom(1.0 - omega, nu - alpha_bar))
        + wedge;
    if !pair.is_finite() {
        return None;
    }
    let list = list_rate(omega);
    let centers_count = entropy(nu) - cap;
    let repetitions = cap - wedge;
    let bucket_size = (list + bucket_membership).max(0.0);
    Some(FirstLayer {
        cap,
        bucket_membership,
        wedge,
        epsilon_star,
        pair,
        list,
        centers_count,
        repetitions,
        bucket_size,
    })
}

/// Minimal sieve list-size rate `l(omega)`: the rate of
/// `C(n, w) / (C(w, w/2) C(n-w, w/2))`, clipped at 0.
pub fn list_rate(omega: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let raw = entropy(omega)
        - omega
        - (1.0 - omega) * entropy((0.5 * omega / (1.0 - omega)).min(1.0));
    raw.max(0.0)
}

/// Evaluates the full rate bundle at `r`; `None` when any rate is
/// infeasible.
pub fn exponents(r: &Rates) -> Option<RateBundle> {
    let fl = first_layer(r.omega, r.nu, r.alpha_bar)?;
    let (residual_filter, residual_wedge) = second_layer(r, &fl)?;
    Some(RateBundle {
        sphere: entropy(r.omega),
        centers_sphere: entropy(r.nu),
        cap: fl.cap,
        bucket_membership: fl.bucket_membership,
        wedge: fl.wedge,
        epsilon_star: fl.epsilon_star,
        pair: fl.pair,
        residual_filter,
        residual_wedge,
        list: fl.list,
        centers_count: fl.centers_count,
        repetitions: fl.repetitions,
        bucket_size: fl.bucket_size,
    })
}

/// Second-layer rates `(pi_beta, rho_W)` for the residual filter.
pub(crate) fn second_layer(r: &Rates, fl: &FirstLayer) -> Option<(f64, f64)> {
    let (nu, alpha, nup, beta) = (r.nu, r.alpha_bar, r.nu_prime, r.beta_hat);
    if nup < -1e-12 || nup > nu + 1e-12 || beta < -1e-12 || beta > alpha.min(nup) + 1e-12 {
        return None;
    }
    let nup = nup.clamp(0.0, nu);
    let beta = beta.clamp(0.0, alpha.min(nup));
    let pi_beta =
        rate_binom(alpha, beta) + rate_binom(nu - alpha, nup - beta) - rate_binom(nu, nup);
    if !pi_beta.is_finite() {
        return None;
    }
    let estar = fl.epsilon_star;
    let free = nu - 2.0 * alpha + estar;
    let h_lo = (2.0 * beta - nup).max(beta - (alpha - estar)).max(0.0);
    let h_hi = beta.min(estar).min(2.0 * beta - nup + free.max(0.0));
    if h_hi < h_lo - 1e-12 {
        return None;
    }
    let h_hi = h_hi.max(h_lo);
    let (_, wmax) = maximize_wedge_form(
        estar,
        alpha - estar,
        beta,
        free.max(0.0),
        nup - 2.0 * beta,
        h_lo,
        h_hi,
    );
    if !wmax.is_finite() {
        return None;
    }
    let rho_w = wmax - rate_binom(nu, nup);
    Some((pi_beta, rho_w))
}

/// The cost models being compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgorithmKind {
    /// All-pairs checking inside each bucket.
    Classical,
    /// Grover search over the bucket's pair space.
    Grover,
    /// Quantum walk with a second filtering layer, full second-layer
    /// code (no false negatives in the walk data).
    QwLsf,
    /// Quantum walk with a sparsified second-layer code.
    QwLsfSparse,
    /// Prange's algorithm under amplitude amplification.
    QuantumPrange,
    /// The sieving-ISD runtime lower bound.
    SievingIsdBound,
}

impl AlgorithmKind {
    pub const NNS_KINDS: [AlgorithmKind; 4] = [
        AlgorithmKind::Classical,
        AlgorithmKind::Grover,
        AlgorithmKind::QwLsf,
        AlgorithmKind::QwLsfSparse,
    ];

    pub fn uses_second_layer(&self) -> bool {
        matches!(self, AlgorithmKind::QwLsf | AlgorithmKind::QwLsfSparse)
    }

    pub fn label(&self) -> &'static str {
        match self {
            AlgorithmKind::Classical => "classical",
            AlgorithmKind::Grover => "grover",
            AlgorithmKind::QwLsf => "qw-lsf",
            AlgorithmKind::QwLsfSparse => "qw-lsf-sparse",
            AlgorithmKind::QuantumPrange => "quantum-prange",
            AlgorithmKind::SievingIsdBound => "sieving-isd-bound",
        }
    }
}

/// Time and memory exponents of one algorithm at one rate point; memory
/// models the algorithm does not use are `None`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExponentReport {
    pub time: f64,
    pub mem_classical: f64,
    pub mem_quantum: Option<f64>,
    pub mem_qracm: Option<f64>,
    pub mem_qraqm: Option<f64>,
}

/// Time and memory exponents of one NNS algorithm at the rate point `r`,
/// with the list size fixed at the minimal sieve list rate.
///
/// The overall time is `rho_R + max(l, c_f + tau)` where `tau` is the
/// per-bucket search cost of the chosen kind; expected counts below one
/// are clipped to one (rates clipped at 0) throughout.
pub fn nns_exponent(kind: AlgorithmKind, r: &Rates) -> Option<ExponentReport> {
    let fl = first_layer(r.omega, r.nu, r.alpha_bar)?;
    nns_exponent_with(kind, r, &fl)
}

/// [`nns_exponent`] against an already-computed first layer, so grid
/// loops over the second-layer rates do not repeat its inner
/// maximization.
pub(crate) fn nns_exponent_with(
    kind: AlgorithmKind,
    r: &Rates,
    fl: &FirstLayer,
) -> Option<ExponentReport> {
    let b = fl.bucket_size;
    let rho_p = fl.pair;
    let tau;
    let mem_quantum;
    let mem_qracm;
    let mem_qraqm;
    match kind {
        AlgorithmKind::Classical => {
            tau = 2.0 * b;
            mem_quantum = None;
            mem_qracm = None;
            mem_qraqm = None;
        }
        AlgorithmKind::Grover => {
            // B^2 sqrt(p), floored by one pass over the search space
            tau = (2.0 * b + 0.5 * rho_p).max(b);
            mem_quantum = Some(0.0);
            mem_qracm = Some(b);
            mem_qraqm = None;
        }
        AlgorithmKind::QwLsf | AlgorithmKind::QwLsfSparse => {
            let sigma_max = (-0.5 * rho_p).max(0.0);
            if r.sigma < -1e-12 || r.sigma > sigma_max + 1e-9 {
                return None;
            }
            let sigma = r.sigma.clamp(0.0, sigma_max);
            let (pi_beta, rho_w) = second_layer(r, fl)?;
            tau = qw_tau(kind, sigma, pi_beta, rho_w, b, rho_p);
            if kind == AlgorithmKind::QwLsf {
                let vc = (pi_beta - rho_w).max(0.0);
                mem_quantum = Some(sigma + vc);
                mem_qraqm = Some(sigma + vc);
                mem_qracm = Some(b.max(sigma + vc));
            } else {
                mem_quantum = Some(sigma);
                mem_qraqm = Some(sigma);
                mem_qracm = Some(b.max(sigma));
            }
        }
        _ => return None,
    }
    let time = fl.repetitions + fl.list.max(fl.centers_count + tau);
    if !time.is_finite() {
        return None;
    }
    Some(ExponentReport {
        time,
        mem_classical: fl.list,
        mem_quantum,
        mem_qracm,
        mem_qraqm,
    })
}

/// Per-bucket search cost of a quantum-walk kind at vertex-size rate
/// `sigma`: the number of walks (one per expected solution, clipped at
/// one) times the dearer of the set-up and the walk itself.
pub(crate) fn qw_tau(
    kind: AlgorithmKind,
    sigma: f64,
    pi_beta: f64,
    rho_w: f64,
    bucket: f64,
    rho_p: f64,
) -> f64 {
    let walks = (2.0 * bucket + rho_p).max(0.0);
    match kind {
        AlgorithmKind::QwLsf => {
            let vc = (pi_beta - rho_w).max(0.0);
            let walk_cost = 0.5 * (pi_beta - rho_w - sigma - rho_p)
                + (0.5 * vc).max((0.5 * (sigma + pi_beta)).max(0.0));
            walks + (sigma + vc).max(walk_cost)
        }
        AlgorithmKind::QwLsfSparse => {
            let walk_cost =
                0.5 * (pi_beta - sigma - rho_p - rho_w) + (0.5 * (sigma + pi_beta)).max(0.0);
            walks + sigma.max(walk_cost)
        }
        _ => unreachable!("qw_tau is only defined for the quantum-walk kinds"),
    }
}

/// The vertex-size rate minimizing [`qw_tau`] over `[0, sigma_max]`.
///
/// `tau` is the max of a rising line and a falling piecewise-linear
/// function of `sigma`, so the minimum sits at an endpoint, at the
/// falling function's kink, or at one of the two possible crossings;
/// all five candidates are checked.
pub(crate) fn qw_best_sigma(
    kind: AlgorithmKind,
    pi_beta: f64,
    rho_w: f64,
    bucket: f64,
    rho_p: f64,
    sigma_max: f64,
) -> (f64, f64) {
    let candidates = match kind {
        AlgorithmKind::QwLsf => {
            let vc = (pi_beta - rho_w).max(0.0);
            [
                0.0,
                sigma_max,
                vc - pi_beta,
                -rho_p / 3.0,
                0.5 * (vc - rho_p + pi_beta) - vc,
            ]
        }
        AlgorithmKind::QwLsfSparse => {
            let c = pi_beta - rho_p - rho_w;
            [0.0, sigma_max, -pi_beta, c / 3.0, 0.5 * (c + pi_beta)]
        }
        _ => unreachable!("qw_best_sigma is only defined for the quantum-walk kinds"),
    };
    let mut best = (0.0, qw_tau(kind, 0.0, pi_beta, rho_w, bucket, rho_p));
    for cand in candidates {
        let sigma = cand.clamp(0.0, sigma_max);
        let tau = qw_tau(kind, sigma, pi_beta, rho_w, bucket, rho_p);
        if tau < best.1 {
            best = (sigma, tau);
        }
    }
    best
}

/// Quantum Prange time exponent:
/// `0.5 (h(omega) - (1 - kappa) h(omega / (1 - kappa)))`.
pub fn quantum_prange_exponent(omega: f64, kappa: f64) -> f64 {
    if !(0.0..=1.0).contains(&omega) || !(0.0..1.0).contains(&kappa) {
        return INFEASIBLE;
    }
    let rest = rate_binom(1.0 - kappa, omega);
    if !rest.is_finite() {
        return INFEASIBLE;
    }
    0.5 * (entropy(omega) - rest)
}

/// The sieving-ISD runtime lower bound at relative punctured length
/// `nu_p = n'/n` and relative punctured weight `omega_p = w'/n`, with
/// the list size at its minimal admissible value. Returns [`INFEASIBLE`]
/// outside the constraint set (in particular when the minimal list
/// would exceed the expected codeword count).
pub fn sievingisd_bound_exponent(omega: f64, kappa: f64, nu_p: f64, omega_p: f64) -> f64 {
    if !(0.0..=0.5).contains(&omega) || !(0.0..1.0).contains(&kappa) {
        return INFEASIBLE;
    }
    if nu_p <= kappa || nu_p > 1.0 {
        return INFEASIBLE;
    }
    if omega_p < 0.0 || omega_p > nu_p.min(omega) + 1e-15 || omega - omega_p > 1.0 - nu_p + 1e-12 {
        return INFEASIBLE;
    }
    let pair_yield = rate_binom(omega_p, 0.5 * omega_p) + rate_binom(nu_p - omega_p, 0.5 * omega_p);
    if !pair_yield.is_finite() || pair_yield < nu_p - kappa - 1e-12 {
        return INFEASIBLE;
    }
    let value = rate_binom(nu_p, omega_p) + entropy(omega)
        - pair_yield
        - (nu_p - kappa)
        - rate_binom(1.0 - nu_p, omega - omega_p);
    if !value.is_finite() {
        return INFEASIBLE;
    }
    0.5 * value
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SequenceError {
    #[error("list sizes must be positive")]
    NonPositive,
    #[error("probability must lie in (0, 1]")]
    BadProbability,
    #[error("inadmissible sequence: N_{i} = {value} exceeds N_{prev}^2 p = {bound}")]
    Inadmissible {
        i: usize,
        prev: usize,
        value: f64,
        bound: f64,
    },
}

/// Checks the varying-list-size inequality: for an admissible sequence
/// (`N_i <= N_{i-1}^2 p` throughout), does
/// `max(N) / sqrt(last N) >= 1 / sqrt(p)` hold?
///
/// The property suite asserts this is true for every admissible
/// sequence. Computed in log space so doubling growth cannot overflow.
pub fn varying_list_check(list_sizes: &[f64], p: f64) -> Result<bool, SequenceError> {
    if !(0.0..=1.0).contains(&p) || p == 0.0 {
        return Err(SequenceError::BadProbability);
    }
    if list_sizes.is_empty() || list_sizes.iter().any(|&x| x <= 0.0) {
        return Err(SequenceError::NonPositive);
    }
    let logs: Vec<f64> = list_sizes.iter().map(|x| x.log2()).collect();
    let log_p = p.log2();
    for i in 1..logs.len() {
        if logs[i] > 2.0 * logs[i - 1] + log_p + 1e-9 {
            return Err(SequenceError::Inadmissible {
                i,
                prev: i - 1,
                value: list_sizes[i],
                bound: list_sizes[i - 1] * list_sizes[i - 1] * p,
            });
        }
    }
    let max_log = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last_log = *logs.last().unwrap();
    Ok(max_log - 0.5 * last_log >= -0.5 * log_p - 1e-9)
}
