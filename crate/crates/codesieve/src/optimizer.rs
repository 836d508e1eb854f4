//! Derivative-free minimization of the time exponents, the
//! relative-weight sweep, hardest-instance extraction, and the
//! sieving-ISD claim driver.
//!
//! The objective has `max(.)` kinks and feasibility cliffs, so every
//! stage is a deterministic grid or coordinate-descent step: a coarse
//! Cartesian grid, three shrinking refinement passes, and a
//! coordinate-descent polish. Identical inputs give identical outputs,
//! regardless of thread count.

use crate::costmodel::{
    entropy, first_layer, nns_exponent, nns_exponent_with, quantum_prange_exponent,
    qw_best_sigma, second_layer, sievingisd_bound_exponent, AlgorithmKind, ExponentReport, Rates,
    INFEASIBLE,
};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::atomic::{AtomicU64, Ordering};

/// Default exponent tolerance; an order of margin below the three
/// decimals the hardest-instance table is printed with.
pub const DEFAULT_TOL: f64 = 1e-4;
/// Sweep domain: the open interval of relative weights.
pub const OMEGA_MIN: f64 = 1e-3;
pub const OMEGA_MAX: f64 = 0.5;
/// Points per free dimension on the coarse grid.
const COARSE_POINTS: usize = 40;
/// Points per dimension on each refinement pass.
const REFINE_POINTS: usize = 9;
/// Interval shrink factor between refinement passes.
const REFINE_SHRINK: f64 = 5.0;

#[derive(Clone, Debug, Serialize)]
pub struct OptimizationResult {
    pub kind: AlgorithmKind,
    pub omega: f64,
    pub best: Rates,
    pub report: ExponentReport,
    pub evaluations: u64,
    pub converged: bool,
}

/// Normalized search coordinates: each entry lives in `[0, 1]` and is
/// decoded against the feasible box at the current point.
fn dims(kind: AlgorithmKind) -> usize {
    if kind.uses_second_layer() {
        5
    } else {
        2
    }
}

fn decode(kind: AlgorithmKind, omega: f64, x: &[f64]) -> Option<Rates> {
    let nu = x[0].clamp(0.0, 1.0);
    let alpha = x[1].clamp(0.0, 1.0) * nu.min(omega);
    if !kind.uses_second_layer() {
        return Some(Rates::first_layer(omega, nu, alpha));
    }
    let fl = first_layer(omega, nu, alpha)?;
    Some(decode_second(omega, nu, alpha, &fl, x))
}

fn decode_second(
    omega: f64,
    nu: f64,
    alpha: f64,
    fl: &crate::costmodel::FirstLayer,
    x: &[f64],
) -> Rates {
    let nu_prime = x[2].clamp(0.0, 1.0) * nu;
    let beta_hat = x[3].clamp(0.0, 1.0) * alpha.min(nu_prime);
    let sigma = x[4].clamp(0.0, 1.0) * (-0.5 * fl.pair).max(0.0);
    Rates {
        omega,
        nu,
        alpha_bar: alpha,
        nu_prime,
        beta_hat,
        sigma,
    }
}

fn encode(kind: AlgorithmKind, r: &Rates) -> Vec<f64> {
    let cap = r.nu.min(r.omega);
    let x0 = r.nu;
    let x1 = if cap > 0.0 { r.alpha_bar / cap } else { 0.0 };
    if !kind.uses_second_layer() {
        return vec![x0, x1.clamp(0.0, 1.0)];
    }
    let x2 = if r.nu > 0.0 { r.nu_prime / r.nu } else { 0.0 };
    let beta_cap = r.alpha_bar.min(r.nu_prime);
    let x3 = if beta_cap > 0.0 {
        r.beta_hat / beta_cap
    } else {
        0.0
    };
    let sigma_max = first_layer(r.omega, r.nu, r.alpha_bar)
        .map(|fl| (-0.5 * fl.pair).max(0.0))
        .unwrap_or(0.0);
    let x4 = if sigma_max > 0.0 {
        r.sigma / sigma_max
    } else {
        0.0
    };
    vec![
        x0,
        x1.clamp(0.0, 1.0),
        x2.clamp(0.0, 1.0),
        x3.clamp(0.0, 1.0),
        x4.clamp(0.0, 1.0),
    ]
}

fn eval(kind: AlgorithmKind, omega: f64, x: &[f64], counter: &AtomicU64) -> f64 {
    counter.fetch_add(1, Ordering::Relaxed);
    let nu = x[0].clamp(0.0, 1.0);
    let alpha = x[1].clamp(0.0, 1.0) * nu.min(omega);
    let Some(fl) = first_layer(omega, nu, alpha) else {
        return INFEASIBLE;
    };
    let r = if kind.uses_second_layer() {
        decode_second(omega, nu, alpha, &fl, x)
    } else {
        Rates::first_layer(omega, nu, alpha)
    };
    nns_exponent_with(kind, &r, &fl).map_or(INFEASIBLE, |rep| rep.time)
}

/// Coarse stage: Cartesian grid with 40 points per free rate dimension.
/// For the quantum-walk kinds the vertex-size rate starts pinned at its
/// upper bound `-rho_p / 2`.
fn coarse_grid(kind: AlgorithmKind, omega: f64, counter: &AtomicU64) -> Option<(f64, Vec<f64>)> {
    let step = 1.0 / (COARSE_POINTS - 1) as f64;
    let coord = |i: usize| i as f64 * step;
    if !kind.uses_second_layer() {
        (0..COARSE_POINTS * COARSE_POINTS)
            .into_par_iter()
            .map(|idx| {
                let x = vec![coord(idx / COARSE_POINTS), coord(idx % COARSE_POINTS)];
                let t = eval(kind, omega, &x, counter);
                (t, idx, x)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .filter(|(t, _, _)| t.is_finite())
            .map(|(t, _, x)| (t, x))
    } else {
        (0..COARSE_POINTS * COARSE_POINTS)
            .into_par_iter()
            .map(|outer| {
                let x0 = coord(outer / COARSE_POINTS);
                let x1 = coord(outer % COARSE_POINTS);
                let mut best: Option<(f64, usize, Vec<f64>)> = None;
                // the whole slab shares one first layer
                let nu = x0;
                let alpha = x1 * nu.min(omega);
                let Some(fl) = first_layer(omega, nu, alpha) else {
                    counter.fetch_add(1, Ordering::Relaxed);
                    return best;
                };
                let sigma_max = (-0.5 * fl.pair).max(0.0);
                let mut evals = 0u64;
                for i2 in 0..COARSE_POINTS {
                    for i3 in 0..COARSE_POINTS {
                        evals += 1;
                        // the vertex-size rate is minimized exactly per node
                        let probe = Rates {
                            omega,
                            nu,
                            alpha_bar: alpha,
                            nu_prime: coord(i2) * nu,
                            beta_hat: coord(i3) * alpha.min(coord(i2) * nu),
                            sigma: 0.0,
                        };
                        let Some((pi_beta, rho_w)) = second_layer(&probe, &fl) else {
                            continue;
                        };
                        let (sigma, tau) = qw_best_sigma(
                            kind,
                            pi_beta,
                            rho_w,
                            fl.bucket_size,
                            fl.pair,
                            sigma_max,
                        );
                        let t = fl.repetitions + fl.list.max(fl.centers_count + tau);
                        let idx = i2 * COARSE_POINTS + i3;
                        if t.is_finite()
                            && best
                                .as_ref()
                                .is_none_or(|(bt, bidx, _)| t < *bt || (t == *bt && idx < *bidx))
                        {
                            let sfrac = if sigma_max > 0.0 { sigma / sigma_max } else { 0.0 };
                            best = Some((t, idx, vec![x0, x1, coord(i2), coord(i3), sfrac]));
                        }
                    }
                }
                counter.fetch_add(evals, Ordering::Relaxed);
                best.map(|(t, idx, x)| (t, outer * COARSE_POINTS * COARSE_POINTS + idx, x))
            })
            .flatten()
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(t, _, x)| (t, x))
    }
}

/// Refinement: Cartesian passes over shrinking boxes around the
/// incumbent. The vertex-size fraction gets a wider first box because
/// its scale shifts as the first-layer rates move.
fn refine(
    kind: AlgorithmKind,
    omega: f64,
    incumbent: &mut (f64, Vec<f64>),
    counter: &AtomicU64,
) {
    let d = dims(kind);
    let coarse_cell = 1.0 / (COARSE_POINTS - 1) as f64;
    let mut half_width = vec![1.5 * coarse_cell; d];
    if d == 5 {
        half_width[4] = 0.25;
    }
    for _pass in 0..3 {
        let lows: Vec<f64> = (0..d)
            .map(|i| (incumbent.1[i] - half_width[i]).max(0.0))
            .collect();
        let highs: Vec<f64> = (0..d)
            .map(|i| (incumbent.1[i] + half_width[i]).min(1.0))
            .collect();
        let total = REFINE_POINTS.pow(d as u32);
        let found = (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let flat = idx;
                let mut x = vec![0.0; d];
                for i in (0..d).rev() {
                    let j = idx % REFINE_POINTS;
                    idx /= REFINE_POINTS;
                    x[i] = lows[i]
                        + (highs[i] - lows[i]) * j as f64 / (REFINE_POINTS - 1) as f64;
                }
                (eval(kind, omega, &x, counter), flat, x)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if let Some((t, _, x)) = found {
            if t < incumbent.0 {
                *incumbent = (t, x);
            }
        }
        for hw in half_width.iter_mut() {
            *hw /= REFINE_SHRINK;
        }
    }
}

/// Coordinate descent with halving steps until the per-sweep
/// improvement drops below `tol` and the step is exhausted.
fn polish(
    kind: AlgorithmKind,
    omega: f64,
    incumbent: &mut (f64, Vec<f64>),
    tol: f64,
    counter: &AtomicU64,
) -> bool {
    let d = dims(kind);
    let mut step = 1.5 / (COARSE_POINTS - 1) as f64 / REFINE_SHRINK.powi(2);
    let floor = (tol * 1e-4).max(1e-9);
    let mut sweeps = 0;
    while sweeps < 400 {
        sweeps += 1;
        let before = incumbent.0;
        for dim in 0..d {
            for dir in [-1.0, 1.0] {
                let mut x = incumbent.1.clone();
                x[dim] = (x[dim] + dir * step).clamp(0.0, 1.0);
                let t = eval(kind, omega, &x, counter);
                if t < incumbent.0 {
                    *incumbent = (t, x);
                }
            }
        }
        if before - incumbent.0 < tol {
            step /= 2.0;
            if step < floor {
                return true;
            }
        }
    }
    true
}

/// Minimizes the time exponent of `kind` at relative weight `omega`.
///
/// Deterministic given `(kind, omega, tol)`: a 40-per-dimension coarse
/// grid, three five-fold refinement passes, then coordinate descent.
pub fn optimize(kind: AlgorithmKind, omega: f64, tol: f64) -> OptimizationResult {
    let counter = AtomicU64::new(0);
    let coarse = coarse_grid(kind, omega, &counter);
    let Some(mut incumbent) = coarse else {
        return OptimizationResult {
            kind,
            omega,
            best: Rates::first_layer(omega, 0.0, 0.0),
            report: ExponentReport {
                time: INFEASIBLE,
                mem_classical: INFEASIBLE,
                mem_quantum: None,
                mem_qracm: None,
                mem_qraqm: None,
            },
            evaluations: counter.into_inner(),
            converged: false,
        };
    };
    refine(kind, omega, &mut incumbent, &counter);
    let converged = polish(kind, omega, &mut incumbent, tol, &counter);
    finish(kind, omega, incumbent, counter.into_inner(), converged)
}

/// Warm-started optimization: refinement and polish around a known-good
/// rate point, without the coarse stage. Used along the sweep and by
/// the golden-section weight refinement.
fn optimize_from(kind: AlgorithmKind, omega: f64, warm: &Rates, tol: f64) -> Option<OptimizationResult> {
    let counter = AtomicU64::new(0);
    let x = encode(kind, warm);
    let t = eval(kind, omega, &x, &counter);
    if !t.is_finite() {
        return None;
    }
    let mut incumbent = (t, x);
    refine(kind, omega, &mut incumbent, &counter);
    let converged = polish(kind, omega, &mut incumbent, tol, &counter);
    Some(finish(
        kind,
        omega,
        incumbent,
        counter.into_inner(),
        converged,
    ))
}

fn finish(
    kind: AlgorithmKind,
    omega: f64,
    incumbent: (f64, Vec<f64>),
    evaluations: u64,
    converged: bool,
) -> OptimizationResult {
    let best = decode(kind, omega, &incumbent.1).expect("incumbent must decode");
    let report = nns_exponent(kind, &best).expect("incumbent must be feasible");
    OptimizationResult {
        kind,
        omega,
        best,
        report,
        evaluations,
        converged,
    }
}

/// The sweep grid: `n_points` equidistant weights in
/// `[OMEGA_MIN, OMEGA_MAX)`.
pub fn sweep_grid(n_points: usize) -> Vec<f64> {
    let step = (OMEGA_MAX - OMEGA_MIN) / n_points as f64;
    (0..n_points).map(|i| OMEGA_MIN + i as f64 * step).collect()
}

/// Grid stride between the full cold optimizations along a sweep;
/// intermediate points warm-start from both neighbors.
const ANCHOR_STRIDE: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct SweepCurve {
    pub kind: AlgorithmKind,
    pub tol: f64,
    pub points: Vec<OptimizationResult>,
}

/// Optimizes along the weight grid: every `ANCHOR_STRIDE`-th point (and
/// both ends) runs the full cold search in parallel, then two
/// warm-start passes propagate each incumbent to its neighbors, keeping
/// the better result at every point. Deterministic for fixed
/// `(kind, n_points, tol)`.
pub fn sweep(kind: AlgorithmKind, n_points: usize) -> SweepCurve {
    sweep_with_tol(kind, n_points, DEFAULT_TOL)
}

pub fn sweep_with_tol(kind: AlgorithmKind, n_points: usize, tol: f64) -> SweepCurve {
    assert!(n_points >= 2, "a sweep needs at least two points");
    let grid = sweep_grid(n_points);
    let is_anchor = |i: usize| i % ANCHOR_STRIDE == 0 || i == n_points - 1;
    let mut points: Vec<Option<OptimizationResult>> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &omega)| is_anchor(i).then(|| optimize(kind, omega, tol)))
        .collect();
    let better = |cand: &OptimizationResult, cur: &Option<OptimizationResult>| {
        cur.as_ref()
            .is_none_or(|c| cand.report.time < c.report.time)
    };
    // left-to-right, then right-to-left warm propagation
    for i in 1..n_points {
        if let Some(prev) = points[i - 1].as_ref().filter(|p| p.report.time.is_finite()) {
            let warm = prev.best;
            if let Some(cand) = optimize_from(kind, grid[i], &warm, tol) {
                if better(&cand, &points[i]) {
                    points[i] = Some(cand);
                }
            }
        }
    }
    for i in (0..n_points - 1).rev() {
        if let Some(next) = points[i + 1].as_ref().filter(|p| p.report.time.is_finite()) {
            let warm = next.best;
            if let Some(cand) = optimize_from(kind, grid[i], &warm, tol) {
                if better(&cand, &points[i]) {
                    points[i] = Some(cand);
                }
            }
        }
    }
    let points = points
        .into_iter()
        .zip(&grid)
        .map(|(p, &omega)| p.unwrap_or_else(|| optimize(kind, omega, tol)))
        .collect();
    SweepCurve { kind, tol, points }
}

/// The hardest instance: argmax of the optimized time over the sweep
/// grid, refined by golden-section on the weight at the same tolerance.
pub fn hardest(kind: AlgorithmKind) -> OptimizationResult {
    hardest_with(kind, 100, DEFAULT_TOL)
}

pub fn hardest_with(kind: AlgorithmKind, n_points: usize, tol: f64) -> OptimizationResult {
    let curve = sweep_with_tol(kind, n_points, tol);
    hardest_from_curve(&curve, n_points, tol)
}

/// Extracts the hardest instance from an existing sweep, avoiding the
/// cost of re-running it.
pub fn hardest_from_curve(curve: &SweepCurve, n_points: usize, tol: f64) -> OptimizationResult {
    let kind = curve.kind;
    let step = (OMEGA_MAX - OMEGA_MIN) / n_points as f64;
    let peak = curve
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.report.time.is_finite())
        .max_by(|a, b| {
            a.1.report
                .time
                .total_cmp(&b.1.report.time)
                .then(b.0.cmp(&a.0))
        })
        .expect("sweep produced no feasible point");
    let mut best = peak.1.clone();
    let warm = best.best;
    let probe = |omega: f64| {
        optimize_from(kind, omega, &warm, tol).unwrap_or_else(|| optimize(kind, omega, tol))
    };
    let mut lo = (best.omega - step).max(OMEGA_MIN);
    let mut hi = (best.omega + step).min(OMEGA_MAX - 1e-9);
    const PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = hi - PHI * (hi - lo);
    let mut d = lo + PHI * (hi - lo);
    let mut fc = probe(c);
    let mut fd = probe(d);
    while hi - lo > tol {
        if fc.report.time >= fd.report.time {
            if fc.report.time > best.report.time {
                best = fc.clone();
            }
            hi = d;
            d = c;
            fd = fc;
            c = hi - PHI * (hi - lo);
            fc = probe(c);
        } else {
            if fd.report.time > best.report.time {
                best = fd.clone();
            }
            lo = c;
            c = d;
            fc = fd;
            d = lo + PHI * (hi - lo);
            fd = probe(d);
        }
    }
    best
}

/// One row per algorithm: the hardest instance of each NNS kind.
pub fn hardest_table(n_points: usize, tol: f64) -> Vec<OptimizationResult> {
    AlgorithmKind::NNS_KINDS
        .iter()
        .map(|&kind| hardest_with(kind, n_points, tol))
        .collect()
}

/// Relative weight of the unique-decoding regime: `h(omega) = 1 - kappa`
/// on the `omega <= 1/2` branch.
pub fn unique_decoding_omega(kappa: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 0.5;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if entropy(mid) < 1.0 - kappa {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsdClaimPoint {
    pub kappa: f64,
    pub omega: f64,
    pub quantum_prange: f64,
    pub min_bound: f64,
    pub gap: f64,
    pub argmin_nu_p: f64,
    pub argmin_omega_p: f64,
    /// Coarse-grid cell sizes in `(nu_p, omega_p)`.
    pub grid_cell: (f64, f64),
}

/// Verifies the sieving-ISD claim at each code rate: minimizes the
/// lower-bound exponent over the punctured parameters and compares it
/// with quantum Prange. The expected argmin is the Prange corner
/// `(nu_p, omega_p) = (kappa, 0)`.
pub fn isd_claim_check(kappas: &[f64]) -> Vec<IsdClaimPoint> {
    kappas.iter().map(|&kappa| isd_claim_point(kappa)).collect()
}

fn isd_claim_point(kappa: f64) -> IsdClaimPoint {
    const GRID: usize = 201;
    let omega = unique_decoding_omega(kappa);
    let prange = quantum_prange_exponent(omega, kappa);
    let span_nu = 1.0 - kappa;
    let eval_point = |x0: f64, x1: f64| -> (f64, f64, f64) {
        let nu_p = kappa + x0.clamp(0.0, 1.0) * span_nu;
        let omega_p = x1.clamp(0.0, 1.0) * nu_p.min(omega);
        (
            sievingisd_bound_exponent(omega, kappa, nu_p, omega_p),
            nu_p,
            omega_p,
        )
    };
    let mut incumbent = (0..GRID * GRID)
        .into_par_iter()
        .map(|idx| {
            let x0 = (idx / GRID) as f64 / (GRID - 1) as f64;
            let x1 = (idx % GRID) as f64 / (GRID - 1) as f64;
            let (t, _, _) = eval_point(x0, x1);
            (t, idx, [x0, x1])
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(t, _, x)| (t, x))
        .expect("grid is nonempty");
    // refinement passes and coordinate descent in the normalized box
    let mut half = 1.5 / (GRID - 1) as f64;
    for _ in 0..3 {
        let lows = [
            (incumbent.1[0] - half).max(0.0),
            (incumbent.1[1] - half).max(0.0),
        ];
        let highs = [
            (incumbent.1[0] + half).min(1.0),
            (incumbent.1[1] + half).min(1.0),
        ];
        for i in 0..21 {
            for j in 0..21 {
                let x0 = lows[0] + (highs[0] - lows[0]) * i as f64 / 20.0;
                let x1 = lows[1] + (highs[1] - lows[1]) * j as f64 / 20.0;
                let (t, _, _) = eval_point(x0, x1);
                if t < incumbent.0 {
                    incumbent = (t, [x0, x1]);
                }
            }
        }
        half /= REFINE_SHRINK;
    }
    let mut step = half;
    while step > 1e-10 {
        let mut improved = false;
        for dim in 0..2 {
            for dir in [-1.0, 1.0] {
                let mut x = incumbent.1;
                x[dim] = (x[dim] + dir * step).clamp(0.0, 1.0);
                let (t, _, _) = eval_point(x[0], x[1]);
                if t < incumbent.0 {
                    incumbent = (t, x);
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    let (min_bound, nu_p, omega_p) = eval_point(incumbent.1[0], incumbent.1[1]);
    IsdClaimPoint {
        kappa,
        omega,
        quantum_prange: prange,
        min_bound,
        gap: min_bound - prange,
        argmin_nu_p: nu_p,
        argmin_omega_p: omega_p,
        grid_cell: (span_nu / (GRID - 1) as f64, omega / (GRID - 1) as f64),
    }
}

/// Formats one sweep curve as the canonical CSV: fixed six-decimal
/// fields, absent memory models as empty cells.
pub fn curve_to_csv(curve: &SweepCurve) -> String {
    let mut out = String::from("omega,time,mem_classical,mem_quantum,mem_qracm,mem_qraqm,converged\n");
    for p in &curve.points {
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        out.push_str(&format!(
            "{:.6},{:.6},{:.6},{},{},{},{}\n",
            p.omega,
            p.report.time,
            p.report.mem_classical,
            cell(p.report.mem_quantum),
            cell(p.report.mem_qracm),
            cell(p.report.mem_qraqm),
            p.converged
        ));
    }
    out
}
