//! Principal matrix logarithm by inverse scaling and squaring with the
//! Gauss-Legendre rational approximation:
//!
//! ```text
//! log(A) = 2^s (A_s - I) sum_i w_i ((1 - x_i) I + (1 + x_i) A_s)^{-1},   A_s = A^{1/2^s}
//! ```
//!
//! with `(s, k)` chosen a priori from the Crouzeix-Palencia bound evaluated
//! on a spectral set of `A`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{cond2_from_lu, sqrtm_with_history, LuFactorization};
use crate::matrix::{ComplexMatrix, C64};
use crate::quadrature::gauss_legendre;
use crate::scalar::scalar_error_bound;
use crate::spectral::{
    branch_cut_clearance, fov_boundary, SetKind, SpectralSet, CROUZEIX_CONSTANT, DEFAULT_FOV_ANGLES,
};
use crate::UNIT_ROUNDOFF;

pub const DEFAULT_TOL: f64 = 1e-15;
pub const DEFAULT_S_MAX: u32 = 20;
/// Beyond 18 nodes the bound at tolerance 1e-15 always prefers another
/// square root; a larger cap only changes choices for matrices whose set
/// reaches far from 1, where the asymptotic bound is least reliable.
pub const DEFAULT_K_MAX: usize = 18;
const REAL_TRUNCATION: f64 = 1e-11;

/// Selected number of square roots `s` and quadrature nodes `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamChoice {
    pub s: u32,
    pub k: usize,
    /// `E(s, k)` on the spectral set; `None` when the pair was given by the caller.
    pub predicted_error: Option<f64>,
}

impl ParamChoice {
    /// Cost model `28 s / 3 + 2 k / 3` in thirds, so comparisons are exact.
    pub fn cost_thirds(&self) -> u64 {
        28 * self.s as u64 + 2 * self.k as u64
    }

    pub fn cost(&self) -> f64 {
        self.cost_thirds() as f64 / 3.0
    }

    /// Integer cost as tabulated (`floor`).
    pub fn cost_floor(&self) -> u64 {
        self.cost_thirds() / 3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// Map the boundary of the set of `A` through `x -> x^{1/2^{s+1}}`.
    Literal,
    /// Re-estimate the field of values after every square root.
    Recompute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogmOptions {
    pub s_max: u32,
    pub k_max: usize,
    pub fov_angles: usize,
    pub mode: BoundMode,
    /// Skip the 2-norm condition numbers of the shifted systems.
    pub compute_kappa: bool,
}

impl Default for LogmOptions {
    fn default() -> Self {
        Self {
            s_max: DEFAULT_S_MAX,
            k_max: DEFAULT_K_MAX,
            fov_angles: DEFAULT_FOV_ANGLES,
            mode: BoundMode::Literal,
            compute_kappa: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LogmReport {
    pub x: ComplexMatrix,
    pub choice: ParamChoice,
    /// `max_i cond2((1 - x_i) I + (1 + x_i) A_s)`; the attainable relative
    /// accuracy is roughly `kappa * u`.
    pub kappa: Option<f64>,
    /// `||Y^2 - M||_F / ||M||_F` for each square root taken.
    pub sqrt_residuals: Vec<f64>,
}

impl LogmReport {
    pub fn achievable_accuracy(&self) -> Option<f64> {
        self.kappa.map(|k| k * UNIT_ROUNDOFF)
    }
}

/// `exp(w) - 1` without cancellation near `w = 0`.
fn expm1(w: C64) -> C64 {
    let half = (0.5 * w.im).sin();
    C64::new(w.re.exp_m1() * w.im.cos() - 2.0 * half * half, w.re.exp() * w.im.sin())
}

/// `|(1 - x^{1/2^m}) / (1 + x^{1/2^m})|` on the principal branch.
fn root_ratio(x: C64, m: u32) -> f64 {
    let w = x.ln() / 2f64.powi(m as i32);
    let e = expm1(w);
    (e / (e + 2.0)).norm()
}

fn max_ratio(points: &[C64], m: u32) -> f64 {
    points.iter().map(|&x| root_ratio(x, m)).fold(0.0, f64::max)
}

/// Constant in front of `max |ratio|^{2k+1}`: the scalar bound's `2 pi`
/// times the spectral-set constant, `1 + sqrt 2` for the field of values and
/// `L / (2 pi eps)` for a pseudospectrum with boundary length `L`.
fn set_prefactor(set: &SpectralSet) -> f64 {
    match set.kind() {
        SetKind::Pseudo(eps) => set.perimeter() / eps,
        SetKind::Fov | SetKind::Interval => 2.0 * CROUZEIX_CONSTANT * PI,
    }
}

fn functional_from_ratio(prefactor: f64, r: f64, k: usize) -> f64 {
    prefactor * r.powi(2 * k as i32 + 1)
}

fn require_clear(set: &SpectralSet) -> Result<()> {
    if branch_cut_clearance(set) <= 0.0 {
        Err(Error::BranchCutSpectrum)
    } else {
        Ok(())
    }
}

/// `E(s, k) = 2 (1 + sqrt 2) pi max_x |((1 - x^{1/2^{s+1}}) / (1 + x^{1/2^{s+1}}))^{2k+1}|`
/// over the boundary points of `set` and the midpoints of its edges. On a
/// pseudospectral set the constant `2 (1 + sqrt 2) pi` becomes `L / eps`.
pub fn error_functional(set: &SpectralSet, s: u32, k: usize) -> Result<f64> {
    require_clear(set)?;
    Ok(functional_from_ratio(set_prefactor(set), max_ratio(&set.sample_points(), s + 1), k))
}

/// Cheapest `(s, k)` with `E(s, k) <= tol` by exhaustive scan of
/// `0..=s_max` x `1..=k_max`; ties go to the smaller `s`, then smaller `k`.
pub fn select_params(set: &SpectralSet, tol: f64, s_max: u32, k_max: usize) -> Result<ParamChoice> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    require_clear(set)?;
    let pts = set.sample_points();
    let c = set_prefactor(set);
    let mut best: Option<ParamChoice> = None;
    for s in 0..=s_max {
        let r = max_ratio(&pts, s + 1);
        for k in 1..=k_max {
            let e = functional_from_ratio(c, r, k);
            if e > tol {
                continue;
            }
            let cand = ParamChoice { s, k, predicted_error: Some(e) };
            if best.map_or(true, |b| cand.cost_thirds() < b.cost_thirds()) {
                best = Some(cand);
            }
        }
    }
    best.ok_or(Error::NoFeasibleParams { tol, s_max, k_max })
}

fn check_square(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "logm needs a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// `s` successive principal square roots with their relative residuals.
fn repeated_sqrt(a: &ComplexMatrix, s: u32) -> Result<(ComplexMatrix, Vec<f64>)> {
    let mut b = a.clone();
    let mut residuals = Vec::with_capacity(s as usize);
    for _ in 0..s {
        let root = sqrtm_with_history(&b)?.root;
        let res = (&root.matmul(&root) - &b).frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE);
        residuals.push(res);
        b = root;
    }
    Ok((b, residuals))
}

/// Quadrature part on an already rooted matrix: `(B - I) sum_i w_i M_i^{-1}`.
fn quadrature_log(b: &ComplexMatrix, k: usize, compute_kappa: bool) -> Result<(ComplexMatrix, Option<f64>)> {
    let rule = gauss_legendre(k)?;
    let n = b.rows();
    let b_minus_i = b.shift(C64::new(-1.0, 0.0));
    let terms: Vec<(ComplexMatrix, f64)> = rule
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(x, w)| {
            let m = b.affine(C64::new(1.0 + x, 0.0), C64::new(1.0 - x, 0.0));
            let lu = LuFactorization::factor(&m)?;
            lu.check()?;
            let kappa = if compute_kappa { cond2_from_lu(&m, &lu)? } else { f64::NAN };
            Ok((lu.solve_unchecked(&b_minus_i).scale_real(w), kappa))
        })
        .collect::<Result<_>>()?;
    let mut sum = ComplexMatrix::zeros(n, n);
    for (t, _) in &terms {
        for (acc, z) in sum.as_mut_slice().iter_mut().zip(t.as_slice()) {
            *acc += z;
        }
    }
    let kappa = compute_kappa.then(|| terms.iter().map(|t| t.1).fold(0.0, f64::max));
    Ok((sum, kappa))
}

fn finish(a: &ComplexMatrix, mut x: ComplexMatrix, s: u32) -> ComplexMatrix {
    if s > 0 {
        x = x.scale_real(2f64.powi(s as i32));
    }
    if a.is_real() && x.max_imag() <= REAL_TRUNCATION * x.frobenius_norm() {
        x = x.real_part();
    }
    x
}

fn logm_fixed_impl(a: &ComplexMatrix, choice: ParamChoice, compute_kappa: bool) -> Result<LogmReport> {
    check_square(a)?;
    let (b, sqrt_residuals) = repeated_sqrt(a, choice.s)?;
    let (sum, kappa) = quadrature_log(&b, choice.k, compute_kappa)?;
    Ok(LogmReport { x: finish(a, sum, choice.s), choice, kappa, sqrt_residuals })
}

/// Logarithm with caller-chosen `s` square roots and `k` nodes.
pub fn logm_fixed(a: &ComplexMatrix, s: u32, k: usize) -> Result<LogmReport> {
    logm_fixed_impl(a, ParamChoice { s, k, predicted_error: None }, true)
}

/// As [`logm_fixed`] but without the condition number estimates.
pub fn logm_fixed_fast(a: &ComplexMatrix, s: u32, k: usize) -> Result<LogmReport> {
    logm_fixed_impl(a, ParamChoice { s, k, predicted_error: None }, false)
}

/// Field of values, parameter selection and evaluation with default options.
pub fn logm_auto(a: &ComplexMatrix, tol: f64) -> Result<LogmReport> {
    logm_auto_with(a, tol, &LogmOptions::default())
}

pub fn logm_auto_with(a: &ComplexMatrix, tol: f64, opts: &LogmOptions) -> Result<LogmReport> {
    check_square(a)?;
    if opts.mode == BoundMode::Recompute {
        // square roots that move the set off the cut are found by the scan
        return logm_recompute(a, tol, opts);
    }
    let set = fov_boundary(a, opts.fov_angles)?;
    let clearance = branch_cut_clearance(&set);
    if clearance <= 0.0 {
        return Err(Error::FovCrossesBranchCut { clearance });
    }
    logm_with_set(a, &set, tol, opts)
}

/// Selection on a caller-supplied spectral set (e.g. a pseudospectrum when
/// the field of values reaches the branch cut), then evaluation.
pub fn logm_with_set(a: &ComplexMatrix, set: &SpectralSet, tol: f64, opts: &LogmOptions) -> Result<LogmReport> {
    let choice = select_params(set, tol, opts.s_max, opts.k_max)?;
    logm_fixed_impl(a, choice, opts.compute_kappa)
}

/// Selection in recompute mode: after `j` actual square roots the field of
/// values of `A^{1/2^j}` is estimated afresh and the cheapest `k` for
/// `E(0, k) <= tol` on it gives the candidate `(j, k)`.
pub fn select_params_recompute(a: &ComplexMatrix, tol: f64, opts: &LogmOptions) -> Result<ParamChoice> {
    Ok(recompute_scan(a, tol, opts)?.0)
}

fn recompute_scan(a: &ComplexMatrix, tol: f64, opts: &LogmOptions) -> Result<(ParamChoice, ComplexMatrix, Vec<f64>)> {
    check_square(a)?;
    let mut b = a.clone();
    let mut residuals = Vec::new();
    let mut best: Option<(ParamChoice, ComplexMatrix, Vec<f64>)> = None;
    for s in 0..=opts.s_max {
        if s > 0 {
            // further roots cannot beat the current best
            if best.as_ref().is_some_and(|(c, _, _)| 28 * s as u64 + 2 > c.cost_thirds()) {
                break;
            }
            let (root, res) = repeated_sqrt(&b, 1)?;
            residuals.extend(res);
            b = root;
        }
        let set = fov_boundary(&b, opts.fov_angles)?;
        if branch_cut_clearance(&set) <= 0.0 {
            continue;
        }
        let (c, r) = (set_prefactor(&set), max_ratio(&set.sample_points(), 1));
        if let Some(k) = (1..=opts.k_max).find(|&k| functional_from_ratio(c, r, k) <= tol) {
            let cand = ParamChoice { s, k, predicted_error: Some(functional_from_ratio(c, r, k)) };
            if best.as_ref().map_or(true, |(c, _, _)| cand.cost_thirds() < c.cost_thirds()) {
                best = Some((cand, b.clone(), residuals.clone()));
            }
        }
    }
    best.ok_or(Error::NoFeasibleParams { tol, s_max: opts.s_max, k_max: opts.k_max })
}

fn logm_recompute(a: &ComplexMatrix, tol: f64, opts: &LogmOptions) -> Result<LogmReport> {
    let (choice, b, sqrt_residuals) = recompute_scan(a, tol, opts)?;
    let (sum, kappa) = quadrature_log(&b, choice.k, opts.compute_kappa)?;
    Ok(LogmReport { x: finish(a, sum, choice.s), choice, kappa, sqrt_residuals })
}

/// Norm-based bound `2 pi |((1 - sqrt(1+||B||)) / (1 + sqrt(1+||B||)))^{2k+1}|`
/// for `log(I + B)`, valid when `||B|| < 1`.
pub fn matrix_error_bound_restricted(norm_b: f64, k: usize) -> Result<f64> {
    if !(norm_b >= 0.0) {
        return Err(Error::InvalidParams(format!("norm must be nonnegative, got {norm_b}")));
    }
    if norm_b >= 1.0 {
        return Err(Error::NormTooLarge(norm_b));
    }
    scalar_error_bound(C64::new(norm_b, 0.0), k)
}
