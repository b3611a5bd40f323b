//! `log(A) v` in a rational Krylov space whose poles are those of the
//! Gauss-Legendre approximant, `xi_l = -2 / (1 + x_l)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::LuFactorization;
use crate::logm::{error_functional, logm_auto};
use crate::matrix::{axpy, dot, vec_norm, vec_scale, ComplexMatrix, C64};
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::spectral::{fov_boundary, SpectralSet, DEFAULT_FOV_ANGLES};

/// Relative size below which a new direction counts as already in the space.
const BREAKDOWN_TOL: f64 = 1e-14;
const PROJECTED_TOL: f64 = 1e-15;

/// Poles of the k-node approximant in node order (most negative first).
pub fn poles_from_rule(rule: &QuadratureRule) -> Vec<C64> {
    rule.nodes().iter().map(|&x| C64::new(-2.0 / (1.0 + x), 0.0)).collect()
}

/// Orthonormal basis of `span{v, (M - xi_1)^{-1} v_1, ..., (M - xi_k)^{-1} v_k}`,
/// where `v_j` is the latest basis vector.
#[derive(Debug, Clone)]
pub struct RationalKrylovBasis {
    pub v: ComplexMatrix,
    /// Poles actually used, one per column after the first.
    pub poles: Vec<C64>,
    /// The space became invariant before all poles were used.
    pub breakdown: bool,
}

impl RationalKrylovBasis {
    pub fn dim(&self) -> usize {
        self.v.cols()
    }

    /// `||V^H V - I||_max`.
    pub fn orthonormality_residual(&self) -> f64 {
        let g = self.v.adjoint().matmul(&self.v);
        (&g - &ComplexMatrix::identity(self.dim())).max_abs()
    }
}

/// Shift-and-invert Arnoldi with modified Gram-Schmidt and one
/// reorthogonalisation pass. Stops early, flagging `breakdown`, when the new
/// direction is below `1e-14` of its length before orthogonalisation.
pub fn rational_arnoldi(m: &ComplexMatrix, v: &[C64], poles: &[C64]) -> Result<RationalKrylovBasis> {
    if !m.is_square() || m.rows() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} with vector of length {}",
            m.rows(),
            m.cols(),
            v.len()
        )));
    }
    let nv = vec_norm(v);
    if !(nv > 0.0) || !nv.is_finite() {
        return Err(Error::InvalidParams("start vector must be nonzero and finite".into()));
    }
    let n = m.rows();
    let factors: Vec<LuFactorization> = poles
        .par_iter()
        .map(|&xi| {
            let lu = LuFactorization::factor(&m.shift(-xi))?;
            lu.check()?;
            Ok(lu)
        })
        .collect::<Result<_>>()?;
    let mut q0 = v.to_vec();
    vec_scale(&mut q0, C64::new(1.0 / nv, 0.0));
    let mut cols = vec![q0];
    let mut used = Vec::new();
    let mut breakdown = false;
    for (lu, &xi) in factors.iter().zip(poles) {
        if cols.len() == n {
            breakdown = true;
            break;
        }
        let mut w = cols.last().unwrap().clone();
        lu.solve_in_place(&mut w);
        let before = vec_norm(&w);
        for _ in 0..2 {
            for q in &cols {
                let h = dot(q, &w);
                axpy(-h, q, &mut w);
            }
        }
        let after = vec_norm(&w);
        if after <= BREAKDOWN_TOL * before {
            breakdown = true;
            break;
        }
        vec_scale(&mut w, C64::new(1.0 / after, 0.0));
        cols.push(w);
        used.push(xi);
    }
    Ok(RationalKrylovBasis { v: ComplexMatrix::from_columns(n, &cols), poles: used, breakdown })
}

#[derive(Debug, Clone)]
pub struct KrylovAction {
    pub f: Vec<C64>,
    /// Crouzeix-Palencia bound of the k-node approximant on the field of values.
    pub bound: f64,
    pub basis_dim: usize,
    pub breakdown: bool,
}

/// `f_k = V log(I + V^H (A - I) V) V^H v` with the basis built from `A - I`,
/// `v` and the k quadrature poles.
pub fn log_action(a: &ComplexMatrix, v: &[C64], k: usize) -> Result<KrylovAction> {
    let set = fov_boundary(a, DEFAULT_FOV_ANGLES)?;
    log_action_with_set(a, v, k, &set)
}

/// As [`log_action`] with the field of values of `A` supplied by the caller.
pub fn log_action_with_set(a: &ComplexMatrix, v: &[C64], k: usize, fov: &SpectralSet) -> Result<KrylovAction> {
    let rule = gauss_legendre(k)?;
    let b = a.shift(C64::new(-1.0, 0.0));
    let basis = rational_arnoldi(&b, v, &poles_from_rule(&rule))?;
    let vm = &basis.v;
    let projected = vm.adjoint().matmul(&b.matmul(vm)).shift(C64::new(1.0, 0.0));
    let log_small = logm_auto(&projected, PROJECTED_TOL)?.x;
    let coeffs = vm.adjoint_matvec(v);
    let f = vm.matvec(&log_small.matvec(&coeffs));
    let bound = error_functional(fov, 0, k)?;
    Ok(KrylovAction { f, bound, basis_dim: basis.dim(), breakdown: basis.breakdown })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_values() {
        let p1 = poles_from_rule(&gauss_legendre(1).unwrap());
        assert_eq!(p1, vec![C64::new(-2.0, 0.0)]);
        let p2 = poles_from_rule(&gauss_legendre(2).unwrap());
        assert!((p2[0].re + 4.732050807568877).abs() < 1e-12);
        assert!((p2[1].re + 1.2679491924311228).abs() < 1e-12);
        for k in 1..40 {
            assert!(poles_from_rule(&gauss_legendre(k).unwrap()).iter().all(|p| p.re < -1.0 && p.im == 0.0));
        }
    }

    #[test]
    fn eigenvector_breaks_down_immediately() {
        let m = ComplexMatrix::from_real_diag(&[1.0, 2.0, 3.0]);
        let e1 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let b = rational_arnoldi(&m, &e1, &[C64::new(-2.0, 0.0), C64::new(-3.0, 0.0)]).unwrap();
        assert!(b.breakdown);
        assert_eq!(b.dim(), 1);
    }

    #[test]
    fn full_dimension_on_diagonal() {
        let d: Vec<f64> = (1..=10).map(|i| i as f64 * 0.3).collect();
        let m = ComplexMatrix::from_real_diag(&d);
        let v = vec![C64::new(1.0, 0.0); 10];
        let poles = poles_from_rule(&gauss_legendre(10).unwrap());
        let b = rational_arnoldi(&m, &v, &poles).unwrap();
        assert_eq!(b.dim(), 10);
        assert!(b.orthonormality_residual() <= 1e-10);
    }

    #[test]
    fn trivial_actions() {
        let v = vec![C64::new(0.3, 0.0), C64::new(-1.0, 0.5)];
        let r = log_action(&ComplexMatrix::identity(2), &v, 3).unwrap();
        assert!(vec_norm(&r.f) < 1e-15);
        let r = log_action(&ComplexMatrix::from_real_diag(&[2.0]), &[C64::new(1.0, 0.0)], 1).unwrap();
        assert!((r.f[0].re - 2f64.ln()).abs() < 1e-13);
    }
}
