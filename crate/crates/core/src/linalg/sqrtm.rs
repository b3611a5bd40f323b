use crate::error::{Error, Result};
use crate::linalg::lu::LuFactorization;
use crate::matrix::{ComplexMatrix, C64};

const MAX_ITER: usize = 60;
const TOL: f64 = 1e-14;

/// Principal square root with the residual history of the iteration.
#[derive(Debug, Clone)]
pub struct SqrtmResult {
    pub root: ComplexMatrix,
    pub iterations: usize,
    /// `||M_k - I||_F / sqrt(n)` after each step.
    pub history: Vec<f64>,
}

/// Principal square root by the scaled product form of the Denman-Beavers
/// iteration:
///
/// ```text
/// mu_k    = |det M_k|^(-1/(2n))
/// M_{k+1} = (I + (mu^2 M_k + mu^-2 M_k^-1) / 2) / 2,   M_0 = A
/// Y_{k+1} = mu Y_k (I + mu^-2 M_k^-1) / 2,             Y_0 = A
/// ```
///
/// `Y_k` converges to `A^{1/2}` and `M_k` to `I`. Determinant scaling is
/// switched off once `||M_k - I||` drops below 1e-2.
pub fn sqrtm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(sqrtm_with_history(a)?.root)
}

pub fn sqrtm_with_history(a: &ComplexMatrix) -> Result<SqrtmResult> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("sqrtm needs a square matrix".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SqrtmResult { root: a.clone(), iterations: 0, history: vec![] });
    }
    let ident = ComplexMatrix::identity(n);
    let mut m = a.clone();
    let mut y = a.clone();
    let mut history = Vec::new();
    let rn = (n as f64).sqrt();
    let mut scaling = true;
    for it in 0..MAX_ITER {
        let lu = LuFactorization::factor(&m)?;
        // Tiny but nonzero pivots are tolerated: triangular inputs such as
        // expm of a shifted bidiagonal matrix have enormous condition numbers
        // yet well-behaved triangular solves.
        if lu.has_zero_pivot() {
            return Err(Error::BranchCutSpectrum);
        }
        let minv = lu.solve_unchecked(&ident);
        let mu = if scaling { (-lu.log_abs_det() / (2.0 * n as f64)).exp() } else { 1.0 };
        if !mu.is_finite() || mu == 0.0 {
            return Err(Error::BranchCutSpectrum);
        }
        let mu2 = mu * mu;
        // Y <- mu Y (I + mu^-2 M^-1) / 2
        let inner = minv.affine(C64::new(1.0 / mu2, 0.0), C64::new(1.0, 0.0));
        let y_next = y.matmul(&inner).scale_real(0.5 * mu);
        // M <- (I + (mu^2 M + mu^-2 M^-1) / 2) / 2
        let mut m_next = m.scale_real(0.25 * mu2);
        for (z, w) in m_next.as_mut_slice().iter_mut().zip(minv.as_slice()) {
            *z += w * (0.25 / mu2);
        }
        let m_next = m_next.shift(C64::new(0.5, 0.0));
        if !m_next.is_finite() || !y_next.is_finite() {
            return Err(Error::BranchCutSpectrum);
        }
        let dist = (&m_next - &ident).frobenius_norm() / rn;
        let step = (&y_next - &y).frobenius_norm();
        let ynorm = y_next.frobenius_norm();
        history.push(dist);
        m = m_next;
        y = y_next;
        if dist < 1e-2 {
            scaling = false;
        }
        // In the quadratic regime the step after `dist <= 1e-8` lands at the
        // rounding level; stopping on `dist <= TOL` alone can leave an error
        // of that size in `Y`.
        let prev = if it > 0 { history[it - 1] } else { f64::INFINITY };
        if dist <= TOL * 0.1 || prev <= 1e-8 || (step <= TOL * ynorm && dist <= 1e-8) {
            return Ok(SqrtmResult { root: y, iterations: it + 1, history });
        }
        // Quadratic convergence has stalled at the rounding level.
        if it >= 6 && dist <= 1e-8 {
            let prev = history[history.len() - 2];
            if dist >= 0.5 * prev {
                return Ok(SqrtmResult { root: y, iterations: it + 1, history });
            }
        }
    }
    let last = history.last().copied().unwrap_or(f64::INFINITY);
    if last > 1e-2 {
        // M_k never approached I: the iteration has no principal fixed point.
        Err(Error::BranchCutSpectrum)
    } else {
        Err(Error::NonConvergence { method: "Denman-Beavers iteration", iterations: MAX_ITER })
    }
}
