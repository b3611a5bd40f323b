use crate::error::{Error, Result};
use crate::linalg::eigen::largest_eigpair;
use crate::linalg::lu::LuFactorization;
use crate::matrix::{vec_norm, vec_scale, ComplexMatrix, C64};

const NORM2_TOL: f64 = 1e-10;
const NORM2_MAX_ITER: usize = 5000;
const SIGMA_MIN_TOL: f64 = 1e-8;
const SIGMA_MIN_MAX_ITER: usize = 1000;

/// Deterministic start vector with no special alignment to coordinate axes.
pub(crate) fn start_vector(n: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|i| {
            let t = i as f64 + 1.0;
            C64::new(1.0 + 0.5 * (1.7 * t).sin(), 0.3 * (0.9 * t + 0.4).cos())
        })
        .collect();
    let nv = vec_norm(&v);
    vec_scale(&mut v, C64::new(1.0 / nv, 0.0));
    v
}

/// Spectral norm by power iteration on `A^H A`.
pub fn norm2(a: &ComplexMatrix) -> Result<f64> {
    let scale = a.max_abs();
    if scale == 0.0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let mut x = start_vector(a.cols());
    let mut sigma = 0.0;
    for _ in 0..NORM2_MAX_ITER {
        let y = a.matvec(&x);
        let ny = vec_norm(&y);
        if ny == 0.0 {
            // Start vector in the null space; restart from a unit axis.
            x = vec![C64::new(0.0, 0.0); a.cols()];
            let jmax = (0..a.cols()).max_by(|&p, &q| vec_norm(a.col(p)).total_cmp(&vec_norm(a.col(q)))).unwrap();
            x[jmax] = C64::new(1.0, 0.0);
            continue;
        }
        let mut z = a.adjoint_matvec(&y);
        let nz = vec_norm(&z);
        // ||A^H A x|| / ||A x|| converges to sigma_max from below
        let next = nz / ny;
        vec_scale(&mut z, C64::new(1.0 / nz, 0.0));
        x = z;
        if (next - sigma).abs() <= NORM2_TOL * next {
            return Ok(next.max(ny));
        }
        sigma = next;
    }
    Err(Error::NonConvergence { method: "norm2 power iteration", iterations: NORM2_MAX_ITER })
}

/// Smallest singular value by inverse iteration on `A^H A`.
///
/// Returns 0 when the LU factorisation meets an exactly zero pivot.
pub fn sigma_min(a: &ComplexMatrix) -> Result<f64> {
    let lu = LuFactorization::factor(a)?;
    Ok(sigma_min_from_lu(&lu))
}

pub(crate) fn sigma_min_from_lu(lu: &LuFactorization) -> f64 {
    let n = lu.order();
    if n == 0 || lu.has_zero_pivot() {
        return 0.0;
    }
    let mut x = start_vector(n);
    let mut est = f64::INFINITY;
    for _ in 0..SIGMA_MIN_MAX_ITER {
        // w = A^{-H} x, z = A^{-1} w; ||w||^2 is a Rayleigh quotient of (A A^H)^{-1}
        let mut w = x.clone();
        lu.solve_adjoint_in_place(&mut w);
        let nw = vec_norm(&w);
        if !nw.is_finite() {
            return 0.0;
        }
        let mut z = w;
        lu.solve_in_place(&mut z);
        let nz = vec_norm(&z);
        if !nz.is_finite() || nz == 0.0 {
            return 0.0;
        }
        let next = 1.0 / nw;
        vec_scale(&mut z, C64::new(1.0 / nz, 0.0));
        x = z;
        if (next - est).abs() <= SIGMA_MIN_TOL * next {
            // The final ||z|| / ||w|| step is one half-iteration sharper.
            return next.min(nw / nz);
        }
        est = next;
    }
    est
}

/// 2-norm condition number `||A|| ||A^{-1}||` with the inverse formed by LU.
pub fn cond2(a: &ComplexMatrix) -> Result<f64> {
    let inv = LuFactorization::factor(a)?.inverse()?;
    Ok(norm2(a)? * norm2(&inv)?)
}

/// Condition number from an existing factorisation, `||A|| / sigma_min(A)`.
pub(crate) fn cond2_from_lu(a: &ComplexMatrix, lu: &LuFactorization) -> Result<f64> {
    lu.check()?;
    let smin = sigma_min_from_lu(lu);
    if smin == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(norm2_eig(a)? / smin)
}

/// `sqrt(lambda_max(A^H A))` from the dense Hermitian eigensolver; unlike the
/// power iteration it does not slow down when the top singular values cluster.
pub fn norm2_eig(a: &ComplexMatrix) -> Result<f64> {
    if a.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let gram = a.adjoint().matmul(a);
    // symmetrise away the rounding of the product
    let (lambda, _) = largest_eigpair(&gram.hermitian_part())?;
    Ok(lambda.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm2_of_diagonal() {
        let a = ComplexMatrix::from_real_diag(&[1.0, -3.0, 2.0]);
        assert!((norm2(&a).unwrap() - 3.0).abs() < 1e-9);
        assert_eq!(norm2(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn norm2_of_nonnormal_2x2() {
        // closed form: sigma_max of [[a, b], [0, a]] is (sqrt(b^2 + 4a^2) + |b|) / 2
        let a = ComplexMatrix::from_real_rows(&[&[0.1, 1e6], &[0.0, 0.1]]).unwrap();
        let expected = ((1e12f64 + 0.04).sqrt() + 1e6) / 2.0;
        assert!((norm2(&a).unwrap() - expected).abs() <= 1e-4 * expected);
    }

    #[test]
    fn sigma_min_cases() {
        let a = ComplexMatrix::from_real_diag(&[3.0, 0.5]);
        assert!((sigma_min(&a).unwrap() - 0.5).abs() < 1e-8);
        let shifted = ComplexMatrix::from_real_diag(&[2.0, 5.0]).shift(C64::new(-2.0, 0.0));
        assert!(sigma_min(&shifted).unwrap() <= 1e-12);
        // sigma_min of [[a, b], [0, a]] = a^2 / sigma_max
        let f = ComplexMatrix::from_real_rows(&[&[-0.1, -1e6], &[0.0, -0.1]]).unwrap();
        let smax = ((1e12f64 + 0.04).sqrt() + 1e6) / 2.0;
        let expected = 0.01 / smax;
        assert!((sigma_min(&f).unwrap() - expected).abs() <= 1e-6 * expected);
    }

    #[test]
    fn cond2_cases() {
        assert!((cond2(&ComplexMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
        let d = ComplexMatrix::from_real_diag(&[10.0, 0.1]);
        assert!((cond2(&d).unwrap() - 100.0).abs() < 1e-8);
        let lu = LuFactorization::factor(&d).unwrap();
        assert!((cond2_from_lu(&d, &lu).unwrap() - 100.0).abs() < 1e-6);
        let sing = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(matches!(cond2(&sing), Err(Error::SingularSystem { .. })));
    }
}
