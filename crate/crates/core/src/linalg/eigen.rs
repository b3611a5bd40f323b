//! Hermitian eigenproblems.

use crate::error::{Error, Result};
use crate::linalg::lu::LuFactorization;
use crate::linalg::norms::start_vector;
use crate::matrix::{dot, vec_norm, vec_scale, ComplexMatrix, C64, ONE};

const JACOBI_MAX_SWEEPS: usize = 60;
const HERMITIAN_TOL: f64 = 1e-12;

/// Orders up to this size use Jacobi for the extreme eigenpair as well.
pub const JACOBI_MAX_ORDER: usize = 128;

/// Eigen-decomposition `H = V diag(values) V^H` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column `i` paired with `values[i]`.
    pub vectors: ComplexMatrix,
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("Hermitian eigenproblem needs a square matrix".into()));
    }
    let scale = h.max_abs();
    let n = h.rows();
    let mut dev: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            dev = dev.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Full spectrum of a Hermitian matrix by cyclic Jacobi rotations.
///
/// A rotation is skipped when `|h_pq| <= eps * sqrt(|h_pp h_qq|)`, which keeps
/// small eigenvalues of well-scaled definite matrices relatively accurate.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let eps = f64::EPSILON;
    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if g <= eps * (app.abs() * aqq.abs()).sqrt() || g < f64::MIN_POSITIVE {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, p, q, app, aqq, apq, g);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { method: "Jacobi eigensolver", iterations: JACOBI_MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let cols: Vec<Vec<C64>> = order.iter().map(|&i| v.col(i).to_vec()).collect();
    Ok(HermitianEigen { values, vectors: ComplexMatrix::from_columns(n, &cols) })
}

#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, app: f64, aqq: f64, apq: C64, g: f64) {
    let n = a.rows();
    // Reduce to the real symmetric pair [[app, g], [g, aqq]] through the phase of apq.
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let sp = phase.conj() * s;
    let cp = phase.conj() * c;
    // Columns p and q of A U, for rows other than p and q.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let np = akp * c - akq * sp;
        let nq = akp * s + akq * cp;
        a[(k, p)] = np;
        a[(k, q)] = nq;
        a[(p, k)] = np.conj();
        a[(q, k)] = nq.conj();
    }
    a[(p, p)] = C64::new(app - t * g, 0.0);
    a[(q, q)] = C64::new(aqq + t * g, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    let (vp, vq) = {
        let data = v.as_mut_slice();
        let (lo, hi) = data.split_at_mut(q * n);
        (&mut lo[p * n..(p + 1) * n], &mut hi[..n])
    };
    for (xp, xq) in vp.iter_mut().zip(vq.iter_mut()) {
        let op = *xp;
        let oq = *xq;
        *xp = op * c - oq * sp;
        *xq = op * s + oq * cp;
    }
}

/// Largest eigenvalue of a Hermitian matrix with a unit eigenvector.
///
/// Orders up to [`JACOBI_MAX_ORDER`] use [`hermitian_eig`]. Larger matrices are
/// reduced to real tridiagonal form by Householder reflections, the top
/// eigenvalue is isolated by Sturm bisection, and the vector is recovered by
/// inverse iteration on the original matrix.
pub fn largest_eigpair(h: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    check_hermitian(h)?;
    let n = h.rows();
    if n <= JACOBI_MAX_ORDER {
        let eig = hermitian_eig(h)?;
        return Ok((eig.values[n - 1], eig.vectors.col(n - 1).to_vec()));
    }
    let (diag, off) = tridiagonalize(&h.hermitian_part());
    let lambda = top_eigenvalue_tridiagonal(&diag, &off);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut shift = lambda + 4.0 * f64::EPSILON * scale * n as f64;
    let mut lu = LuFactorization::factor(&h.shift(C64::new(-shift, 0.0)))?;
    if lu.has_zero_pivot() {
        shift += 16.0 * f64::EPSILON * scale * n as f64;
        lu = LuFactorization::factor(&h.shift(C64::new(-shift, 0.0)))?;
    }
    let mut x = start_vector(n);
    for _ in 0..4 {
        lu.solve_in_place(&mut x);
        let nx = vec_norm(&x);
        if !nx.is_finite() || nx == 0.0 {
            return Err(Error::NonConvergence { method: "inverse iteration", iterations: 4 });
        }
        vec_scale(&mut x, C64::new(1.0 / nx, 0.0));
    }
    Ok((lambda, x))
}

/// Householder reduction to a real symmetric tridiagonal matrix with the same
/// eigenvalues. Returns `(diagonal, |subdiagonal|)`.
fn tridiagonalize(h: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.rows();
    let mut a = h.clone();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let x: Vec<C64> = a.col(k)[k + 1..].to_vec();
        let xnorm = vec_norm(&x);
        if xnorm == 0.0 {
            off.push(0.0);
            continue;
        }
        let ph = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -ph * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let nv = vec_norm(&v);
        vec_scale(&mut v, C64::new(1.0 / nv, 0.0));
        off.push(alpha.norm());
        // trailing block T = a[k+1.., k+1..]; w = T v
        let mut w = vec![C64::new(0.0, 0.0); m];
        for (jj, &vj) in v.iter().enumerate() {
            let col = &a.col(k + 1 + jj)[k + 1..];
            crate::matrix::axpy(vj, col, &mut w);
        }
        let kappa = dot(&v, &w).re;
        let q: Vec<C64> = w.iter().zip(&v).map(|(&wi, &vi)| wi - vi * kappa).collect();
        // T <- T - 2 v q^H - 2 q v^H
        for jj in 0..m {
            let cq = q[jj].conj() * 2.0;
            let cv = v[jj].conj() * 2.0;
            let col = &mut a.col_mut(k + 1 + jj)[k + 1..];
            for ii in 0..m {
                col[ii] -= v[ii] * cq + q[ii] * cv;
            }
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    (diag, off)
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn top_eigenvalue_tridiagonal(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let radius = |i: usize| (if i > 0 { off[i - 1] } else { 0.0 }) + (if i + 1 < n { off[i] } else { 0.0 });
    let mut lo = (0..n).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..n).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_two_by_two() {
        let h = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let e = hermitian_eig(&h).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_is_sorted() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diag(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn complex_hermitian_residuals() {
        let n = 7;
        let b = ComplexMatrix::from_fn(n, n, |i, j| {
            C64::new(((i * 5 + j * 3) % 7) as f64 - 3.0, ((i * 2 + j) % 5) as f64 - 2.0)
        });
        let h = b.hermitian_part();
        let e = hermitian_eig(&h).unwrap();
        let scale = crate::linalg::norm2(&h).unwrap();
        for (i, &lam) in e.values.iter().enumerate() {
            let v = e.vectors.col(i);
            let hv = h.matvec(v);
            let r: f64 = hv.iter().zip(v).map(|(a, b)| (a - b * lam).norm_sqr()).sum::<f64>().sqrt();
            assert!(r <= 1e-11 * scale, "residual {r}");
        }
    }

    #[test]
    fn tridiagonal_route_matches_jacobi() {
        let n = 150;
        let b = ComplexMatrix::from_fn(n, n, |i, j| {
            let t = (i * 31 + j * 17) as f64;
            C64::new(t.sin(), (0.5 * t).cos())
        });
        let h = b.hermitian_part();
        let (lam, x) = largest_eigpair(&h).unwrap();
        let full = hermitian_eig(&h).unwrap();
        assert!((lam - full.values[n - 1]).abs() < 1e-11 * full.values[n - 1].abs());
        let hx = h.matvec(&x);
        let r: f64 = hx.iter().zip(&x).map(|(a, b)| (a - b * lam).norm_sqr()).sum::<f64>().sqrt();
        assert!(r < 1e-10 * lam.abs(), "residual {r}");
    }
}
