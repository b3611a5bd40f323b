use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, ComplexMatrix, C64, ZERO};
use crate::UNIT_ROUNDOFF;

/// Below this order the factorisation and multi-column solves stay on the
/// calling thread.
const PAR_MIN_ORDER: usize = 96;

/// LU factorisation with partial (row) pivoting, `P A = L U`.
///
/// `L` is unit lower triangular and stored below the diagonal of `factors`;
/// `U` occupies the diagonal and above. An exactly zero pivot column is left
/// uneliminated; callers detect it through [`LuFactorization::is_singular`].
#[derive(Debug, Clone)]
pub struct LuFactorization {
    factors: ComplexMatrix,
    perm: Vec<usize>,
    min_pivot: f64,
    norm: f64,
}

impl LuFactorization {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!("LU needs a square matrix, got {}x{}", a.rows(), a.cols())));
        }
        let n = a.rows();
        let norm = a.one_norm();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, pmag) = lu.col(k)[k..]
                .iter()
                .enumerate()
                .map(|(i, z)| (i + k, z.norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            min_pivot = min_pivot.min(pmag);
            if p != k {
                perm.swap(k, p);
                for j in 0..n {
                    let col = lu.col_mut(j);
                    col.swap(k, p);
                }
            }
            if pmag == 0.0 {
                continue;
            }
            let inv = lu[(k, k)].inv();
            for z in &mut lu.col_mut(k)[k + 1..] {
                *z *= inv;
            }
            if k + 1 == n {
                break;
            }
            let data = lu.as_mut_slice();
            let (left, right) = data.split_at_mut((k + 1) * n);
            let lcol = &left[k * n + k + 1..(k + 1) * n];
            let update = |cj: &mut [C64]| {
                let u = cj[k];
                if u != ZERO {
                    axpy(-u, lcol, &mut cj[k + 1..]);
                }
            };
            if n >= PAR_MIN_ORDER {
                right.par_chunks_mut(n).for_each(update);
            } else {
                right.chunks_mut(n).for_each(update);
            }
        }
        if n == 0 {
            min_pivot = 0.0;
        }
        Ok(Self { factors: lu, perm, min_pivot, norm })
    }

    pub fn order(&self) -> usize {
        self.factors.rows()
    }

    /// Smallest pivot magnitude encountered.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    /// Pivot threshold `n u ||A||_1` below which the system counts as singular.
    pub fn pivot_threshold(&self) -> f64 {
        self.order() as f64 * UNIT_ROUNDOFF * self.norm
    }

    pub fn is_singular(&self) -> bool {
        self.min_pivot <= self.pivot_threshold() || self.min_pivot == 0.0
    }

    pub fn has_zero_pivot(&self) -> bool {
        self.min_pivot == 0.0
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.is_singular() {
            Err(Error::SingularSystem { pivot: self.min_pivot, threshold: self.pivot_threshold() })
        } else {
            Ok(())
        }
    }

    /// log |det A|, summed over the pivots to avoid overflow.
    pub fn log_abs_det(&self) -> f64 {
        self.factors.diag().iter().map(|z| z.norm().ln()).sum()
    }

    /// Solves `A x = b` in place. Assumes no zero pivot.
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.order();
        let tmp: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&tmp);
        for k in 0..n {
            let bk = b[k];
            if bk != ZERO {
                axpy(-bk, &self.factors.col(k)[k + 1..], &mut b[k + 1..]);
            }
        }
        for k in (0..n).rev() {
            b[k] /= self.factors[(k, k)];
            let bk = b[k];
            if bk != ZERO {
                axpy(-bk, &self.factors.col(k)[..k], &mut b[..k]);
            }
        }
    }

    /// Solves `A^H x = b` in place. Assumes no zero pivot.
    pub fn solve_adjoint_in_place(&self, b: &mut [C64]) {
        let n = self.order();
        for k in 0..n {
            let s = dot(&self.factors.col(k)[..k], &b[..k]);
            b[k] = (b[k] - s) / self.factors[(k, k)].conj();
        }
        for k in (0..n).rev() {
            let s = dot(&self.factors.col(k)[k + 1..], &b[k + 1..]);
            b[k] -= s;
        }
        let mut x = vec![ZERO; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = b[i];
        }
        b.copy_from_slice(&x);
    }

    /// Solves `A X = B`, failing with `SingularSystem` for tiny pivots.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check()?;
        Ok(self.solve_unchecked(b))
    }

    pub(crate) fn solve_unchecked(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.rows(), self.order(), "right-hand side has wrong row count");
        let mut x = b.clone();
        let n = self.order();
        if n == 0 {
            return x;
        }
        if n >= PAR_MIN_ORDER {
            x.as_mut_slice().par_chunks_mut(n).for_each(|c| self.solve_in_place(c));
        } else {
            x.as_mut_slice().chunks_mut(n).for_each(|c| self.solve_in_place(c));
        }
        x
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve(&ComplexMatrix::identity(self.order()))
    }

    /// Unit lower factor `L`.
    pub fn lower(&self) -> ComplexMatrix {
        let n = self.order();
        ComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.factors[(i, j)],
            std::cmp::Ordering::Equal => C64::new(1.0, 0.0),
            std::cmp::Ordering::Less => ZERO,
        })
    }

    /// Upper factor `U`.
    pub fn upper(&self) -> ComplexMatrix {
        let n = self.order();
        ComplexMatrix::from_fn(n, n, |i, j| if i <= j { self.factors[(i, j)] } else { ZERO })
    }

    /// Row permutation: row `i` of `P A` is row `perm[i]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!("A is {}x{} but B has {} rows", a.rows(), a.cols(), b.rows())));
    }
    LuFactorization::factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let b = ComplexMatrix::from_fn(3, 2, |i, j| C64::new(i as f64, j as f64 - 1.0));
        let x = lu_solve(&ComplexMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let a = ComplexMatrix::from_real_diag(&[2.0, 4.0]);
        let b = ComplexMatrix::new(2, 1, vec![ONE, ONE]).unwrap();
        let x = lu_solve(&a, &b).unwrap();
        assert_eq!(x.as_slice(), &[c(0.5), c(0.25)]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        let err = lu_solve(&a, &ComplexMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { .. }));
    }

    #[test]
    fn factors_reconstruct_permuted_matrix() {
        let a =
            ComplexMatrix::from_fn(6, 6, |i, j| C64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64));
        let lu = LuFactorization::factor(&a).unwrap();
        let pa = ComplexMatrix::from_fn(6, 6, |i, j| a[(lu.permutation()[i], j)]);
        let r = &(&lu.lower() * &lu.upper()) - &pa;
        assert!(r.frobenius_norm() <= 1e-13 * a.frobenius_norm());
    }

    #[test]
    fn adjoint_solve_matches_explicit_adjoint() {
        let a = ComplexMatrix::from_fn(5, 5, |i, j| {
            C64::new(1.0 / (i + j + 1) as f64 + if i == j { 2.0 } else { 0.0 }, (i as f64 - j as f64) * 0.1)
        });
        let lu = LuFactorization::factor(&a).unwrap();
        let b: Vec<C64> = (0..5).map(|i| C64::new(i as f64, 1.0)).collect();
        let mut x = b.clone();
        lu.solve_adjoint_in_place(&mut x);
        let r: Vec<C64> = a.adjoint().matvec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(crate::matrix::vec_norm(&r) < 1e-13);
    }
}
