//! Test matrices of the numerical experiments.
//!
//! Constructions (0-based indices):
//!
//! * `forsythe(n, alpha, lambda)`: `lambda` on the diagonal, ones on the
//!   superdiagonal, `alpha` in the corner `(n-1, 0)`.
//! * `forsythe_exp`: `expm` of the above.
//! * `rotation(theta)`: `[[cos t, sin t], [-sin t, cos t]]`.
//! * `triw_shift(n)`: ones on the superdiagonal, diagonal
//!   `-(n-1)/2, ..., (n-1)/2`, then `expm`.
//! * `parter(n)`: `1 / (i - j + 1/2)`.
//! * `hanowa_neg(n)`: minus the Hanowa matrix `[[-I, -D], [D, -I]]` with
//!   `D = diag(1..n/2)`, i.e. `[[I, D], [-D, I]]`; eigenvalues `1 +- i m`.
//! * `dorr(n, theta)`: tridiagonal, row-diagonally dominant convection-diffusion
//!   operator. With `h = 1/(n+1)`, `m = floor((n+1)/2)`, `t = theta/h^2`, for
//!   1-based `i <= m`: `c_i = -t`, `e_i = c_i - (1/2 - i h)/h`; for `i > m`:
//!   `e_i = -t`, `c_i = e_i + (1/2 - i h)/h`; always `d_i = -(c_i + e_i)`.
//!   Row `i` holds `c_i`, `d_i`, `e_i` left of, on and right of the diagonal.
//! * `toeplitz_t(n)`: 2.5 on the diagonal, -1 on the first subdiagonal, 1 on
//!   the fifth superdiagonal; symbol `a(theta) = 2.5 - e^{i theta} + e^{-5 i theta}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::expm_ref;
use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Forsythe { alpha: f64, lambda: f64 },
    ForsytheExp { alpha: f64, lambda: f64 },
    Rotation { theta: f64 },
    TriwShift,
    Parter,
    HanowaNeg,
    Dorr { theta: f64 },
    ToeplitzT,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GallerySpec {
    pub family: Family,
    pub n: usize,
}

pub const FAMILY_NAMES: [&str; 8] =
    ["forsythe", "forsythe_exp", "rotation", "triw_shift", "parter", "hanowa_neg", "dorr", "toeplitz_t"];

impl GallerySpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self { family, n }
    }

    /// Parses a family name with its numeric parameters; omitted parameters
    /// take the classical defaults (`forsythe`: `alpha = sqrt(eps)`,
    /// `lambda = 0`; `dorr`: `theta = 0.01`; `rotation`: `theta = 100`).
    pub fn parse(name: &str, n: usize, params: &[f64]) -> Result<Self> {
        let get = |i: usize, default: f64| params.get(i).copied().unwrap_or(default);
        let max_params = |m: usize| {
            if params.len() > m {
                Err(Error::BadParams(format!("{name} takes at most {m} parameters, got {}", params.len())))
            } else {
                Ok(())
            }
        };
        let family = match name {
            "forsythe" | "forsythe_exp" => {
                max_params(2)?;
                let (alpha, lambda) = (get(0, f64::EPSILON.sqrt()), get(1, 0.0));
                if name == "forsythe" {
                    Family::Forsythe { alpha, lambda }
                } else {
                    Family::ForsytheExp { alpha, lambda }
                }
            }
            "rotation" => {
                max_params(1)?;
                Family::Rotation { theta: get(0, 100.0) }
            }
            "triw_shift" => {
                max_params(0)?;
                Family::TriwShift
            }
            "parter" => {
                max_params(0)?;
                Family::Parter
            }
            "hanowa_neg" => {
                max_params(0)?;
                Family::HanowaNeg
            }
            "dorr" => {
                max_params(1)?;
                Family::Dorr { theta: get(0, 0.01) }
            }
            "toeplitz_t" => {
                max_params(0)?;
                Family::ToeplitzT
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        let spec = Self { family, n };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::BadParams("dimension must be at least 1".into()));
        }
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::BadParams(format!("{what} must be finite")))
            }
        };
        match self.family {
            Family::Forsythe { alpha, lambda } | Family::ForsytheExp { alpha, lambda } => {
                finite(alpha, "alpha")?;
                finite(lambda, "lambda")?;
            }
            Family::Rotation { theta } => {
                finite(theta, "theta")?;
                if n != 2 {
                    return Err(Error::BadParams(format!("rotation is 2x2, got n = {n}")));
                }
            }
            Family::HanowaNeg if n % 2 != 0 => {
                return Err(Error::BadParams(format!("hanowa needs an even dimension, got {n}")));
            }
            Family::Dorr { theta } => {
                finite(theta, "theta")?;
                if theta <= 0.0 {
                    return Err(Error::BadParams(format!("dorr needs theta > 0, got {theta}")));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

pub fn build(spec: &GallerySpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n;
    Ok(match spec.family {
        Family::Forsythe { alpha, lambda } => forsythe(n, alpha, lambda),
        Family::ForsytheExp { alpha, lambda } => expm_ref(&forsythe(n, alpha, lambda))?,
        Family::Rotation { theta } => rotation(theta),
        Family::TriwShift => expm_ref(&triw_shift_generator(n))?,
        Family::Parter => parter(n),
        Family::HanowaNeg => hanowa_neg(n),
        Family::Dorr { theta } => dorr(n, theta),
        Family::ToeplitzT => toeplitz_t(n),
    })
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn forsythe(n: usize, alpha: f64, lambda: f64) -> ComplexMatrix {
    let mut a = ComplexMatrix::from_real_diag(&vec![lambda; n]);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = real(1.0);
    }
    a[(n - 1, 0)] += real(alpha);
    a
}

pub fn rotation(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real_rows(&[&[c, s], &[-s, c]]).expect("finite angle")
}

/// The matrix whose exponential is `triw_shift(n)`.
pub fn triw_shift_generator(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            real(i as f64 - (n as f64 - 1.0) / 2.0)
        } else if j == i + 1 {
            real(1.0)
        } else {
            real(0.0)
        }
    })
}

pub fn parter(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| real(1.0 / (i as f64 - j as f64 + 0.5)))
}

pub fn hanowa_neg(n: usize) -> ComplexMatrix {
    let m = n / 2;
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            real(1.0)
        } else if i < m && j == i + m {
            real((i + 1) as f64)
        } else if i >= m && j + m == i {
            real(-((j + 1) as f64))
        } else {
            real(0.0)
        }
    })
}

pub fn dorr(n: usize, theta: f64) -> ComplexMatrix {
    let h = 1.0 / (n as f64 + 1.0);
    let m = (n + 1) / 2;
    let term = theta / (h * h);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in 1..=n {
        let drift = (0.5 - i as f64 * h) / h;
        if i <= m {
            c[i - 1] = -term;
            e[i - 1] = c[i - 1] - drift;
        } else {
            e[i - 1] = -term;
            c[i - 1] = e[i - 1] + drift;
        }
        d[i - 1] = -(c[i - 1] + e[i - 1]);
    }
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            real(d[i])
        } else if j + 1 == i {
            real(c[i])
        } else if j == i + 1 {
            real(e[i])
        } else {
            real(0.0)
        }
    })
}

pub fn toeplitz_t(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            real(2.5)
        } else if i == j + 1 {
            real(-1.0)
        } else if j == i + 5 {
            real(1.0)
        } else {
            real(0.0)
        }
    })
}

/// Symbol `a(theta) = 2.5 - e^{i theta} + e^{-5 i theta}` of `toeplitz_t`.
pub fn toeplitz_symbol(theta: f64) -> C64 {
    2.5 - C64::from_polar(1.0, theta) + C64::from_polar(1.0, -5.0 * theta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolRange {
    pub curve: Vec<C64>,
    pub min_abs: f64,
    pub max_abs: f64,
}

/// Samples the symbol at `n_samples` equispaced angles of `[-pi, pi]`
/// (both ends included).
pub fn symbol_range(n_samples: usize) -> Result<SymbolRange> {
    if n_samples < 16 {
        return Err(Error::InvalidParams(format!("need at least 16 samples, got {n_samples}")));
    }
    let curve: Vec<C64> =
        (0..n_samples).map(|j| toeplitz_symbol(-PI + 2.0 * PI * j as f64 / (n_samples - 1) as f64)).collect();
    let (min_abs, max_abs) =
        curve.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), z| (lo.min(z.norm()), hi.max(z.norm())));
    Ok(SymbolRange { curve, min_abs, max_abs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toeplitz_pattern() {
        let t = toeplitz_t(8);
        assert_eq!(t[(0, 0)], real(2.5));
        assert_eq!(t[(1, 0)], real(-1.0));
        assert_eq!(t[(0, 5)], real(1.0));
        let nnz = t.as_slice().iter().filter(|z| z.norm() != 0.0).count();
        assert_eq!(nnz, 8 + 7 + 3);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = rotation(100.0);
        assert_eq!(r[(0, 1)], real(100f64.sin()));
        let p = r.transpose().matmul(&r);
        assert!((&p - &ComplexMatrix::identity(2)).max_abs() <= 1e-15);
    }

    #[test]
    fn forsythe_structure() {
        let a = forsythe(10, 1e-10, 0.0);
        assert_eq!(a[(9, 0)], real(1e-10));
        assert_eq!(a[(3, 4)], real(1.0));
        assert!(a.diag().iter().all(|z| *z == real(0.0)));
    }

    #[test]
    fn dorr_rows() {
        let a = dorr(10, 0.05);
        for i in 0..10usize {
            for j in 0..10usize {
                if i.abs_diff(j) > 1 {
                    assert_eq!(a[(i, j)], real(0.0));
                }
            }
        }
        // interior rows sum to zero
        for i in 1..9 {
            let s: f64 = (0..10).map(|j| a[(i, j)].re).sum();
            assert!(s.abs() < 1e-9 * a.max_abs());
        }
    }

    #[test]
    fn symbol_values() {
        assert!((toeplitz_symbol(0.0) - 2.5).norm() < 1e-15);
        assert!((toeplitz_symbol(PI) - 2.5).norm() < 1e-14);
        let r = symbol_range(10_000).unwrap();
        assert!(r.max_abs <= 4.5 && r.min_abs >= 0.5);
        assert!(symbol_range(8).is_err());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(GallerySpec::parse("magic", 4, &[]).unwrap_err(), Error::UnknownFamily("magic".into()));
        assert!(matches!(GallerySpec::parse("hanowa_neg", 5, &[]), Err(Error::BadParams(_))));
        assert!(matches!(GallerySpec::parse("rotation", 3, &[]), Err(Error::BadParams(_))));
        assert!(matches!(GallerySpec::parse("parter", 0, &[]), Err(Error::BadParams(_))));
        assert!(GallerySpec::parse("dorr", 10, &[0.05]).is_ok());
    }
}
