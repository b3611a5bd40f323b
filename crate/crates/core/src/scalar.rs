//! Scalar rational approximation of `log(1 + z)` and its Padé identities.
//!
//! The k-point Gauss-Legendre rule applied to
//! `log(1+z)/z = int_{-1}^{1} dx / (z(1+x) + 2)` gives the rational function
//! `R(z) = sum_i w_i / (z(1+x_i) + 2)`, which is the `[k-1/k]` Padé
//! approximant of `log(1+z)/z`. Its denominator is the terminating series
//! `2F1(-k, -k; -2k; -z)`.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::UNIT_ROUNDOFF;

/// Largest k for which the coefficient formulas are offered.
pub const MAX_PADE_ORDER: usize = 30;
const POLE_GUARD: f64 = 1e-300;

/// Real polynomial `c_0 + c_1 z + ... + c_d z^d` with nonzero `c_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    /// Drops trailing zeros; the zero polynomial keeps a single `0` entry.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * alpha).collect())
    }
}

/// Evaluates `R(z) = sum_i w_i / (z (1 + x_i) + 2)`, so that `z R(z) ~ log(1 + z)`.
pub fn eval_r(z: C64, rule: &QuadratureRule) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (x, w) in rule.iter() {
        let den = z * (1.0 + x) + 2.0;
        if den.norm() < POLE_GUARD {
            return Err(Error::PoleHit { re: z.re, im: z.im });
        }
        acc += w / den;
    }
    Ok(acc)
}

/// `(1 - sqrt(1+z)) / (1 + sqrt(1+z))` with the principal square root.
pub(crate) fn contraction_ratio(one_plus_z_root: C64) -> C64 {
    (1.0 - one_plus_z_root) / (1.0 + one_plus_z_root)
}

fn on_cut(z: C64) -> bool {
    z.im == 0.0 && z.re <= -1.0
}

/// Asymptotic error estimate of the k-point rule,
/// `2 pi |((1 - sqrt(1+z)) / (1 + sqrt(1+z)))^(2k+1)|`, floored at `u`.
pub fn scalar_error_bound(z: C64, k: usize) -> Result<f64> {
    if on_cut(z) {
        return Err(Error::BranchCut(z.re));
    }
    let r = contraction_ratio((1.0 + z).sqrt()).norm();
    Ok((2.0 * PI * r.powi(2 * k as i32 + 1)).max(UNIT_ROUNDOFF))
}

/// One row of the scalar error scan: `(z, |log(1+z) - z R(z)|, bound)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarErrorSample {
    pub z: f64,
    pub error: f64,
    pub bound: f64,
}

/// Actual error against the asymptotic estimate on `samples` equispaced real
/// points of `[zmin, zmax]` (both ends included).
pub fn scalar_error_scan(k: usize, zmin: f64, zmax: f64, samples: usize) -> Result<Vec<ScalarErrorSample>> {
    let rule = gauss_legendre(k)?;
    let step = if samples > 1 { (zmax - zmin) / (samples - 1) as f64 } else { 0.0 };
    (0..samples)
        .map(|i| {
            let z = if i + 1 == samples && samples > 1 { zmax } else { zmin + step * i as f64 };
            let zc = C64::new(z, 0.0);
            let approx = zc * eval_r(zc, &rule)?;
            let error = ((1.0 + zc).ln() - approx).norm();
            Ok(ScalarErrorSample { z, error, bound: scalar_error_bound(zc, k)? })
        })
        .collect()
}

/// Legendre polynomial `L_k(w)` by the three-term recurrence.
pub fn legendre_eval(k: usize, w: C64) -> C64 {
    let (mut prev, mut cur) = (C64::new(1.0, 0.0), w);
    if k == 0 {
        return prev;
    }
    for j in 1..k {
        let jf = j as f64;
        let next = (cur * w * (2.0 * jf + 1.0) - prev * jf) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn binomial(n: usize, k: usize) -> BigUint {
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

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rising factorial `(q)_j`.
fn pochhammer(q: &BigRational, j: usize) -> BigRational {
    (0..j).fold(BigRational::one(), |acc, i| acc * (q + rational(i as i64)))
}

fn check_pade_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if k > MAX_PADE_ORDER {
        return Err(Error::Overflow(format!("Padé order {k} exceeds {MAX_PADE_ORDER}")));
    }
    Ok(())
}

fn to_float(coeffs: &[BigRational]) -> PolynomialCoeffs {
    PolynomialCoeffs::new(coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
}

/// Exact coefficients (in z) of `2F1(-k, -k; -2k; -z)`,
/// `C(2k,k)^-1 sum_j C(k,j) C(2k-j,k) z^j`.
pub fn pade_denominator_exact(k: usize) -> Result<Vec<BigRational>> {
    check_pade_order(k)?;
    let central = BigInt::from(binomial(2 * k, k));
    Ok((0..=k)
        .map(|j| {
            let num = BigInt::from(binomial(k, j) * binomial(2 * k - j, k));
            BigRational::new(num, central.clone())
        })
        .collect())
}

pub fn pade_denominator_coeffs(k: usize) -> Result<PolynomialCoeffs> {
    Ok(to_float(&pade_denominator_exact(k)?))
}

/// Exact coefficients (in z) of the numerator `P_{k-1,k}^{[1,2]}(-z)`:
///
/// ```text
/// sum_{j<k} (sum_{l<=j} (1)_{j-l} (-k)_l (-k)_l / (l! (-2k)_l (2)_{j-l})) (-z)^j
/// ```
pub fn pade_numerator_exact(k: usize) -> Result<Vec<BigRational>> {
    check_pade_order(k)?;
    let one = rational(1);
    let two = rational(2);
    let mk = rational(-(k as i64));
    let m2k = rational(-2 * k as i64);
    Ok((0..k)
        .map(|j| {
            let inner = (0..=j).fold(BigRational::zero(), |acc, l| {
                let num = pochhammer(&one, j - l) * pochhammer(&mk, l) * pochhammer(&mk, l);
                let den = pochhammer(&one, l) * pochhammer(&m2k, l) * pochhammer(&two, j - l);
                acc + num / den
            });
            if j % 2 == 0 {
                inner
            } else {
                -inner
            }
        })
        .collect())
}

pub fn pade_numerator_coeffs(k: usize) -> Result<PolynomialCoeffs> {
    Ok(to_float(&pade_numerator_exact(k)?))
}

/// Denominator rebuilt from the Legendre form
/// `C(2k,k)^-1 (-z)^k L_k(-2/z - 1)`, expanded in powers of z.
pub fn pade_denominator_via_legendre(k: usize) -> Result<PolynomialCoeffs> {
    check_pade_order(k)?;
    // monomial coefficients of L_k
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 1.0];
    if k == 0 {
        cur = prev.clone();
    }
    for j in 1..k {
        let jf = j as f64;
        let mut next = vec![0.0; j + 2];
        for (m, c) in cur.iter().enumerate() {
            next[m + 1] += (2.0 * jf + 1.0) * c / (jf + 1.0);
        }
        for (m, c) in prev.iter().enumerate() {
            next[m] -= jf * c / (jf + 1.0);
        }
        prev = cur;
        cur = next;
    }
    // (-z)^k (-(2+z)/z)^m = (-1)^(k+m) z^(k-m) (2+z)^m
    let mut out = vec![0.0; k + 1];
    for (m, &a) in cur.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let sign = if (k + m) % 2 == 0 { 1.0 } else { -1.0 };
        for r in 0..=m {
            let b = binomial(m, r).to_f64().unwrap() * 2f64.powi((m - r) as i32);
            out[k - m + r] += sign * a * b;
        }
    }
    let central = binomial(2 * k, k).to_f64().unwrap();
    Ok(PolynomialCoeffs::new(out.into_iter().map(|c| c / central).collect()))
}

/// Denominator rebuilt from the quadrature poles, `prod_i (z (1 + x_i) + 2) / 2^k`.
pub fn pade_denominator_via_nodes(rule: &QuadratureRule) -> PolynomialCoeffs {
    rule.nodes()
        .iter()
        .fold(PolynomialCoeffs::new(vec![1.0]), |acc, &x| acc.mul(&PolynomialCoeffs::new(vec![1.0, 0.5 * (1.0 + x)])))
}

/// Partial sum of the Gauss series `sum_j (a)_j (b)_j / (c)_j z^j / j!` over
/// at most `terms` terms, stopping early when the series terminates.
pub fn hyp2f1_trunc(a: f64, b: f64, c: f64, z: C64, terms: usize) -> Result<C64> {
    let is_nonpos_int = |q: f64| q <= 0.0 && q.fract() == 0.0;
    let terminates_at = |q: f64| if is_nonpos_int(q) { Some((-q) as usize) } else { None };
    let stop = match (terminates_at(a), terminates_at(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(cstop) = terminates_at(c) {
        // (c)_j vanishes from j = -c + 1 on; the numerator has to vanish first.
        match stop {
            Some(s) if s <= cstop => {}
            _ => {
                return Err(Error::InvalidParams(format!(
                    "c = {c} is a non-positive integer and the series does not terminate before it"
                )))
            }
        }
    }
    if stop.is_none() && z.norm() >= 1.0 {
        return Err(Error::InvalidParams(format!("|z| = {} outside the disk of convergence", z.norm())));
    }
    let n = stop.map_or(terms, |s| terms.min(s + 1));
    let mut term = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..n {
        sum += term;
        let jf = j as f64;
        term = term * z * ((a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)));
    }
    Ok(sum)
}
