use crate::error::{Error, Result};
use crate::linalg::lu::LuFactorization;
use crate::matrix::ComplexMatrix;

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] =
    [17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
// 1-norm thresholds for degrees 3, 5, 7, 9, 13.
const THETA: [f64; 5] =
    [1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1, 2.097847961257068, 5.371920351148152];

/// Past this 1-norm the result cannot be represented in double precision.
const MAX_NORM: f64 = 700.0 * 1024.0;

/// Reference matrix exponential: scaling and squaring with a diagonal Padé
/// approximant of degree 3, 5, 7, 9 or 13 picked from the 1-norm.
pub fn expm_ref(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch("expm needs a square matrix".into()));
    }
    let n = x.rows();
    let norm = x.one_norm();
    if !norm.is_finite() || norm > MAX_NORM {
        return Err(Error::Overflow(format!("1-norm {norm:.3e} too large for expm")));
    }
    let ident = ComplexMatrix::identity(n);
    let small: [(&[f64], f64); 4] = [(&PADE3, THETA[0]), (&PADE5, THETA[1]), (&PADE7, THETA[2]), (&PADE9, THETA[3])];
    for (coeffs, theta) in small {
        if norm <= theta {
            let (u, v) = pade_odd_even(x, coeffs, &ident);
            return solve_pade(&u, &v);
        }
    }
    let s = if norm > THETA[4] { (norm / THETA[4]).log2().ceil().max(0.0) as u32 } else { 0 };
    let scaled = x.scale_real(0.5f64.powi(s as i32));
    let (u, v) = pade13(&scaled, &ident);
    let mut r = solve_pade(&u, &v)?;
    for _ in 0..s {
        r = r.matmul(&r);
        if !r.is_finite() {
            return Err(Error::Overflow("expm squaring overflowed".into()));
        }
    }
    Ok(r)
}

fn lincomb(terms: &[(f64, &ComplexMatrix)]) -> ComplexMatrix {
    let mut out = terms[0].1.scale_real(terms[0].0);
    for &(c, m) in &terms[1..] {
        for (o, z) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
            *o += z * c;
        }
    }
    out
}

fn pade_odd_even(x: &ComplexMatrix, b: &[f64], ident: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let x2 = x.matmul(x);
    let mut powers = vec![ident.clone(), x2.clone()];
    while powers.len() * 2 < b.len() {
        let next = powers.last().unwrap().matmul(&x2);
        powers.push(next);
    }
    let odd: Vec<(f64, &ComplexMatrix)> = powers.iter().enumerate().map(|(j, p)| (b[2 * j + 1], p)).collect();
    let even: Vec<(f64, &ComplexMatrix)> = powers.iter().enumerate().map(|(j, p)| (b[2 * j], p)).collect();
    let u = x.matmul(&lincomb(&odd));
    (u, lincomb(&even))
}

fn pade13(x: &ComplexMatrix, ident: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let b = &PADE13;
    let x2 = x.matmul(x);
    let x4 = x2.matmul(&x2);
    let x6 = x4.matmul(&x2);
    let u_hi = x6.matmul(&lincomb(&[(b[13], &x6), (b[11], &x4), (b[9], &x2)]));
    let u_inner = &u_hi + &lincomb(&[(b[7], &x6), (b[5], &x4), (b[3], &x2), (b[1], ident)]);
    let u = x.matmul(&u_inner);
    let v_hi = x6.matmul(&lincomb(&[(b[12], &x6), (b[10], &x4), (b[8], &x2)]));
    let v = &v_hi + &lincomb(&[(b[6], &x6), (b[4], &x4), (b[2], &x2), (b[0], ident)]);
    (u, v)
}

fn solve_pade(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let q = v - u;
    let p = v + u;
    LuFactorization::factor(&q)?.solve(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;

    #[test]
    fn zero_and_scalar() {
        let e = expm_ref(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(3));
        let e = expm_ref(&ComplexMatrix::from_real_diag(&[1.0])).unwrap();
        assert!((e[(0, 0)].re - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        let t = 2.3;
        let x = ComplexMatrix::from_real_rows(&[&[0.0, t], &[-t, 0.0]]).unwrap();
        let e = expm_ref(&x).unwrap();
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-14);
        assert!((e[(0, 1)].re - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn inverse_pair() {
        let x = ComplexMatrix::from_fn(6, 6, |i, j| {
            C64::new(((i * 3 + j * 5) % 7) as f64 / 7.0 - 0.4, ((i + j) % 3) as f64 * 0.2)
        });
        let p = expm_ref(&x).unwrap().matmul(&expm_ref(&x.scale_real(-1.0)).unwrap());
        assert!((&p - &ComplexMatrix::identity(6)).max_abs() < 1e-12);
    }

    #[test]
    fn overflow_is_reported() {
        let x = ComplexMatrix::from_real_diag(&[1e7, 1.0]);
        assert!(matches!(expm_ref(&x), Err(Error::Overflow(_))));
    }
}
