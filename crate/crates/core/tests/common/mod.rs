//! Reference computations shared by the integration tests. None of them go
//! through the quadrature or the parameter selection under test.

#![allow(dead_code)]

use gllog::linalg::{lu_solve, sqrtm};
use gllog::{ComplexMatrix, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, complex: bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
        C64::new(rng.gen_range(-1.0..1.0), im)
    })
}

/// Unitary factor of a random complex matrix by Gram-Schmidt.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, true);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.col(j).to_vec();
        for _ in 0..2 {
            for q in &cols {
                let h: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= h * y;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / nrm).collect());
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// `log(A)` by repeated square roots until `||A_s - I||_F <= 0.6` followed by
/// the Gregory series `2 sum T^{2j+1} / (2j+1)`, `T = (A_s - I)(A_s + I)^{-1}`.
pub fn gregory_log(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let ident = ComplexMatrix::identity(n);
    let mut b = a.clone();
    let mut s = 0;
    while (&b - &ident).frobenius_norm() > 0.6 {
        b = sqrtm(&b).expect("square root");
        s += 1;
        assert!(s < 60, "square roots do not approach I");
    }
    let num = b.shift(C64::new(-1.0, 0.0));
    let den = b.shift(C64::new(1.0, 0.0));
    // T = num * den^{-1}; num and den commute
    let t = lu_solve(&den, &num).expect("solve");
    let t2 = t.matmul(&t);
    let mut power = t.clone();
    let mut sum = t.clone();
    for j in 1..200 {
        power = power.matmul(&t2);
        let term = power.scale_real(1.0 / (2 * j + 1) as f64);
        sum = &sum + &term;
        if term.frobenius_norm() <= 1e-18 * sum.frobenius_norm() {
            break;
        }
    }
    sum.scale_real(2.0 * 2f64.powi(s))
}

/// Exact `log` of `-hanowa(n)`: each pair `(p, p + n/2)` forms the block
/// `[[1, j], [-j, 1]]` with `j = p + 1`, whose log is
/// `[[ln r, atan j], [-atan j, ln r]]`, `r = sqrt(1 + j^2)`.
pub fn hanowa_neg_log(n: usize) -> ComplexMatrix {
    let m = n / 2;
    let mut x = ComplexMatrix::zeros(n, n);
    for p in 0..m {
        let j = (p + 1) as f64;
        let lr = 0.5 * (1.0 + j * j).ln();
        x[(p, p)] = C64::new(lr, 0.0);
        x[(p + m, p + m)] = C64::new(lr, 0.0);
        x[(p, p + m)] = C64::new(j.atan(), 0.0);
        x[(p + m, p)] = C64::new(-j.atan(), 0.0);
    }
    x
}

/// Principal angle of `e^{i theta}`.
pub fn principal_angle(theta: f64) -> f64 {
    theta.sin().atan2(theta.cos())
}

/// `sum_i w_i z / (2 + (1 + x_i) z)` with nodes and weights supplied.
pub fn quadrature_log1p(z: C64, nodes: &[f64], weights: &[f64]) -> C64 {
    nodes.iter().zip(weights).map(|(&x, &w)| w * z / (2.0 + (1.0 + x) * z)).sum()
}

/// `2 pi |((1 - sqrt(1+z)) / (1 + sqrt(1+z)))^{2k+1}|`.
pub fn asymptotic_bound(z: C64, k: usize) -> f64 {
    let r = (1.0 + z).sqrt();
    2.0 * std::f64::consts::PI * ((1.0 - r) / (1.0 + r)).norm().powi(2 * k as i32 + 1)
}
