//! Gauss-Legendre rules on [-1, 1].

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 200;
const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// k-point Gauss-Legendre rule: ascending nodes in (-1, 1) and positive
/// weights, both symmetric about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// `(L_k(x), L_{k-1}(x))` by the three-term recurrence.
fn legendre_pair(k: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn legendre_derivative(k: usize, x: f64, lk: f64, lkm1: f64) -> f64 {
    k as f64 * (x * lk - lkm1) / (x * x - 1.0)
}

/// Nodes and weights of the k-point Gauss-Legendre rule.
///
/// Each positive root of `L_k` is found by Newton's method started from the
/// Chebyshev-type guess `cos(pi (i - 1/4) / (k + 1/2))`; negative nodes are
/// mirrored so the rule is exactly symmetric. Weights are
/// `2 / ((1 - x^2) L_k'(x)^2)`.
pub fn gauss_legendre(k: usize) -> Result<QuadratureRule> {
    if k == 0 || k > MAX_ORDER {
        return Err(Error::InvalidOrder(k));
    }
    let half = k / 2;
    let mut pos_nodes = Vec::with_capacity(half);
    let mut pos_weights = Vec::with_capacity(half);
    for i in 1..=half {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (k as f64 + 0.5)).cos();
        let mut iter = 0;
        loop {
            let (lk, lkm1) = legendre_pair(k, x);
            let dx = lk / legendre_derivative(k, x, lk, lkm1);
            x -= dx;
            iter += 1;
            if dx.abs() <= NEWTON_TOL || iter >= NEWTON_MAX_ITER {
                break;
            }
        }
        let (lk, lkm1) = legendre_pair(k, x);
        let d = legendre_derivative(k, x, lk, lkm1);
        pos_nodes.push(x);
        pos_weights.push(2.0 / ((1.0 - x * x) * d * d));
    }
    // pos_nodes are descending; the negative half mirrors them.
    let mut nodes: Vec<f64> = pos_nodes.iter().map(|x| -x).collect();
    let mut weights = pos_weights.clone();
    if k % 2 == 1 {
        let (lk, lkm1) = legendre_pair(k, 0.0);
        let d = legendre_derivative(k, 0.0, lk, lkm1);
        nodes.push(0.0);
        weights.push(2.0 / (d * d));
    }
    nodes.extend(pos_nodes.iter().rev());
    weights.extend(pos_weights.iter().rev());
    Ok(QuadratureRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_closed_forms() {
        let r1 = gauss_legendre(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert!((r1.weights()[0] - 2.0).abs() < 1e-15);

        let r2 = gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r2.nodes()[0] + x).abs() < 1e-15 && (r2.nodes()[1] - x).abs() < 1e-15);
        assert!(r2.weights().iter().all(|w| (w - 1.0).abs() < 1e-15));

        let r3 = gauss_legendre(3).unwrap();
        let x = (0.6f64).sqrt();
        assert!((r3.nodes()[0] + x).abs() < 1e-15 && r3.nodes()[1] == 0.0);
        assert!((r3.nodes()[2] - x).abs() < 1e-15);
        assert!((r3.weights()[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((r3.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_orders() {
        assert_eq!(gauss_legendre(0).unwrap_err(), Error::InvalidOrder(0));
        assert_eq!(gauss_legendre(201).unwrap_err(), Error::InvalidOrder(201));
        assert!(gauss_legendre(200).is_ok());
    }

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for k in 1..=MAX_ORDER {
            let r = gauss_legendre(k).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() <= 1e-14, "k={k} sum={s}");
            for i in 0..k {
                assert!((r.nodes()[i] + r.nodes()[k - 1 - i]).abs() <= 1e-14);
                assert_eq!(r.weights()[i], r.weights()[k - 1 - i]);
                assert!(r.weights()[i] > 0.0);
            }
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(r.nodes()[0] > -1.0 && r.nodes()[k - 1] < 1.0);
        }
    }
}
