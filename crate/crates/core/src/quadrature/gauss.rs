//! Gauss rules from three-term recurrences (Golub–Welsch).
//!
//! Nodes start as eigenvalues of the symmetric Jacobi matrix, are polished by
//! Newton steps on the degree-`N` orthogonal polynomial, and the weights come
//! from the Christoffel function `1 / Σ p̂_k(x)²` evaluated with running
//! rescaling so that rules with a few hundred nodes neither overflow nor lose
//! relative accuracy in the far-out weights.

use nalgebra::{DMatrix, SymmetricEigen};

/// Recurrence coefficients of the orthonormal family:
/// `b_{k+1} p̂_{k+1} = (x − a_k) p̂_k − b_k p̂_{k−1}`, with `mu0 = ∫ weight`.
pub(crate) struct Recurrence {
    pub a: Vec<f64>,
    /// `b[k]` couples degrees `k-1` and `k`; `b[0]` is unused.
    pub b: Vec<f64>,
    pub mu0: f64,
}

impl Recurrence {
    pub fn laguerre(n: usize, alpha: f64) -> Self {
        let a = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
        let b = (0..=n)
            .map(|k| {
                let k = k as f64;
                (k * (k + alpha)).max(0.0).sqrt()
            })
            .collect();
        Recurrence {
            a,
            b,
            mu0: crate::special::gamma(alpha + 1.0),
        }
    }

    pub fn hermite(n: usize) -> Self {
        Recurrence {
            a: vec![0.0; n],
            b: (0..=n).map(|k| (k as f64 / 2.0).sqrt()).collect(),
            mu0: std::f64::consts::PI.sqrt(),
        }
    }

    pub fn legendre(n: usize) -> Self {
        Recurrence {
            a: vec![0.0; n],
            b: (0..=n)
                .map(|k| {
                    let k = k as f64;
                    k / (4.0 * k * k - 1.0).sqrt()
                })
                .collect(),
            mu0: 2.0,
        }
    }
}

const RESCALE: f64 = 1e150;

/// Value and derivative of the (unnormalised) degree-`n` polynomial at `x`,
/// both multiplied by the same positive factor.
fn poly_and_derivative(rec: &Recurrence, n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..n {
        let bk = if k == 0 { 0.0 } else { rec.b[k] };
        let p_next = ((x - rec.a[k]) * p - bk * p_prev) / rec.b[k + 1];
        let d_next = ((x - rec.a[k]) * d + p - bk * d_prev) / rec.b[k + 1];
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let big = p.abs().max(d.abs());
        if big > RESCALE {
            p /= RESCALE;
            p_prev /= RESCALE;
            d /= RESCALE;
            d_prev /= RESCALE;
        }
    }
    (p, d)
}

/// Christoffel weight `1 / Σ_{k<n} p̂_k(x)²`.
fn christoffel_weight(rec: &Recurrence, n: usize, x: f64) -> f64 {
    let mut p_prev = 0.0;
    let mut p = 1.0 / rec.mu0.sqrt();
    let mut sum = p * p;
    // Everything below is stored divided by exp(log_scale).
    let mut log_scale = 0.0_f64;
    for k in 0..n.saturating_sub(1) {
        let bk = if k == 0 { 0.0 } else { rec.b[k] };
        let p_next = ((x - rec.a[k]) * p - bk * p_prev) / rec.b[k + 1];
        p_prev = p;
        p = p_next;
        sum += p * p;
        if p.abs() > RESCALE {
            p /= RESCALE;
            p_prev /= RESCALE;
            sum /= RESCALE * RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    (-sum.ln() - 2.0 * log_scale).exp()
}

/// Gauss nodes and weights for `n` points of the family described by `rec`.
pub(crate) fn gauss_rule(rec: &Recurrence, n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            rec.a[i]
        } else if i + 1 == j {
            rec.b[j]
        } else if j + 1 == i {
            rec.b[i]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (p, d) = poly_and_derivative(rec, n, *x);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let step = p / d;
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
                break;
            }
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| christoffel_weight(rec, n, x))
        .collect();
    (nodes, weights)
}
