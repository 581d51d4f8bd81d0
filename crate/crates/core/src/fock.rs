//! Truncated Fock spaces `F^λ` on `ℂⁿ`.
//!
//! Coefficients are taken with respect to the orthonormal basis
//! `e_α = z^α / ‖z^α‖`, where `‖z^α‖² = α! (2/|λ|)^{|α|}`.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_gaussian, GaussianRule};
use crate::special::{binomial, ln_factorial};

/// Exponent vector `α ∈ ℕⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ln α!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&a| ln_factorial(a)).sum()
    }

    /// `z^α`.
    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        self.0.iter().zip(z).map(|(&a, &zj)| zj.powu(a)).product()
    }

    /// `α + e_j`.
    pub fn raised(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.0[j] += 1;
        out
    }

    /// `α − e_j`, if non-negative.
    pub fn lowered(&self, j: usize) -> Option<Self> {
        if self.0[j] == 0 {
            return None;
        }
        let mut out = self.clone();
        out.0[j] -= 1;
        Some(out)
    }
}

/// `‖z^α‖²_{F^λ} = α! (2/|λ|)^{|α|}`.
pub fn monomial_norm_sq(alpha: &MultiIndex, lambda: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::param("lambda", "must be finite and non-zero"));
    }
    Ok((alpha.ln_factorial() + alpha.degree() as f64 * (2.0 / lambda.abs()).ln()).exp())
}

/// Multi-indices of degree `≤ M` in graded order, descending lexicographic within a degree.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTruncation {
    n: usize,
    max_degree: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

fn push_degree(n: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == n {
        prefix.push(degree);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=degree).rev() {
        prefix.push(first);
        push_degree(n, degree - first, prefix, out);
        prefix.pop();
    }
}

impl FockTruncation {
    pub fn new(n: usize, max_degree: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        let mut indices = Vec::with_capacity(binomial(n + max_degree, n));
        for d in 0..=max_degree as u32 {
            push_degree(n, d, &mut Vec::with_capacity(n), &mut indices);
        }
        let lookup = indices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        Ok(Arc::new(FockTruncation {
            n,
            max_degree,
            indices,
            lookup,
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Number of basis elements of degree `≤ d`.
    pub fn block_len(&self, d: usize) -> usize {
        binomial(self.n + d.min(self.max_degree), self.n)
    }

    /// Values `e_α(w)` of all basis functions.
    pub fn basis_values(&self, w: &[Complex64], lambda: f64) -> Result<Vec<Complex64>> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: w.len(),
            });
        }
        self.indices
            .iter()
            .map(|a| Ok(a.monomial(w) / monomial_norm_sq(a, lambda)?.sqrt()))
            .collect()
    }
}

/// Coefficient vector on a [`FockTruncation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FockVectorRepr", into = "FockVectorRepr")]
pub struct FockVector {
    trunc: Arc<FockTruncation>,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FockVectorRepr {
    n: usize,
    #[serde(rename = "M")]
    max_degree: usize,
    coeffs: Vec<Complex64>,
}

impl TryFrom<FockVectorRepr> for FockVector {
    type Error = Error;
    fn try_from(r: FockVectorRepr) -> Result<Self> {
        FockVector::new(FockTruncation::new(r.n, r.max_degree)?, r.coeffs)
    }
}

impl From<FockVector> for FockVectorRepr {
    fn from(v: FockVector) -> Self {
        FockVectorRepr {
            n: v.trunc.n,
            max_degree: v.trunc.max_degree,
            coeffs: v.coeffs,
        }
    }
}

impl FockVector {
    pub fn new(trunc: Arc<FockTruncation>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != trunc.dim() {
            return Err(Error::DimensionMismatch {
                expected: trunc.dim(),
                got: coeffs.len(),
            });
        }
        Ok(FockVector { trunc, coeffs })
    }

    pub fn zeros(trunc: Arc<FockTruncation>) -> Self {
        let coeffs = vec![Complex64::new(0.0, 0.0); trunc.dim()];
        FockVector { trunc, coeffs }
    }

    pub fn basis(trunc: Arc<FockTruncation>, alpha: &MultiIndex) -> Result<Self> {
        let k = trunc
            .position(alpha)
            .ok_or_else(|| Error::param("alpha", "outside the truncation"))?;
        let mut v = FockVector::zeros(trunc);
        v.coeffs[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn truncation(&self) -> &Arc<FockTruncation> {
        &self.trunc
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(Complex64::norm_sqr).sum()
    }

    /// `F(w) = Σ c_α e_α(w)`.
    pub fn evaluate(&self, w: &[Complex64], lambda: f64) -> Result<Complex64> {
        Ok(self
            .trunc
            .basis_values(w, lambda)?
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| e * c)
            .sum())
    }
}

/// `⟨f, g⟩ = Σ f_α conj(g_α)`; linear in the first slot.
pub fn inner_product(f: &FockVector, g: &FockVector) -> Result<Complex64> {
    if f.trunc.n != g.trunc.n || f.coeffs.len() != g.coeffs.len() {
        return Err(Error::DimensionMismatch {
            expected: f.coeffs.len(),
            got: g.coeffs.len(),
        });
    }
    Ok(f.coeffs
        .iter()
        .zip(&g.coeffs)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// Gaussian rule on `ℝ^{2n}` matching the `F^λ` weight; exact for truncation degree `M`.
pub fn fock_rule(n: usize, max_degree: usize, lambda: f64) -> Result<GaussianRule> {
    if lambda == 0.0 {
        return Err(Error::param("lambda", "must be non-zero"));
    }
    crate::quadrature::gauss_hermite(1.0 / lambda.abs(), max_degree + 1, 2 * n)
}

/// `⟨F, G⟩` from the defining Gaussian integral.
pub fn inner_product_quadrature(
    f: &FockVector,
    g: &FockVector,
    lambda: f64,
    rule: &GaussianRule,
) -> Result<Complex64> {
    let n = f.trunc.n;
    if rule.dimension() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: rule.dimension(),
        });
    }
    if rule.per_axis() < f.trunc.max_degree.max(g.trunc.max_degree) + 1 {
        return Err(Error::UnderResolved(format!(
            "{} nodes per axis for degree {}",
            rule.per_axis(),
            f.trunc.max_degree.max(g.trunc.max_degree)
        )));
    }
    let scale = rule.variance() * lambda.abs();
    if (scale - 1.0).abs() > 1e-12 {
        return Err(Error::param("rule", "variance must equal 1/|λ|"));
    }
    integrate_gaussian(rule, |x| {
        let w: Vec<Complex64> = x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let a = f
            .evaluate(&w, lambda)
            .unwrap_or(Complex64::new(f64::NAN, 0.0));
        let b = g
            .evaluate(&w, lambda)
            .unwrap_or(Complex64::new(f64::NAN, 0.0));
        a * b.conj()
    })
}

/// `exp((|λ|/2) z·w̄)`.
pub fn reproducing_kernel(z: &[Complex64], w: &[Complex64], lambda: f64) -> Result<Complex64> {
    if lambda == 0.0 {
        return Err(Error::param("lambda", "must be non-zero"));
    }
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            got: w.len(),
        });
    }
    Ok((crate::cvec::hermitian(z, w) * (0.5 * lambda.abs())).exp())
}

/// `Σ_{|α|≤M} e_α(z) conj(e_α(w))`.
pub fn reproducing_kernel_partial(
    trunc: &FockTruncation,
    z: &[Complex64],
    w: &[Complex64],
    lambda: f64,
) -> Result<Complex64> {
    let ez = trunc.basis_values(z, lambda)?;
    let ew = trunc.basis_values(w, lambda)?;
    Ok(ez.iter().zip(&ew).map(|(a, b)| a * b.conj()).sum())
}

/// Bound on `Σ_{k>M} x^k/k!` given by `x^{M+1} e^x / (M+1)!`.
pub fn exp_tail_bound(x: f64, max_degree: usize) -> f64 {
    let m1 = max_degree as u32 + 1;
    if x == 0.0 {
        return 0.0;
    }
    (m1 as f64 * x.ln() + x - ln_factorial(m1)).exp()
}

/// Smallest `M` for which [`exp_tail_bound`] falls below `tol`.
pub fn degree_for_tolerance(x: f64, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    (0..2000)
        .find(|&m| exp_tail_bound(x, m) < tol)
        .ok_or_else(|| Error::param("tol", format!("unreachable for x = {x}")))
}
