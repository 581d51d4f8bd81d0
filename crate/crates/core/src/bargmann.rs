//! Bargmann representations `σ_λ` of the Heisenberg group on truncated Fock spaces.
//!
//! For `λ > 0`: `σ_λ[z,t]F(w) = e^{iλt − (λ/2) w·z̄ − (λ/4)|z|²} F(w+z)`;
//! for `λ < 0`: `σ_λ[z,t] = σ_{−λ}[z̄, −t]`.
//! Adjoints follow `σ_λ[z,t]* = σ_λ[−z,−t]`.

use std::io::Write;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cvec::norm_sq;
use crate::error::{Error, Result};
use crate::fock::{degree_for_tolerance, exp_tail_bound, FockTruncation, FockVector, MultiIndex};
use crate::heisenberg::HeisenbergElement;
use crate::quadrature::gauss_hermite;
use crate::special::ln_factorial;

/// Extra Gauss–Hermite nodes per axis beyond the polynomial degree.
pub const DEFAULT_EXTRA_NODES: usize = 32;

/// Default finite-difference step for [`dsigma_check`].
pub const DEFAULT_STEP: f64 = 1e-4;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Matrix `[⟨σ_λ[z,t] e_β, e_α⟩]_{α,β}` on a truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub lambda: f64,
    pub element: HeisenbergElement,
    pub trunc: Arc<FockTruncation>,
    pub entries: DMatrix<Complex64>,
    pub nodes_per_axis: usize,
}

/// One complex coordinate of the action: `F ↦ e^{c w} F(w + shift)`.
struct Factor {
    c: Complex64,
    shift: Complex64,
}

/// `m_{ab} = ⟨e^{cw} e_b(w + shift), e_a⟩` for `a, b ≤ max`, by tensor Gauss–Hermite.
fn factor_matrix(
    f: &Factor,
    lambda_abs: f64,
    max: usize,
    nodes: usize,
) -> Result<DMatrix<Complex64>> {
    let rule = gauss_hermite(1.0 / lambda_abs, nodes, 1)?;
    let (x, w) = rule.axis();
    let inv_norm: Vec<f64> = (0..=max)
        .map(|k| (-0.5 * (ln_factorial(k as u32) + k as f64 * (2.0 / lambda_abs).ln())).exp())
        .collect();
    let mut m = DMatrix::<Complex64>::zeros(max + 1, max + 1);
    let mut shifted = vec![Complex64::new(0.0, 0.0); max + 1];
    let mut conj_pow = vec![Complex64::new(0.0, 0.0); max + 1];
    for (xr, wr) in x.iter().zip(w) {
        for (xi, wi) in x.iter().zip(w) {
            let pt = Complex64::new(*xr, *xi);
            let weight = (f.c * pt).exp() * (wr * wi);
            let (mut p, mut q) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
            for k in 0..=max {
                shifted[k] = p * inv_norm[k];
                conj_pow[k] = q * inv_norm[k];
                p *= pt + f.shift;
                q *= pt.conj();
            }
            for a in 0..=max {
                let ca = conj_pow[a] * weight;
                for b in 0..=max {
                    m[(a, b)] += shifted[b] * ca;
                }
            }
        }
    }
    if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite("Bargmann matrix element".into()));
    }
    Ok(m)
}

fn assemble(
    trunc: &Arc<FockTruncation>,
    prefactor: Complex64,
    factors: &[Factor],
    lambda_abs: f64,
    nodes: usize,
) -> Result<DMatrix<Complex64>> {
    let max = trunc.max_degree();
    let per_coord = factors
        .iter()
        .map(|f| factor_matrix(f, lambda_abs, max, nodes))
        .collect::<Result<Vec<_>>>()?;
    let idx = trunc.indices();
    let d = trunc.dim();
    Ok(DMatrix::from_fn(d, d, |i, j| {
        let (a, b) = (&idx[i], &idx[j]);
        per_coord.iter().enumerate().fold(prefactor, |acc, (k, m)| {
            acc * m[(a.0[k] as usize, b.0[k] as usize)]
        })
    }))
}

fn check_inputs(
    lambda: f64,
    a: &HeisenbergElement,
    trunc: &FockTruncation,
    nodes: usize,
) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::param("lambda", "must be finite and non-zero"));
    }
    if a.dim() != trunc.n() {
        return Err(Error::DimensionMismatch {
            expected: trunc.n(),
            got: a.dim(),
        });
    }
    if nodes < trunc.max_degree() + 1 {
        return Err(Error::UnderResolved(format!(
            "{nodes} Gauss–Hermite nodes per axis cannot integrate degree {} exactly",
            2 * trunc.max_degree()
        )));
    }
    Ok(())
}

/// `σ_λ[z,t]` with `λ > 0` directly from its defining formula.
fn rep_positive(
    lambda: f64,
    a: &HeisenbergElement,
    trunc: &Arc<FockTruncation>,
    nodes: usize,
) -> Result<DMatrix<Complex64>> {
    let pref = (I * lambda * a.t - lambda * norm_sq(&a.z) / 4.0).exp();
    let factors: Vec<Factor> =
        a.z.iter()
            .map(|zj| Factor {
                c: -lambda / 2.0 * zj.conj(),
                shift: *zj,
            })
            .collect();
    assemble(trunc, pref, &factors, lambda, nodes)
}

pub fn rep_matrix(
    lambda: f64,
    a: &HeisenbergElement,
    trunc: &Arc<FockTruncation>,
) -> Result<RepMatrix> {
    rep_matrix_with_nodes(
        lambda,
        a,
        trunc,
        trunc.max_degree() + 1 + DEFAULT_EXTRA_NODES,
    )
}

pub fn rep_matrix_with_nodes(
    lambda: f64,
    a: &HeisenbergElement,
    trunc: &Arc<FockTruncation>,
    nodes_per_axis: usize,
) -> Result<RepMatrix> {
    check_inputs(lambda, a, trunc, nodes_per_axis)?;
    let entries = if lambda > 0.0 {
        rep_positive(lambda, a, trunc, nodes_per_axis)?
    } else {
        let conj = HeisenbergElement::new(a.z.iter().map(Complex64::conj).collect(), -a.t);
        rep_positive(-lambda, &conj, trunc, nodes_per_axis)?
    };
    Ok(RepMatrix {
        lambda,
        element: a.clone(),
        trunc: trunc.clone(),
        entries,
        nodes_per_axis,
    })
}

/// `λ < 0` from its own displayed form `e^{iλt + (λ/2) Σ w_j z_j + (λ/4)|z|²} F(w + z̄)`.
pub fn rep_matrix_negative_direct(
    lambda: f64,
    a: &HeisenbergElement,
    trunc: &Arc<FockTruncation>,
    nodes_per_axis: usize,
) -> Result<DMatrix<Complex64>> {
    check_inputs(lambda, a, trunc, nodes_per_axis)?;
    if lambda > 0.0 {
        return Err(Error::param("lambda", "must be negative"));
    }
    let pref = (I * lambda * a.t + lambda * norm_sq(&a.z) / 4.0).exp();
    let factors: Vec<Factor> =
        a.z.iter()
            .map(|zj| Factor {
                c: lambda / 2.0 * zj,
                shift: zj.conj(),
            })
            .collect();
    assemble(trunc, pref, &factors, -lambda, nodes_per_axis)
}

impl RepMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `1 − ‖column β‖²`; non-negative up to rounding since columns are truncated.
    pub fn column_defect(&self, beta: usize) -> f64 {
        1.0 - self
            .entries
            .column(beta)
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
    }

    /// Chebyshev bound on the mass of `σ e_β` beyond degree `M`.
    ///
    /// The displaced number state has mean degree `|β| + y` and variance
    /// `Σ y_j (2β_j + 1)` with `y_j = |λ||z_j|²/2`.
    pub fn column_bound(&self, beta: &MultiIndex) -> f64 {
        let half = 0.5 * self.lambda.abs();
        let mean: f64 = beta.degree() as f64 + half * norm_sq(&self.element.z);
        let var: f64 = self
            .element
            .z
            .iter()
            .zip(&beta.0)
            .map(|(z, &b)| half * z.norm_sqr() * (2.0 * b as f64 + 1.0))
            .sum();
        let gap = self.trunc.max_degree() as f64 - mean;
        if gap <= 0.0 {
            1.0
        } else {
            (var / (gap * gap)).min(1.0)
        }
    }

    /// Row-major little-endian `(re, im)` binary64 pairs.
    pub fn write_binary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.entries[(i, j)];
                out.write_all(&v.re.to_le_bytes())?;
                out.write_all(&v.im.to_le_bytes())?;
            }
        }
        Ok(())
    }
}

/// Row `⟨σ_λ[z,t] e_β, e_0⟩` for `λ < 0`, in closed form.
pub fn p0_row(
    lambda: f64,
    a: &HeisenbergElement,
    trunc: &Arc<FockTruncation>,
) -> Result<FockVector> {
    if !(lambda < 0.0) {
        return Err(Error::param("lambda", "p0_row needs λ < 0"));
    }
    if a.dim() != trunc.n() {
        return Err(Error::DimensionMismatch {
            expected: trunc.n(),
            got: a.dim(),
        });
    }
    // Log-magnitude and phase separately: the Gaussian prefactor underflows
    // long before the monomials overflow at large |λ||z|².
    let ln_pref = lambda * norm_sq(&a.z) / 4.0;
    let root = (lambda.abs() / 2.0).sqrt();
    let polar: Vec<(f64, f64)> =
        a.z.iter()
            .map(|z| ((z.norm() * root).ln(), -z.arg()))
            .collect();
    let coeffs = trunc
        .indices()
        .iter()
        .map(|alpha| {
            let mut ln_mag = ln_pref - 0.5 * alpha.ln_factorial();
            let mut phase = lambda * a.t;
            for (&k, &(ln_r, arg)) in alpha.0.iter().zip(&polar) {
                if k > 0 {
                    ln_mag += f64::from(k) * ln_r;
                    phase += f64::from(k) * arg;
                }
            }
            Complex64::from_polar(ln_mag.exp(), phase)
        })
        .collect();
    FockVector::new(trunc.clone(), coeffs)
}

/// `1 − Σ_{|α|≤M} |p_α|²` is `e^{−y}` times the Taylor remainder of `e^y`, `y = |λ||z|²/2`.
pub fn p0_tail_bound(lambda: f64, a: &HeisenbergElement, max_degree: usize) -> f64 {
    let y = 0.5 * lambda.abs() * norm_sq(&a.z);
    (-y).exp() * exp_tail_bound(y, max_degree)
}

/// One-parameter subgroup whose derivative is checked by [`dsigma_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// `∂_t`.
    T,
    /// `½(X_j + iY_j)` built from the paths `[s e_j, 0]` and `[i s e_j, 0]`.
    ZbarRight(usize),
    /// `½(X_j − iY_j)`.
    Z(usize),
}

/// Closed-form `dσ_λ(field)` on the truncated basis.
pub fn dsigma_closed_form(
    lambda: f64,
    field: Field,
    trunc: &FockTruncation,
) -> Result<DMatrix<Complex64>> {
    let d = trunc.dim();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    let l = lambda.abs();
    // ∂_j e_α = √(α_j |λ|/2) e_{α−e_j};  w_j e_α = √((α_j+1)·2/|λ|) e_{α+e_j}
    let derivative = |m: &mut DMatrix<Complex64>, j: usize, c: Complex64| {
        for (col, a) in trunc.indices().iter().enumerate() {
            if let Some(lo) = a.lowered(j) {
                let row = trunc.position(&lo).expect("lowered index stays in range");
                m[(row, col)] += c * (a.0[j] as f64 * l / 2.0).sqrt();
            }
        }
    };
    let multiply = |m: &mut DMatrix<Complex64>, j: usize, c: Complex64| {
        for (col, a) in trunc.indices().iter().enumerate() {
            if let Some(row) = trunc.position(&a.raised(j)) {
                m[(row, col)] += c * ((a.0[j] as f64 + 1.0) * 2.0 / l).sqrt();
            }
        }
    };
    match field {
        Field::T => {
            for k in 0..d {
                m[(k, k)] = I * lambda;
            }
        }
        Field::ZbarRight(j) | Field::Z(j) if j >= trunc.n() => {
            return Err(Error::param(
                "field",
                format!("coordinate {j} out of range"),
            ));
        }
        Field::ZbarRight(j) => {
            if lambda < 0.0 {
                derivative(&mut m, j, Complex64::new(1.0, 0.0));
            } else {
                multiply(&mut m, j, Complex64::new(-lambda / 2.0, 0.0));
            }
        }
        Field::Z(j) => {
            if lambda > 0.0 {
                derivative(&mut m, j, Complex64::new(1.0, 0.0));
            } else {
                multiply(&mut m, j, Complex64::new(lambda / 2.0, 0.0));
            }
        }
    }
    Ok(m)
}

fn path(n: usize, field: Field, s: f64, imaginary: bool) -> HeisenbergElement {
    let mut g = HeisenbergElement::identity(n);
    match field {
        Field::T => g.t = s,
        Field::ZbarRight(j) | Field::Z(j) => {
            g.z[j] = if imaginary {
                I * s
            } else {
                Complex64::new(s, 0.0)
            }
        }
    }
    g
}

/// Richardson-extrapolated central difference of `s ↦ σ_λ(path(s))` at `0`.
fn path_derivative(
    lambda: f64,
    field: Field,
    trunc: &Arc<FockTruncation>,
    step: f64,
    imaginary: bool,
) -> Result<DMatrix<Complex64>> {
    let n = trunc.n();
    let central = |h: f64| -> Result<DMatrix<Complex64>> {
        let plus = rep_matrix(lambda, &path(n, field, h, imaginary), trunc)?.entries;
        let minus = rep_matrix(lambda, &path(n, field, -h, imaginary), trunc)?.entries;
        Ok((plus - minus) / Complex64::new(2.0 * h, 0.0))
    };
    let coarse = central(step)?;
    let fine = central(step / 2.0)?;
    Ok((fine * Complex64::new(4.0, 0.0) - coarse) / Complex64::new(3.0, 0.0))
}

/// Max entry residual between the finite-difference and closed-form `dσ_λ(field)`.
pub fn dsigma_check(
    lambda: f64,
    field: Field,
    trunc: &Arc<FockTruncation>,
    step: f64,
) -> Result<f64> {
    if !(step >= 1e-10) {
        return Err(Error::param(
            "step",
            format!("{step} is below 1e-10 (cancellation)"),
        ));
    }
    let expected = dsigma_closed_form(lambda, field, trunc)?;
    let numeric = match field {
        Field::T => path_derivative(lambda, field, trunc, step, false)?,
        Field::ZbarRight(_) | Field::Z(_) => {
            let x = path_derivative(lambda, field, trunc, step, false)?;
            let y = path_derivative(lambda, field, trunc, step, true)?;
            let sign = if matches!(field, Field::Z(_)) {
                -1.0
            } else {
                1.0
            };
            (x + y * (I * sign)) * Complex64::new(0.5, 0.0)
        }
    };
    Ok((numeric - expected)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max))
}

/// Max residual of `σ(a)σ(b) = σ(ab)` over basis indices of degree `≤ block`.
///
/// The intermediate sum runs over a larger truncation whose degree is picked
/// from the tail bound so that the neglected mass stays below `tol`.
pub fn homomorphism_residual(
    lambda: f64,
    a: &HeisenbergElement,
    b: &HeisenbergElement,
    max_degree: usize,
    block: usize,
    tol: f64,
) -> Result<(f64, usize)> {
    if block > max_degree {
        return Err(Error::param(
            "block",
            "must not exceed the truncation degree",
        ));
    }
    let n = a.dim();
    let y = 0.5 * lambda.abs() * norm_sq(&a.z).max(norm_sq(&b.z));
    let inner = (max_degree + degree_for_tolerance(y.max(1e-3) * 4.0, tol * 1e-2)?).max(max_degree);
    let big = FockTruncation::new(n, inner)?;
    let small = FockTruncation::new(n, max_degree)?;
    let ab = a.mul(b)?;
    let pa = rep_matrix(lambda, a, &big)?.entries;
    let pb = rep_matrix(lambda, b, &big)?.entries;
    let pab = rep_matrix(lambda, &ab, &small)?.entries;
    let k = small.block_len(block);
    let prod = pa.view((0, 0), (k, big.dim())) * pb.view((0, 0), (big.dim(), k));
    let res = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| (prod[(i, j)] - pab[(i, j)]).norm())
        .fold(0.0, f64::max);
    Ok((res, inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn el(z: &[(f64, f64)], t: f64) -> HeisenbergElement {
        HeisenbergElement::new(z.iter().map(|&(a, b)| c(a, b)).collect(), t)
    }

    #[test]
    fn identity_element_gives_identity() {
        for lambda in [1.3, -0.8] {
            let t = FockTruncation::new(2, 5).unwrap();
            let m = rep_matrix(lambda, &HeisenbergElement::identity(2), &t).unwrap();
            let err = (m.entries - DMatrix::<Complex64>::identity(t.dim(), t.dim()))
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-13);
        }
    }

    #[test]
    fn vacuum_entry() {
        let t = FockTruncation::new(1, 4).unwrap();
        let a = el(&[(0.6, -0.3)], 0.7);
        let lambda = 1.7;
        let m = rep_matrix(lambda, &a, &t).unwrap();
        let expected = (I * lambda * a.t - lambda * norm_sq(&a.z) / 4.0).exp();
        assert!((m.entries[(0, 0)] - expected).norm() < 1e-13);
    }

    #[test]
    fn under_resolved_and_bad_lambda() {
        let t = FockTruncation::new(1, 6).unwrap();
        let a = el(&[(0.1, 0.1)], 0.0);
        assert!(matches!(
            rep_matrix_with_nodes(1.0, &a, &t, 6),
            Err(Error::UnderResolved(_))
        ));
        assert!(rep_matrix(0.0, &a, &t).is_err());
        assert!(p0_row(1.0, &a, &t).is_err());
        assert!(dsigma_check(1.0, Field::T, &t, 1e-11).is_err());
    }

    #[test]
    fn homomorphism_on_low_block() {
        let a = el(&[(0.6, -0.5)], 0.4);
        let b = el(&[(-0.3, 0.8)], -1.1);
        for lambda in [1.0, -1.0] {
            let (res, _) = homomorphism_residual(lambda, &a, &b, 10, 5, 1e-10).unwrap();
            assert!(res < 1e-8, "λ={lambda} residual {res}");
        }
    }

    #[test]
    fn conjugation_law_by_both_paths() {
        let t = FockTruncation::new(2, 5).unwrap();
        let a = el(&[(0.4, 0.9), (-0.7, 0.2)], 0.8);
        let via = rep_matrix(-1.4, &a, &t).unwrap().entries;
        let direct = rep_matrix_negative_direct(-1.4, &a, &t, 40).unwrap();
        let err = (via - direct).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn p0_row_matches_rep_row() {
        let t = FockTruncation::new(2, 6).unwrap();
        let a = el(&[(0.3, -0.2), (0.5, 0.6)], -0.9);
        let row = p0_row(-2.0, &a, &t).unwrap();
        let m = rep_matrix(-2.0, &a, &t).unwrap();
        for k in 0..t.dim() {
            assert!((row.coeffs()[k] - m.entries[(0, k)]).norm() < 1e-12);
        }
        let e = p0_row(-2.0, &HeisenbergElement::identity(2), &t).unwrap();
        assert_eq!(e.coeffs()[0], c(1.0, 0.0));
        assert!(e.coeffs()[1..].iter().all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn p0_row_norm_tail() {
        let a = el(&[(1.2, 0.7)], 0.3);
        for m in [2usize, 5, 10, 30] {
            let t = FockTruncation::new(1, m).unwrap();
            let nrm = p0_row(-1.5, &a, &t).unwrap().norm_sq();
            let tail = p0_tail_bound(-1.5, &a, m);
            assert!(
                nrm <= 1.0 + 1e-14 && nrm >= 1.0 - tail - 1e-14,
                "M={m} norm={nrm} tail={tail}"
            );
        }
        let t = FockTruncation::new(1, 60).unwrap();
        assert!((p0_row(-1.5, &a, &t).unwrap().norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn columns_within_truncation_bound() {
        let t = FockTruncation::new(1, 12).unwrap();
        let m = rep_matrix(0.9, &el(&[(0.8, 0.4)], 0.2), &t).unwrap();
        for (k, beta) in t.indices().iter().enumerate().take(t.block_len(6)) {
            let defect = m.column_defect(k);
            assert!(
                defect > -1e-12 && defect <= m.column_bound(beta) + 1e-12,
                "β={beta:?} defect={defect}"
            );
        }
    }

    #[test]
    fn differentials() {
        let t = FockTruncation::new(2, 4).unwrap();
        for lambda in [1.2, -0.9] {
            for field in [
                Field::T,
                Field::ZbarRight(0),
                Field::ZbarRight(1),
                Field::Z(0),
            ] {
                let r = dsigma_check(lambda, field, &t, DEFAULT_STEP).unwrap();
                assert!(r < 1e-6, "λ={lambda} {field:?} residual {r}");
            }
        }
    }

    #[test]
    fn binary_dump_layout() {
        let t = FockTruncation::new(1, 2).unwrap();
        let m = rep_matrix(1.0, &el(&[(0.2, 0.1)], 0.5), &t).unwrap();
        let mut buf = Vec::new();
        m.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 9 * 16);
        let re = f64::from_le_bytes(buf[16..24].try_into().unwrap());
        assert_eq!(re, m.entries[(0, 1)].re);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn homomorphism_random(ar in -0.7f64..0.7, ai in -0.7f64..0.7, br in -0.7f64..0.7, bi in -0.7f64..0.7, s in -2.0f64..2.0, t in -2.0f64..2.0, neg in any::<bool>()) {
            let lambda = if neg { -1.0 } else { 1.0 };
            let (res, _) = homomorphism_residual(lambda, &el(&[(ar, ai)], s), &el(&[(br, bi)], t), 10, 5, 1e-10).unwrap();
            prop_assert!(res < 1e-8);
        }
    }
}
