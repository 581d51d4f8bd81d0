//! Polynomials on the unit ball of `ℂ^{n+1}`, the Drury–Arveson coefficient
//! norm, and its integral representation through the operators `𝓡_k`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::MultiIndex;
use crate::quadrature::legendre;
use crate::special::{ln_beta, ln_factorial, ln_gamma};

/// Finitely supported `Σ a_α ζ^α` in `dim = n+1` variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BallPolynomial {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl BallPolynomial {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "needs at least one variable"));
        }
        Ok(BallPolynomial {
            dim,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn monomial(alpha: MultiIndex, coeff: Complex64) -> Result<Self> {
        let mut p = BallPolynomial::zero(alpha.len())?;
        p.add_term(alpha, coeff)?;
        Ok(p)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, coeff: Complex64) -> Result<()> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: alpha.len(),
            });
        }
        let entry = self.coeffs.entry(alpha).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(MultiIndex::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        Ok(self.coeffs.iter().map(|(a, c)| c * a.monomial(z)).sum())
    }

    /// Applies a degree-diagonal operator `ζ^α ↦ m(|α|) ζ^α`.
    pub fn map_degrees<F: Fn(u32) -> f64>(&self, multiplier: F) -> Self {
        BallPolynomial {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (a.clone(), c * multiplier(a.degree())))
                .collect(),
        }
    }

    /// Parses sums of terms like `0.5*z1^3`, `-2i*z1*z2`, `z2`, `3`.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        let mut poly = BallPolynomial::zero(dim)?;
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut current = String::new();
        for (k, ch) in cleaned.chars().enumerate() {
            let after_exponent_mark = current.ends_with('e') || current.ends_with('E');
            if (ch == '+' || ch == '-') && k > 0 && !current.is_empty() && !after_exponent_mark {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);
        for term in terms {
            let (alpha, coeff) = parse_term(dim, &term)?;
            poly.add_term(alpha, coeff)?;
        }
        Ok(poly)
    }
}

fn parse_term(dim: usize, term: &str) -> Result<(MultiIndex, Complex64)> {
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, term.strip_prefix('+').unwrap_or(term)),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("dangling sign in `{term}`")));
    }
    let mut alpha = vec![0u32; dim];
    let mut coeff = Complex64::new(sign, 0.0);
    for factor in body.split('*') {
        if let Some(var) = factor.strip_prefix('z') {
            let (idx, power) = match var.split_once('^') {
                Some((i, p)) => (
                    i,
                    p.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                ),
                None => (var, 1),
            };
            let j: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable `{factor}`")))?;
            if j == 0 || j > dim {
                return Err(Error::Parse(format!("variable z{j} outside z1..z{dim}")));
            }
            alpha[j - 1] += power;
        } else if let Some(num) = factor.strip_suffix('i') {
            let v = if num.is_empty() {
                1.0
            } else {
                num.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{factor}`")))?
            };
            coeff *= Complex64::new(0.0, v);
        } else {
            let v: f64 = factor
                .parse()
                .map_err(|_| Error::Parse(format!("bad factor `{factor}`")))?;
            coeff *= v;
        }
    }
    Ok((MultiIndex(alpha), coeff))
}

impl fmt::Display for BallPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (j, &k) in alpha.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*z{}", j + 1)?,
                    _ => write!(f, "*z{}^{k}", j + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// `α!/|α|!`, the Drury–Arveson weight of `ζ^α`.
pub fn da_weight(alpha: &MultiIndex) -> f64 {
    (alpha.ln_factorial() - ln_factorial(alpha.degree())).exp()
}

/// `Σ (α!/|α|!) |a_α|²`.
pub fn da_norm_coeff_sq(f: &BallPolynomial) -> f64 {
    f.terms().map(|(a, c)| da_weight(a) * c.norm_sqr()).sum()
}

/// `Σ |α| (α!/|α|!) |a_α|²`; constants have weight zero.
pub fn dot_dirichlet_norm_coeff_sq(f: &BallPolynomial) -> f64 {
    f.terms()
        .map(|(a, c)| a.degree() as f64 * da_weight(a) * c.norm_sqr())
        .sum()
}

/// `R ζ^α = |α| ζ^α`.
pub fn radial_derivative(f: &BallPolynomial) -> BallPolynomial {
    f.map_degrees(|d| d as f64)
}

/// `𝓡_0 = Id`, `𝓡_k = (Id + R/k) 𝓡_{k−1}`, applied by the recursion.
pub fn script_r(k: u32, f: &BallPolynomial) -> BallPolynomial {
    let mut g = f.clone();
    for j in 1..=k {
        let r = radial_derivative(&g);
        g = BallPolynomial {
            dim: g.dim,
            coeffs: g
                .coeffs
                .iter()
                .map(|(a, c)| (a.clone(), c + r.coeffs[a] / j as f64))
                .collect(),
        };
    }
    g
}

/// Eigenvalue `(k+d)!/(k! d!)` of `𝓡_k` on degree `d`.
pub fn script_r_eigenvalue(k: u32, d: u32) -> f64 {
    (ln_factorial(k + d) - ln_factorial(k) - ln_factorial(d)).exp()
}

/// `∫_{S^{2N−1}} |ξ^α|² dσ = 2π^N α!/(N−1+|α|)!` for the unnormalised sphere, `N = dim`.
pub fn sphere_monomial_integral(alpha: &MultiIndex) -> f64 {
    let big_n = alpha.len() as f64;
    (2f64.ln() + big_n * PI.ln() + alpha.ln_factorial() - ln_gamma(big_n + alpha.degree() as f64))
        .exp()
}

/// Gauss–Legendre rule in `u = r²` for the radial integrals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialRule {
    pub order: usize,
    #[serde(skip)]
    nodes: Arc<(Vec<f64>, Vec<f64>)>,
}

impl RadialRule {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::param("order", "must be positive"));
        }
        let (x, w) = legendre(order);
        let u: Vec<f64> = x.iter().map(|v| 0.5 * (v + 1.0)).collect();
        let wu: Vec<f64> = w.iter().map(|v| 0.5 * v).collect();
        Ok(RadialRule {
            order,
            nodes: Arc::new((u, wu)),
        })
    }

    /// Exact for the polynomial radial integrands up to degree `2·order − 1` in `u`.
    pub fn for_degree(n: u32, d: u32) -> Result<Self> {
        RadialRule::new(((n + d) as usize).div_ceil(2) + 1)
    }

    fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .0
            .iter()
            .zip(&self.nodes.1)
            .map(|(&u, &w)| w * f(u))
            .sum()
    }
}

/// `(n·n!/π^{n+1}) ∫_B (1−|ζ|²)^{n−1} |ζ|^{−2n} |𝓡_n f|² dζ`.
///
/// Monomials are orthogonal on every sphere, so the integral is a diagonal
/// sum of closed-form sphere integrals times radial integrals, the latter
/// computed by `rule` in `u = |ζ|²`, which absorbs `|ζ|^{−2n}`.
pub fn da_norm_integral_sq(f: &BallPolynomial, rule: Option<&RadialRule>) -> Result<f64> {
    let n = f.dim() as u32 - 1;
    if n == 0 {
        return Err(Error::param(
            "n",
            "the integral formula needs n ≥ 1 (ball of ℂ^{n+1} with n+1 ≥ 2)",
        ));
    }
    let rf = script_r(n, f);
    let pref = (f64::from(n).ln() + ln_factorial(n) - f64::from(n + 1) * PI.ln()).exp();
    let mut total = 0.0;
    for (alpha, c) in rf.terms() {
        let d = alpha.degree();
        let own;
        let rule = match rule {
            Some(r) => r,
            None => {
                own = RadialRule::for_degree(n, d)?;
                &own
            }
        };
        // dζ = r^{2n+1} dr dσ and r dr = du/2.
        let radial = 0.5 * rule.integrate(|u| (1.0 - u).powi(n as i32 - 1) * u.powi(d as i32));
        total += c.norm_sqr() * sphere_monomial_integral(alpha) * radial;
    }
    Ok(pref * total)
}

/// Closed form of the radial factor, `½ B(d+1, n)`, used as an oracle.
pub fn radial_closed(n: u32, d: u32) -> f64 {
    0.5 * ln_beta(f64::from(d) + 1.0, f64::from(n)).exp()
}

/// Ways to compute the Drury–Arveson norm, selected by name.
pub trait DaNormMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn norm_sq(&self, f: &BallPolynomial) -> Result<f64>;
}

pub struct Coefficient;
pub struct Integral;

impl DaNormMethod for Coefficient {
    fn name(&self) -> &'static str {
        "coefficient"
    }

    fn norm_sq(&self, f: &BallPolynomial) -> Result<f64> {
        Ok(da_norm_coeff_sq(f))
    }
}

impl DaNormMethod for Integral {
    fn name(&self) -> &'static str {
        "integral"
    }

    fn norm_sq(&self, f: &BallPolynomial) -> Result<f64> {
        da_norm_integral_sq(f, None)
    }
}

pub fn da_method(name: &str) -> Result<Box<dyn DaNormMethod>> {
    match name {
        "coefficient" => Ok(Box::new(Coefficient)),
        "integral" => Ok(Box::new(Integral)),
        other => Err(Error::Unknown {
            kind: "da-norm method",
            name: other.to_string(),
        }),
    }
}

pub fn da_method_names() -> &'static [&'static str] {
    &["coefficient", "integral"]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockTruncation;
    use crate::quadrature::monte_carlo;
    use proptest::prelude::*;
    use rand_distr_free::standard_normal;

    mod rand_distr_free {
        use rand::Rng;

        /// Box–Muller.
        pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
            let u: f64 = 1.0 - rng.random::<f64>();
            let v: f64 = rng.random();
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn documented_coefficient_norms() {
        let z1z2 = BallPolynomial::parse(2, "z1*z2").unwrap();
        assert!((da_norm_coeff_sq(&z1z2) - 0.5).abs() < 1e-15);
        assert!((dot_dirichlet_norm_coeff_sq(&z1z2) - 1.0).abs() < 1e-15);
        let one = BallPolynomial::parse(2, "1").unwrap();
        assert_eq!(da_norm_coeff_sq(&one), 1.0);
        assert_eq!(dot_dirichlet_norm_coeff_sq(&one), 0.0);
        let cube = BallPolynomial::parse(2, "z1^3").unwrap();
        assert!((da_norm_coeff_sq(&cube) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn documented_integral_norms() {
        let z1z2 = BallPolynomial::parse(2, "z1*z2").unwrap();
        assert!((da_norm_integral_sq(&z1z2, None).unwrap() - 0.5).abs() < 1e-14);
        let one = BallPolynomial::parse(2, "1").unwrap();
        assert!((da_norm_integral_sq(&one, None).unwrap() - 1.0).abs() < 1e-14);
        assert!(da_norm_integral_sq(&BallPolynomial::parse(1, "z1").unwrap(), None).is_err());
    }

    #[test]
    fn script_r_eigenvalues() {
        let f = BallPolynomial::parse(2, "z1*z2").unwrap();
        let g = script_r(1, &f);
        assert!((g.terms().next().unwrap().1 - c(3.0, 0.0)).norm() < 1e-15);
        assert_eq!(script_r(0, &f), f);
        let constant = BallPolynomial::parse(3, "2.5").unwrap();
        assert!(radial_derivative(&constant)
            .terms()
            .all(|(_, c)| c.norm() == 0.0));
        for k in 0..6 {
            for d in 0..9 {
                let product: f64 = (1..=k).map(|j| 1.0 + f64::from(d) / f64::from(j)).product();
                assert!((script_r_eigenvalue(k, d) - product).abs() < 1e-12 * product);
            }
        }
    }

    #[test]
    fn radial_rule_matches_beta_values() {
        for n in 1..=3 {
            for d in 0..=10 {
                let rule = RadialRule::for_degree(n, d).unwrap();
                let q = 0.5 * rule.integrate(|u| (1.0 - u).powi(n as i32 - 1) * u.powi(d as i32));
                assert!((q - radial_closed(n, d)).abs() < 1e-12 * radial_closed(n, d));
            }
        }
    }

    #[test]
    fn sphere_integrals_agree_with_monte_carlo() {
        // Uniform points on S^{2N−1} from normalised Gaussians; area 2π^N/(N−1)!.
        for alpha in [
            MultiIndex(vec![1, 1]),
            MultiIndex(vec![2, 0, 1]),
            MultiIndex(vec![3, 1]),
        ] {
            let big_n = alpha.len();
            let area = 2.0 * PI.powi(big_n as i32) / crate::special::factorial(big_n as u32 - 1);
            let a = alpha.clone();
            let est = monte_carlo(
                move |rng| {
                    let g: Vec<Complex64> = (0..big_n)
                        .map(|_| c(standard_normal(rng), standard_normal(rng)))
                        .collect();
                    let r = crate::cvec::norm_sq(&g).sqrt();
                    (g.iter().map(|x| x / r).collect::<Vec<_>>(), 1.0 / area)
                },
                move |xi: &Vec<Complex64>| c(a.monomial(xi).norm_sqr(), 0.0),
                200_000,
                5,
            )
            .unwrap();
            assert!(
                est.sigmas_from(c(sphere_monomial_integral(&alpha), 0.0)) < 4.0,
                "{alpha:?}: {est:?}"
            );
        }
    }

    #[test]
    fn parser_handles_signs_and_imaginary_units() {
        let p = BallPolynomial::parse(2, "z1*z2 + 0.5*z1^3 - 2i*z2 + 1e-1").unwrap();
        assert_eq!(p.degree(), 3);
        let v = p.eval(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!((v - c(2.0 + 0.5 + 0.1, -4.0)).norm() < 1e-14);
        assert!(BallPolynomial::parse(2, "z3").is_err());
        assert!(BallPolynomial::parse(2, "z1^").is_err());
        assert!(BallPolynomial::parse(2, "").is_err());
        assert!(BallPolynomial::parse(2, "x1").is_err());
    }

    #[test]
    fn dotted_coefficient_norm_has_the_plain_log_kernel() {
        // The kernel of Σ|α|(α!/|α|!)|a_α|² is Σ_{α≠0} (|α|!/(α!|α|)) ω^α conj(ζ^α) = log(1/(1 − ω·ζ̄)).
        let w = [c(0.3, 0.2), c(-0.1, 0.4)];
        let z = [c(0.2, -0.3), c(0.35, 0.1)];
        let trunc = FockTruncation::new(2, 60).unwrap();
        let mut series = c(0.0, 0.0);
        for alpha in trunc.indices().iter().filter(|a| a.degree() > 0) {
            let coeff = 1.0 / (alpha.degree() as f64 * da_weight(alpha));
            series += coeff * alpha.monomial(&w) * alpha.monomial(&z).conj();
        }
        let closed = -(1.0 - crate::cvec::hermitian(&w, &z)).ln();
        assert!((series - closed).norm() < 1e-13);
    }

    #[test]
    fn methods_are_registered() {
        let f = BallPolynomial::parse(3, "z1*z2*z3 + 2*z3^2").unwrap();
        let values: Vec<f64> = da_method_names()
            .iter()
            .map(|m| da_method(m).unwrap().norm_sq(&f).unwrap())
            .collect();
        assert!((values[0] - values[1]).abs() < 1e-13 * values[0]);
        assert!(da_method("sobolev").is_err());
    }

    fn random_poly(dim: usize) -> impl Strategy<Value = BallPolynomial> {
        prop::collection::vec(
            (
                prop::collection::vec(0u32..=8, dim),
                -2.0f64..2.0,
                -2.0f64..2.0,
            ),
            1..12,
        )
        .prop_map(move |terms| {
            let mut p = BallPolynomial::zero(dim).unwrap();
            for (mut a, re, im) in terms {
                // Keep total degree ≤ 8.
                while a.iter().sum::<u32>() > 8 {
                    let j = a.iter().position(|&x| x > 0).unwrap();
                    a[j] -= 1;
                }
                p.add_term(MultiIndex(a), c(re, im)).unwrap();
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn integral_norm_equals_coefficient_norm_n1(f in random_poly(2)) {
            let a = da_norm_coeff_sq(&f);
            let b = da_norm_integral_sq(&f, None).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * a.max(1e-300));
        }

        #[test]
        fn integral_norm_equals_coefficient_norm_n2(f in random_poly(3)) {
            let a = da_norm_coeff_sq(&f);
            let b = da_norm_integral_sq(&f, None).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * a.max(1e-300));
        }

        #[test]
        fn recursion_matches_closed_eigenvalues(f in random_poly(2), k in 0u32..5) {
            let g = script_r(k, &f);
            let h = f.map_degrees(|d| script_r_eigenvalue(k, d));
            for ((a, x), (_, y)) in g.terms().zip(h.terms()) {
                prop_assert!((x - y).norm() <= 1e-12 * (1.0 + y.norm()), "{a:?}");
            }
        }
    }
}
