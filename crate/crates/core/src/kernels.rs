//! Closed-form reproducing kernels, the `Q` pairing, and the kernel identities.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cvec::hermitian;
use crate::error::{Error, Result};
use crate::quadrature::{legendre, monte_carlo, McEstimate};
use crate::siegel::{cayley, Automorphism, BallPoint, SiegelPoint};
use crate::special::{ln_beta, ln_gamma};
use crate::spectral::{space_inner_product, ConfigRule, HolomorphicFunction, SpaceTag};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `Q(ω, ζ) = (ω_{n+1} − conj ζ_{n+1})/(2i) − ¼ ω′·conj ζ′`.
pub fn q_pairing(omega: &SiegelPoint, zeta: &SiegelPoint) -> Complex64 {
    (omega.zeta_last - zeta.zeta_last.conj()) / (2.0 * I)
        - 0.25 * hermitian(&omega.zeta_prime, &zeta.zeta_prime)
}

/// Base of a power factor in a [`GammaExpr`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PowerBase {
    Two,
    Four,
    Pi,
    TwoPi,
    FourPi,
}

impl PowerBase {
    fn value(self) -> f64 {
        match self {
            PowerBase::Two => 2.0,
            PowerBase::Four => 4.0,
            PowerBase::Pi => PI,
            PowerBase::TwoPi => 2.0 * PI,
            PowerBase::FourPi => 4.0 * PI,
        }
    }

    fn label(self) -> &'static str {
        match self {
            PowerBase::Two => "2",
            PowerBase::Four => "4",
            PowerBase::Pi => "π",
            PowerBase::TwoPi => "2π",
            PowerBase::FourPi => "4π",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Factor {
    Gamma(f64),
    Power(PowerBase, f64),
}

impl Factor {
    fn ln(&self) -> f64 {
        match *self {
            Factor::Gamma(x) => ln_gamma(x),
            Factor::Power(b, e) => e * b.value().ln(),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Gamma(x) => write!(f, "Γ({x})"),
            Factor::Power(b, e) if e == 1.0 => {
                if b.label().len() > 1 && b != PowerBase::Pi {
                    write!(f, "({})", b.label())
                } else {
                    write!(f, "{}", b.label())
                }
            }
            Factor::Power(b, e) => {
                if b.label().chars().count() > 1 {
                    write!(f, "({})^{e}", b.label())
                } else {
                    write!(f, "{}^{e}", b.label())
                }
            }
        }
    }
}

/// A product of Gamma values and powers, kept symbolic so reports can print
/// the exact constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaExpr {
    pub numerator: Vec<Factor>,
    pub denominator: Vec<Factor>,
}

impl GammaExpr {
    pub fn ln_value(&self) -> f64 {
        self.numerator.iter().map(Factor::ln).sum::<f64>()
            - self.denominator.iter().map(Factor::ln).sum::<f64>()
    }

    pub fn value(&self) -> f64 {
        self.ln_value().exp()
    }
}

impl fmt::Display for GammaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator.is_empty() {
            write!(f, "1")?;
        }
        for x in &self.numerator {
            write!(f, "{x}")?;
        }
        if self.denominator.is_empty() {
            return Ok(());
        }
        write!(f, "/")?;
        let wrap = self.denominator.len() > 1;
        if wrap {
            write!(f, "(")?;
        }
        for x in &self.denominator {
            write!(f, "{x}")?;
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Reproducing kernels of the half-space (and of the ball Dirichlet space).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum KernelId {
    Szego,
    Bergman {
        nu: f64,
    },
    WeightedDirichlet {
        nu: f64,
        m: u32,
    },
    /// `1 + γ log(Q(ω,𝐢)Q(𝐢,ζ)/Q(ω,ζ))`.
    DirichletLog {
        m: u32,
    },
    /// The same without the constant term.
    DirichletDot {
        m: u32,
    },
    /// `((n+1)!/π^{n+1}) log(1/(1 − ω·ζ̄))` on the unit ball of `ℂ^{n+1}`.
    BallDirichlet,
}

pub fn kernel_names() -> &'static [&'static str] {
    &[
        "szego",
        "bergman",
        "weighted-dirichlet",
        "dirichlet-log",
        "dirichlet-dot",
        "ball-dirichlet",
    ]
}

impl KernelId {
    /// Registry lookup; `nu` and `m` are required by the families that use them.
    pub fn from_name(name: &str, nu: Option<f64>, m: Option<u32>) -> Result<Self> {
        let nu = || nu.ok_or_else(|| Error::param("nu", format!("kernel `{name}` needs ν")));
        let m = || m.ok_or_else(|| Error::param("m", format!("kernel `{name}` needs m")));
        Ok(match name {
            "szego" => KernelId::Szego,
            "bergman" => KernelId::Bergman { nu: nu()? },
            "weighted-dirichlet" => KernelId::WeightedDirichlet { nu: nu()?, m: m()? },
            "dirichlet-log" => KernelId::DirichletLog { m: m()? },
            "dirichlet-dot" => KernelId::DirichletDot { m: m()? },
            "ball-dirichlet" => KernelId::BallDirichlet,
            other => {
                return Err(Error::Unknown {
                    kind: "kernel",
                    name: other.to_string(),
                })
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelId::Szego => "szego",
            KernelId::Bergman { .. } => "bergman",
            KernelId::WeightedDirichlet { .. } => "weighted-dirichlet",
            KernelId::DirichletLog { .. } => "dirichlet-log",
            KernelId::DirichletDot { .. } => "dirichlet-dot",
            KernelId::BallDirichlet => "ball-dirichlet",
        }
    }

    /// Space whose norm the kernel reproduces; `None` for the ball kernel.
    pub fn space(&self) -> Option<SpaceTag> {
        match *self {
            KernelId::Szego => Some(SpaceTag::Hardy),
            KernelId::Bergman { nu } => Some(SpaceTag::Bergman { nu }),
            KernelId::WeightedDirichlet { nu, m } => Some(SpaceTag::WeightedDirichlet { nu, m }),
            KernelId::DirichletLog { m } | KernelId::DirichletDot { m } => {
                Some(SpaceTag::Dirichlet { m })
            }
            KernelId::BallDirichlet => None,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        match self.space() {
            Some(tag) => tag.validate(n),
            None => Ok(()),
        }
    }

    /// Exponent `k` of `Q^{−k}` for the power kernels.
    fn power(&self, n: usize) -> Option<f64> {
        let nf = n as f64;
        match *self {
            KernelId::Szego => Some(nf + 1.0),
            KernelId::Bergman { nu } | KernelId::WeightedDirichlet { nu, .. } => {
                Some(nf + 2.0 + nu)
            }
            _ => None,
        }
    }

    /// Normalising constant of the kernel.
    pub fn constant(&self, n: usize) -> Result<GammaExpr> {
        self.validate(n)?;
        let nf = n as f64;
        let np1 = nf + 1.0;
        Ok(match *self {
            KernelId::Szego => GammaExpr {
                numerator: vec![Factor::Gamma(nf + 1.0)],
                denominator: vec![Factor::Power(PowerBase::FourPi, np1)],
            },
            KernelId::Bergman { nu } => GammaExpr {
                numerator: vec![Factor::Gamma(nf + 2.0 + nu)],
                denominator: vec![
                    Factor::Gamma(nu + 1.0),
                    Factor::Power(PowerBase::FourPi, np1),
                ],
            },
            KernelId::WeightedDirichlet { nu, m } => GammaExpr {
                numerator: vec![
                    Factor::Power(PowerBase::Four, m as f64),
                    Factor::Gamma(nf + 2.0 + nu),
                ],
                denominator: vec![
                    Factor::Gamma(2.0 * m as f64 + nu + 1.0),
                    Factor::Power(PowerBase::FourPi, np1),
                ],
            },
            KernelId::DirichletLog { m } | KernelId::DirichletDot { m } => {
                let s = 2.0 * m as f64 - nf - 1.0;
                GammaExpr {
                    numerator: vec![Factor::Power(PowerBase::Two, s)],
                    denominator: vec![Factor::Gamma(s), Factor::Power(PowerBase::TwoPi, np1)],
                }
            }
            KernelId::BallDirichlet => GammaExpr {
                numerator: vec![Factor::Gamma(nf + 2.0)],
                denominator: vec![Factor::Power(PowerBase::Pi, np1)],
            },
        })
    }

    /// The logarithmic-kernel constant as printed in the source formula,
    /// which is twice the value that reproduces the Dirichlet norm.
    pub fn printed_dirichlet_constant(n: usize, m: u32) -> GammaExpr {
        let s = 2.0 * m as f64 - n as f64 - 1.0;
        GammaExpr {
            numerator: vec![Factor::Power(PowerBase::Two, s + 1.0)],
            denominator: vec![
                Factor::Gamma(s),
                Factor::Power(PowerBase::TwoPi, n as f64 + 1.0),
            ],
        }
    }
}

fn same_dim(a: &SiegelPoint, b: &SiegelPoint) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(a.n())
}

fn require_interior(p: &SiegelPoint) -> Result<()> {
    if p.is_interior() {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!(
            "point with ρ = {} is not interior",
            p.rho()
        )))
    }
}

/// `Q(ω,𝐢)Q(𝐢,ζ)/Q(ω,ζ)`, whose logarithm is the dotted Dirichlet kernel up to `γ`.
pub fn dirichlet_ratio(omega: &SiegelPoint, zeta: &SiegelPoint) -> Result<Complex64> {
    let n = same_dim(omega, zeta)?;
    let base = SiegelPoint::base(n);
    let q = q_pairing(omega, zeta);
    if q.norm() == 0.0 {
        return Err(Error::Pole("Q(ω, ζ) = 0".into()));
    }
    Ok(q_pairing(omega, &base) * q_pairing(&base, zeta) / q)
}

/// Principal logarithm, refused when the argument leaves the right half-plane.
fn tracked_ln(x: Complex64) -> Result<Complex64> {
    if x.re > 0.0 {
        Ok(x.ln())
    } else {
        Err(Error::Branch(format!(
            "argument {x} has non-positive real part"
        )))
    }
}

/// `K(ω, ζ)`; the function `K(·, ζ)` is holomorphic in the first slot.
pub fn kernel_eval(id: KernelId, omega: &SiegelPoint, zeta: &SiegelPoint) -> Result<Complex64> {
    let n = same_dim(omega, zeta)?;
    let gamma = id.constant(n)?.value();
    match id {
        KernelId::Szego => {
            let q = q_pairing(omega, zeta);
            if !(q.re > 0.0) {
                return Err(Error::OutsideDomain("Szegő kernel needs h + k > 0".into()));
            }
            Ok(gamma * q.powf(-(n as f64 + 1.0)))
        }
        KernelId::Bergman { .. } | KernelId::WeightedDirichlet { .. } => {
            require_interior(omega)?;
            require_interior(zeta)?;
            let k = id.power(n).expect("power kernel");
            Ok(gamma * q_pairing(omega, zeta).powf(-k))
        }
        KernelId::DirichletLog { .. } | KernelId::DirichletDot { .. } => {
            require_interior(omega)?;
            require_interior(zeta)?;
            let dot = gamma * tracked_ln(dirichlet_ratio(omega, zeta)?)?;
            Ok(if matches!(id, KernelId::DirichletLog { .. }) {
                dot + 1.0
            } else {
                dot
            })
        }
        KernelId::BallDirichlet => {
            let w = crate::siegel::cayley_inv(omega)?;
            let z = crate::siegel::cayley_inv(zeta)?;
            ball_kernel_eval(&w, &z)
        }
    }
}

/// Ball Dirichlet kernel `((n+1)!/π^{n+1}) log(1/(1 − ω·ζ̄))`.
pub fn ball_kernel_eval(omega: &BallPoint, zeta: &BallPoint) -> Result<Complex64> {
    if omega.n() != zeta.n() {
        return Err(Error::DimensionMismatch {
            expected: omega.n(),
            got: zeta.n(),
        });
    }
    let c = KernelId::BallDirichlet.constant(omega.n())?.value();
    let x = 1.0 - hermitian(omega.coords(), zeta.coords());
    Ok(-c * x.ln())
}

/// `F = K(·, base)` with closed-form vertical derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFunction {
    pub id: KernelId,
    pub base: SiegelPoint,
    gamma: f64,
}

impl KernelFunction {
    pub fn new(id: KernelId, base: SiegelPoint) -> Result<Self> {
        if matches!(id, KernelId::BallDirichlet) {
            return Err(Error::param(
                "id",
                "the ball kernel is not a function on the half-space",
            ));
        }
        let gamma = id.constant(base.n())?.value();
        Ok(KernelFunction { id, base, gamma })
    }
}

impl HolomorphicFunction for KernelFunction {
    fn n(&self) -> usize {
        self.base.n()
    }

    fn value(&self, p: &SiegelPoint) -> Result<Complex64> {
        kernel_eval(self.id, p, &self.base)
    }

    fn vertical_derivative(&self, m: u32, p: &SiegelPoint) -> Result<Complex64> {
        if m == 0 {
            return self.value(p);
        }
        let n = self.n();
        let step = 1.0 / (2.0 * I);
        match self.id.power(n) {
            Some(k) => {
                // ∂Q = 1/(2i), so ∂^m Q^{−k} = (−k)(−k−1)…(−k−m+1) (2i)^{−m} Q^{−k−m}.
                let falling: f64 = (0..m).map(|j| -k - j as f64).product();
                let q = q_pairing(p, &self.base);
                Ok(self.gamma * falling * step.powu(m) * q.powf(-k - m as f64))
            }
            None => {
                // ∂^m log Q = (−1)^{m−1}(m−1)! (2i)^{−m} Q^{−m}.
                let c =
                    if m % 2 == 1 { 1.0 } else { -1.0 } * (1..m).map(|j| j as f64).product::<f64>();
                let qi = q_pairing(p, &SiegelPoint::base(n));
                let qb = q_pairing(p, &self.base);
                Ok(self.gamma * c * step.powu(m) * (qi.powi(-(m as i32)) - qb.powi(-(m as i32))))
            }
        }
    }
}

/// `Σ c_k K(·, ω_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCombination {
    pub terms: Vec<(Complex64, KernelFunction)>,
}

impl HolomorphicFunction for KernelCombination {
    fn n(&self) -> usize {
        self.terms.first().map(|t| t.1.n()).unwrap_or(1)
    }

    fn value(&self, p: &SiegelPoint) -> Result<Complex64> {
        self.terms.iter().map(|(c, k)| Ok(c * k.value(p)?)).sum()
    }

    fn vertical_derivative(&self, m: u32, p: &SiegelPoint) -> Result<Complex64> {
        self.terms
            .iter()
            .map(|(c, k)| Ok(c * k.vertical_derivative(m, p)?))
            .sum()
    }
}

/// Left side, right side and relative error of one identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckValue {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_error: f64,
}

impl CheckValue {
    pub fn new(lhs: Complex64, rhs: Complex64) -> Self {
        let scale = rhs.norm().max(f64::MIN_POSITIVE);
        CheckValue {
            lhs,
            rhs,
            rel_error: (lhs - rhs).norm() / scale,
        }
    }
}

/// `⟨K(·, ω₀), K(·, ζ)⟩` by configuration-space quadrature against `K(ζ, ω₀)`.
pub fn reproducing_check(
    id: KernelId,
    omega0: &SiegelPoint,
    zeta: &SiegelPoint,
    rule: &ConfigRule,
) -> Result<CheckValue> {
    let tag = id
        .space()
        .ok_or_else(|| Error::param("id", "the ball kernel has no half-space norm"))?;
    let f = KernelFunction::new(id, omega0.clone())?;
    let g = KernelFunction::new(id, zeta.clone())?;
    let lhs = space_inner_product(&f, &g, tag, rule)?;
    Ok(CheckValue::new(lhs, kernel_eval(id, zeta, omega0)?))
}

/// Möbius invariance of the dotted Dirichlet kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MobiusReport {
    /// Relative error of the exponentiated double difference
    /// `K(ζ₁,ω₁) − K(ζ₁,ω₂) − K(ζ₂,ω₁) + K(ζ₂,ω₂)`.
    pub double_difference: f64,
    /// Relative error of `exp(K(φζ₁,φω₁)/γ)` against `exp(K(ζ₁,ω₁)/γ)`.
    pub pointwise: f64,
}

fn cross_ratio(
    z1: &SiegelPoint,
    z2: &SiegelPoint,
    w1: &SiegelPoint,
    w2: &SiegelPoint,
) -> Complex64 {
    q_pairing(z1, w2) * q_pairing(z2, w1) / (q_pairing(z1, w1) * q_pairing(z2, w2))
}

/// Compares the kernel before and after `φ` in exponential form, so the
/// result does not depend on a logarithm branch or on `γ`.
pub fn mobius_invariance_check(
    phi: &Automorphism,
    zeta: [&SiegelPoint; 2],
    omega: [&SiegelPoint; 2],
) -> Result<MobiusReport> {
    let n = same_dim(zeta[0], omega[0])?;
    for p in zeta.iter().chain(&omega) {
        if p.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.n(),
            });
        }
        require_interior(p)?;
    }
    let mapped: Vec<SiegelPoint> = zeta
        .iter()
        .chain(&omega)
        .map(|p| phi.apply(p))
        .collect::<Result<_>>()?;
    let before = cross_ratio(zeta[0], zeta[1], omega[0], omega[1]);
    let after = cross_ratio(&mapped[0], &mapped[1], &mapped[2], &mapped[3]);
    let r0 = dirichlet_ratio(zeta[0], omega[0])?;
    let r1 = dirichlet_ratio(&mapped[0], &mapped[2])?;
    Ok(MobiusReport {
        double_difference: (after - before).norm() / before.norm(),
        pointwise: (r1 - r0).norm() / r0.norm(),
    })
}

/// Ball kernel against the transported half-space kernel, compared as
/// `exp(K^B π^{n+1}/(n+1)!) = 1/(1 − ω·ζ̄)` and `exp(K^U(Cω, Cζ)/γ)`.
pub fn cayley_transfer_check(omega: &BallPoint, zeta: &BallPoint) -> Result<CheckValue> {
    let kb = ball_kernel_eval(omega, zeta)?;
    let cb = KernelId::BallDirichlet.constant(omega.n())?.value();
    let lhs = (kb / cb).exp();
    let rhs = dirichlet_ratio(&cayley(omega)?, &cayley(zeta)?)?;
    Ok(CheckValue::new(lhs, rhs))
}

/// The same relation with logarithms: `K^B = ((n+1)!/(π^{n+1}γ)) K^U_dot(Cω, Cζ)`.
pub fn cayley_transfer_log_check(
    omega: &BallPoint,
    zeta: &BallPoint,
    m: u32,
) -> Result<CheckValue> {
    let id = KernelId::DirichletDot { m };
    let gamma = id.constant(omega.n())?.value();
    let cb = KernelId::BallDirichlet.constant(omega.n())?.value();
    let ku = kernel_eval(id, &cayley(omega)?, &cayley(zeta)?)?;
    Ok(CheckValue::new(
        ball_kernel_eval(omega, zeta)?,
        cb / gamma * ku,
    ))
}

/// `[K(ω_j, ω_k)]` for a point set.
pub fn gram_matrix(id: KernelId, points: &[SiegelPoint]) -> Result<DMatrix<Complex64>> {
    let k = points.len();
    let mut g = DMatrix::zeros(k, k);
    for j in 0..k {
        for l in 0..k {
            g[(j, l)] = kernel_eval(id, &points[j], &points[l])?;
        }
    }
    Ok(g)
}

/// Smallest eigenvalue of the Hermitian part of a Gram matrix, and its trace.
pub fn gram_min_eigenvalue(g: &DMatrix<Complex64>) -> (f64, f64) {
    let herm = (g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let trace = g.diagonal().iter().map(|x| x.re).sum();
    (min, trace)
}

fn lemma41_domain(a: f64, b: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(a > -1.0) {
        return Err(Error::Divergent(format!(
            "a = {a} ≤ −1: the integral is +∞"
        )));
    }
    if !(b > 0.0) {
        return Err(Error::Divergent(format!("b = {b} ≤ 0: the integral is +∞")));
    }
    Ok(())
}

/// `C₀` with `∫_U ρ(ω)^a |Q(ζ,ω)|^{−(a+b+n+2)} dω = C₀ ρ(ζ)^{−b}`.
///
/// The `t`-, `|w|`- and height integrals each give one Beta factor:
/// `C₀ = 2^p B(½, (p−1)/2) · (2πⁿ/Γ(n)) 2^{2n−1} B(n, a+b+1) · B(a+1, b)` with `p = a+b+n+2`.
pub fn lemma41_constant(a: f64, b: f64, n: usize) -> Result<f64> {
    lemma41_domain(a, b, n)?;
    let nf = n as f64;
    let p = a + b + nf + 2.0;
    let ln = p * 2f64.ln() + ln_beta(0.5, (p - 1.0) / 2.0) + (2.0 * PI.powf(nf)).ln()
        - ln_gamma(nf)
        + (2.0 * nf - 1.0) * 2f64.ln()
        + ln_beta(nf, a + b + 1.0)
        + ln_beta(a + 1.0, b);
    Ok(ln.exp())
}

/// Composite Gauss–Legendre of `f(e^x) e^x` over a window, for integrands on
/// `(0, ∞)` with exponential decay in `log`-scale at both ends.
fn log_axis_integral<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    panels: usize,
    order: usize,
) -> f64 {
    let (gx, gw) = legendre(order);
    let width = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let a = lo + k as f64 * width;
        for (x, w) in gx.iter().zip(&gw) {
            let y = a + 0.5 * width * (x + 1.0);
            let v = y.exp();
            acc += 0.5 * width * w * f(v) * v;
        }
    }
    acc
}

/// The reduced one-dimensional integrals of the proof, each by quadrature:
/// `∫_ℝ (1+s²)^{−p/2} ds`, `∫_0^∞ r^{2n−1}(1+r²/4)^{1−p} dr`, `∫_0^∞ k^a (1+k)^{−(a+b+1)} dk`.
pub fn lemma41_nested(a: f64, b: f64, n: usize) -> Result<f64> {
    lemma41_domain(a, b, n)?;
    let nf = n as f64;
    let p = a + b + nf + 2.0;
    // s = sinh(y): integrand cosh^{1−p}(y), even.
    let (gx, gw) = legendre(20);
    let (lo, hi, panels) = (0.0, 80.0 / (p - 1.0), 400);
    let width = (hi - lo) / panels as f64;
    let mut s_int = 0.0;
    for k in 0..panels {
        let a0 = lo + k as f64 * width;
        for (x, w) in gx.iter().zip(&gw) {
            let y: f64 = a0 + 0.5 * width * (x + 1.0);
            s_int += 0.5 * width * w * y.cosh().powf(1.0 - p);
        }
    }
    s_int *= 2.0;
    let decay_r = (2.0 * p - 2.0 - 2.0 * nf).max(1e-3);
    let r_int = log_axis_integral(
        |r| r.powf(2.0 * nf - 1.0) * (1.0 + r * r / 4.0).powf(1.0 - p),
        -40.0 / nf,
        40.0 / decay_r + 3.0,
        400,
        20,
    );
    let k_int = log_axis_integral(
        |k| k.powf(a) * (1.0 + k).powf(-(a + b + 1.0)),
        -40.0 / (a + 1.0),
        40.0 / b,
        600,
        20,
    );
    Ok(2f64.powf(p) * s_int * (2.0 * PI.powf(nf) / crate::special::gamma(nf)) * r_int * k_int)
}

/// `∫_U ρ(ω)^a |Q(ζ,ω)|^{−(a+b+n+2)} dω` by configuration-space quadrature.
pub fn lemma41_integral(a: f64, b: f64, zeta: &SiegelPoint, rule: &ConfigRule) -> Result<f64> {
    let n = zeta.n();
    if !(a > -1.0) || !(b > 0.0) {
        // The quadrature would only see truncated tails; refuse as the closed form does.
        lemma41_domain(a, b, n)?;
    }
    let p = a + b + n as f64 + 2.0;
    let v = rule.integrate(a, |w| {
        Ok(Complex64::new(q_pairing(zeta, w).norm().powf(-p), 0.0))
    })?;
    Ok(v.value.re)
}

/// Importance-sampled estimate of the same integral at `ζ = (0, ih)`, `n = 1`.
///
/// Height `k ~ Lomax(b, h)`, `u = |w|²/4 ~ Lomax(a+b+1, h+k)`, uniform angle,
/// and `t ~ Cauchy(0, h+k+u)`. The integrand does not depend on the angle
/// of `w`, which is therefore not drawn.
pub fn lemma41_monte_carlo(
    a: f64,
    b: f64,
    h: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    lemma41_domain(a, b, 1)?;
    if !(h > 0.0) {
        return Err(Error::param("h", "must be positive"));
    }
    let c = a + b + 1.0;
    let p = a + b + 3.0;
    let lomax = |u: f64, shape: f64, scale: f64| scale * (u.powf(-1.0 / shape) - 1.0);
    monte_carlo(
        |rng| {
            let k = lomax(1.0 - rng.random::<f64>(), b, h);
            let u = lomax(1.0 - rng.random::<f64>(), c, h + k);
            let big_a = h + k + u;
            let s = big_a * (PI * (rng.random::<f64>() - 0.5)).tan();
            let pdf_k = b * h.powf(b) / (h + k).powf(b + 1.0);
            let pdf_u = c * (h + k).powf(c) / big_a.powf(c + 1.0);
            // The map (u, θ) ↦ w = 2√u e^{iθ} has Jacobian 2, so the planar density is pdf_u/(4π).
            let pdf_w = pdf_u / (4.0 * PI);
            let pdf_s = big_a / (PI * (big_a * big_a + s * s));
            ((k, big_a, s), pdf_k * pdf_w * pdf_s)
        },
        |&(k, big_a, s)| {
            // 2Q(ζ, ω) = A + is for ζ = (0, ih).
            Complex64::new(
                k.powf(a) * 2f64.powf(p) * (big_a * big_a + s * s).powf(-p / 2.0),
                0.0,
            )
        },
        samples,
        seed,
    )
}

/// Empirical `I(ζ) ρ(ζ) / (1+|ζ|²)^{2m+1}` for the difference integral of the
/// Dirichlet space; reported only, since the bounding constant is unnamed.
pub fn lemma51_ratio(zeta: &SiegelPoint, m: u32, rule: &ConfigRule) -> Result<f64> {
    let n = zeta.n();
    SpaceTag::Dirichlet { m }.validate(n)?;
    require_interior(zeta)?;
    let base = SiegelPoint::base(n);
    let weight = 2.0 * m as f64 - n as f64 - 2.0;
    let v = rule.integrate(weight, |w| {
        let d = q_pairing(zeta, w).powi(-(m as i32)) - q_pairing(&base, w).powi(-(m as i32));
        Ok(Complex64::new(d.norm_sqr(), 0.0))
    })?;
    let size = 1.0 + crate::cvec::norm_sq(&zeta.zeta_prime) + zeta.zeta_last.norm_sqr();
    Ok(v.value.re * zeta.rho() / size.powi(2 * m as i32 + 1))
}

/// A random interior point with `|z| ≤ z_max`, `|t| ≤ t_max`, `h ∈ [h_lo, h_hi]`.
pub fn random_point<R: Rng>(
    rng: &mut R,
    n: usize,
    z_max: f64,
    t_max: f64,
    h: (f64, f64),
) -> SiegelPoint {
    let z: Vec<Complex64> = (0..n)
        .map(|_| {
            Complex64::from_polar(
                z_max * rng.random::<f64>().sqrt(),
                2.0 * PI * rng.random::<f64>(),
            )
        })
        .collect();
    let t = t_max * (2.0 * rng.random::<f64>() - 1.0);
    let height = h.0 + (h.1 - h.0) * rng.random::<f64>();
    crate::siegel::psi_inv(&crate::siegel::HorocyclicCoordinates::new(z, t, height))
        .expect("interior point")
}

#[cfg(test)]
mod tests;
