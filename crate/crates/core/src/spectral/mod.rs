//! Paley–Wiener data and their synthesis.
//!
//! A datum is a field of rank-one operators `τ(λ)f = ⟨f, v(λ)⟩ e₀` supported on
//! `λ < 0`; only `v` is stored. Throughout, `μ = −λ > 0`.
//!
//! Every closed-form profile lowers to a short list of *atoms*: coherent
//! vectors `e^{−μh₀} σ_λ[z₀,t₀]* e₀` attached to a point of the half-space, or
//! basis vectors `e^{−bμ} e_α`. Pairings of atoms are single exponential terms
//! `κ μ^p e^{−wμ}`, so all spectral integrals reduce to Gamma integrals.

mod config;
mod synth;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bargmann::p0_row;
use crate::error::{Error, Result};
use crate::fock::{exp_tail_bound, FockTruncation, FockVector, MultiIndex};
use crate::heisenberg::HeisenbergElement;
use crate::kernels::q_pairing;
use crate::quadrature::{gauss_laguerre, HalfLineRule};
use crate::siegel::{psi, SiegelPoint};
use crate::special::{gamma, ln_gamma};

pub use config::{
    hardy_slice_norms, richardson_to_zero, space_inner_product, space_norm_sq, ConfigIntegral,
    ConfigRule, FromFn, HardyExtrapolation, HolomorphicFunction, SynthesizedFunction,
};
pub use synth::{
    synthesize, synthesize_dirichlet, synthesizer, synthesizer_names, ClosedForm, Laguerre,
    Synthesizer,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Spaces of holomorphic functions on the half-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "kebab-case")]
pub enum SpaceTag {
    Hardy,
    Bergman {
        nu: f64,
    },
    WeightedDirichlet {
        nu: f64,
        m: u32,
    },
    /// Weighted Dirichlet space with `ν = −n−1`.
    DruryArveson {
        m: u32,
    },
    Dirichlet {
        m: u32,
    },
}

impl SpaceTag {
    pub fn validate(&self, n: usize) -> Result<()> {
        let nf = n as f64;
        match *self {
            SpaceTag::Hardy => Ok(()),
            SpaceTag::Bergman { nu } if nu > -1.0 => Ok(()),
            SpaceTag::Bergman { nu } => Err(Error::param(
                "nu",
                format!("Bergman spaces need ν > −1, got {nu}"),
            )),
            SpaceTag::WeightedDirichlet { nu, m } => {
                if !(nu > -nf - 2.0 && nu < -1.0) {
                    return Err(Error::param(
                        "nu",
                        format!("weighted Dirichlet spaces need −n−2 < ν < −1, got {nu}"),
                    ));
                }
                if !(2.0 * m as f64 + nu > -1.0) {
                    return Err(Error::param("m", format!("need 2m + ν > −1, got m = {m}")));
                }
                Ok(())
            }
            SpaceTag::DruryArveson { m } => {
                SpaceTag::WeightedDirichlet { nu: -nf - 1.0, m }.validate(n)
            }
            SpaceTag::Dirichlet { m } => {
                if 2 * m as usize > n + 1 {
                    Ok(())
                } else {
                    Err(Error::param(
                        "m",
                        format!("the Dirichlet space needs 2m > n+1, got m = {m}"),
                    ))
                }
            }
        }
    }

    /// Weight exponent `ν` of the spectral class.
    pub fn nu(&self, n: usize) -> f64 {
        match *self {
            SpaceTag::Hardy => -1.0,
            SpaceTag::Bergman { nu } | SpaceTag::WeightedDirichlet { nu, .. } => nu,
            SpaceTag::DruryArveson { .. } => -(n as f64) - 1.0,
            SpaceTag::Dirichlet { .. } => -(n as f64) - 2.0,
        }
    }

    /// Number of vertical derivatives in the norm.
    pub fn order(&self) -> u32 {
        match *self {
            SpaceTag::Hardy | SpaceTag::Bergman { .. } => 0,
            SpaceTag::WeightedDirichlet { m, .. }
            | SpaceTag::DruryArveson { m }
            | SpaceTag::Dirichlet { m } => m,
        }
    }

    /// Exponent of `ρ` multiplying `|∂^m F|²` in the volume integral.
    pub fn volume_weight(&self, n: usize) -> f64 {
        2.0 * self.order() as f64 + self.nu(n)
    }

    /// `c` in `‖F‖² = c ‖τ‖²_{L²_ν}` (plus `|F(𝐢)|²` for the Dirichlet space).
    pub fn plancherel_constant(&self, n: usize) -> f64 {
        match self {
            SpaceTag::Hardy => 1.0,
            _ => {
                let s = self.volume_weight(n) + 1.0;
                (ln_gamma(s) - s * 2f64.ln()).exp()
            }
        }
    }
}

/// Reproducing-kernel families with known data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "kebab-case")]
pub enum KernelFamily {
    Hardy,
    Bergman { nu: f64 },
    WeightedDirichlet { nu: f64, m: u32 },
    Dirichlet { m: u32 },
}

impl KernelFamily {
    pub fn space(&self) -> SpaceTag {
        match *self {
            KernelFamily::Hardy => SpaceTag::Hardy,
            KernelFamily::Bergman { nu } => SpaceTag::Bergman { nu },
            KernelFamily::WeightedDirichlet { nu, m } => SpaceTag::WeightedDirichlet { nu, m },
            KernelFamily::Dirichlet { m } => SpaceTag::Dirichlet { m },
        }
    }

    /// `(C, p)` with `v(λ) = C μ^p (coherent vector at the base point)`.
    fn scalar_profile(&self, n: usize) -> (f64, f64) {
        let two = 2f64.ln();
        match *self {
            KernelFamily::Hardy => (1.0, 0.0),
            KernelFamily::Bergman { nu } => {
                (((nu + 1.0) * two - ln_gamma(nu + 1.0)).exp(), nu + 1.0)
            }
            KernelFamily::WeightedDirichlet { nu, m } => {
                let s = 2.0 * m as f64 + nu + 1.0;
                ((s * two - ln_gamma(s)).exp(), nu + 1.0)
            }
            KernelFamily::Dirichlet { m } => {
                let s = 2.0 * m as f64 - n as f64 - 1.0;
                ((s * two - ln_gamma(s)).exp(), -(n as f64) - 1.0)
            }
        }
    }
}

/// Scalar profile `φ(μ) = coeff · μ^power · e^{−decay·μ}` attached to `e_α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteTerm {
    pub alpha: MultiIndex,
    #[serde(default = "one")]
    pub coeff: Complex64,
    pub profile: ScalarProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarProfile {
    pub power: f64,
    pub decay: f64,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Samples of `v` at the nodes of a half-line rule.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub rule: HalfLineRule,
    pub samples: Vec<FockVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Kernel {
        family: KernelFamily,
        base: SiegelPoint,
    },
    Finite(Vec<FiniteTerm>),
    Sampled(SampledProfile),
    /// Linear combination `Σ c_k τ_k` of closed-form profiles.
    Sum(Vec<(Complex64, SpectralProfile)>),
}

/// The datum `τ`, stored through `v(λ)`, together with a derivative order
/// `m` meaning `v ↦ λ^m v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    n: usize,
    order: u32,
    kind: ProfileKind,
}

/// Vector-valued building block of `v(μ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    /// `e^{−μh} σ_λ[z,t]* e₀` for the point with coordinates `(z,t,h)`.
    Coherent(SiegelPoint),
    /// `e^{−bμ} e_α`.
    Monomial { alpha: MultiIndex, decay: f64 },
}

/// `coeff · μ^power · atom(μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub coeff: Complex64,
    pub power: f64,
    pub atom: Atom,
}

/// `coeff · μ^power · e^{−rate·μ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: Complex64,
    pub power: f64,
    pub rate: Complex64,
}

impl ExpTerm {
    pub fn eval(&self, mu: f64) -> Complex64 {
        if self.coeff == Complex64::new(0.0, 0.0) {
            return self.coeff;
        }
        self.coeff * mu.powf(self.power) * (-self.rate * mu).exp()
    }
}

/// `⟨A(μ), B(μ)⟩_{F^λ}` as a single exponential term.
pub fn atom_pairing(a: &Atom, b: &Atom) -> ExpTerm {
    match (a, b) {
        (Atom::Coherent(p), Atom::Coherent(q)) => ExpTerm {
            coeff: one(),
            power: 0.0,
            rate: 2.0 * q_pairing(p, q),
        },
        (Atom::Coherent(p), Atom::Monomial { alpha, decay }) => {
            let d = alpha.degree() as f64;
            ExpTerm {
                coeff: alpha.monomial(&p.zeta_prime)
                    * (-0.5 * alpha.ln_factorial() - 0.5 * d * 2f64.ln()).exp(),
                power: d / 2.0,
                rate: *decay - I * p.zeta_last,
            }
        }
        (Atom::Monomial { .. }, Atom::Coherent(_)) => {
            let t = atom_pairing(b, a);
            ExpTerm {
                coeff: t.coeff.conj(),
                power: t.power,
                rate: t.rate.conj(),
            }
        }
        (
            Atom::Monomial {
                alpha: x,
                decay: b1,
            },
            Atom::Monomial {
                alpha: y,
                decay: b2,
            },
        ) => ExpTerm {
            coeff: if x == y {
                one()
            } else {
                Complex64::new(0.0, 0.0)
            },
            power: 0.0,
            rate: Complex64::new(b1 + b2, 0.0),
        },
    }
}

/// Sum of exponential terms `Σ κ_i μ^{p_i} e^{−w_i μ}`.
pub type ExpSum = Vec<ExpTerm>;

fn pair_components(left: &[Component], right: &[Component], extra_power: f64, sign: f64) -> ExpSum {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in left {
        for b in right {
            let t = atom_pairing(&a.atom, &b.atom);
            if t.coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            out.push(ExpTerm {
                coeff: a.coeff * b.coeff.conj() * t.coeff * sign,
                power: a.power + b.power + t.power + extra_power,
                rate: t.rate,
            });
        }
    }
    out
}

const POWER_MATCH: f64 = 1e-12;

/// `∫_0^∞ Σ κ_i μ^{p_i} e^{−w_i μ} dμ` in closed form.
///
/// Terms with `p = −1` are combined by Frullani's integral and must have
/// vanishing total coefficient.
pub fn integrate_exp_sum(terms: &[ExpTerm]) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut frullani_sum = Complex64::new(0.0, 0.0);
    let mut frullani_scale = 0.0f64;
    for t in terms {
        if t.coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        if !(t.rate.re > 0.0) {
            return Err(Error::Divergent(format!(
                "exponential rate {} has non-positive real part",
                t.rate
            )));
        }
        if (t.power + 1.0).abs() < POWER_MATCH {
            frullani_sum += t.coeff;
            frullani_scale = frullani_scale.max(t.coeff.norm());
            acc -= t.coeff * t.rate.ln();
        } else if t.power < -1.0 {
            return Err(Error::Divergent(format!(
                "μ^{} is not integrable at 0",
                t.power
            )));
        } else {
            let s = t.power + 1.0;
            acc += t.coeff * gamma(s) * (-s * t.rate.ln()).exp();
        }
    }
    if frullani_sum.norm() > 1e-12 * frullani_scale.max(1e-300) {
        return Err(Error::Divergent(format!(
            "μ^-1 terms do not cancel at λ → 0 (net coefficient {frullani_sum})"
        )));
    }
    Ok(acc)
}

/// Smallest power and smallest real rate of a sum, used to choose a Laguerre weight.
pub fn envelope(terms: &[ExpTerm]) -> Option<(f64, f64)> {
    terms
        .iter()
        .filter(|t| t.coeff != Complex64::new(0.0, 0.0))
        .fold(None, |acc, t| match acc {
            None => Some((t.power, t.rate.re)),
            Some((p, r)) => Some((p.min(t.power), r.min(t.rate.re))),
        })
}

/// Half-line Gauss–Laguerre integration of `Σ` terms, with node doubling.
///
/// Terms are grouped by their power of `μ`; each group uses the weight
/// `μ^a e^{−cμ}` with `a` its power (raised by one for a Frullani group) and
/// `c` its smallest real rate.
pub fn integrate_exp_sum_laguerre(terms: &[ExpTerm], nodes: usize, tol: f64) -> Result<Complex64> {
    let mut groups: Vec<(f64, f64, Vec<ExpTerm>)> = Vec::new();
    for t in terms.iter().filter(|t| t.coeff != Complex64::new(0.0, 0.0)) {
        if t.power < -1.0 - POWER_MATCH {
            return Err(Error::Divergent(format!(
                "μ^{} is not integrable at 0",
                t.power
            )));
        }
        if !(t.rate.re > 0.0) {
            return Err(Error::Divergent(format!(
                "exponential rate {} is not positive",
                t.rate
            )));
        }
        match groups
            .iter_mut()
            .find(|g| (g.0 - t.power).abs() < POWER_MATCH)
        {
            Some(g) => {
                g.1 = g.1.min(t.rate.re);
                g.2.push(*t);
            }
            None => groups.push((t.power, t.rate.re, vec![*t])),
        }
    }
    let run = |count: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (power, rate, group) in &groups {
            let a = if *power <= -1.0 + POWER_MATCH {
                power + 1.0
            } else {
                *power
            };
            let rule = gauss_laguerre(a, *rate, count)?;
            acc += rule.integrate(|mu| {
                let s: Complex64 = group.iter().map(|t| t.eval(mu)).sum();
                s * mu.powf(-a) * (rate * mu).exp()
            })?;
        }
        Ok(acc)
    };
    let coarse = run(nodes)?;
    let fine = run(2 * nodes)?;
    if (fine - coarse).norm() > tol * fine.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::UnderResolved(format!(
            "Gauss–Laguerre with {nodes} and {} nodes differ by {:.3e} (relative)",
            2 * nodes,
            (fine - coarse).norm() / fine.norm()
        )));
    }
    Ok(fine)
}

impl SpectralProfile {
    pub fn kernel(family: KernelFamily, base: SiegelPoint) -> Result<Self> {
        let n = base.n();
        family.space().validate(n)?;
        if !base.is_interior() {
            return Err(Error::OutsideDomain(
                "kernel base point must be interior".into(),
            ));
        }
        Ok(SpectralProfile {
            n,
            order: 0,
            kind: ProfileKind::Kernel { family, base },
        })
    }

    pub fn finite(n: usize, terms: Vec<FiniteTerm>) -> Result<Self> {
        for t in &terms {
            if t.alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: t.alpha.len(),
                });
            }
            if !(t.profile.decay >= 0.0) || !t.profile.power.is_finite() {
                return Err(Error::param(
                    "profile",
                    "decay must be ≥ 0 and power finite",
                ));
            }
        }
        Ok(SpectralProfile {
            n,
            order: 0,
            kind: ProfileKind::Finite(terms),
        })
    }

    pub fn zero(n: usize) -> Self {
        SpectralProfile {
            n,
            order: 0,
            kind: ProfileKind::Finite(Vec::new()),
        }
    }

    pub fn sampled(n: usize, rule: HalfLineRule, samples: Vec<FockVector>) -> Result<Self> {
        if samples.len() != rule.node_count() {
            return Err(Error::DimensionMismatch {
                expected: rule.node_count(),
                got: samples.len(),
            });
        }
        if samples.iter().any(|s| s.truncation().n() != n) {
            return Err(Error::param("samples", "Fock dimension differs from n"));
        }
        Ok(SpectralProfile {
            n,
            order: 0,
            kind: ProfileKind::Sampled(SampledProfile { rule, samples }),
        })
    }

    pub fn sum(n: usize, parts: Vec<(Complex64, SpectralProfile)>) -> Result<Self> {
        for (_, p) in &parts {
            if p.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.n,
                });
            }
            if matches!(p.kind, ProfileKind::Sampled(_)) {
                return Err(Error::param("sum", "sampled profiles cannot be combined"));
            }
        }
        Ok(SpectralProfile {
            n,
            order: 0,
            kind: ProfileKind::Sum(parts),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.kind, ProfileKind::Sampled(_))
    }

    /// Samples `v` at the nodes of `rule` on truncations chosen from `tol`.
    pub fn to_sampled(&self, rule: HalfLineRule, tol: f64) -> Result<Self> {
        let samples = rule
            .nodes()
            .iter()
            .map(|&mu| self.coefficients(mu, tol))
            .collect::<Result<Vec<_>>>()?;
        let mut out = SpectralProfile::sampled(self.n, rule, samples)?;
        out.order = 0;
        Ok(out)
    }

    /// The components of `v`, without the derivative factor `(−μ)^m`.
    pub fn components(&self) -> Result<Vec<Component>> {
        match &self.kind {
            ProfileKind::Kernel { family, base } => {
                let (c, p) = family.scalar_profile(self.n);
                let mut out = vec![Component {
                    coeff: Complex64::new(c, 0.0),
                    power: p,
                    atom: Atom::Coherent(base.clone()),
                }];
                if let KernelFamily::Dirichlet { .. } = family {
                    out.push(Component {
                        coeff: Complex64::new(-c, 0.0),
                        power: p,
                        atom: Atom::Coherent(SiegelPoint::base(self.n)),
                    });
                }
                Ok(out)
            }
            ProfileKind::Finite(terms) => Ok(terms
                .iter()
                .map(|t| Component {
                    coeff: t.coeff,
                    power: t.profile.power,
                    atom: Atom::Monomial {
                        alpha: t.alpha.clone(),
                        decay: t.profile.decay,
                    },
                })
                .collect()),
            ProfileKind::Sum(parts) => {
                let mut out = Vec::new();
                for (c, p) in parts {
                    let extra = p.order;
                    for mut comp in p.components()? {
                        comp.coeff *= c * if extra % 2 == 1 { -1.0 } else { 1.0 };
                        comp.power += extra as f64;
                        out.push(comp);
                    }
                }
                Ok(out)
            }
            ProfileKind::Sampled(_) => Err(Error::param(
                "profile",
                "sampled profiles have no closed form",
            )),
        }
    }

    /// Components including the derivative factor.
    fn full_components(&self) -> Result<Vec<Component>> {
        let m = self.order;
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        Ok(self
            .components()?
            .into_iter()
            .map(|mut c| {
                c.coeff *= sign;
                c.power += m as f64;
                c
            })
            .collect())
    }

    /// `‖v(μ)‖² = ‖τ(λ)‖²_HS` as a sum of exponential terms.
    pub fn hs_norm_terms(&self) -> Result<ExpSum> {
        let c = self.full_components()?;
        Ok(pair_components(&c, &c, 0.0, 1.0))
    }

    /// `‖τ(λ)‖_HS² ` at `λ = −μ`.
    pub fn hs_norm_sq(&self, mu: f64) -> Result<f64> {
        match &self.kind {
            ProfileKind::Sampled(s) => {
                let k = s
                    .rule
                    .nodes()
                    .iter()
                    .position(|&x| x == mu)
                    .ok_or_else(|| Error::param("mu", "not a sample node"))?;
                Ok(s.samples[k].norm_sq() * mu.powi(2 * self.order as i32))
            }
            _ => Ok(self
                .hs_norm_terms()?
                .iter()
                .map(|t| t.eval(mu))
                .sum::<Complex64>()
                .re),
        }
    }

    /// `v(λ)` on a truncation large enough that the neglected tail of every
    /// coherent component is below `tol`.
    pub fn coefficients(&self, mu: f64, tol: f64) -> Result<FockVector> {
        if !(mu > 0.0) {
            return Err(Error::param("mu", "must be positive (λ < 0)"));
        }
        let comps = self.full_components()?;
        let trunc = truncation_for(
            self.n,
            &comps.iter().map(|c| &c.atom).collect::<Vec<_>>(),
            mu,
            tol,
        )?;
        components_vector(&comps, mu, &trunc)
    }

    /// Closed-form pairing `∫_0^∞ ⟨v₁(μ), v₂(μ)⟩ μ^k dμ`.
    pub fn pairing(&self, other: &Self, k: f64) -> Result<Complex64> {
        let a = self.full_components()?;
        let b = other.full_components()?;
        integrate_exp_sum(&pair_components(&a, &b, k, 1.0))
    }

    /// The same pairing by Gauss–Laguerre on truncated coefficient vectors.
    pub fn pairing_truncated(
        &self,
        other: &Self,
        k: f64,
        nodes: usize,
        tol: f64,
    ) -> Result<Complex64> {
        let a = self.full_components()?;
        let b = other.full_components()?;
        let env = envelope(&pair_components(&a, &b, k, 1.0))
            .ok_or_else(|| Error::param("profile", "empty"))?;
        let expo = if env.0 <= -1.0 + POWER_MATCH {
            env.0 + 1.0
        } else {
            env.0
        };
        let rule = gauss_laguerre(expo, env.1, nodes)?;
        let atoms: Vec<&Atom> = a.iter().chain(&b).map(|c| &c.atom).collect();
        rule.integrate(|mu| {
            let trunc = truncation_for(self.n, &atoms, mu, tol).expect("valid truncation");
            let va = components_vector(&a, mu, &trunc).expect("vector");
            let vb = components_vector(&b, mu, &trunc).expect("vector");
            let ip: Complex64 = va
                .coeffs()
                .iter()
                .zip(vb.coeffs())
                .map(|(x, y)| x * y.conj())
                .sum();
            ip * mu.powf(k - expo) * (env.1 * mu).exp()
        })
    }

    /// Exponential terms of `∫ μ^n ⟨probe(μ), v(μ)⟩` for a probe made of atoms.
    pub fn exp_terms(&self, probe: &[Component]) -> Result<ExpSum> {
        let c = self.full_components()?;
        Ok(pair_components(probe, &c, self.n as f64, 1.0))
    }
}

/// Truncation degree covering monomial atoms and the coherent tails at `μ`.
fn truncation_for(n: usize, atoms: &[&Atom], mu: f64, tol: f64) -> Result<Arc<FockTruncation>> {
    let mut degree = 0usize;
    let mut x = 0.0f64;
    for a in atoms {
        match a {
            Atom::Monomial { alpha, .. } => degree = degree.max(alpha.degree() as usize),
            Atom::Coherent(p) => x = x.max(0.5 * mu * crate::cvec::norm_sq(&p.zeta_prime)),
        }
    }
    if x > 0.0 {
        let target = tol.max(1e-300);
        let m = (0..4000)
            .find(|&m| (-x).exp() * exp_tail_bound(x, m) < target)
            .ok_or_else(|| {
                Error::UnderResolved(format!("coherent tail at μ = {mu} needs degree > 4000"))
            })?;
        degree = degree.max(m);
    }
    FockTruncation::new(n, degree)
}

/// `Σ coeff · μ^power · atom(μ)` as a truncated coefficient vector.
fn components_vector(
    comps: &[Component],
    mu: f64,
    trunc: &Arc<FockTruncation>,
) -> Result<FockVector> {
    let mut v = FockVector::zeros(trunc.clone());
    for c in comps {
        if c.coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        let scale = c.coeff * mu.powf(c.power);
        match &c.atom {
            Atom::Coherent(p) => {
                let hc = psi(p)?;
                let g = HeisenbergElement::new(hc.z.clone(), hc.t);
                let row = p0_row(-mu, &g, trunc)?;
                let damp = (-mu * hc.h).exp();
                for (dst, r) in v.coeffs_mut().iter_mut().zip(row.coeffs()) {
                    *dst += scale * damp * r.conj();
                }
            }
            Atom::Monomial { alpha, decay } => {
                let k = trunc
                    .position(alpha)
                    .ok_or_else(|| Error::param("alpha", "outside truncation"))?;
                v.coeffs_mut()[k] += scale * (-decay * mu).exp();
            }
        }
    }
    Ok(v)
}

/// `(2π)^{−(n+1)}`.
pub fn plancherel_factor(n: usize) -> f64 {
    (2.0 * PI).powi(-(n as i32 + 1))
}

/// `‖τ‖²_{L²_ν} = (2π)^{−(n+1)} ∫ ‖τ(λ)‖²_HS |λ|^{n−ν−1} dλ` by Gauss–Laguerre.
pub fn l2nu_norm_sq(tau: &SpectralProfile, nu: f64) -> Result<f64> {
    l2nu_norm_sq_with(tau, nu, 48, 1e-11)
}

pub fn l2nu_norm_sq_with(tau: &SpectralProfile, nu: f64, nodes: usize, tol: f64) -> Result<f64> {
    let n = tau.n;
    let k = n as f64 - nu - 1.0;
    if let ProfileKind::Sampled(s) = &tau.kind {
        let a = s.rule.exponent();
        let c = s.rule.scale();
        let mut acc = 0.0;
        for ((&mu, &w), v) in s.rule.nodes().iter().zip(s.rule.weights()).zip(&s.samples) {
            acc +=
                w * v.norm_sq() * mu.powi(2 * tau.order as i32) * mu.powf(k - a) * (c * mu).exp();
        }
        return Ok(plancherel_factor(n) * acc);
    }
    let mut terms = tau.hs_norm_terms()?;
    for t in &mut terms {
        t.power += k;
    }
    // Divergence is decided by the exponents, before any quadrature.
    integrate_exp_sum(&terms)?;
    let v = integrate_exp_sum_laguerre(&terms, nodes, tol)?;
    Ok(plancherel_factor(n) * v.re)
}

/// Closed-form counterpart of [`l2nu_norm_sq`].
pub fn l2nu_norm_sq_closed(tau: &SpectralProfile, nu: f64) -> Result<f64> {
    let k = tau.n as f64 - nu - 1.0;
    let mut terms = tau.hs_norm_terms()?;
    for t in &mut terms {
        t.power += k;
    }
    Ok(plancherel_factor(tau.n) * integrate_exp_sum(&terms)?.re)
}

/// `v ↦ λ^m v`.
pub fn spectral_derivative(tau: &SpectralProfile, m: u32) -> SpectralProfile {
    let mut out = tau.clone();
    out.order += m;
    out
}

/// JSON description of a profile for the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ProfileSpec {
    Kernel {
        #[serde(default)]
        space: Option<String>,
        #[serde(default)]
        nu: Option<f64>,
        #[serde(default)]
        m: Option<u32>,
        base: SiegelPoint,
        #[serde(default)]
        order: u32,
    },
    Finite {
        n: usize,
        terms: Vec<FiniteTerm>,
        #[serde(default)]
        order: u32,
    },
}

impl ProfileSpec {
    pub fn build(&self) -> Result<SpectralProfile> {
        match self {
            ProfileSpec::Kernel {
                space,
                nu,
                m,
                base,
                order,
            } => {
                let n = base.n() as f64;
                let need_m =
                    || m.ok_or_else(|| Error::Parse("this kernel family needs `m`".into()));
                let family = match space.as_deref() {
                    Some("hardy") => KernelFamily::Hardy,
                    Some("bergman") => KernelFamily::Bergman {
                        nu: nu.ok_or_else(|| Error::Parse("bergman needs `nu`".into()))?,
                    },
                    Some("weighted-dirichlet") => KernelFamily::WeightedDirichlet {
                        nu: nu
                            .ok_or_else(|| Error::Parse("weighted-dirichlet needs `nu`".into()))?,
                        m: need_m()?,
                    },
                    Some("drury-arveson") => KernelFamily::WeightedDirichlet {
                        nu: -n - 1.0,
                        m: need_m()?,
                    },
                    Some("dirichlet") => KernelFamily::Dirichlet { m: need_m()? },
                    Some(other) => {
                        return Err(Error::Unknown {
                            kind: "space",
                            name: other.to_string(),
                        })
                    }
                    None => match nu {
                        Some(v) if *v > -1.0 => KernelFamily::Bergman { nu: *v },
                        Some(v) if *v == -1.0 => KernelFamily::Hardy,
                        Some(v) if *v == -n - 2.0 => KernelFamily::Dirichlet { m: need_m()? },
                        Some(v) => KernelFamily::WeightedDirichlet {
                            nu: *v,
                            m: need_m()?,
                        },
                        None => {
                            return Err(Error::Parse("kernel profile needs `space` or `nu`".into()))
                        }
                    },
                };
                Ok(spectral_derivative(
                    &SpectralProfile::kernel(family, base.clone())?,
                    *order,
                ))
            }
            ProfileSpec::Finite { n, terms, order } => Ok(spectral_derivative(
                &SpectralProfile::finite(*n, terms.clone())?,
                *order,
            )),
        }
    }
}

#[cfg(test)]
mod tests;
