//! Synthesis `τ ↦ F` by two independent routes.

use std::sync::Arc;

use num_complex::Complex64;

use super::{
    atom_pairing, components_vector, integrate_exp_sum, plancherel_factor, truncation_for, Atom,
    Component, ProfileKind, SpectralProfile, POWER_MATCH,
};
use crate::error::{Error, Result};
use crate::quadrature::gauss_laguerre;
use crate::siegel::SiegelPoint;

/// Evaluates `(2π)^{−(n+1)} ∫_0^∞ μ^n ⟨probe(μ), v(μ)⟩ dμ`, where the probe is
/// a combination of atoms (a coherent vector for point evaluation).
pub trait Synthesizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn integrate_probe(&self, tau: &SpectralProfile, probe: &[Component]) -> Result<Complex64>;
}

/// Gamma-integral evaluation of the exponential terms. Exact up to rounding.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl Synthesizer for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn integrate_probe(&self, tau: &SpectralProfile, probe: &[Component]) -> Result<Complex64> {
        if probe.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(plancherel_factor(tau.n()) * integrate_exp_sum(&tau.exp_terms(probe)?)?)
    }
}

/// Gauss–Laguerre in `μ` of the inner product of truncated coefficient
/// vectors built from `p0_row`. Resolution is checked by doubling the nodes.
#[derive(Debug, Clone, Copy)]
pub struct Laguerre {
    pub nodes: usize,
    pub tol: f64,
    /// Per-node bound on the neglected Fock tail.
    pub tail_tol: f64,
}

impl Default for Laguerre {
    fn default() -> Self {
        Laguerre {
            nodes: 64,
            tol: 1e-10,
            tail_tol: 1e-17,
        }
    }
}

/// μ-power, slowest decay rate, and the (probe, component) index pairs.
type PowerGroup = (f64, f64, Vec<(usize, usize)>);

impl Laguerre {
    fn run(
        &self,
        tau: &SpectralProfile,
        probe: &[Component],
        comps: &[Component],
        count: usize,
    ) -> Result<Complex64> {
        let n = tau.n() as f64;
        // Pairs are grouped by the power of μ in their envelope, and each group
        // gets a matched Laguerre weight; a single weight would leave
        // fractional powers of μ and converge only algebraically.
        let mut groups: Vec<PowerGroup> = Vec::new();
        for (j, a) in probe.iter().enumerate() {
            for (k, b) in comps.iter().enumerate() {
                let t = atom_pairing(&a.atom, &b.atom);
                if t.coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let power = a.power + b.power + t.power + n;
                match groups
                    .iter_mut()
                    .find(|g| (g.0 - power).abs() < POWER_MATCH)
                {
                    Some(g) => {
                        g.1 = g.1.min(t.rate.re);
                        g.2.push((j, k));
                    }
                    None => groups.push((power, t.rate.re, vec![(j, k)])),
                }
            }
        }
        let unit = |atom: &Atom| Component {
            coeff: Complex64::new(1.0, 0.0),
            power: 0.0,
            atom: atom.clone(),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (power, rate, pairs) in groups {
            let expo = if power <= -1.0 + POWER_MATCH {
                power + 1.0
            } else {
                power
            };
            if expo <= -1.0 || !(rate > 0.0) {
                return Err(Error::Divergent(format!(
                    "integrand μ^{power} e^(-{rate}μ) is not integrable"
                )));
            }
            let rule = gauss_laguerre(expo, rate, count)?;
            let atoms: Vec<&Atom> = pairs
                .iter()
                .flat_map(|&(j, k)| [&probe[j].atom, &comps[k].atom])
                .collect();
            for (&mu, &w) in rule.nodes().iter().zip(rule.weights()) {
                let trunc = truncation_for(tau.n(), &atoms, mu, self.tail_tol)?;
                let mut sum = Complex64::new(0.0, 0.0);
                for &(j, k) in &pairs {
                    let (a, b) = (&probe[j], &comps[k]);
                    let va = components_vector(&[unit(&a.atom)], mu, &trunc)?;
                    let vb = components_vector(&[unit(&b.atom)], mu, &trunc)?;
                    let ip: Complex64 = va
                        .coeffs()
                        .iter()
                        .zip(vb.coeffs())
                        .map(|(x, y)| x * y.conj())
                        .sum();
                    sum += a.coeff * b.coeff.conj() * mu.powf(a.power + b.power) * ip;
                }
                acc += w * sum * mu.powf(n - expo) * (rate * mu).exp();
            }
        }
        Ok(acc)
    }

    fn sampled(&self, tau: &SpectralProfile, probe: &[Component]) -> Result<Complex64> {
        let ProfileKind::Sampled(s) = tau.kind() else {
            unreachable!()
        };
        let a = s.rule.exponent();
        let c = s.rule.scale();
        let m = tau.order() as i32;
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        let n = tau.n() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&mu, &w), v) in s.rule.nodes().iter().zip(s.rule.weights()).zip(&s.samples) {
            let p = components_vector(probe, mu, v.truncation())?;
            let ip: Complex64 = p
                .coeffs()
                .iter()
                .zip(v.coeffs())
                .map(|(a, b)| a * b.conj())
                .sum();
            acc += w * ip * sign * mu.powi(m) * mu.powf(n - a) * (c * mu).exp();
        }
        Ok(plancherel_factor(tau.n()) * acc)
    }
}

impl Synthesizer for Laguerre {
    fn name(&self) -> &'static str {
        "laguerre"
    }

    fn integrate_probe(&self, tau: &SpectralProfile, probe: &[Component]) -> Result<Complex64> {
        if probe.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if tau.is_sampled() {
            return self.sampled(tau, probe);
        }
        let comps = tau.full_components()?;
        if comps.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // Divergent data are rejected from the exponents alone.
        integrate_exp_sum(&tau.exp_terms(probe)?)?;
        let coarse = self.run(tau, probe, &comps, self.nodes)?;
        let fine = self.run(tau, probe, &comps, 2 * self.nodes)?;
        let diff = (fine - coarse).norm();
        if diff > self.tol * fine.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::UnderResolved(format!(
                "λ-rule with {} and {} nodes differs by {:.3e} (relative)",
                self.nodes,
                2 * self.nodes,
                diff / fine.norm()
            )));
        }
        Ok(plancherel_factor(tau.n()) * fine)
    }
}

pub fn synthesizer_names() -> &'static [&'static str] {
    &["laguerre", "closed-form"]
}

/// Registry lookup by name.
pub fn synthesizer(name: &str) -> Result<Arc<dyn Synthesizer>> {
    match name {
        "laguerre" => Ok(Arc::new(Laguerre::default())),
        "closed-form" => Ok(Arc::new(ClosedForm)),
        other => Err(Error::Unknown {
            kind: "synthesizer",
            name: other.to_string(),
        }),
    }
}

fn interior(p: &SiegelPoint, n: usize) -> Result<()> {
    if p.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.n(),
        });
    }
    if !p.is_interior() {
        return Err(Error::OutsideDomain(format!(
            "synthesis needs h > 0, got h = {}",
            p.rho()
        )));
    }
    Ok(())
}

/// `F(ζ) = (2π)^{−(n+1)} ∫ e^{hλ} tr(τ(λ)σ_λ[z,t]*) |λ|^n dλ`.
pub fn synthesize(
    tau: &SpectralProfile,
    p: &SiegelPoint,
    synth: &dyn Synthesizer,
) -> Result<Complex64> {
    interior(p, tau.n())?;
    let probe = [Component {
        coeff: Complex64::new(1.0, 0.0),
        power: 0.0,
        atom: Atom::Coherent(p.clone()),
    }];
    synth.integrate_probe(tau, &probe)
}

/// Dirichlet synthesis: the trace against `e^{hλ}σ_λ[z,t]* − e^{λ}σ_λ[0,0]*`, plus `c`.
pub fn synthesize_dirichlet(
    tau: &SpectralProfile,
    p: &SiegelPoint,
    c: Complex64,
    synth: &dyn Synthesizer,
) -> Result<Complex64> {
    interior(p, tau.n())?;
    let base = SiegelPoint::base(tau.n());
    if *p == base {
        return Ok(c);
    }
    let probe = [
        Component {
            coeff: Complex64::new(1.0, 0.0),
            power: 0.0,
            atom: Atom::Coherent(p.clone()),
        },
        Component {
            coeff: Complex64::new(-1.0, 0.0),
            power: 0.0,
            atom: Atom::Coherent(base),
        },
    ];
    Ok(synth.integrate_probe(tau, &probe)? + c)
}
