//! Configuration-space norms by quadrature in horocyclic coordinates.
//!
//! Heights use `h = e^x`. The `z`-variable is split into a radius `r = e^y`
//! around the centre hint and angles (polar for `n = 1`, Hopf coordinates for
//! `n = 2`). For each `(z, h)` the `t`-axis is mapped by `t = t_c + s·tan u`,
//! with `s` the real part of `2Q` against the hint, which turns the
//! Cauchy-type decay of kernels into a smooth integrand on `(−π/2, π/2)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    spectral_derivative, synthesize, synthesize_dirichlet, SpaceTag, SpectralProfile, Synthesizer,
};
use crate::error::{Error, Result};
use crate::quadrature::legendre;
use crate::siegel::{psi_inv, HorocyclicCoordinates, SiegelPoint, BOUNDARY_BAND};

/// A holomorphic function on the half-space together with its vertical
/// derivatives `∂^m F/∂ζ_{n+1}^m`.
pub trait HolomorphicFunction: Sync {
    fn n(&self) -> usize;

    fn value(&self, p: &SiegelPoint) -> Result<Complex64>;

    fn vertical_derivative(&self, m: u32, p: &SiegelPoint) -> Result<Complex64> {
        if m == 0 {
            self.value(p)
        } else {
            Err(Error::param(
                "function",
                "no analytic vertical derivative supplied",
            ))
        }
    }

    /// `∂^m F` with any per-function setup done once, for use inside quadratures.
    fn vertical_derivative_fn(&self, _m: u32) -> Option<Evaluator<'_>> {
        None
    }
}

pub type Evaluator<'a> = Box<dyn Fn(&SiegelPoint) -> Result<Complex64> + Sync + 'a>;

fn derivative_evaluator(f: &dyn HolomorphicFunction, m: u32) -> Evaluator<'_> {
    f.vertical_derivative_fn(m)
        .unwrap_or_else(|| Box::new(move |p| f.vertical_derivative(m, p)))
}

/// `F = synthesize(τ)`, or the Dirichlet synthesis with `F(𝐢) = c`.
#[derive(Clone)]
pub struct SynthesizedFunction {
    pub profile: SpectralProfile,
    pub synth: Arc<dyn Synthesizer>,
    pub dirichlet_value: Option<Complex64>,
}

impl SynthesizedFunction {
    pub fn new(profile: SpectralProfile, synth: Arc<dyn Synthesizer>) -> Self {
        SynthesizedFunction {
            profile,
            synth,
            dirichlet_value: None,
        }
    }

    pub fn dirichlet(profile: SpectralProfile, synth: Arc<dyn Synthesizer>, c: Complex64) -> Self {
        SynthesizedFunction {
            profile,
            synth,
            dirichlet_value: Some(c),
        }
    }
}

impl HolomorphicFunction for SynthesizedFunction {
    fn n(&self) -> usize {
        self.profile.n()
    }

    fn value(&self, p: &SiegelPoint) -> Result<Complex64> {
        match self.dirichlet_value {
            Some(c) => synthesize_dirichlet(&self.profile, p, c, self.synth.as_ref()),
            None => synthesize(&self.profile, p, self.synth.as_ref()),
        }
    }

    /// `∂^m F = (−i)^m synthesize(λ^m τ)`; the subtracted Dirichlet term is constant.
    fn vertical_derivative(&self, m: u32, p: &SiegelPoint) -> Result<Complex64> {
        if m == 0 {
            return self.value(p);
        }
        let d = synthesize(
            &spectral_derivative(&self.profile, m),
            p,
            self.synth.as_ref(),
        )?;
        Ok(Complex64::new(0.0, -1.0).powu(m) * d)
    }

    fn vertical_derivative_fn(&self, m: u32) -> Option<Evaluator<'_>> {
        if m == 0 {
            return None;
        }
        let d = spectral_derivative(&self.profile, m);
        let k = Complex64::new(0.0, -1.0).powu(m);
        let synth = self.synth.as_ref();
        Some(Box::new(move |p| Ok(k * synthesize(&d, p, synth)?)))
    }
}

/// Adapter for closures without known derivatives.
pub struct FromFn<F> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&SiegelPoint) -> Result<Complex64> + Sync> HolomorphicFunction for FromFn<F> {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, p: &SiegelPoint) -> Result<Complex64> {
        (self.f)(p)
    }
}

/// Node counts and windows of the configuration-space rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigRule {
    /// Where the integrand is concentrated; sets the windows and the `t`-map.
    pub center: HorocyclicCoordinates,
    /// Gauss–Legendre order per panel on the `log h` and `log r` axes.
    pub order: usize,
    /// `log h` window relative to `log h₀`.
    pub log_h: (f64, f64),
    /// `log r` window relative to `log(2√h₀)`.
    pub log_r: (f64, f64),
    /// Panel width on the `log r` axis near the centre. The integrands decay
    /// like `r^{−c}` with `c` growing with `n`, so `n = 2` uses narrower panels.
    pub log_r_width: f64,
    /// Trapezoid nodes per full angle.
    pub angle_nodes: usize,
    /// Gauss–Legendre nodes in `s = |w₂|²` on the unit sphere of `ℂ²` (`n = 2` only).
    pub sphere_nodes: usize,
    /// Gauss–Legendre panels (of `order` nodes) on `u ∈ (−π/2, π/2)`.
    pub t_panels: usize,
    /// Largest admissible share of the outermost panels in the total.
    pub edge_tol: f64,
}

/// Value of a configuration-space integral with tail diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfigIntegral {
    pub value: Complex64,
    /// Largest share of `∫|·|` carried by an outermost `h` or `r` panel.
    pub edge_fraction: f64,
    pub evaluations: usize,
}

struct Nodes {
    x: Vec<f64>,
    w: Vec<f64>,
    first_panel: usize,
    last_panel: usize,
}

/// Composite Gauss–Legendre with panel width `w` within 6 of the centre,
/// `2w` within 20, and `4w` beyond.
fn graded(lo: f64, hi: f64, w: f64, order: usize) -> Nodes {
    let mut breaks = vec![lo];
    let mut x = lo;
    while x < hi {
        let width = if x.abs() < 6.0 - 1e-9 || (x + w).abs() < 6.0 - 1e-9 {
            w
        } else if x.abs() < 20.0 - 1e-9 || (x + 2.0 * w).abs() < 20.0 - 1e-9 {
            2.0 * w
        } else {
            4.0 * w
        };
        x = (x + width).min(hi);
        breaks.push(x);
    }
    panels(&breaks, order)
}

fn panels(breaks: &[f64], order: usize) -> Nodes {
    let (gx, gw) = legendre(order);
    let mut x = Vec::new();
    let mut w = Vec::new();
    for pair in breaks.windows(2) {
        let half = 0.5 * (pair[1] - pair[0]);
        for (g, gwi) in gx.iter().zip(&gw) {
            x.push(pair[0] + half * (g + 1.0));
            w.push(half * gwi);
        }
    }
    Nodes {
        x,
        w,
        first_panel: order,
        last_panel: order,
    }
}

fn trapezoid(count: usize, period: f64) -> (Vec<f64>, f64) {
    (
        (0..count)
            .map(|k| period * k as f64 / count as f64)
            .collect(),
        period / count as f64,
    )
}

impl ConfigRule {
    pub fn new(center: HorocyclicCoordinates) -> Result<Self> {
        if !(center.h > 0.0) {
            return Err(Error::param("center", "the centre hint must be interior"));
        }
        let n = center.z.len();
        if !(1..=2).contains(&n) {
            return Err(Error::param(
                "n",
                format!("configuration-space rules support n ∈ {{1, 2}}, got {n}"),
            ));
        }
        Ok(ConfigRule {
            center,
            order: 8,
            log_h: (-40.0, 36.0),
            log_r: (-18.0, 14.0),
            log_r_width: if n == 1 { 2.0 } else { 1.0 },
            angle_nodes: if n == 1 { 16 } else { 8 },
            sphere_nodes: 6,
            t_panels: 6,
            edge_tol: 1e-6,
        })
    }

    pub fn around(p: &SiegelPoint) -> Result<Self> {
        ConfigRule::new(p.psi()?)
    }

    /// Reduced node counts for smoke runs.
    pub fn fast(mut self) -> Self {
        self.order = 6;
        self.angle_nodes = if self.center.z.len() == 1 { 12 } else { 8 };
        self.sphere_nodes = 4;
        self.t_panels = 4;
        self
    }

    /// One refinement step, for convergence checks.
    pub fn refined(mut self) -> Self {
        self.order += 4;
        self.angle_nodes += self.angle_nodes / 2;
        self.sphere_nodes += 2;
        self.t_panels += 2;
        self
    }

    pub fn n(&self) -> usize {
        self.center.z.len()
    }

    fn h_nodes(&self) -> Nodes {
        let mut nodes = graded(self.log_h.0, self.log_h.1, 2.0, self.order);
        let x0 = self.center.h.ln();
        for x in &mut nodes.x {
            *x += x0;
        }
        nodes
    }

    fn r_nodes(&self) -> Nodes {
        let mut nodes = graded(self.log_r.0, self.log_r.1, self.log_r_width, self.order);
        let y0 = (2.0 * self.center.h.sqrt()).ln();
        for y in &mut nodes.x {
            *y += y0;
        }
        nodes
    }

    fn u_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let breaks: Vec<f64> = (0..=self.t_panels)
            .map(|k| -FRAC_PI_2 + PI * k as f64 / self.t_panels as f64)
            .collect();
        let nodes = panels(&breaks, self.order);
        (nodes.x, nodes.w)
    }

    /// `z`-offsets from the centre with their area weights, for radius `r`.
    fn sphere(&self) -> Vec<(Vec<Complex64>, f64)> {
        let n = self.n();
        let (theta, dtheta) = trapezoid(self.angle_nodes, 2.0 * PI);
        if n == 1 {
            return theta
                .iter()
                .map(|&a| (vec![Complex64::from_polar(1.0, a)], dtheta))
                .collect();
        }
        // Hopf coordinates (√(1−s) e^{iξ₁}, √s e^{iξ₂}) with measure ½ ds dξ₁ dξ₂.
        // Torus-averaged integrands are smooth in s = |w₂|², and polynomial for
        // monomials, which Gauss–Legendre in s integrates exactly.
        let s = panels(&[0.0, 1.0], self.sphere_nodes);
        let mut out = Vec::with_capacity(s.x.len() * theta.len() * theta.len());
        for (&sk, &wk) in s.x.iter().zip(&s.w) {
            let weight = 0.5 * wk * dtheta * dtheta;
            for &a in &theta {
                for &b in &theta {
                    out.push((
                        vec![
                            Complex64::from_polar((1.0 - sk).sqrt(), a),
                            Complex64::from_polar(sk.sqrt(), b),
                        ],
                        weight,
                    ));
                }
            }
        }
        out
    }

    /// `∫_{ℍ_n} g(z, t, h) dz dt` at a fixed height, returning the value, the
    /// outer-panel share and the absolute integral.
    fn slice<G>(
        &self,
        h: f64,
        g: &G,
        sphere: &[(Vec<Complex64>, f64)],
        r: &Nodes,
        u: &(Vec<f64>, Vec<f64>),
    ) -> Result<(Complex64, f64, f64, usize)>
    where
        G: Fn(&SiegelPoint) -> Result<Complex64> + Sync,
    {
        let n = self.n();
        let z0 = &self.center.z;
        let mut total = Complex64::new(0.0, 0.0);
        let mut abs_total = 0.0;
        let mut edge = 0.0;
        let mut evals = 0;
        let len = r.x.len();
        for (k, (&y, &wy)) in r.x.iter().zip(&r.w).enumerate() {
            let rad = y.exp();
            // dr = r dy, area element r^{2n−1} dr.
            let radial = wy * rad.powi(2 * n as i32);
            let mut ring = Complex64::new(0.0, 0.0);
            let mut ring_abs = 0.0;
            for (dir, wdir) in sphere {
                let z: Vec<Complex64> = z0.iter().zip(dir).map(|(c, d)| c + rad * d).collect();
                let rad_sq_abs = crate::cvec::norm_sq(&z);
                let im: f64 = z.iter().zip(z0).map(|(a, b)| (a * b.conj()).im).sum();
                let tc = self.center.t - 0.5 * im;
                let s = h + self.center.h + 0.25 * rad * rad;
                for (&uu, &wu) in u.0.iter().zip(&u.1) {
                    let c = uu.cos();
                    let t = tc + s * uu.tan();
                    // Heights below the rounding level of ζ_{n+1} are raised to it,
                    // so the point stays numerically interior.
                    let floor = 2.0 * BOUNDARY_BAND
                        + 64.0 * f64::EPSILON * (0.25 * rad_sq_abs + t.abs() + 1.0);
                    let p = psi_inv(&HorocyclicCoordinates::new(z.clone(), t, h.max(floor)))?;
                    let v = g(&p)? * (wu * s / (c * c));
                    evals += 1;
                    ring += v * *wdir;
                    ring_abs += v.norm() * wdir;
                }
            }
            total += ring * radial;
            abs_total += ring_abs * radial;
            if k < r.first_panel || k >= len - r.last_panel {
                edge += ring_abs * radial;
            }
        }
        Ok((total, edge, abs_total, evals))
    }

    /// `∫_U g(ζ) ρ(ζ)^weight dV` in horocyclic coordinates.
    pub fn integrate<G>(&self, weight: f64, g: G) -> Result<ConfigIntegral>
    where
        G: Fn(&SiegelPoint) -> Result<Complex64> + Sync,
    {
        let hn = self.h_nodes();
        let rn = self.r_nodes();
        let un = self.u_nodes();
        let sphere = self.sphere();
        let len = hn.x.len();
        let slices: Vec<Result<(Complex64, f64, f64, usize)>> =
            hn.x.par_iter()
                .zip(&hn.w)
                .map(|(&x, &wx)| {
                    let h = x.exp();
                    let (v, e, a, c) = self.slice(h, &g, &sphere, &rn, &un)?;
                    let f = wx * h.powf(weight + 1.0);
                    Ok((v * f, e * f, a * f, c))
                })
                .collect();
        let mut value = Complex64::new(0.0, 0.0);
        let mut abs_total = 0.0;
        let mut r_edge = 0.0;
        let mut h_edge = 0.0;
        let mut evaluations = 0;
        for (k, s) in slices.into_iter().enumerate() {
            let (v, e, a, c) = s?;
            value += v;
            abs_total += a;
            r_edge += e;
            evaluations += c;
            if k < hn.first_panel || k >= len - hn.last_panel {
                h_edge += a;
            }
        }
        self.finish(value, abs_total, r_edge.max(h_edge), evaluations)
    }

    /// `∫_{ℍ_n} g(z, t, h) dz dt` for one height.
    pub fn integrate_slice<G>(&self, h: f64, g: G) -> Result<ConfigIntegral>
    where
        G: Fn(&SiegelPoint) -> Result<Complex64> + Sync,
    {
        if !(h > 0.0) {
            return Err(Error::param("h", "slice height must be positive"));
        }
        let (v, e, a, c) = self.slice(h, &g, &self.sphere(), &self.r_nodes(), &self.u_nodes())?;
        self.finish(v, a, e, c)
    }

    fn finish(
        &self,
        value: Complex64,
        abs_total: f64,
        edge: f64,
        evaluations: usize,
    ) -> Result<ConfigIntegral> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite("configuration-space quadrature".into()));
        }
        let edge_fraction = if abs_total > 0.0 {
            edge / abs_total
        } else {
            0.0
        };
        if edge_fraction > self.edge_tol {
            return Err(Error::Divergent(format!(
                "outermost panels carry {edge_fraction:.3e} of the integral; the tails are not negligible"
            )));
        }
        Ok(ConfigIntegral {
            value,
            edge_fraction,
            evaluations,
        })
    }
}

/// Sesquilinear form of the space `tag` by configuration-space quadrature.
/// The Hardy form is the `h → 0` extrapolation of slice forms.
pub fn space_inner_product(
    f: &dyn HolomorphicFunction,
    g: &dyn HolomorphicFunction,
    tag: SpaceTag,
    rule: &ConfigRule,
) -> Result<Complex64> {
    let n = f.n();
    if g.n() != n || rule.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.n(),
        });
    }
    tag.validate(n)?;
    if let SpaceTag::Hardy = tag {
        let ext = hardy_slices(rule, HARDY_LEVELS, |p| Ok(f.value(p)? * g.value(p)?.conj()))?;
        return Ok(ext.limit);
    }
    let m = tag.order();
    let (df, dg) = (derivative_evaluator(f, m), derivative_evaluator(g, m));
    let body = rule.integrate(tag.volume_weight(n), |p| Ok(df(p)? * dg(p)?.conj()))?;
    let mut value = body.value;
    if let SpaceTag::Dirichlet { .. } = tag {
        let base = SiegelPoint::base(n);
        value += f.value(&base)? * g.value(&base)?.conj();
    }
    Ok(value)
}

/// `space_inner_product(f, f, …)` with one evaluation per node.
pub fn space_norm_sq(f: &dyn HolomorphicFunction, tag: SpaceTag, rule: &ConfigRule) -> Result<f64> {
    let n = f.n();
    if rule.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rule.n(),
        });
    }
    tag.validate(n)?;
    if let SpaceTag::Hardy = tag {
        return Ok(hardy_slice_norms(f, rule, HARDY_LEVELS)?.limit.re);
    }
    let df = derivative_evaluator(f, tag.order());
    let body = rule.integrate(tag.volume_weight(n), |p| {
        Ok(Complex64::new(df(p)?.norm_sqr(), 0.0))
    })?;
    let mut value = body.value.re;
    if let SpaceTag::Dirichlet { .. } = tag {
        value += f.value(&SiegelPoint::base(n))?.norm_sqr();
    }
    Ok(value)
}

const HARDY_LEVELS: usize = 7;

/// Slice norms at `h = 2^{−k}` and their extrapolated `h → 0` limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyExtrapolation {
    pub heights: Vec<f64>,
    pub slices: Vec<f64>,
    pub limit: Complex64,
    /// Slice values never decrease as `h` decreases.
    pub monotone: bool,
}

pub fn hardy_slice_norms(
    f: &dyn HolomorphicFunction,
    rule: &ConfigRule,
    levels: usize,
) -> Result<HardyExtrapolation> {
    hardy_slices(rule, levels, |p| {
        Ok(Complex64::new(f.value(p)?.norm_sqr(), 0.0))
    })
}

fn hardy_slices<G>(rule: &ConfigRule, levels: usize, integrand: G) -> Result<HardyExtrapolation>
where
    G: Fn(&SiegelPoint) -> Result<Complex64> + Sync,
{
    if levels < 2 {
        return Err(Error::param("levels", "need at least two heights"));
    }
    let heights: Vec<f64> = (0..levels).map(|k| 2f64.powi(-(k as i32))).collect();
    let mut values = Vec::with_capacity(levels);
    for &h in &heights {
        values.push(rule.integrate_slice(h, &integrand)?.value);
    }
    let monotone = values
        .windows(2)
        .all(|w| w[1].re >= w[0].re * (1.0 - 1e-12));
    let limit = richardson_to_zero(&values);
    Ok(HardyExtrapolation {
        heights,
        slices: values.iter().map(|v| v.re).collect(),
        limit,
        monotone,
    })
}

/// Richardson extrapolation to `h = 0` of values at `h, h/2, h/4, …`,
/// assuming an expansion in integer powers of `h`.
pub fn richardson_to_zero(values: &[Complex64]) -> Complex64 {
    let mut row: Vec<Complex64> = values.to_vec();
    let mut factor = 1.0;
    while row.len() > 1 {
        factor *= 2.0;
        row = row
            .windows(2)
            .map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_factorial;

    #[test]
    fn sphere_rule_integrates_moments_exactly() {
        let rule = ConfigRule::around(&SiegelPoint::base(2)).unwrap().fast();
        let nodes = rule.sphere();
        for (a, b) in [(0u32, 0u32), (1, 0), (1, 1), (2, 3), (3, 3)] {
            let got: f64 = nodes
                .iter()
                .map(|(w, wt)| wt * w[0].norm_sqr().powi(a as i32) * w[1].norm_sqr().powi(b as i32))
                .sum();
            let exact =
                2.0 * PI * PI * (ln_factorial(a) + ln_factorial(b) - ln_factorial(a + b + 1)).exp();
            assert!(
                (got - exact).abs() < 1e-13 * exact,
                "({a},{b}): {got} vs {exact}"
            );
        }
        let circle = ConfigRule::around(&SiegelPoint::base(1)).unwrap().sphere();
        assert!((circle.iter().map(|(_, w)| w).sum::<f64>() - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn norm_matches_inner_product() {
        let base = SiegelPoint::base(1);
        let f = crate::kernels::KernelFunction::new(
            crate::kernels::KernelId::Bergman { nu: 0.0 },
            base.clone(),
        )
        .unwrap();
        let rule = ConfigRule::around(&base).unwrap().fast();
        let tag = SpaceTag::Bergman { nu: 0.0 };
        let a = space_norm_sq(&f, tag, &rule).unwrap();
        let b = space_inner_product(&f, &f, tag, &rule).unwrap();
        assert!((a - b.re).abs() < 1e-14 * a && b.im.abs() < 1e-14 * a);
    }
}
