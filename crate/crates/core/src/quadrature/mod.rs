//! Quadrature rules for the half-line, Gaussian-weighted spaces, mapped boxes
//! and Monte Carlo.
//!
//! All rules are immutable once built and can be shared between threads.

mod gauss;
mod monte_carlo;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use gauss::{gauss_rule, Recurrence};

pub use monte_carlo::{monte_carlo, McEstimate};

/// Default tolerances used when a caller does not supply its own.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub one_dimensional: f64,
    pub tensor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            one_dimensional: 1e-10,
            tensor: 1e-6,
        }
    }
}

fn check_finite(value: Complex64, what: &str) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Generalised Gauss–Laguerre rule for `∫_0^∞ f(x) x^a e^{-c x} dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineRule {
    exponent: f64,
    scale: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Builds the rule with `node_count` points for weight `x^exponent e^{-scale x}`.
pub fn gauss_laguerre(exponent: f64, scale: f64, node_count: usize) -> Result<HalfLineRule> {
    if !(exponent > -1.0) || !exponent.is_finite() {
        return Err(Error::param(
            "exponent",
            format!("{exponent} makes the weight non-integrable (need > -1)"),
        ));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::param("scale", format!("{scale} must be positive")));
    }
    if node_count == 0 {
        return Err(Error::param("node_count", "must be at least 1"));
    }
    let (x, w) = gauss_rule(&Recurrence::laguerre(node_count, exponent), node_count);
    let weight_scale = scale.powf(-(exponent + 1.0));
    Ok(HalfLineRule {
        exponent,
        scale,
        nodes: x.iter().map(|x| x / scale).collect(),
        weights: w.iter().map(|w| w * weight_scale).collect(),
    })
}

impl HalfLineRule {
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate_real<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        self.integrate(|x| Complex64::new(f(x), 0.0)).map(|z| z.re)
    }

    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            kind: "gauss-laguerre".into(),
            exponent: Some(self.exponent),
            scale: Some(self.scale),
            nodes_count: self.node_count(),
            mapping: None,
            dimension: None,
            axes: None,
            nodes: None,
            weights: None,
        }
    }
}

/// `Σ w_i f(x_i)`; a non-finite integrand value is reported as an error.
pub fn integrate_halfline<F: Fn(f64) -> Complex64>(rule: &HalfLineRule, f: F) -> Result<Complex64> {
    rule.integrate(f)
}

impl HalfLineRule {
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite(format!("half-line integrand at x = {x}")));
            }
            acc += v * w;
        }
        check_finite(acc, "half-line quadrature sum")
    }
}

/// Tensor Gauss–Hermite rule for the centred normal law `N(0, variance)^dimension`.
///
/// Weights sum to one, so `integrate` returns an expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRule {
    variance: f64,
    per_axis: usize,
    dimension: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

pub fn gauss_hermite(variance: f64, per_axis: usize, dimension: usize) -> Result<GaussianRule> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::param(
            "variance",
            format!("{variance} must be positive"),
        ));
    }
    if per_axis == 0 {
        return Err(Error::param("node_count", "must be at least 1"));
    }
    if dimension == 0 {
        return Err(Error::param("dimension", "must be at least 1"));
    }
    let (x, w) = gauss_rule(&Recurrence::hermite(per_axis), per_axis);
    let spread = (2.0 * variance).sqrt();
    let norm = std::f64::consts::PI.sqrt();
    Ok(GaussianRule {
        variance,
        per_axis,
        dimension,
        nodes: x.iter().map(|x| x * spread).collect(),
        weights: w.iter().map(|w| w / norm).collect(),
    })
}

impl GaussianRule {
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// One-dimensional nodes and weights shared by every axis.
    pub fn axis(&self) -> (&[f64], &[f64]) {
        (&self.nodes, &self.weights)
    }

    /// Visits every tensor node with its weight.
    pub fn for_each_point<F: FnMut(&[f64], f64)>(&self, mut visit: F) {
        let d = self.dimension;
        let mut idx = vec![0usize; d];
        let mut point = vec![0.0; d];
        loop {
            let mut w = 1.0;
            for (k, &i) in idx.iter().enumerate() {
                point[k] = self.nodes[i];
                w *= self.weights[i];
            }
            visit(&point, w);
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                idx[k] += 1;
                if idx[k] < self.per_axis {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            kind: "gauss-hermite".into(),
            exponent: None,
            scale: Some(self.variance),
            nodes_count: self.per_axis,
            mapping: None,
            dimension: Some(self.dimension),
            axes: None,
            nodes: None,
            weights: None,
        }
    }
}

pub fn integrate_gaussian<F: Fn(&[f64]) -> Complex64>(
    rule: &GaussianRule,
    f: F,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bad = false;
    rule.for_each_point(|x, w| {
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            bad = true;
        }
        acc += v * w;
    });
    if bad {
        return Err(Error::NonFinite("Gaussian integrand".into()));
    }
    check_finite(acc, "Gaussian quadrature sum")
}

/// Change of variables applied to one axis of a [`BoxRule`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Mapping {
    /// `x = u`.
    Identity,
    /// `x = center + scale · tan(u)` for `u ∈ (−π/2, π/2)`.
    Tan { center: f64, scale: f64 },
    /// `x = e^u`, mapping a finite `u`-window onto part of `(0, ∞)`.
    Exp,
}

impl Mapping {
    pub fn name(&self) -> &'static str {
        match self {
            Mapping::Identity => "identity",
            Mapping::Tan { .. } => "tan",
            Mapping::Exp => "exp",
        }
    }

    /// Returns `(x(u), dx/du)`.
    pub fn apply(&self, u: f64) -> (f64, f64) {
        match *self {
            Mapping::Identity => (u, 1.0),
            Mapping::Tan { center, scale } => {
                let c = u.cos();
                (center + scale * u.tan(), scale / (c * c))
            }
            Mapping::Exp => {
                let e = u.exp();
                (e, e)
            }
        }
    }
}

/// Composite Gauss–Legendre rule on `[lo, hi]` in the `u` variable, pushed
/// through a [`Mapping`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisRule {
    pub mapping: Mapping,
    pub lo: f64,
    pub hi: f64,
    pub panels: usize,
    pub order: usize,
    #[serde(skip)]
    nodes: Vec<f64>,
    #[serde(skip)]
    weights: Vec<f64>,
    #[serde(skip)]
    u_nodes: Vec<f64>,
    #[serde(skip)]
    u_weights: Vec<f64>,
}

impl AxisRule {
    pub fn new(mapping: Mapping, lo: f64, hi: f64, panels: usize, order: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::param(
                "axis bounds",
                format!("[{lo}, {hi}] is not a finite interval"),
            ));
        }
        if panels == 0 || order == 0 {
            return Err(Error::param("axis", "panels and order must be positive"));
        }
        if let Mapping::Tan { scale, .. } = mapping {
            let half = std::f64::consts::FRAC_PI_2;
            if lo <= -half || hi >= half || !(scale > 0.0) {
                return Err(Error::param(
                    "axis",
                    "tan mapping needs (lo, hi) inside (-π/2, π/2) and scale > 0",
                ));
            }
        }
        let (gx, gw) = legendre(order);
        let width = (hi - lo) / panels as f64;
        let mut u_nodes = Vec::with_capacity(panels * order);
        let mut u_weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = lo + p as f64 * width;
            for (x, w) in gx.iter().zip(&gw) {
                u_nodes.push(a + 0.5 * width * (x + 1.0));
                u_weights.push(0.5 * width * w);
            }
        }
        let mut rule = AxisRule {
            mapping,
            lo,
            hi,
            panels,
            order,
            nodes: vec![],
            weights: vec![],
            u_nodes,
            u_weights,
        };
        rule.remap(mapping);
        Ok(rule)
    }

    fn remap(&mut self, mapping: Mapping) {
        self.mapping = mapping;
        let (nodes, weights) = self
            .u_nodes
            .iter()
            .zip(&self.u_weights)
            .map(|(&u, &w)| {
                let (x, dx) = mapping.apply(u);
                (x, w * dx)
            })
            .unzip();
        self.nodes = nodes;
        self.weights = weights;
    }

    /// Same panels in `u`, different mapping (e.g. a re-centred tan map).
    pub fn with_mapping(&self, mapping: Mapping) -> Self {
        let mut out = self.clone();
        out.remap(mapping);
        out
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index ranges of the first and last panel, used for tail monitoring.
    pub fn edge_panels(&self) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        let n = self.len();
        (0..self.order, n - self.order..n)
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        check_finite(acc, "axis quadrature sum")
    }

    /// Restores the node tables after deserialisation.
    pub fn rebuilt(&self) -> Result<Self> {
        AxisRule::new(self.mapping, self.lo, self.hi, self.panels, self.order)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_rule(&Recurrence::legendre(order), order)
}

/// Tensor product of mapped composite Gauss–Legendre axes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRule {
    axes: Vec<AxisRule>,
}

impl BoxRule {
    pub fn new(axes: Vec<AxisRule>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::param(
                "dimension",
                "a box rule needs at least one axis",
            ));
        }
        Ok(BoxRule { axes })
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[AxisRule] {
        &self.axes
    }

    pub fn spec(&self) -> QuadratureSpec {
        let mapping = self
            .axes
            .iter()
            .map(|a| a.mapping.name())
            .collect::<Vec<_>>()
            .join("×");
        QuadratureSpec {
            kind: "box".into(),
            exponent: None,
            scale: None,
            nodes_count: self.axes.iter().map(AxisRule::len).product(),
            mapping: Some(mapping),
            dimension: Some(self.axes.len()),
            axes: Some(self.axes.clone()),
            nodes: None,
            weights: None,
        }
    }
}

pub fn integrate_box<F: Fn(&[f64]) -> Complex64>(rule: &BoxRule, f: F) -> Result<Complex64> {
    let d = rule.axes.len();
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let mut w = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            point[k] = rule.axes[k].nodes[i];
            w *= rule.axes[k].weights[i];
        }
        let v = f(&point);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("box integrand at {point:?}")));
        }
        acc += v * w;
        let mut k = 0;
        loop {
            if k == d {
                return check_finite(acc, "box quadrature sum");
            }
            idx[k] += 1;
            if idx[k] < rule.axes[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// JSON description of a rule. Node and weight dumps are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub nodes_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axes: Option<Vec<AxisRule>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// A rule rebuilt from its [`QuadratureSpec`].
#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    HalfLine(HalfLineRule),
    Gaussian(GaussianRule),
    Box(BoxRule),
}

impl QuadratureSpec {
    pub fn with_dump(mut self, rule: &Rule) -> Self {
        match rule {
            Rule::HalfLine(r) => {
                self.nodes = Some(r.nodes.clone());
                self.weights = Some(r.weights.clone());
            }
            Rule::Gaussian(r) => {
                self.nodes = Some(r.nodes.clone());
                self.weights = Some(r.weights.clone());
            }
            Rule::Box(_) => {}
        }
        self
    }

    pub fn build(&self) -> Result<Rule> {
        let missing =
            |field: &str| Error::Parse(format!("quadrature spec `{}` lacks `{field}`", self.kind));
        match self.kind.as_str() {
            "gauss-laguerre" => Ok(Rule::HalfLine(gauss_laguerre(
                self.exponent.ok_or_else(|| missing("exponent"))?,
                self.scale.ok_or_else(|| missing("scale"))?,
                self.nodes_count,
            )?)),
            "gauss-hermite" => Ok(Rule::Gaussian(gauss_hermite(
                self.scale.ok_or_else(|| missing("scale"))?,
                self.nodes_count,
                self.dimension.unwrap_or(1),
            )?)),
            "box" => {
                let axes = self
                    .axes
                    .as_ref()
                    .ok_or_else(|| missing("axes"))?
                    .iter()
                    .map(AxisRule::rebuilt)
                    .collect::<Result<Vec<_>>>()?;
                Ok(Rule::Box(BoxRule::new(axes)?))
            }
            other => Err(Error::Unknown {
                kind: "quadrature kind",
                name: other.to_string(),
            }),
        }
    }
}

impl Rule {
    pub fn spec(&self) -> QuadratureSpec {
        match self {
            Rule::HalfLine(r) => r.spec(),
            Rule::Gaussian(r) => r.spec(),
            Rule::Box(r) => r.spec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{gamma, ln_gamma};
    use proptest::prelude::*;

    #[test]
    fn laguerre_unit_mass() {
        let rule = gauss_laguerre(0.0, 1.0, 20).unwrap();
        let v = rule.integrate_real(|_| 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn laguerre_weighted_mass() {
        let rule = gauss_laguerre(2.5, 2.0, 30).unwrap();
        let v = rule.integrate_real(|_| 1.0).unwrap();
        let expected = gamma(3.5) / 2f64.powf(3.5);
        assert!((v - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn laguerre_top_degree() {
        let rule = gauss_laguerre(0.0, 1.0, 5).unwrap();
        let v = rule.integrate_real(|x| x.powi(9)).unwrap();
        assert!((v - 362880.0).abs() / 362880.0 < 1e-10);
    }

    #[test]
    fn halfline_constant_and_zero() {
        let rule = gauss_laguerre(0.0, 2.0, 12).unwrap();
        let one = integrate_halfline(&rule, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((one.re - 0.5).abs() < 1e-14);
        let zero = integrate_halfline(&rule, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(zero, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn halfline_norm_chain_gamma() {
        // weight λ^{n-ν-1} e^{-2hλ}
        let (n, nu, h) = (1.0, 0.0, 0.7);
        let rule = gauss_laguerre(n - nu - 1.0, 2.0 * h, 16).unwrap();
        let v = rule.integrate_real(|_| 1.0).unwrap();
        let expected = gamma(n - nu) / (2.0 * h).powf(n - nu);
        assert!((v - expected).abs() / expected < 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            gauss_laguerre(-1.0, 1.0, 5),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            gauss_laguerre(0.0, 1.0, 0),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            gauss_laguerre(0.0, 0.0, 3),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(gauss_hermite(1.0, 0, 1).is_err());
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let rule = gauss_laguerre(0.0, 1.0, 4).unwrap();
        let r = rule.integrate(|x| Complex64::new(1.0 / (x - rule.nodes()[1]), 0.0));
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn refinement_reduces_error() {
        // ∫ e^{-x} cos(x) dx = 1/2 ; smooth but not polynomial.
        let errs: Vec<f64> = [4usize, 8, 16, 32]
            .iter()
            .map(|&n| {
                let rule = gauss_laguerre(0.0, 1.0, n).unwrap();
                (rule.integrate_real(f64::cos).unwrap() - 0.5).abs()
            })
            .collect();
        assert!(
            errs.windows(2).all(|p| p[1] < p[0] || p[1] < 1e-15),
            "{errs:?}"
        );
    }

    #[test]
    fn gaussian_moments() {
        let rule = gauss_hermite(0.5, 8, 2).unwrap();
        // E[x^4 y^2] = 3σ^4 · σ^2
        let v = integrate_gaussian(&rule, |p| Complex64::new(p[0].powi(4) * p[1].powi(2), 0.0))
            .unwrap();
        let expected = 3.0 * 0.25 * 0.5;
        assert!((v.re - expected).abs() < 1e-14);
    }

    #[test]
    fn box_rule_tan_axis_integrates_lorentzian() {
        let axis = AxisRule::new(
            Mapping::Tan {
                center: 0.3,
                scale: 2.0,
            },
            -1.5,
            1.5,
            4,
            20,
        )
        .unwrap();
        let full = AxisRule::new(
            Mapping::Tan {
                center: 0.3,
                scale: 2.0,
            },
            -std::f64::consts::FRAC_PI_2 + 1e-12,
            std::f64::consts::FRAC_PI_2 - 1e-12,
            4,
            20,
        )
        .unwrap();
        let f = |x: f64| Complex64::new(2.0 / (4.0 + (x - 0.3) * (x - 0.3)), 0.0);
        let v = full.integrate(f).unwrap();
        assert!((v.re - std::f64::consts::PI).abs() < 1e-10);
        assert!(axis.integrate(f).unwrap().re < v.re);
        let rule = BoxRule::new(vec![
            full.clone(),
            AxisRule::new(Mapping::Identity, 0.0, 1.0, 1, 4).unwrap(),
        ])
        .unwrap();
        let w = integrate_box(&rule, |p| f(p[0]) * p[1] * 2.0).unwrap();
        assert!((w.re - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn spec_round_trip() {
        let rule = Rule::HalfLine(gauss_laguerre(1.5, 3.0, 12).unwrap());
        let json = serde_json::to_string(&rule.spec()).unwrap();
        let back: QuadratureSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), rule);
        let boxed = Rule::Box(
            BoxRule::new(vec![AxisRule::new(Mapping::Exp, -3.0, 2.0, 5, 6).unwrap()]).unwrap(),
        );
        let json = serde_json::to_string(&boxed.spec()).unwrap();
        let back: QuadratureSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), boxed);
        let dumped = rule.spec().with_dump(&rule);
        assert_eq!(dumped.nodes.as_ref().unwrap().len(), 12);
    }

    proptest! {
        #[test]
        fn laguerre_moment_exactness(a in -0.9f64..4.0, c in 0.2f64..5.0, n in 1usize..40, frac in 0.0f64..1.0) {
            let rule = gauss_laguerre(a, c, n).unwrap();
            let k = ((2 * n - 1) as f64 * frac).floor() as i32;
            let v = rule.integrate_real(|x| x.powi(k)).unwrap();
            let ln_expected = ln_gamma(k as f64 + a + 1.0) - (k as f64 + a + 1.0) * c.ln();
            let rel = (v.ln() - ln_expected).abs();
            prop_assert!(rel < 1e-12, "k={} rel={}", k, rel);
        }

        #[test]
        fn hermite_moment_exactness(var in 0.1f64..4.0, n in 1usize..30, frac in 0.0f64..1.0) {
            let rule = gauss_hermite(var, n, 1).unwrap();
            let k = (((2 * n - 1) as f64 * frac).floor() as i32) & !1;
            let v = integrate_gaussian(&rule, |p| Complex64::new(p[0].powi(k), 0.0)).unwrap().re;
            // (k-1)!! σ^k
            let mut expected = 1.0;
            let mut j = k - 1;
            while j > 0 { expected *= j as f64; j -= 2; }
            expected *= var.powi(k / 2);
            prop_assert!((v - expected).abs() / expected < 1e-12);
        }

        #[test]
        fn deterministic(a in 0.0f64..2.0, n in 1usize..30) {
            let r1 = gauss_laguerre(a, 1.0, n).unwrap();
            let r2 = gauss_laguerre(a, 1.0, n).unwrap();
            prop_assert_eq!(r1.nodes(), r2.nodes());
            prop_assert_eq!(r1.weights(), r2.weights());
        }
    }
}
