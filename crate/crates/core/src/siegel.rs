//! Geometry of the Siegel upper half-space `{ζ : Im ζ_{n+1} > ¼|ζ′|²}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cvec::{hermitian, norm_sq};
use crate::error::{Error, Result};
use crate::heisenberg::HeisenbergElement;
use crate::quadrature::legendre;
use crate::special::{beta, gamma};

/// Points with `|ρ| < BOUNDARY_BAND` count as boundary points.
pub const BOUNDARY_BAND: f64 = 1e-12;

const UNITARY_TOL: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A point `(ζ′, ζ_{n+1})` of `ℂⁿ × ℂ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiegelPoint {
    pub zeta_prime: Vec<Complex64>,
    pub zeta_last: Complex64,
}

/// Horocyclic chart `(z, t, h)`; `h` is the height above the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorocyclicCoordinates {
    pub z: Vec<Complex64>,
    pub t: f64,
    pub h: f64,
}

/// A point of the open unit ball of `ℂ^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct BallPoint {
    coords: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for BallPoint {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        BallPoint::new(v)
    }
}

impl From<BallPoint> for Vec<Complex64> {
    fn from(b: BallPoint) -> Self {
        b.coords
    }
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::param("ball point", "needs at least one coordinate"));
        }
        let r2 = norm_sq(&coords);
        if !(r2 < 1.0) {
            return Err(Error::OutsideDomain(format!("|ω|² = {r2} is not below 1")));
        }
        Ok(BallPoint { coords })
    }

    pub fn origin(n: usize) -> Self {
        BallPoint {
            coords: vec![Complex64::new(0.0, 0.0); n + 1],
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// `n` such that the ball lives in `ℂ^{n+1}`.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }
}

impl SiegelPoint {
    pub fn new(zeta_prime: Vec<Complex64>, zeta_last: Complex64) -> Self {
        SiegelPoint {
            zeta_prime,
            zeta_last,
        }
    }

    /// The base point `𝐢 = (0′, i)`.
    pub fn base(n: usize) -> Self {
        SiegelPoint {
            zeta_prime: vec![Complex64::new(0.0, 0.0); n],
            zeta_last: I,
        }
    }

    pub fn n(&self) -> usize {
        self.zeta_prime.len()
    }

    /// Defining function `Im ζ_{n+1} − ¼|ζ′|²`.
    pub fn rho(&self) -> f64 {
        self.zeta_last.im - 0.25 * norm_sq(&self.zeta_prime)
    }

    pub fn is_interior(&self) -> bool {
        self.rho() >= BOUNDARY_BAND
    }

    pub fn is_boundary(&self) -> bool {
        self.rho().abs() < BOUNDARY_BAND
    }

    pub fn psi(&self) -> Result<HorocyclicCoordinates> {
        psi(self)
    }

    /// Componentwise translate by `ε𝐢`.
    pub fn lift(&self, eps: f64) -> Self {
        SiegelPoint {
            zeta_prime: self.zeta_prime.clone(),
            zeta_last: self.zeta_last + I * eps,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.zeta_prime
            .iter()
            .zip(&other.zeta_prime)
            .map(|(a, b)| (a - b).norm())
            .fold((self.zeta_last - other.zeta_last).norm(), f64::max)
    }

    pub fn magnitude(&self) -> f64 {
        self.zeta_prime
            .iter()
            .map(|z| z.norm())
            .fold(self.zeta_last.norm(), f64::max)
            .max(1.0)
    }
}

/// Defining function of the half-space.
pub fn rho(p: &SiegelPoint) -> f64 {
    p.rho()
}

impl HorocyclicCoordinates {
    pub fn new(z: Vec<Complex64>, t: f64, h: f64) -> Self {
        HorocyclicCoordinates { z, t, h }
    }

    pub fn from_boundary(b: &HeisenbergElement, h: f64) -> Self {
        HorocyclicCoordinates {
            z: b.z.clone(),
            t: b.t,
            h,
        }
    }

    pub fn boundary(&self) -> HeisenbergElement {
        HeisenbergElement::new(self.z.clone(), self.t)
    }

    pub fn to_point(&self) -> Result<SiegelPoint> {
        psi_inv(self)
    }
}

/// `ζ ↦ (ζ′, Re ζ_{n+1}, ρ(ζ))`; points within the boundary band below zero are clamped to `h = 0`.
pub fn psi(p: &SiegelPoint) -> Result<HorocyclicCoordinates> {
    let r = p.rho();
    if !r.is_finite() {
        return Err(Error::NonFinite("defining function".into()));
    }
    if r < -BOUNDARY_BAND {
        return Err(Error::OutsideDomain(format!("ρ = {r} < 0")));
    }
    Ok(HorocyclicCoordinates {
        z: p.zeta_prime.clone(),
        t: p.zeta_last.re,
        h: r.max(0.0),
    })
}

/// `(z, t, h) ↦ (z, t + i|z|²/4 + ih)`.
pub fn psi_inv(c: &HorocyclicCoordinates) -> Result<SiegelPoint> {
    if !(c.h >= 0.0) {
        return Err(Error::OutsideDomain(format!(
            "height h = {} is negative",
            c.h
        )));
    }
    Ok(SiegelPoint {
        zeta_prime: c.z.clone(),
        zeta_last: Complex64::new(c.t, 0.25 * norm_sq(&c.z) + c.h),
    })
}

/// Cayley transform from the ball of `ℂ^{n+1}` onto the half-space.
pub fn cayley(w: &BallPoint) -> Result<SiegelPoint> {
    let n = w.n();
    let last = w.coords[n];
    let denom = Complex64::new(1.0, 0.0) - last;
    if denom.norm() < 1e-300 {
        return Err(Error::Pole("ω_{n+1} = 1".into()));
    }
    Ok(SiegelPoint {
        zeta_prime: w.coords[..n].iter().map(|c| 2.0 * c / denom).collect(),
        zeta_last: I * (1.0 + last) / denom,
    })
}

pub fn cayley_inv(p: &SiegelPoint) -> Result<BallPoint> {
    let denom = p.zeta_last + I;
    if denom.norm() < 1e-300 {
        return Err(Error::Pole("ζ_{n+1} = −i".into()));
    }
    let mut coords: Vec<Complex64> = p.zeta_prime.iter().map(|z| z * I / denom).collect();
    coords.push((p.zeta_last - I) / denom);
    BallPoint::new(coords)
}

/// Generators of the holomorphic automorphism group, plus composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Automorphism {
    /// `Φ_[z,t]`; acts on the boundary by right multiplication.
    HeisenbergTranslation(HeisenbergElement),
    /// `ζ ↦ (δζ′, δ²ζ_{n+1})`.
    Dilation(f64),
    /// `ζ ↦ (Uζ′, ζ_{n+1})`; rows of `U`.
    Unitary(Vec<Vec<Complex64>>),
    /// `ζ ↦ (iζ′/ζ_{n+1}, −1/ζ_{n+1})`.
    Inversion,
    /// Applied left to right: the first entry acts first.
    Composition(Vec<Automorphism>),
}

fn check_unitary(u: &[Vec<Complex64>], n: usize) -> Result<()> {
    if u.len() != n || u.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            // (U*U)_{ij} = Σ_k conj(U_ki) U_kj
            let s: Complex64 = (0..n).map(|k| u[k][i].conj() * u[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (s - target).norm() > UNITARY_TOL {
                return Err(Error::param(
                    "unitary",
                    format!("U*U deviates from I by {}", (s - target).norm()),
                ));
            }
        }
    }
    Ok(())
}

impl Automorphism {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Automorphism::HeisenbergTranslation(g) if g.dim() != n => {
                Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.dim(),
                })
            }
            Automorphism::Dilation(d) if !(*d > 0.0) || !d.is_finite() => {
                Err(Error::param("delta", format!("{d} must be positive")))
            }
            Automorphism::Unitary(u) => check_unitary(u, n),
            Automorphism::Composition(list) => list.iter().try_for_each(|a| a.validate(n)),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, p: &SiegelPoint) -> Result<SiegelPoint> {
        let n = p.n();
        self.validate(n)?;
        self.apply_unchecked(p)
    }

    fn apply_unchecked(&self, p: &SiegelPoint) -> Result<SiegelPoint> {
        match self {
            Automorphism::HeisenbergTranslation(g) => {
                let zp = p.zeta_prime.iter().zip(&g.z).map(|(a, b)| a + b).collect();
                let last = p.zeta_last
                    + g.t
                    + I * (0.25 * norm_sq(&g.z))
                    + I * 0.5 * hermitian(&p.zeta_prime, &g.z);
                Ok(SiegelPoint::new(zp, last))
            }
            Automorphism::Dilation(d) => Ok(SiegelPoint::new(
                p.zeta_prime.iter().map(|z| z * *d).collect(),
                p.zeta_last * (d * d),
            )),
            Automorphism::Unitary(u) => Ok(SiegelPoint::new(
                u.iter()
                    .map(|row| row.iter().zip(&p.zeta_prime).map(|(a, b)| a * b).sum())
                    .collect(),
                p.zeta_last,
            )),
            Automorphism::Inversion => {
                let w = p.zeta_last;
                if w.norm() < 1e-300 {
                    return Err(Error::Pole("inversion at ζ_{n+1} = 0".into()));
                }
                Ok(SiegelPoint::new(
                    p.zeta_prime.iter().map(|z| I * z / w).collect(),
                    -1.0 / w,
                ))
            }
            Automorphism::Composition(list) => {
                let mut q = p.clone();
                for a in list {
                    q = a.apply_unchecked(&q)?;
                }
                Ok(q)
            }
        }
    }

    /// Cocycle `j` with `Q(φω, φζ) = j(ω) conj(j(ζ)) Q(ω, ζ)`.
    pub fn q_cocycle(&self, p: &SiegelPoint) -> Result<Complex64> {
        match self {
            Automorphism::HeisenbergTranslation(_) | Automorphism::Unitary(_) => {
                Ok(Complex64::new(1.0, 0.0))
            }
            Automorphism::Dilation(d) => Ok(Complex64::new(*d, 0.0)),
            Automorphism::Inversion => {
                if p.zeta_last.norm() < 1e-300 {
                    return Err(Error::Pole("inversion at ζ_{n+1} = 0".into()));
                }
                Ok(1.0 / p.zeta_last)
            }
            Automorphism::Composition(list) => {
                let mut q = p.clone();
                let mut j = Complex64::new(1.0, 0.0);
                for a in list {
                    j *= a.q_cocycle(&q)?;
                    q = a.apply_unchecked(&q)?;
                }
                Ok(j)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Automorphism::HeisenbergTranslation(_) => "heisenberg-translation",
            Automorphism::Dilation(_) => "dilation",
            Automorphism::Unitary(_) => "unitary",
            Automorphism::Inversion => "inversion",
            Automorphism::Composition(_) => "composition",
        }
    }
}

fn unit_ball_volume(n: usize) -> f64 {
    // |B_1| = (2πⁿ/Γ(n)) 2^{2n} ∫_0^1 √(1−x²) x^{n−1} dx, with x = sin θ.
    let (x, w) = legendre(24);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let panels = 4;
    let width = half_pi / panels as f64;
    let mut integral = 0.0;
    for p in 0..panels {
        let a = p as f64 * width;
        for (xi, wi) in x.iter().zip(&w) {
            let th = a + 0.5 * width * (xi + 1.0);
            let c = th.cos();
            integral += 0.5 * width * wi * c * c * th.sin().powi(n as i32 - 1);
        }
    }
    2.0 * std::f64::consts::PI.powi(n as i32) / gamma(n as f64) * 4f64.powi(n as i32) * integral
}

/// Closed form of the unit-ball volume, used as an oracle.
pub fn unit_ball_volume_closed(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powi(n as i32) / gamma(n as f64)
        * 2f64.powi(2 * n as i32 - 1)
        * beta(n as f64 / 2.0, 1.5)
}

/// Constant `c_n` with `|P(ζ, r)| = c_n r^{2n+4}`; computed once per `n`.
pub fn tent_constant(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(*guard.entry(n).or_insert_with(|| 2.0 * unit_ball_volume(n)))
}

/// Lebesgue volume of the tent of radius `r`.
pub fn tent_volume(n: usize, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::param("r", format!("{r} must be non-negative")));
    }
    Ok(tent_constant(n)? * r.powi(2 * n as i32 + 4))
}

/// Membership in `B([z,t], r) × {k : |h − k| < r²}`.
pub fn in_tent(center: &HorocyclicCoordinates, r: f64, q: &HorocyclicCoordinates) -> Result<bool> {
    let inside = HeisenbergElement::in_ball(&center.boundary(), r, &q.boundary())?;
    Ok(inside && (center.h - q.h).abs() < r * r)
}
