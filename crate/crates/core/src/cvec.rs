//! Helpers on complex vectors.

use num_complex::Complex64;

/// Hermitian product `w·z̄ = Σ w_j conj(z_j)`; the single convention used crate-wide.
pub fn hermitian(w: &[Complex64], z: &[Complex64]) -> Complex64 {
    w.iter().zip(z).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sq(z: &[Complex64]) -> f64 {
    z.iter().map(Complex64::norm_sqr).sum()
}

pub fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: Complex64, a: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|x| c * x).collect()
}

pub fn conj(a: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(Complex64::conj).collect()
}

/// Relative discrepancy `|a − b| / max(|a|, |b|, floor)`.
pub fn rel_error(a: Complex64, b: Complex64, floor: f64) -> f64 {
    let scale = a.norm().max(b.norm()).max(floor);
    (a - b).norm() / scale
}
