use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

const CHUNK: usize = 4096;

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: Complex64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Distance to `target` measured in standard errors.
    pub fn sigmas_from(&self, target: Complex64) -> f64 {
        let d = (self.value - target).norm();
        if self.std_error == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.std_error
        }
    }
}

#[derive(Clone, Copy)]
struct Moments {
    count: usize,
    mean: Complex64,
    // Σ |x − mean|²
    m2: f64,
}

impl Moments {
    fn empty() -> Self {
        Moments {
            count: 0,
            mean: Complex64::new(0.0, 0.0),
            m2: 0.0,
        }
    }

    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        let delta2 = x - self.mean;
        self.m2 += delta.re * delta2.re + delta.im * delta2.im;
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let wb = other.count as f64 / n;
        Moments {
            count: self.count + other.count,
            mean: self.mean + delta * wb,
            m2: self.m2 + other.m2 + delta.norm_sqr() * self.count as f64 * wb,
        }
    }
}

/// Importance-sampled Monte Carlo estimate of `∫ f`.
///
/// `sampler` draws a point together with its density; the estimator averages
/// `f(x)/pdf(x)`. Samples are drawn in chunks of 4096, chunk `k` using the
/// ChaCha8 stream `k` of `seed`, so the result is independent of thread count.
pub fn monte_carlo<P, S, F>(sampler: S, f: F, sample_count: usize, seed: u64) -> Result<McEstimate>
where
    S: Fn(&mut ChaCha8Rng) -> (P, f64) + Sync,
    F: Fn(&P) -> Complex64 + Sync,
{
    if sample_count == 0 {
        return Err(Error::param("sample_count", "must be positive"));
    }
    let chunks = sample_count.div_ceil(CHUNK);
    let partials: Vec<Result<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(sample_count - k * CHUNK);
            let mut acc = Moments::empty();
            for _ in 0..len {
                let (x, pdf) = sampler(&mut rng);
                if !(pdf > 0.0) || !pdf.is_finite() {
                    return Err(Error::NonFinite(format!("sampler density {pdf}")));
                }
                let v = f(&x) / pdf;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite("Monte Carlo integrand".into()));
                }
                acc.push(v);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Moments::empty();
    for p in partials {
        total = total.merge(p?);
    }
    let n = total.count as f64;
    let std_error = if total.count > 1 {
        (total.m2 / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        value: total.mean,
        std_error,
        samples: total.count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn uniform_square(rng: &mut ChaCha8Rng) -> ([f64; 2], f64) {
        ([rng.random::<f64>(), rng.random::<f64>()], 1.0)
    }

    #[test]
    fn constant_integrand_is_exact() {
        let est = monte_carlo(uniform_square, |_| Complex64::new(3.0, 0.0), 10_000, 1).unwrap();
        assert_eq!(est.value, Complex64::new(3.0, 0.0));
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn gaussian_over_plane() {
        // ∫_{R²} e^{-(x²+y²)} = π, sampling from N(0, 1)^2.
        let sampler = |rng: &mut ChaCha8Rng| {
            let x: f64 = rng.sample(rand_distr_normal());
            let y: f64 = rng.sample(rand_distr_normal());
            let pdf = (-(x * x + y * y) / 2.0).exp() / (2.0 * std::f64::consts::PI);
            ([x, y], pdf)
        };
        let est = monte_carlo(
            sampler,
            |p| Complex64::new((-(p[0] * p[0] + p[1] * p[1])).exp(), 0.0),
            200_000,
            9,
        )
        .unwrap();
        assert!(est.sigmas_from(Complex64::new(std::f64::consts::PI, 0.0)) < 3.0);
    }

    fn rand_distr_normal() -> impl rand::distr::Distribution<f64> {
        BoxMuller
    }

    struct BoxMuller;
    impl rand::distr::Distribution<f64> for BoxMuller {
        fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
            let u: f64 = 1.0 - rng.random::<f64>();
            let v: f64 = rng.random();
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        }
    }

    #[test]
    fn seed_determinism() {
        let f = |p: &[f64; 2]| Complex64::new(p[0] * p[1], p[0]);
        let a = monte_carlo(uniform_square, f, 10_001, 42).unwrap();
        let b = monte_carlo(uniform_square, f, 10_001, 42).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo(uniform_square, f, 10_001, 43).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(monte_carlo(uniform_square, |_| Complex64::new(1.0, 0.0), 0, 0).is_err());
    }
}
