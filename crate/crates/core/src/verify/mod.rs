//! Batch verification: named suites of identity checks with a JSON report.
//!
//! A suite expands into independent [`Task`]s; the runner executes them on
//! the rayon pool and sorts the resulting [`Check`]s by id, so a report only
//! depends on the configuration (apart from wall times).

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::CheckValue;

mod suites;

pub use suites::{Bargmann, Dirichlet, DruryArveson, Fock, Group, Kernels, PaleyWiener};

/// Settings shared by all suites. Every field has a JSON equivalent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub suite: String,
    /// Dimension parameter: the half-space lives in `ℂ^{n+1}`.
    pub n: usize,
    /// Bergman weight used by the Bergman checks (default 0).
    pub nu: Option<f64>,
    /// Order of the Dirichlet space (default: smallest admissible).
    pub m: Option<u32>,
    /// Truncation tolerance for tail-bound driven degrees.
    pub tol: f64,
    pub seed: u64,
    /// Random pairs for the pointwise kernel identities.
    pub pairs: usize,
    /// Reduced node counts and sample sizes.
    pub fast: bool,
    pub mc_samples: usize,
    pub random_polynomials: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suite: "all".into(),
            n: 1,
            nu: None,
            m: None,
            tol: 1e-10,
            seed: 7,
            pairs: 100,
            fast: false,
            mc_samples: 400_000,
            random_polynomials: 50,
        }
    }
}

impl VerifyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.n) {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("suites run at n = 1 or 2, got {}", self.n),
            });
        }
        if let Some(nu) = self.nu {
            if !(nu > -1.0) || !nu.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "nu",
                    reason: format!("the Bergman weight needs ν > −1, got {nu}"),
                });
            }
        }
        if let Some(m) = self.m {
            if 2 * m as usize <= self.n + 1 {
                return Err(Error::InvalidParameter {
                    name: "m",
                    reason: format!("the Dirichlet space needs 2m > n+1, got m = {m}"),
                });
            }
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                reason: format!("must lie in (0, 1), got {}", self.tol),
            });
        }
        if self.pairs == 0 || self.mc_samples < 1000 || self.random_polynomials == 0 {
            return Err(Error::InvalidParameter {
                name: "pairs",
                reason: "pairs, random_polynomials must be positive and mc_samples ≥ 1000".into(),
            });
        }
        suite(&self.suite).map(|_| ())
    }

    pub fn bergman_nu(&self) -> f64 {
        self.nu.unwrap_or(0.0)
    }

    pub fn dirichlet_m(&self) -> u32 {
        self.m.unwrap_or(min_dirichlet_order(self.n))
    }

    /// Independent stream per check, so results do not depend on scheduling.
    pub fn rng(&self, id: &str) -> ChaCha8Rng {
        // FNV-1a of the id mixed into the seed.
        let h = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
        });
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

/// Smallest `m` with `2m > n+1`.
pub fn min_dirichlet_order(n: usize) -> u32 {
    (n as u32).div_ceil(2) + 1
}

/// Smallest `m ≥ 1` with `2m + ν > −1`.
pub fn min_weighted_order(nu: f64) -> u32 {
    let mut m = 1;
    while 2.0 * m as f64 + nu <= -1.0 {
        m += 1;
    }
    m
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Which identity the check certifies.
    pub anchor: String,
    /// Acceptance criterion number, when the check belongs to one.
    pub criterion: Option<u8>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    /// `None` when the computation itself failed.
    pub rel_error: Option<f64>,
    pub tolerance: f64,
    /// Reported lines carry `asserted = false` and always pass.
    pub asserted: bool,
    pub pass: bool,
    pub quadrature: String,
    /// Seconds.
    pub wall_time: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub fast: bool,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Flat table: one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,criterion,lhs_re,lhs_im,rhs_re,rhs_im,rel_error,tolerance,asserted,pass,wall_time\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e},{:e},{},{:e},{},{},{:.3}\n",
                c.id,
                c.criterion.map(|k| k.to_string()).unwrap_or_default(),
                c.lhs[0],
                c.lhs[1],
                c.rhs[0],
                c.rhs[1],
                c.rel_error.map(|e| format!("{e:e}")).unwrap_or_default(),
                c.tolerance,
                c.asserted,
                c.pass,
                c.wall_time
            ));
        }
        out
    }

    /// Whitespace-separated `index rel_error tolerance` rows for plotting.
    pub fn to_gnuplot(&self) -> String {
        let mut out = String::from("# index rel_error tolerance id\n");
        for (k, c) in self.checks.iter().enumerate() {
            if let Some(e) = c.rel_error {
                out.push_str(&format!("{k} {e:e} {:e} {}\n", c.tolerance, c.id));
            }
        }
        out
    }
}

/// Deferred check; `run` yields the two sides and the error measure.
pub struct Task {
    pub id: String,
    pub anchor: &'static str,
    pub criterion: Option<u8>,
    pub tolerance: f64,
    pub asserted: bool,
    pub quadrature: String,
    pub run: Box<dyn FnOnce() -> Result<CheckValue> + Send>,
}

impl Task {
    pub fn new<F>(id: impl Into<String>, anchor: &'static str, tolerance: f64, run: F) -> Self
    where
        F: FnOnce() -> Result<CheckValue> + Send + 'static,
    {
        Task {
            id: id.into(),
            anchor,
            criterion: None,
            tolerance,
            asserted: true,
            quadrature: "closed form".into(),
            run: Box::new(run),
        }
    }

    pub fn criterion(mut self, k: u8) -> Self {
        self.criterion = Some(k);
        self
    }

    pub fn report_only(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn quadrature(mut self, spec: impl Into<String>) -> Self {
        self.quadrature = spec.into();
        self
    }

    fn execute(self) -> Check {
        let start = Instant::now();
        let outcome = (self.run)();
        let wall_time = start.elapsed().as_secs_f64();
        let pair = |z: Complex64| [z.re, z.im];
        let (lhs, rhs, rel_error, error) = match outcome {
            Ok(v) => (pair(v.lhs), pair(v.rhs), Some(v.rel_error), None),
            Err(e) => ([0.0; 2], [0.0; 2], None, Some(e.to_string())),
        };
        let within = rel_error.is_some_and(|e| e.is_finite() && e <= self.tolerance);
        Check {
            id: self.id,
            anchor: self.anchor.into(),
            criterion: self.criterion,
            lhs,
            rhs,
            rel_error,
            tolerance: self.tolerance,
            asserted: self.asserted,
            pass: within || !self.asserted,
            quadrature: self.quadrature,
            wall_time,
            error,
        }
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>>;
}

/// The composite suite.
pub struct All;

impl Suite for All {
    fn name(&self) -> &'static str {
        "all"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let mut tasks = Vec::new();
        for name in SUITE_NAMES.iter().filter(|&&s| s != "all") {
            tasks.extend(suite(name)?.tasks(cfg)?);
        }
        Ok(tasks)
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "group",
    "fock",
    "bargmann",
    "paley-wiener",
    "kernels",
    "dirichlet",
    "drury-arveson",
    "all",
];

pub fn suite(name: &str) -> Result<Box<dyn Suite>> {
    Ok(match name {
        "group" => Box::new(Group),
        "fock" => Box::new(Fock),
        "bargmann" => Box::new(Bargmann),
        "paley-wiener" => Box::new(PaleyWiener),
        "kernels" => Box::new(Kernels),
        "dirichlet" => Box::new(Dirichlet),
        "drury-arveson" => Box::new(DruryArveson),
        "all" => Box::new(All),
        other => {
            return Err(Error::Unknown {
                kind: "suite",
                name: other.to_string(),
            })
        }
    })
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut cfg = cfg.clone();
    cfg.suite = name.to_string();
    cfg.validate()?;
    let tasks = suite(name)?.tasks(&cfg)?;
    let mut checks: Vec<Check> = tasks.into_par_iter().map(Task::execute).collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = checks.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::InvalidParameter {
            name: "suite",
            reason: format!("duplicate check id {}", w[0].id),
        });
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        n: cfg.n,
        fast: cfg.fast,
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[cfg(test)]
mod tests;
