use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rand::Rng;

use super::{min_weighted_order, Suite, Task, VerifyConfig};
use crate::bargmann::{
    dsigma_check, homomorphism_residual, p0_row, p0_tail_bound, rep_matrix, Field, DEFAULT_STEP,
};
use crate::cvec::{hermitian, norm_sq};
use crate::drury_arveson::{
    da_method, da_norm_coeff_sq, da_weight, dot_dirichlet_norm_coeff_sq, script_r,
    script_r_eigenvalue, BallPolynomial,
};
use crate::error::{Error, Result};
use crate::fock::{
    degree_for_tolerance, fock_rule, inner_product_quadrature, reproducing_kernel,
    reproducing_kernel_partial, FockTruncation, FockVector, MultiIndex,
};
use crate::heisenberg::HeisenbergElement;
use crate::kernels::{
    cayley_transfer_check, cayley_transfer_log_check, gram_matrix, gram_min_eigenvalue,
    kernel_eval, lemma41_constant, lemma41_integral, lemma41_monte_carlo, lemma41_nested,
    lemma51_ratio, mobius_invariance_check, q_pairing, random_point, reproducing_check, CheckValue,
    KernelCombination, KernelFunction, KernelId,
};
use crate::siegel::{psi, psi_inv, Automorphism, BallPoint, HorocyclicCoordinates, SiegelPoint};
use crate::spectral::{
    hardy_slice_norms, l2nu_norm_sq, l2nu_norm_sq_closed, space_norm_sq, spectral_derivative,
    synthesize, synthesize_dirichlet, ClosedForm, ConfigRule, FiniteTerm, FromFn,
    HolomorphicFunction, KernelFamily, Laguerre, ScalarProfile, SpaceTag, SpectralProfile,
    SynthesizedFunction, Synthesizer,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A non-negative defect, reported against zero.
fn residual(r: f64) -> CheckValue {
    CheckValue {
        lhs: c(r, 0.0),
        rhs: c(0.0, 0.0),
        rel_error: r,
    }
}

fn real(lhs: f64, rhs: f64) -> CheckValue {
    CheckValue::new(c(lhs, 0.0), c(rhs, 0.0))
}

/// Keeps the check with the largest error.
fn worst(values: impl IntoIterator<Item = CheckValue>) -> CheckValue {
    values.into_iter().fold(residual(0.0), |a, b| {
        if b.rel_error > a.rel_error || b.rel_error.is_nan() {
            b
        } else {
            a
        }
    })
}

fn point(z: Vec<Complex64>, t: f64, h: f64) -> SiegelPoint {
    psi_inv(&HorocyclicCoordinates::new(z, t, h)).expect("positive height")
}

fn config_rule(cfg: &VerifyConfig, center: &SiegelPoint) -> Result<ConfigRule> {
    let rule = ConfigRule::around(center)?;
    Ok(if cfg.fast { rule.fast() } else { rule })
}

fn describe(rule: &ConfigRule) -> String {
    let sphere = if rule.n() == 2 {
        format!(", {} sphere nodes", rule.sphere_nodes)
    } else {
        String::new()
    };
    format!(
        "config-space GL order {}, {} angle nodes{sphere}, {} t-panels",
        rule.order, rule.angle_nodes, rule.t_panels
    )
}

fn random_element<R: Rng>(rng: &mut R, n: usize, z_max: f64, t_max: f64) -> HeisenbergElement {
    let z = (0..n)
        .map(|_| {
            Complex64::from_polar(
                z_max * rng.random::<f64>().sqrt(),
                2.0 * PI * rng.random::<f64>(),
            )
        })
        .collect();
    HeisenbergElement::new(z, t_max * (2.0 * rng.random::<f64>() - 1.0))
}

/// Rows of a random unitary matrix by Gram–Schmidt.
fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Complex64>> {
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        for r in &rows {
            let p = hermitian(&v, r);
            for (vk, rk) in v.iter_mut().zip(r) {
                *vk -= p * rk;
            }
        }
        let len = norm_sq(&v).sqrt();
        if len > 1e-3 {
            rows.push(v.iter().map(|x| x / len).collect());
        }
    }
    rows
}

fn random_ball_point<R: Rng>(rng: &mut R, dim: usize, r_max: f64) -> BallPoint {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                c(
                    2.0 * rng.random::<f64>() - 1.0,
                    2.0 * rng.random::<f64>() - 1.0,
                )
            })
            .collect();
        let len = norm_sq(&v).sqrt();
        if len > 1e-3 && len <= 1.0 {
            let r = r_max * rng.random::<f64>().powf(1.0 / (2 * dim) as f64);
            return BallPoint::new(v.iter().map(|x| x * (r / len)).collect())
                .expect("inside the ball");
        }
    }
}

fn unit(n: usize, j: usize, k: u32) -> MultiIndex {
    let mut a = vec![0; n];
    a[j] = k;
    MultiIndex(a)
}

/// Two finite families used by the norm and growth checks; powers are raised
/// with `ν` so that the spectral norm stays finite at `μ → 0`.
fn finite_examples(n: usize, nu: f64) -> Result<Vec<(&'static str, SpectralProfile)>> {
    let p0 = 0.5 * nu.max(0.0);
    let term = |alpha: MultiIndex, coeff: Complex64, power: f64, decay: f64| FiniteTerm {
        alpha,
        coeff,
        profile: ScalarProfile { power, decay },
    };
    let a = SpectralProfile::finite(
        n,
        vec![
            term(MultiIndex::zero(n), c(1.0, 0.0), p0, 1.0),
            term(unit(n, 0, 1), c(0.5, -0.3), p0 + 0.5, 0.7),
        ],
    )?;
    let mut mixed = vec![0; n];
    mixed[0] = 1;
    mixed[n - 1] += 1;
    let b = SpectralProfile::finite(
        n,
        vec![term(MultiIndex(mixed), c(-0.2, 0.4), p0 + 1.0, 1.2)],
    )?;
    Ok(vec![("finite-a", a), ("finite-b", b)])
}

fn closed_form() -> Arc<dyn Synthesizer> {
    Arc::new(ClosedForm)
}

fn expect_divergent(r: Result<f64>) -> CheckValue {
    residual(if matches!(r, Err(Error::Divergent(_))) {
        0.0
    } else {
        1.0
    })
}

pub struct Group;

impl Suite for Group {
    fn name(&self) -> &'static str {
        "group"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let n = cfg.n;
        let samples = 50;
        let mut tasks = Vec::new();
        let mut rng = cfg.rng("group.associativity");
        tasks.push(
            Task::new(
                "group.associativity",
                "Heisenberg group law",
                1e-14,
                move || {
                    let mut out = Vec::new();
                    for _ in 0..samples {
                        let [a, b, d] = [0; 3].map(|_| random_element(&mut rng, n, 2.0, 3.0));
                        let left = a.mul(&b)?.mul(&d)?;
                        let right = a.mul(&b.mul(&d)?)?;
                        out.push(residual(
                            left.max_abs_diff(&right) / (1.0 + left.magnitude()),
                        ));
                    }
                    Ok(worst(out))
                },
            )
            .criterion(8),
        );
        let mut rng = cfg.rng("group.identity-inverse");
        tasks.push(
            Task::new(
                "group.identity-inverse",
                "Heisenberg group law",
                1e-14,
                move || {
                    let e = HeisenbergElement::identity(n);
                    let mut out = Vec::new();
                    for _ in 0..samples {
                        let a = random_element(&mut rng, n, 2.0, 3.0);
                        let scale = 1.0 + a.magnitude();
                        out.push(residual(e.mul(&a)?.max_abs_diff(&a) / scale));
                        out.push(residual(a.mul(&e)?.max_abs_diff(&a) / scale));
                        out.push(residual(a.mul(&a.inv())?.max_abs_diff(&e) / scale));
                        out.push(residual(a.inv().mul(&a)?.max_abs_diff(&e) / scale));
                    }
                    Ok(worst(out))
                },
            )
            .criterion(8),
        );
        let mut rng = cfg.rng("group.norm-homogeneity");
        tasks.push(
            Task::new(
                "group.norm-homogeneity",
                "homogeneous norm under dilations",
                1e-14,
                move || {
                    let mut out = Vec::new();
                    for _ in 0..samples {
                        let a = random_element(&mut rng, n, 2.0, 3.0);
                        let delta = 0.1 + 4.0 * rng.random::<f64>();
                        let lhs = a.dilate(delta)?.homogeneous_norm();
                        out.push(real(lhs, delta * a.homogeneous_norm()));
                    }
                    Ok(worst(out))
                },
            )
            .criterion(8),
        );
        let mut rng = cfg.rng("group.psi-round-trip");
        tasks.push(Task::new(
            "group.psi-round-trip",
            "horocyclic chart",
            1e-13,
            move || {
                let mut out = Vec::new();
                for _ in 0..samples {
                    let p = random_point(&mut rng, n, 2.0, 3.0, (0.05, 3.0));
                    let back = psi_inv(&psi(&p)?)?;
                    out.push(residual(back.max_abs_diff(&p) / (1.0 + p.magnitude())));
                }
                Ok(worst(out))
            },
        ));
        let mut rng = cfg.rng("group.q-diagonal");
        tasks.push(Task::new(
            "group.q-diagonal",
            "Q(ζ,ζ) is the defining function",
            1e-13,
            move || {
                let mut out = Vec::new();
                for _ in 0..samples {
                    let p = random_point(&mut rng, n, 2.0, 3.0, (0.05, 3.0));
                    out.push(CheckValue::new(q_pairing(&p, &p), c(p.rho(), 0.0)));
                }
                Ok(worst(out))
            },
        ));
        Ok(tasks)
    }
}

pub struct Fock;

impl Suite for Fock {
    fn name(&self) -> &'static str {
        "fock"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let n = cfg.n;
        let tol = cfg.tol;
        let degree = if n == 1 { 6 } else { 4 };
        let mut tasks = Vec::new();
        for lambda in [1.3, -0.7] {
            let id = format!("fock.orthonormality.lambda{lambda}");
            tasks.push(
                Task::new(id, "monomial norms of the Fock space", 1e-12, move || {
                    let trunc = FockTruncation::new(n, degree)?;
                    let rule = fock_rule(n, degree, lambda)?;
                    let basis: Vec<FockVector> = trunc
                        .indices()
                        .iter()
                        .map(|a| FockVector::basis(trunc.clone(), a))
                        .collect::<Result<_>>()?;
                    let mut out = Vec::new();
                    for (j, f) in basis.iter().enumerate() {
                        for (k, g) in basis.iter().enumerate() {
                            let v = inner_product_quadrature(f, g, lambda, &rule)?;
                            let target = if j == k { 1.0 } else { 0.0 };
                            out.push(residual((v - target).norm()));
                        }
                    }
                    Ok(worst(out))
                })
                .quadrature(format!("Gauss–Hermite {} nodes per axis", degree + 1)),
            );
        }
        let mut rng = cfg.rng("fock.kernel-truncation");
        tasks.push(
            Task::new(
                "fock.kernel-truncation",
                "Fock reproducing kernel, truncation from tail bound",
                tol + 1e-13,
                move || {
                    let lambda: f64 = -1.7;
                    let mut out = Vec::new();
                    for _ in 0..20 {
                        let z: Vec<Complex64> = (0..n)
                            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 2.0)
                            .collect();
                        let w: Vec<Complex64> = (0..n)
                            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 2.0)
                            .collect();
                        let x = 0.5 * lambda.abs() * (norm_sq(&z) * norm_sq(&w)).sqrt();
                        let m = degree_for_tolerance(x, tol)?;
                        let trunc = FockTruncation::new(n, m)?;
                        let partial = reproducing_kernel_partial(&trunc, &z, &w, lambda)?;
                        let full = reproducing_kernel(&z, &w, lambda)?;
                        // Absolute: the tail bound controls |K − K_M| directly.
                        out.push(CheckValue {
                            lhs: partial,
                            rhs: full,
                            rel_error: (partial - full).norm(),
                        });
                    }
                    Ok(worst(out))
                },
            )
            .quadrature(format!("series truncated at tol {tol:e}")),
        );
        Ok(tasks)
    }
}

pub struct Bargmann;

impl Suite for Bargmann {
    fn name(&self) -> &'static str {
        "bargmann"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let n = cfg.n;
        let tol = cfg.tol;
        let (degree, block) = if n == 1 { (10, 5) } else { (6, 3) };
        let samples = if cfg.fast { 4 } else { 12 };
        let mut tasks = Vec::new();
        let mut rng = cfg.rng("bargmann.homomorphism");
        tasks.push(
            Task::new(
                "bargmann.homomorphism",
                "σ_λ is a homomorphism",
                1e-8,
                move || {
                    let mut out = Vec::new();
                    for k in 0..samples {
                        let lambda = if k % 2 == 0 { 1.0 } else { -1.0 };
                        let a = random_element(&mut rng, n, 0.7, 2.0);
                        let b = random_element(&mut rng, n, 0.7, 2.0);
                        out.push(residual(
                            homomorphism_residual(lambda, &a, &b, degree, block, tol)?.0,
                        ));
                    }
                    Ok(worst(out))
                },
            )
            .criterion(8)
            .quadrature(format!(
                "degree ≤ {block} block of a degree {degree} truncation"
            )),
        );
        let fields: [(&str, Vec<Field>); 3] = [
            ("t", vec![Field::T]),
            ("zbar", (0..n).map(Field::ZbarRight).collect()),
            ("z", (0..n).map(Field::Z).collect()),
        ];
        for (name, list) in fields {
            tasks.push(
                Task::new(
                    format!("bargmann.dsigma.{name}"),
                    "differentiated representation",
                    1e-6,
                    move || {
                        let trunc = FockTruncation::new(n, 4)?;
                        let mut out = Vec::new();
                        for lambda in [1.2, -0.9] {
                            for &field in &list {
                                out.push(residual(dsigma_check(
                                    lambda,
                                    field,
                                    &trunc,
                                    DEFAULT_STEP,
                                )?));
                            }
                        }
                        Ok(worst(out))
                    },
                )
                .criterion(8)
                .quadrature(format!(
                    "Richardson central differences, step {DEFAULT_STEP:e}"
                )),
            );
        }
        let mut rng = cfg.rng("bargmann.p0-tail");
        tasks.push(
            Task::new(
                "bargmann.p0-tail",
                "‖P₀σ_λ[z,t]‖ truncation tail",
                0.0,
                move || {
                    let lambda = -1.5;
                    let mut out = Vec::new();
                    for _ in 0..6 {
                        let a = random_element(&mut rng, n, 1.5, 2.0);
                        for m in [2usize, 5, 10, 20] {
                            let trunc = FockTruncation::new(n, m)?;
                            let defect = 1.0 - p0_row(lambda, &a, &trunc)?.norm_sq();
                            let bound = p0_tail_bound(lambda, &a, m);
                            out.push(residual(
                                (defect - bound - 1e-14).max(-defect - 1e-14).max(0.0),
                            ));
                        }
                    }
                    Ok(worst(out))
                },
            )
            .criterion(8),
        );
        let mut rng = cfg.rng("bargmann.column-tail");
        tasks.push(Task::new(
            "bargmann.column-tail",
            "unitarity of σ_λ up to the truncation tail",
            0.0,
            move || {
                let trunc = FockTruncation::new(n, if n == 1 { 12 } else { 8 })?;
                let mut out = Vec::new();
                for lambda in [0.9, -1.1] {
                    let a = random_element(&mut rng, n, 0.8, 1.0);
                    let m = rep_matrix(lambda, &a, &trunc)?;
                    for (k, beta) in trunc
                        .indices()
                        .iter()
                        .enumerate()
                        .take(trunc.block_len(if n == 1 { 6 } else { 3 }))
                    {
                        let defect = m.column_defect(k);
                        out.push(residual(
                            (defect - m.column_bound(beta) - 1e-12)
                                .max(-defect - 1e-12)
                                .max(0.0),
                        ));
                    }
                }
                Ok(worst(out))
            },
        ));
        Ok(tasks)
    }
}

pub struct PaleyWiener;

impl Suite for PaleyWiener {
    fn name(&self) -> &'static str {
        "paley-wiener"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let n = cfg.n;
        let nf = n as f64;
        let base = SiegelPoint::base(n);
        let mut tasks = Vec::new();

        // Bergman identity.
        let nu = cfg.bergman_nu();
        let tag = SpaceTag::Bergman { nu };
        let mut bergman = vec![(
            "kernel",
            SpectralProfile::kernel(KernelFamily::Bergman { nu }, base.clone())?,
        )];
        bergman.extend(finite_examples(n, nu)?);
        for (label, tau) in bergman {
            let rule = config_rule(cfg, &base)?;
            tasks.push(
                Task::new(
                    format!("pw.bergman.{label}"),
                    "Bergman Paley–Wiener norm identity",
                    1e-4,
                    move || {
                        let f = SynthesizedFunction::new(tau.clone(), closed_form());
                        let lhs = space_norm_sq(&f, tag, &rule)?;
                        Ok(real(
                            lhs,
                            tag.plancherel_constant(n) * l2nu_norm_sq(&tau, nu)?,
                        ))
                    },
                )
                .criterion(1)
                .quadrature(describe(&config_rule(cfg, &base)?)),
            );
        }

        // Weighted Dirichlet identity at two orders.
        for (label, wnu) in [("drury-arveson", -nf - 1.0), ("nu-1.5", -1.5)] {
            let m0 = min_weighted_order(wnu);
            let tau = SpectralProfile::kernel(
                KernelFamily::WeightedDirichlet { nu: wnu, m: m0 },
                base.clone(),
            )?;
            for m in [m0, m0 + 1] {
                let tag = SpaceTag::WeightedDirichlet { nu: wnu, m };
                let rule = config_rule(cfg, &base)?;
                let quad = describe(&rule);
                let t = tau.clone();
                tasks.push(
                    Task::new(
                        format!("pw.weighted-dirichlet.{label}.m{m}.quadrature"),
                        "weighted Dirichlet norm identity, independent of m",
                        1e-3,
                        move || {
                            let f = SynthesizedFunction::new(t.clone(), closed_form());
                            let lhs = space_norm_sq(&f, tag, &rule)?;
                            Ok(real(
                                lhs,
                                tag.plancherel_constant(n) * l2nu_norm_sq_closed(&t, wnu)?,
                            ))
                        },
                    )
                    .criterion(2)
                    .quadrature(quad),
                );
                let t = tau.clone();
                tasks.push(
                    Task::new(
                        format!("pw.weighted-dirichlet.{label}.m{m}.spectral"),
                        "weighted Dirichlet norm identity, independent of m",
                        1e-10,
                        move || {
                            // ∂^m F has profile μ^m τ in the class of weight ν + 2m.
                            let lhs =
                                l2nu_norm_sq(&spectral_derivative(&t, m), wnu + 2.0 * m as f64)?;
                            Ok(real(lhs, l2nu_norm_sq_closed(&t, wnu)?))
                        },
                    )
                    .criterion(2)
                    .quadrature("Gauss–Laguerre in μ vs closed Gamma integrals"),
                );
            }
        }

        // Cauchy–Riemann reductions of a synthesized function.
        let (_, tau) = finite_examples(n, 0.0)?.remove(0);
        let z0: Vec<Complex64> = (0..n)
            .map(|j| c(0.3 - 0.1 * j as f64, -0.2 + 0.15 * j as f64))
            .collect();
        let (t0, h0) = (0.5, 0.7);
        let cr = move || -> Result<(f64, f64)> {
            let synth = Laguerre::default();
            let f = |z: &[Complex64], t: f64, h: f64| {
                synthesize(&tau, &point(z.to_vec(), t, h), &synth)
            };
            let s = 1e-4;
            let dt = (f(&z0, t0 + s, h0)? - f(&z0, t0 - s, h0)?) / (2.0 * s);
            let dh = (f(&z0, t0, h0 + s)? - f(&z0, t0, h0 - s)?) / (2.0 * s);
            let r_h = (I * dt - dh).norm() / (dt.norm() + dh.norm());
            let mut r_z: f64 = 0.0;
            for j in 0..n {
                let shifted = |d: Complex64| {
                    let mut z = z0.clone();
                    z[j] += d;
                    z
                };
                let dx = (f(&shifted(c(s, 0.0)), t0, h0)? - f(&shifted(c(-s, 0.0)), t0, h0)?)
                    / (2.0 * s);
                let dy = (f(&shifted(c(0.0, s)), t0, h0)? - f(&shifted(c(0.0, -s)), t0, h0)?)
                    / (2.0 * s);
                let dzbar = 0.5 * (dx + I * dy);
                let expected = 0.25 * I * z0[j] * dt;
                r_z = r_z.max((dzbar - expected).norm() / (dx.norm() + dy.norm() + dt.norm()));
            }
            Ok((r_h, r_z))
        };
        let cr = Arc::new(cr);
        let cr2 = cr.clone();
        tasks.push(
            Task::new(
                "pw.cauchy-riemann.h",
                "∂_h F = i ∂_t F for synthesized F",
                1e-6,
                move || Ok(residual(cr()?.0)),
            )
            .criterion(9)
            .quadrature("central differences, step 1e-4"),
        );
        tasks.push(
            Task::new(
                "pw.cauchy-riemann.zbar",
                "∂_{z̄_j} F = (i/4) z_j ∂_t F for synthesized F",
                1e-6,
                move || Ok(residual(cr2()?.1)),
            )
            .criterion(9)
            .quadrature("central differences, step 1e-4"),
        );

        // Hardy slices and their limit.
        let shifted = point(
            (0..n).map(|j| c(0.3, -0.2 * (j + 1) as f64)).collect(),
            0.4,
            0.8,
        );
        for (label, omega) in [("base", base.clone()), ("shifted", shifted)] {
            let tau = SpectralProfile::kernel(KernelFamily::Hardy, omega.clone())?;
            let rule = config_rule(cfg, &omega)?;
            let quad = describe(&rule);
            let ext = Arc::new(OnceLock::new());
            let (ext2, tau2, rule2) = (ext.clone(), tau.clone(), rule.clone());
            let slices = move |ext: &OnceLock<Result<crate::spectral::HardyExtrapolation>>,
                               tau: &SpectralProfile,
                               rule: &ConfigRule| {
                ext.get_or_init(|| {
                    let f = SynthesizedFunction::new(tau.clone(), closed_form());
                    hardy_slice_norms(&f, rule, 7)
                })
                .clone()
            };
            let slices2 = slices;
            tasks.push(
                Task::new(
                    format!("pw.hardy.{label}.limit"),
                    "Hardy norm as the h → 0 limit of slice norms",
                    1e-4,
                    move || {
                        let e = slices(&ext, &tau, &rule)?;
                        Ok(real(e.limit.re, l2nu_norm_sq(&tau, -1.0)?))
                    },
                )
                .criterion(11)
                .quadrature(format!("{quad}; 7 heights 2^-k, Richardson")),
            );
            tasks.push(
                Task::new(
                    format!("pw.hardy.{label}.monotone"),
                    "slice norms increase as h decreases",
                    0.0,
                    move || {
                        let e = slices2(&ext2, &tau2, &rule2)?;
                        Ok(residual(if e.monotone { 0.0 } else { 1.0 }))
                    },
                )
                .criterion(11),
            );
        }

        // Dilations: derived exponent asserted, printed exponent reported. The
        // two agree at ν = 0, so the check runs at ν = 1 unless ν is given.
        let delta: f64 = 2.0;
        let dnu = cfg.nu.unwrap_or(1.0);
        let id = KernelId::Bergman { nu: dnu };
        let pulled = point(vec![c(0.0, 0.0); n], 0.0, delta.powi(-2));
        let rule = config_rule(cfg, &pulled)?;
        let quad = describe(&rule);
        let shared: Arc<OnceLock<Result<(f64, f64)>>> = Arc::new(OnceLock::new());
        let dilated = move |cell: &OnceLock<Result<(f64, f64)>>| -> Result<(f64, f64)> {
            cell.get_or_init(|| {
                let f = KernelFunction::new(id, SiegelPoint::base(n))?;
                let phi = Automorphism::Dilation(delta);
                let g = FromFn {
                    n,
                    f: move |p: &SiegelPoint| f.value(&phi.apply(p)?),
                };
                let lhs = space_norm_sq(&g, SpaceTag::Bergman { nu: dnu }, &rule)?;
                let b = SiegelPoint::base(n);
                Ok((lhs, kernel_eval(id, &b, &b)?.re))
            })
            .clone()
        };
        let (d2, shared2) = (dilated.clone(), shared.clone());
        tasks.push(
            Task::new(
                "pw.dilation.derived-exponent",
                "‖F∘D_δ‖² = δ^{−(2n+4+2ν)}‖F‖²",
                1e-4,
                move || {
                    let (lhs, norm) = dilated(&shared)?;
                    Ok(real(lhs, delta.powf(-(2.0 * nf + 4.0 + 2.0 * dnu)) * norm))
                },
            )
            .quadrature(quad.clone()),
        );
        tasks.push(
            Task::new(
                "pw.dilation.printed-exponent",
                "‖F∘D_δ‖² = δ^{−(2n+4)}‖F‖² (ν-free form)",
                1e-4,
                move || {
                    let (lhs, norm) = d2(&shared2)?;
                    Ok(real(lhs, delta.powf(-(2.0 * nf + 4.0)) * norm))
                },
            )
            .report_only()
            .quadrature(quad),
        );

        // Pointwise growth through the reproducing kernel.
        let mut rng = cfg.rng("pw.growth-bound");
        let examples = finite_examples(n, nu)?;
        tasks.push(Task::new(
            "pw.growth-bound",
            "|F(ζ)|² ≤ K_ν(ζ,ζ)‖F‖²",
            1e-12,
            move || {
                let id = KernelId::Bergman { nu };
                let mut ratio: f64 = 0.0;
                for (_, tau) in &examples {
                    let norm = SpaceTag::Bergman { nu }.plancherel_constant(n)
                        * l2nu_norm_sq_closed(tau, nu)?;
                    for _ in 0..20 {
                        let p = random_point(&mut rng, n, 2.0, 3.0, (0.05, 3.0));
                        let v = synthesize(tau, &p, &ClosedForm)?.norm_sqr();
                        ratio = ratio.max(v / (kernel_eval(id, &p, &p)?.re * norm));
                    }
                }
                Ok(CheckValue {
                    lhs: c(ratio, 0.0),
                    rhs: c(1.0, 0.0),
                    rel_error: (ratio - 1.0).max(0.0),
                })
            },
        ));
        let mut rng = cfg.rng("pw.kernel-diagonal-scaling");
        tasks.push(Task::new(
            "pw.kernel-diagonal-scaling",
            "K_ν(ζ,ζ) = K_ν(𝐢,𝐢) ρ(ζ)^{−(n+2+ν)}",
            1e-12,
            move || {
                let id = KernelId::Bergman { nu };
                let b = SiegelPoint::base(n);
                let k0 = kernel_eval(id, &b, &b)?.re;
                let mut out = Vec::new();
                for _ in 0..20 {
                    let p = random_point(&mut rng, n, 2.0, 3.0, (0.05, 3.0));
                    out.push(real(
                        kernel_eval(id, &p, &p)?.re,
                        k0 * p.rho().powf(-(nf + 2.0 + nu)),
                    ));
                }
                Ok(worst(out))
            },
        ));

        // The two synthesizers agree.
        let mut rng = cfg.rng("pw.synthesis-routes");
        let examples = finite_examples(n, nu)?;
        let points = if cfg.fast { 2 } else { 5 };
        tasks.push(
            Task::new(
                "pw.synthesis-routes",
                "Laguerre and closed-form synthesis agree",
                1e-8,
                move || {
                    let lag = Laguerre::default();
                    let mut out = Vec::new();
                    for (_, tau) in &examples {
                        for _ in 0..points {
                            let p = random_point(&mut rng, n, 1.5, 2.0, (0.1, 2.0));
                            out.push(CheckValue::new(
                                synthesize(tau, &p, &lag)?,
                                synthesize(tau, &p, &ClosedForm)?,
                            ));
                        }
                    }
                    Ok(worst(out))
                },
            )
            .quadrature("Gauss–Laguerre with node doubling"),
        );
        Ok(tasks)
    }
}

pub struct Kernels;

impl Suite for Kernels {
    fn name(&self) -> &'static str {
        "kernels"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let n = cfg.n;
        let nf = n as f64;
        let pairs = cfg.pairs;
        let base = SiegelPoint::base(n);
        let m = cfg.dirichlet_m();
        let mut tasks = Vec::new();

        let zeta = point(
            (0..n).map(|j| c(-0.2, 0.3 - 0.1 * j as f64)).collect(),
            -0.4,
            0.7,
        );
        let ids = [
            (
                "bergman",
                KernelId::Bergman {
                    nu: cfg.bergman_nu(),
                },
            ),
            (
                "weighted-dirichlet-nu-1.5",
                KernelId::WeightedDirichlet {
                    nu: -1.5,
                    m: min_weighted_order(-1.5),
                },
            ),
            (
                "drury-arveson",
                KernelId::WeightedDirichlet {
                    nu: -nf - 1.0,
                    m: min_weighted_order(-nf - 1.0),
                },
            ),
        ];
        for (label, id) in ids {
            let rule = config_rule(cfg, &base)?;
            let quad = describe(&rule);
            let (b, z) = (base.clone(), zeta.clone());
            tasks.push(
                Task::new(
                    format!("kernels.reproducing.{label}"),
                    "reproducing property of K_ν",
                    1e-4,
                    move || reproducing_check(id, &b, &z, &rule),
                )
                .criterion(4)
                .quadrature(quad),
            );
        }

        for generator in ["translation", "dilation", "unitary", "inversion"] {
            let id = format!("kernels.mobius.{generator}");
            let mut rng = cfg.rng(&id);
            let run = move |rng: &mut rand_chacha::ChaCha8Rng| -> Result<(CheckValue, CheckValue)> {
                let mut dd = Vec::new();
                let mut pw = Vec::new();
                for _ in 0..pairs {
                    let phi = match generator {
                        "translation" => {
                            Automorphism::HeisenbergTranslation(random_element(rng, n, 2.0, 3.0))
                        }
                        "dilation" => Automorphism::Dilation(0.3 + 2.7 * rng.random::<f64>()),
                        "unitary" => Automorphism::Unitary(random_unitary(rng, n)),
                        _ => Automorphism::Inversion,
                    };
                    let [z1, z2, w1, w2] =
                        [0; 4].map(|_| random_point(rng, n, 1.0, 2.0, (0.2, 2.0)));
                    let r = mobius_invariance_check(&phi, [&z1, &z2], [&w1, &w2])?;
                    dd.push(residual(r.double_difference));
                    pw.push(residual(r.pointwise));
                }
                Ok((worst(dd), worst(pw)))
            };
            let mut rng2 = rng.clone();
            tasks.push(
                Task::new(
                    id.clone(),
                    "Möbius invariance of the dotted log kernel (double difference)",
                    1e-11,
                    move || Ok(run(&mut rng)?.0),
                )
                .criterion(5)
                .quadrature(format!("{pairs} random pairs, exponentiated")),
            );
            tasks.push(
                Task::new(
                    format!("{id}.pointwise"),
                    "pointwise form K(φζ,φω) = K(ζ,ω)",
                    1e-11,
                    move || Ok(run(&mut rng2)?.1),
                )
                .report_only()
                .quadrature(format!("{pairs} random pairs, exponentiated")),
            );
        }

        let mut rng = cfg.rng("kernels.cayley");
        tasks.push(
            Task::new(
                "kernels.cayley",
                "Cayley transfer to the ball Dirichlet kernel (exponential form)",
                1e-10,
                move || {
                    let mut out = Vec::new();
                    for _ in 0..pairs {
                        let w = random_ball_point(&mut rng, n + 1, 0.95);
                        let z = random_ball_point(&mut rng, n + 1, 0.95);
                        out.push(cayley_transfer_check(&w, &z)?);
                    }
                    Ok(worst(out))
                },
            )
            .criterion(6)
            .quadrature(format!("{pairs} random pairs")),
        );
        let mut rng = cfg.rng("kernels.cayley-log");
        tasks.push(
            Task::new(
                "kernels.cayley-log",
                "Cayley transfer to the ball Dirichlet kernel (log form)",
                1e-10,
                move || {
                    let mut out = Vec::new();
                    for _ in 0..pairs {
                        let w = random_ball_point(&mut rng, n + 1, 0.9);
                        let z = random_ball_point(&mut rng, n + 1, 0.9);
                        let v = cayley_transfer_log_check(&w, &z, m)?;
                        // Near ω·ζ̄ = 0 the log is small; measure against the kernel scale.
                        out.push(CheckValue {
                            rel_error: (v.lhs - v.rhs).norm() / v.rhs.norm().max(1e-3),
                            ..v
                        });
                    }
                    Ok(worst(out))
                },
            )
            .quadrature(format!("{pairs} random pairs")),
        );

        let family = move |nu: f64| {
            [
                KernelId::Szego,
                KernelId::Bergman { nu },
                KernelId::WeightedDirichlet {
                    nu: -1.5,
                    m: min_weighted_order(-1.5),
                },
                KernelId::DirichletLog { m },
                KernelId::DirichletDot { m },
            ]
        };
        let nu = cfg.bergman_nu();
        let mut rng = cfg.rng("kernels.hermitian");
        tasks.push(Task::new(
            "kernels.hermitian",
            "K(ω,ζ) = conj K(ζ,ω)",
            1e-12,
            move || {
                let mut out = Vec::new();
                for id in family(nu) {
                    for _ in 0..20 {
                        let w = random_point(&mut rng, n, 1.5, 2.0, (0.1, 2.0));
                        let z = random_point(&mut rng, n, 1.5, 2.0, (0.1, 2.0));
                        out.push(CheckValue::new(
                            kernel_eval(id, &w, &z)?,
                            kernel_eval(id, &z, &w)?.conj(),
                        ));
                    }
                }
                Ok(worst(out))
            },
        ));
        let mut rng = cfg.rng("kernels.gram-psd");
        tasks.push(Task::new(
            "kernels.gram-psd",
            "Gram matrices are positive semidefinite",
            1e-10,
            move || {
                let mut out = Vec::new();
                for id in family(nu) {
                    for _ in 0..5 {
                        let pts: Vec<SiegelPoint> = (0..8)
                            .map(|_| random_point(&mut rng, n, 1.5, 2.0, (0.1, 2.0)))
                            .collect();
                        let (min, trace) = gram_min_eigenvalue(&gram_matrix(id, &pts)?);
                        out.push(CheckValue {
                            lhs: c(min, 0.0),
                            rhs: c(trace, 0.0),
                            rel_error: (-min / trace).max(0.0),
                        });
                    }
                }
                Ok(worst(out))
            },
        ));
        let mut rng = cfg.rng("kernels.synthesis-consistency");
        let points = if cfg.fast { 2 } else { 5 };
        tasks.push(
            Task::new(
                "kernels.synthesis-consistency",
                "kernel_eval agrees with the synthesized kernel family",
                1e-8,
                move || {
                    let omega = random_point(&mut rng, n, 1.0, 1.0, (0.3, 1.5));
                    let tau = SpectralProfile::kernel(KernelFamily::Bergman { nu }, omega.clone())?;
                    let lag = Laguerre::default();
                    let mut out = Vec::new();
                    for _ in 0..points {
                        let z = random_point(&mut rng, n, 1.0, 1.5, (0.2, 1.5));
                        out.push(CheckValue::new(
                            synthesize(&tau, &z, &lag)?,
                            kernel_eval(KernelId::Bergman { nu }, &z, &omega)?,
                        ));
                    }
                    Ok(worst(out))
                },
            )
            .quadrature("Gauss–Laguerre with node doubling"),
        );

        // Lemma-type integral constant.
        for (a, b) in [(0.0, 1.0), (1.0, 0.5)] {
            let label = format!("a{a}-b{b}");
            tasks.push(
                Task::new(
                    format!("kernels.beta-chain.{label}.nested"),
                    "Beta-chain constant vs nested quadrature",
                    1e-10,
                    move || Ok(real(lemma41_nested(a, b, n)?, lemma41_constant(a, b, n)?)),
                )
                .criterion(10)
                .quadrature("three 1-D composite GL integrals"),
            );
            let samples = if cfg.fast {
                cfg.mc_samples / 4
            } else {
                cfg.mc_samples
            };
            let seed = cfg.seed;
            tasks.push(
                Task::new(
                    format!("kernels.beta-chain.{label}.monte-carlo"),
                    "Beta-chain constant vs 4-D Monte Carlo",
                    3.0,
                    move || {
                        let est = lemma41_monte_carlo(a, b, 1.0, samples, seed)?;
                        let c0 = lemma41_constant(a, b, 1)?;
                        Ok(CheckValue {
                            lhs: est.value,
                            rhs: c(c0, 0.0),
                            rel_error: est.sigmas_from(c(c0, 0.0)),
                        })
                    },
                )
                .criterion(10)
                .quadrature(format!(
                    "importance sampling, {samples} samples, n = 1; error in standard errors"
                )),
            );
        }
        tasks.push(
            Task::new(
                "kernels.beta-chain.divergent",
                "the integral is +∞ for a ≤ −1 or b ≤ 0",
                0.0,
                move || {
                    let b = SiegelPoint::base(n);
                    let rule = ConfigRule::around(&b)?.fast();
                    Ok(worst([
                        expect_divergent(lemma41_constant(-1.0, 1.0, n)),
                        expect_divergent(lemma41_constant(0.0, 0.0, n)),
                        expect_divergent(lemma41_constant(-1.5, -0.5, n)),
                        expect_divergent(lemma41_integral(-1.0, 1.0, &b, &rule)),
                        expect_divergent(lemma41_integral(0.0, -0.5, &b, &rule)),
                    ]))
                },
            )
            .criterion(10),
        );
        let lo = point(vec![c(0.0, 0.0); n], 0.0, 0.5);
        let (rule_lo, rule_hi) = (config_rule(cfg, &lo)?, config_rule(cfg, &base)?);
        let quad = describe(&rule_hi);
        let hi = base.clone();
        tasks.push(
            Task::new(
                "kernels.beta-chain.homogeneity",
                "integral equals C₀ ρ(ζ)^{−b}",
                1e-5,
                move || {
                    let (a, b) = (0.0, 1.0);
                    let c0 = lemma41_constant(a, b, n)?;
                    let i_lo = lemma41_integral(a, b, &lo, &rule_lo)?;
                    let i_hi = lemma41_integral(a, b, &hi, &rule_hi)?;
                    Ok(worst([real(i_lo * 0.5f64.powf(b), c0), real(i_hi, c0)]))
                },
            )
            .quadrature(quad),
        );
        let z = point(vec![c(0.4, -0.3); n], 0.5, 0.6);
        let rule = config_rule(cfg, &z)?;
        tasks.push(
            Task::new(
                "kernels.difference-integral.ratio",
                "Dirichlet difference integral ratio (unnamed constant)",
                0.0,
                move || {
                    let r = lemma51_ratio(&z, m, &rule)?;
                    Ok(CheckValue {
                        lhs: c(r, 0.0),
                        rhs: c(0.0, 0.0),
                        rel_error: 0.0,
                    })
                },
            )
            .report_only(),
        );
        Ok(tasks)
    }
}

pub struct Dirichlet;

impl Suite for Dirichlet {
    fn name(&self) -> &'static str {
        "dirichlet"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let n = cfg.n;
        let m = cfg.dirichlet_m();
        let base = SiegelPoint::base(n);
        let mut tasks = Vec::new();
        let omega = point(
            (0..n).map(|j| c(0.3, 0.1 - 0.2 * j as f64)).collect(),
            0.2,
            0.8,
        );
        let cc = c(0.5, -0.25);
        let tau = SpectralProfile::kernel(KernelFamily::Dirichlet { m }, omega.clone())?;
        let tag = SpaceTag::Dirichlet { m };
        let rule = config_rule(cfg, &base)?;
        let quad = describe(&rule);
        let t = tau.clone();
        tasks.push(
            Task::new(
                "dirichlet.norm-identity",
                "‖F‖² = |F(𝐢)|² + c‖τ‖² for the Dirichlet space",
                1e-3,
                move || {
                    let f = SynthesizedFunction::dirichlet(t.clone(), closed_form(), cc);
                    let lhs = space_norm_sq(&f, tag, &rule)?;
                    let nf = n as f64;
                    Ok(real(
                        lhs,
                        cc.norm_sqr() + tag.plancherel_constant(n) * l2nu_norm_sq(&t, -nf - 2.0)?,
                    ))
                },
            )
            .criterion(3)
            .quadrature(quad),
        );
        let t = tau.clone();
        tasks.push(
            Task::new(
                "dirichlet.value-at-base",
                "synthesis with the subtracted term takes F(𝐢) = c",
                1e-14,
                move || {
                    let b = SiegelPoint::base(n);
                    let mut out = Vec::new();
                    for name in ["closed-form", "laguerre"] {
                        let s = crate::spectral::synthesizer(name)?;
                        let v = synthesize_dirichlet(&t, &b, cc, s.as_ref())?;
                        out.push(CheckValue {
                            lhs: v,
                            rhs: cc,
                            rel_error: (v - cc).norm(),
                        });
                    }
                    Ok(worst(out))
                },
            )
            .criterion(3),
        );
        let mut rng = cfg.rng("dirichlet.kernel-at-base");
        tasks.push(Task::new(
            "dirichlet.kernel-at-base",
            "K_ζ(𝐢) = 1 for the log kernel",
            1e-14,
            move || {
                let b = SiegelPoint::base(n);
                let mut out = Vec::new();
                for _ in 0..20 {
                    let z = random_point(&mut rng, n, 2.0, 3.0, (0.05, 3.0));
                    out.push(CheckValue::new(
                        kernel_eval(KernelId::DirichletLog { m }, &b, &z)?,
                        c(1.0, 0.0),
                    ));
                }
                Ok(worst(out))
            },
        ));
        let w1 = point(vec![c(0.2, 0.1); n], 0.1, 0.7);
        let w2 = point(vec![c(0.0, -0.3); n], -0.5, 1.2);
        let mid = point(vec![c(0.1, -0.1); n], -0.2, 0.9);
        let rule = config_rule(cfg, &mid)?;
        let quad = describe(&rule);
        tasks.push(
            Task::new(
                "dirichlet.gram-identity",
                "‖Σ α_k K(·,ω_k)‖² = Σ ᾱ_j α_k K(ω_j,ω_k)",
                1e-3,
                move || {
                    let id = KernelId::DirichletDot { m };
                    let coeffs = [c(1.0, 0.0), c(-0.5, 0.4)];
                    let pts = [w1, w2];
                    let f = KernelCombination {
                        terms: coeffs
                            .iter()
                            .zip(&pts)
                            .map(|(&a, p)| Ok((a, KernelFunction::new(id, p.clone())?)))
                            .collect::<Result<_>>()?,
                    };
                    let lhs = space_norm_sq(&f, SpaceTag::Dirichlet { m }, &rule)?;
                    let mut rhs = c(0.0, 0.0);
                    for (aj, pj) in coeffs.iter().zip(&pts) {
                        for (ak, pk) in coeffs.iter().zip(&pts) {
                            rhs += aj.conj() * ak * kernel_eval(id, pj, pk)?;
                        }
                    }
                    Ok(CheckValue::new(c(lhs, 0.0), rhs))
                },
            )
            .quadrature(quad),
        );
        tasks.push(
            Task::new(
                "dirichlet.constant.printed-vs-reproducing",
                "printed log-kernel constant against the reproducing one",
                0.0,
                move || {
                    let printed = KernelId::printed_dirichlet_constant(n, m).value();
                    let used = KernelId::DirichletLog { m }.constant(n)?.value();
                    Ok(real(printed, used))
                },
            )
            .report_only(),
        );
        Ok(tasks)
    }
}

pub struct DruryArveson;

fn random_polynomial<R: Rng>(rng: &mut R, dim: usize, max_degree: u32) -> BallPolynomial {
    let mut p = BallPolynomial::zero(dim).expect("dim ≥ 1");
    let terms = 1 + rng.random_range(0..12);
    for _ in 0..terms {
        let d = rng.random_range(0..=max_degree);
        let mut alpha = vec![0u32; dim];
        for _ in 0..d {
            alpha[rng.random_range(0..dim)] += 1;
        }
        let coeff = c(
            4.0 * rng.random::<f64>() - 2.0,
            4.0 * rng.random::<f64>() - 2.0,
        );
        p.add_term(MultiIndex(alpha), coeff)
            .expect("matching dimension");
    }
    p
}

fn all_monomials(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    let trunc = FockTruncation::new(dim, max_degree as usize).expect("dim ≥ 1");
    trunc.indices().to_vec()
}

impl Suite for DruryArveson {
    fn name(&self) -> &'static str {
        "drury-arveson"
    }

    fn tasks(&self, cfg: &VerifyConfig) -> Result<Vec<Task>> {
        let mut tasks = vec![
            Task::new(
                "da.documented.coefficient-z1z2",
                "DA coefficient norm of z₁z₂ is 1/2",
                1e-15,
                || {
                    Ok(real(
                        da_norm_coeff_sq(&BallPolynomial::parse(2, "z1*z2")?),
                        0.5,
                    ))
                },
            )
            .criterion(7),
            Task::new(
                "da.documented.integral-z1z2",
                "DA integral norm of z₁z₂ is 1/2",
                1e-8,
                || {
                    Ok(real(
                        da_method("integral")?.norm_sq(&BallPolynomial::parse(2, "z1*z2")?)?,
                        0.5,
                    ))
                },
            )
            .criterion(7),
            Task::new(
                "da.documented.dot-dirichlet-z1z2",
                "dotted Dirichlet coefficient norm of z₁z₂",
                1e-15,
                || {
                    Ok(real(
                        dot_dirichlet_norm_coeff_sq(&BallPolynomial::parse(2, "z1*z2")?),
                        1.0,
                    ))
                },
            ),
            Task::new(
                "da.script-r.eigenvalues",
                "𝓡_k recursion against Π(1 + |α|/j)",
                1e-12,
                || {
                    let f = BallPolynomial::parse(3, "z1*z2*z3 + 2*z3^4 - 0.5i*z1^7 + 1")?;
                    let mut out = Vec::new();
                    for k in 0..6 {
                        let g = script_r(k, &f);
                        let h = f.map_degrees(|d| script_r_eigenvalue(k, d));
                        for ((_, x), (_, y)) in g.terms().zip(h.terms()) {
                            out.push(CheckValue::new(*x, *y));
                        }
                    }
                    Ok(worst(out))
                },
            ),
            Task::new(
                "da.dotted-kernel.log-series",
                "kernel of the dotted coefficient norm is log(1/(1 − ω·ζ̄))",
                1e-12,
                || {
                    let w = [c(0.3, 0.2), c(-0.1, 0.4)];
                    let z = [c(0.2, -0.3), c(0.35, 0.1)];
                    let trunc = FockTruncation::new(2, 60)?;
                    let mut series = c(0.0, 0.0);
                    for alpha in trunc.indices().iter().filter(|a| a.degree() > 0) {
                        series += alpha.monomial(&w) * alpha.monomial(&z).conj()
                            / (alpha.degree() as f64 * da_weight(alpha));
                    }
                    Ok(CheckValue::new(series, -(1.0 - hermitian(&w, &z)).ln()))
                },
            ),
        ];
        for n in [1usize, 2] {
            tasks.push(
                Task::new(
                    format!("da.monomials.n{n}"),
                    "coefficient norm = integral norm on monomials",
                    1e-8,
                    move || {
                        let integral = da_method("integral")?;
                        let mut out = Vec::new();
                        for alpha in all_monomials(n + 1, 8) {
                            let f = BallPolynomial::monomial(alpha, c(1.0, 0.0))?;
                            out.push(real(integral.norm_sq(&f)?, da_norm_coeff_sq(&f)));
                        }
                        Ok(worst(out))
                    },
                )
                .criterion(7)
                .quadrature("closed sphere integrals × GL radial rule in u = |ζ|²"),
            );
            let count = cfg.random_polynomials;
            let mut rng = cfg.rng(&format!("da.random.n{n}"));
            tasks.push(
                Task::new(
                    format!("da.random.n{n}"),
                    "coefficient norm = integral norm on random polynomials",
                    1e-8,
                    move || {
                        let coefficient = da_method("coefficient")?;
                        let integral = da_method("integral")?;
                        let mut out = Vec::new();
                        for _ in 0..count {
                            let f = random_polynomial(&mut rng, n + 1, 8);
                            out.push(real(integral.norm_sq(&f)?, coefficient.norm_sq(&f)?));
                        }
                        Ok(worst(out))
                    },
                )
                .criterion(7)
                .quadrature("closed sphere integrals × GL radial rule in u = |ζ|²"),
            );
        }
        Ok(tasks)
    }
}
