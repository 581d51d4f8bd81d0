use super::*;
use crate::kernels::{kernel_eval, KernelFunction, KernelId};
use crate::siegel::{psi_inv, HorocyclicCoordinates};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(z: &[Complex64], t: f64, h: f64) -> SiegelPoint {
    psi_inv(&HorocyclicCoordinates::new(z.to_vec(), t, h)).unwrap()
}

fn laguerre() -> Laguerre {
    Laguerre::default()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn e0_decay(n: usize, decay: f64) -> SpectralProfile {
    SpectralProfile::finite(
        n,
        vec![FiniteTerm {
            alpha: MultiIndex(vec![0; n]),
            coeff: one(),
            profile: ScalarProfile { power: 0.0, decay },
        }],
    )
    .unwrap()
}

#[test]
fn l2nu_of_exponential_profile_is_a_gamma_integral() {
    for n in 1..=2 {
        for nu in [0.0, 0.5, -0.5, n as f64 - 0.5] {
            let tau = e0_decay(n, 1.0);
            let oracle =
                gamma(n as f64 - nu) / ((2.0 * PI).powi(n as i32 + 1) * 2f64.powf(n as f64 - nu));
            let got = l2nu_norm_sq(&tau, nu).unwrap();
            assert!(
                (got - oracle).abs() < 1e-12 * oracle,
                "n={n} ν={nu}: {got} vs {oracle}"
            );
        }
    }
}

#[test]
fn zero_profile_has_zero_norm_and_synthesis() {
    let tau = SpectralProfile::zero(1);
    assert_eq!(l2nu_norm_sq(&tau, 0.0).unwrap(), 0.0);
    let p = SiegelPoint::base(1);
    assert_eq!(synthesize(&tau, &p, &ClosedForm).unwrap(), c(0.0, 0.0));
    assert_eq!(synthesize(&tau, &p, &laguerre()).unwrap(), c(0.0, 0.0));
    let cc = c(0.3, -2.0);
    assert_eq!(
        synthesize_dirichlet(&tau, &point(&[c(1.0, 1.0)], 0.5, 0.3), cc, &laguerre()).unwrap(),
        cc
    );
}

#[test]
fn divergent_weights_are_rejected() {
    // ∫ e^{−2μ} μ^{n−ν−1} diverges at 0 once n − ν ≤ 0.
    let tau = e0_decay(1, 1.0);
    assert!(matches!(l2nu_norm_sq(&tau, 1.0), Err(Error::Divergent(_))));
    assert!(matches!(l2nu_norm_sq(&tau, 3.0), Err(Error::Divergent(_))));
    // No decay: the large-λ end diverges.
    let flat = e0_decay(1, 0.0);
    assert!(matches!(l2nu_norm_sq(&flat, 0.0), Err(Error::Divergent(_))));
}

#[test]
fn kernel_family_norm_scales_with_height_and_matches_the_diagonal() {
    for nu in [0.0, 1.0, -0.5] {
        let fam = KernelFamily::Bergman { nu };
        let n = 1;
        let z = [c(0.4, -0.2)];
        let a = SpectralProfile::kernel(fam, point(&z, 0.7, 0.5)).unwrap();
        let b = SpectralProfile::kernel(fam, point(&z, 0.7, 1.0)).unwrap();
        let na = l2nu_norm_sq(&a, nu).unwrap();
        let nb = l2nu_norm_sq(&b, nu).unwrap();
        let expected = 2f64.powf(-(n as f64 + 2.0 + nu));
        assert!((nb / na - expected).abs() < 1e-11, "ν={nu}");
        // ‖K_ζ‖² = K(ζ, ζ).
        let zeta = point(&z, 0.7, 0.5);
        let diag = kernel_eval(KernelId::Bergman { nu }, &zeta, &zeta)
            .unwrap()
            .re;
        let pw = SpaceTag::Bergman { nu }.plancherel_constant(n) * na;
        assert!((pw - diag).abs() < 1e-11 * diag, "ν={nu}: {pw} vs {diag}");
    }
}

#[test]
fn laguerre_and_closed_form_norms_agree() {
    let z = [c(0.5, 0.5)];
    for (fam, nu) in [
        (KernelFamily::Bergman { nu: 0.0 }, 0.0),
        (KernelFamily::Hardy, -1.0),
        (KernelFamily::WeightedDirichlet { nu: -1.5, m: 1 }, -1.5),
        (KernelFamily::Dirichlet { m: 2 }, -3.0),
    ] {
        let tau = SpectralProfile::kernel(fam, point(&z, -0.3, 0.8)).unwrap();
        let a = l2nu_norm_sq(&tau, nu).unwrap();
        let b = l2nu_norm_sq_closed(&tau, nu).unwrap();
        assert!((a - b).abs() < 1e-10 * b.abs(), "{fam:?}: {a} vs {b}");
    }
}

#[test]
fn synthesis_of_kernel_families_reproduces_the_kernels() {
    let omega = point(&[c(0.3, -0.6)], 0.4, 0.9);
    let zeta = point(&[c(-0.2, 0.1)], -0.5, 0.6);
    let cases = [
        (KernelFamily::Hardy, KernelId::Szego),
        (
            KernelFamily::Bergman { nu: 0.0 },
            KernelId::Bergman { nu: 0.0 },
        ),
        (
            KernelFamily::Bergman { nu: 0.7 },
            KernelId::Bergman { nu: 0.7 },
        ),
        (
            KernelFamily::WeightedDirichlet { nu: -1.5, m: 1 },
            KernelId::WeightedDirichlet { nu: -1.5, m: 1 },
        ),
        (
            KernelFamily::WeightedDirichlet { nu: -2.0, m: 2 },
            KernelId::WeightedDirichlet { nu: -2.0, m: 2 },
        ),
    ];
    for (fam, id) in cases {
        let tau = SpectralProfile::kernel(fam, omega.clone()).unwrap();
        let k = kernel_eval(id, &zeta, &omega).unwrap();
        for s in synthesizer_names() {
            let synth = synthesizer(s).unwrap();
            let f = synthesize(&tau, &zeta, synth.as_ref()).unwrap();
            assert!(rel(f, k) < 1e-8, "{fam:?} via {s}: {f} vs {k}");
        }
    }
}

#[test]
fn dirichlet_synthesis_matches_the_log_kernel() {
    let omega = point(&[c(0.3, 0.2)], 0.5, 0.7);
    let zeta = point(&[c(-0.4, 0.3)], -0.2, 1.3);
    let cc = c(0.25, -0.75);
    for m in [2, 3] {
        let tau = SpectralProfile::kernel(KernelFamily::Dirichlet { m }, omega.clone()).unwrap();
        let k = kernel_eval(KernelId::DirichletLog { m }, &zeta, &omega).unwrap();
        for s in synthesizer_names() {
            let synth = synthesizer(s).unwrap();
            let f = synthesize_dirichlet(&tau, &zeta, cc, synth.as_ref()).unwrap();
            assert!(
                rel(f, k - 1.0 + cc) < 1e-8,
                "m={m} via {s}: {f} vs {}",
                k - 1.0 + cc
            );
            let at_base =
                synthesize_dirichlet(&tau, &SiegelPoint::base(1), cc, synth.as_ref()).unwrap();
            assert!((at_base - cc).norm() < 1e-14);
        }
    }
}

#[test]
fn dirichlet_norm_matches_the_log_formula() {
    let omega = point(&[c(0.6, -0.1)], 1.0, 0.4);
    let m = 2;
    let tau = SpectralProfile::kernel(KernelFamily::Dirichlet { m }, omega.clone()).unwrap();
    let big_c = 2f64.powi(2 * m as i32 - 2) / gamma(2.0 * m as f64 - 2.0);
    let q = 2.0 * q_pairing(&omega, &SiegelPoint::base(1));
    let oracle = plancherel_factor(1) * big_c * big_c * (q.norm_sqr() / (4.0 * omega.rho())).ln();
    let got = l2nu_norm_sq(&tau, -3.0).unwrap();
    assert!((got - oracle).abs() < 1e-11 * oracle);
}

#[test]
fn spectral_derivative_composes_and_matches_height_differences() {
    let omega = point(&[c(0.2, 0.2)], 0.1, 0.8);
    let tau = SpectralProfile::kernel(KernelFamily::Bergman { nu: 0.0 }, omega).unwrap();
    assert_eq!(spectral_derivative(&tau, 0), tau);
    assert_eq!(
        spectral_derivative(&spectral_derivative(&tau, 1), 1),
        spectral_derivative(&tau, 2)
    );
    let (z, t, h) = ([c(0.1, -0.3)], 0.4, 0.6);
    let step = 1e-4;
    let synth = laguerre();
    let f = |hh: f64| synthesize(&tau, &point(&z, t, hh), &synth).unwrap();
    let fd = (f(h + step) - f(h - step)) / (2.0 * step);
    let d = synthesize(&spectral_derivative(&tau, 1), &point(&z, t, h), &synth).unwrap();
    assert!(rel(d, fd) < 1e-6, "{d} vs {fd}");
}

#[test]
fn synthesized_functions_satisfy_the_cauchy_riemann_reductions() {
    let tau = SpectralProfile::finite(
        1,
        vec![
            FiniteTerm {
                alpha: MultiIndex(vec![0]),
                coeff: c(1.0, 0.5),
                profile: ScalarProfile {
                    power: 1.0,
                    decay: 0.5,
                },
            },
            FiniteTerm {
                alpha: MultiIndex(vec![2]),
                coeff: c(-0.3, 0.2),
                profile: ScalarProfile {
                    power: 0.5,
                    decay: 1.0,
                },
            },
        ],
    )
    .unwrap();
    let synth = laguerre();
    let (x, y, t, h) = (0.3, -0.2, 0.5, 0.7);
    let f = |x: f64, y: f64, t: f64, h: f64| {
        synthesize(&tau, &point(&[c(x, y)], t, h), &synth).unwrap()
    };
    let s = 1e-4;
    let dt = (f(x, y, t + s, h) - f(x, y, t - s, h)) / (2.0 * s);
    let dh = (f(x, y, t, h + s) - f(x, y, t, h - s)) / (2.0 * s);
    let dx = (f(x + s, y, t, h) - f(x - s, y, t, h)) / (2.0 * s);
    let dy = (f(x, y + s, t, h) - f(x, y - s, t, h)) / (2.0 * s);
    let scale = dt.norm() + dh.norm();
    assert!((I * dt - dh).norm() < 1e-6 * scale);
    let dzbar = 0.5 * (dx + I * dy);
    assert!((dzbar - 0.25 * I * c(x, y) * dt).norm() < 1e-6 * (dx.norm() + dy.norm() + dt.norm()));
}

#[test]
fn finite_family_routes_agree() {
    let tau = SpectralProfile::finite(
        2,
        vec![
            FiniteTerm {
                alpha: MultiIndex(vec![1, 0]),
                coeff: c(1.0, 0.0),
                profile: ScalarProfile {
                    power: 0.0,
                    decay: 1.0,
                },
            },
            FiniteTerm {
                alpha: MultiIndex(vec![1, 2]),
                coeff: c(0.0, 2.0),
                profile: ScalarProfile {
                    power: 1.5,
                    decay: 0.3,
                },
            },
        ],
    )
    .unwrap();
    let p = point(&[c(0.5, 0.1), c(-0.3, 0.4)], 0.2, 0.4);
    let a = synthesize(&tau, &p, &ClosedForm).unwrap();
    let b = synthesize(&tau, &p, &laguerre()).unwrap();
    assert!(rel(b, a) < 1e-9, "{a} vs {b}");
    let na = l2nu_norm_sq(&tau, 0.5).unwrap();
    let nb = l2nu_norm_sq_closed(&tau, 0.5).unwrap();
    assert!((na - nb).abs() < 1e-11 * nb);
}

#[test]
fn sampled_profiles_reproduce_closed_forms() {
    let omega = point(&[c(0.2, -0.1)], 0.3, 0.9);
    let tau = SpectralProfile::kernel(KernelFamily::Bergman { nu: 0.0 }, omega.clone()).unwrap();
    let rule = gauss_laguerre(1.0, 2.0 * omega.rho(), 60).unwrap();
    let sampled = tau.to_sampled(rule, 1e-17).unwrap();
    assert!(sampled.is_sampled());
    let zeta = point(&[c(0.0, 0.3)], -0.1, 0.7);
    let a = synthesize(&sampled, &zeta, &laguerre()).unwrap();
    let b = synthesize(&tau, &zeta, &ClosedForm).unwrap();
    assert!(rel(a, b) < 1e-8, "{a} vs {b}");
    assert!(synthesize(&sampled, &zeta, &ClosedForm).is_err());
    let na = l2nu_norm_sq(&sampled, 0.0).unwrap();
    let nb = l2nu_norm_sq_closed(&tau, 0.0).unwrap();
    assert!((na - nb).abs() < 1e-10 * nb);
}

#[test]
fn hs_norm_is_the_coefficient_norm() {
    let omega = point(&[c(0.7, 0.4)], 0.3, 0.5);
    let tau = SpectralProfile::kernel(KernelFamily::Bergman { nu: 0.5 }, omega).unwrap();
    for mu in [0.1, 1.0, 7.0] {
        let closed = tau.hs_norm_sq(mu).unwrap();
        let v = tau.coefficients(mu, 1e-18).unwrap();
        assert!((v.norm_sq() - closed).abs() < 1e-12 * closed, "μ={mu}");
    }
}

#[test]
fn pairing_routes_agree() {
    let a = SpectralProfile::kernel(KernelFamily::Hardy, point(&[c(0.3, 0.1)], 0.2, 0.6)).unwrap();
    let b =
        SpectralProfile::kernel(KernelFamily::Hardy, point(&[c(-0.1, 0.2)], -0.4, 0.9)).unwrap();
    let x = a.pairing(&b, 1.0).unwrap();
    let y = a.pairing_truncated(&b, 1.0, 120, 1e-18).unwrap();
    assert!(rel(y, x) < 1e-9, "{x} vs {y}");
}

#[test]
fn unresolved_lambda_rules_are_reported() {
    // Far-apart points make the λ-integrand oscillate faster than 4 nodes resolve.
    let tau = SpectralProfile::kernel(
        KernelFamily::Bergman { nu: 0.0 },
        point(&[c(0.0, 0.0)], 40.0, 0.5),
    )
    .unwrap();
    let coarse = Laguerre {
        nodes: 4,
        ..Laguerre::default()
    };
    let r = synthesize(&tau, &point(&[c(0.0, 0.0)], -40.0, 0.5), &coarse);
    assert!(matches!(r, Err(Error::UnderResolved(_))), "{r:?}");
}

#[test]
fn synthesis_requires_interior_points() {
    let tau = e0_decay(1, 1.0);
    let boundary = point(&[c(0.3, 0.0)], 0.0, 1.0).lift(-1.0);
    assert!(matches!(
        synthesize(&tau, &boundary, &ClosedForm),
        Err(Error::OutsideDomain(_))
    ));
}

#[test]
fn space_tags_enforce_parameter_ranges() {
    assert!(SpaceTag::Bergman { nu: -1.0 }.validate(1).is_err());
    assert!(SpaceTag::Bergman { nu: -0.5 }.validate(1).is_ok());
    assert!(SpaceTag::WeightedDirichlet { nu: -1.5, m: 1 }
        .validate(1)
        .is_ok());
    assert!(SpaceTag::WeightedDirichlet { nu: -3.0, m: 2 }
        .validate(1)
        .is_err());
    assert!(SpaceTag::WeightedDirichlet { nu: -2.9, m: 0 }
        .validate(1)
        .is_err());
    assert!(SpaceTag::DruryArveson { m: 1 }.validate(1).is_ok());
    assert!(SpaceTag::DruryArveson { m: 1 }.validate(2).is_err());
    assert!(SpaceTag::Dirichlet { m: 1 }.validate(1).is_err());
    assert!(SpaceTag::Dirichlet { m: 2 }.validate(1).is_ok());
    assert_eq!(SpaceTag::DruryArveson { m: 2 }.nu(2), -3.0);
}

#[test]
fn profile_json_round_trips_into_profiles() {
    let kernel: ProfileSpec = serde_json::from_str(
        r#"{"family":"kernel","nu":0,"base":{"zeta_prime":[[0,0]],"zeta_last":[0,1]}}"#,
    )
    .unwrap();
    let tau = kernel.build().unwrap();
    assert!(matches!(
        tau.kind(),
        ProfileKind::Kernel {
            family: KernelFamily::Bergman { .. },
            ..
        }
    ));
    let finite: ProfileSpec = serde_json::from_str(
        r#"{"family":"finite","n":1,"terms":[{"alpha":[2],"profile":{"power":1,"decay":0.5}}]}"#,
    )
    .unwrap();
    let tau = finite.build().unwrap();
    assert_eq!(tau.n(), 1);
    let dirichlet: ProfileSpec = serde_json::from_str(
        r#"{"family":"kernel","nu":-3,"m":2,"base":{"zeta_prime":[[0,0]],"zeta_last":[0,2]}}"#,
    )
    .unwrap();
    assert!(matches!(
        dirichlet.build().unwrap().kind(),
        ProfileKind::Kernel {
            family: KernelFamily::Dirichlet { m: 2 },
            ..
        }
    ));
    let missing: ProfileSpec = serde_json::from_str(
        r#"{"family":"kernel","base":{"zeta_prime":[[0,0]],"zeta_last":[0,1]}}"#,
    )
    .unwrap();
    assert!(missing.build().is_err());
}

#[test]
fn richardson_removes_polynomial_error() {
    let f = |h: f64| c(2.0 + 3.0 * h - h * h + 0.5 * h.powi(3), 0.0);
    let v: Vec<Complex64> = (0..5).map(|k| f(2f64.powi(-k))).collect();
    assert!((richardson_to_zero(&v) - c(2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn config_rule_integrates_a_known_kernel_norm() {
    // ∫|K_ν(·, 𝐢)|² h^ν = K_ν(𝐢, 𝐢) on a reduced grid.
    let base = SiegelPoint::base(1);
    let id = KernelId::Bergman { nu: 0.0 };
    let f = KernelFunction::new(id, base.clone()).unwrap();
    let rule = ConfigRule::around(&base).unwrap().fast();
    let norm = space_norm_sq(&f, SpaceTag::Bergman { nu: 0.0 }, &rule).unwrap();
    let diag = kernel_eval(id, &base, &base).unwrap().re;
    assert!((norm - diag).abs() < 1e-5 * diag, "{norm} vs {diag}");
    let zero = FromFn {
        n: 1,
        f: |_: &SiegelPoint| Ok(c(0.0, 0.0)),
    };
    assert_eq!(
        space_norm_sq(&zero, SpaceTag::Bergman { nu: 0.0 }, &rule).unwrap(),
        0.0
    );
}

#[test]
fn config_rule_flags_divergent_tails() {
    // |F|² = 1 is not integrable against h^0.
    let one_fn = FromFn {
        n: 1,
        f: |_: &SiegelPoint| Ok(c(1.0, 0.0)),
    };
    let rule = ConfigRule::around(&SiegelPoint::base(1)).unwrap().fast();
    assert!(matches!(
        space_norm_sq(&one_fn, SpaceTag::Bergman { nu: 0.0 }, &rule),
        Err(Error::Divergent(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn synthesizers_agree_on_random_bergman_data(
        zr in -0.8f64..0.8, zi in -0.8f64..0.8, t in -1.0f64..1.0, h in 0.3f64..2.0,
        wr in -0.8f64..0.8, wi in -0.8f64..0.8, s in -1.0f64..1.0, k in 0.3f64..2.0,
        nu in -0.9f64..2.0,
    ) {
        let omega = point(&[c(zr, zi)], t, h);
        let zeta = point(&[c(wr, wi)], s, k);
        let tau = SpectralProfile::kernel(KernelFamily::Bergman { nu }, omega).unwrap();
        let a = synthesize(&tau, &zeta, &ClosedForm).unwrap();
        let b = synthesize(&tau, &zeta, &laguerre()).unwrap();
        prop_assert!(rel(b, a) < 1e-8);
    }

    #[test]
    fn l2nu_is_homogeneous_in_the_profile(scale in 0.1f64..5.0, decay in 0.2f64..3.0, nu in -0.9f64..1.0) {
        let tau = e0_decay(1, decay);
        let scaled = SpectralProfile::finite(1, vec![FiniteTerm {
            alpha: MultiIndex(vec![0]),
            coeff: c(scale, 0.0),
            profile: ScalarProfile { power: 0.0, decay },
        }]).unwrap();
        let a = l2nu_norm_sq(&tau, nu).unwrap();
        let b = l2nu_norm_sq(&scaled, nu).unwrap();
        prop_assert!((b - scale * scale * a).abs() < 1e-10 * b);
    }
}
