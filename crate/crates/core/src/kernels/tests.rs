use super::*;
use crate::heisenberg::HeisenbergElement;
use crate::quadrature::Tolerances;
use crate::siegel::{psi_inv, HorocyclicCoordinates};
use crate::special::factorial;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(z: &[Complex64], t: f64, h: f64) -> SiegelPoint {
    psi_inv(&HorocyclicCoordinates::new(z.to_vec(), t, h)).unwrap()
}

fn interior(n: usize) -> impl Strategy<Value = SiegelPoint> {
    (
        prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), n),
        -2.0f64..2.0,
        0.05f64..3.0,
    )
        .prop_map(|(z, t, h)| {
            point(
                &z.into_iter().map(|(a, b)| c(a, b)).collect::<Vec<_>>(),
                t,
                h,
            )
        })
}

fn ball(n: usize) -> impl Strategy<Value = BallPoint> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n + 1).prop_filter_map(
        "inside the ball",
        |v| {
            let coords: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            if crate::cvec::norm_sq(&coords) < 0.95 {
                BallPoint::new(coords).ok()
            } else {
                None
            }
        },
    )
}

fn all_generators(n: usize) -> Vec<Automorphism> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let unitary = if n == 1 {
        vec![vec![Complex64::from_polar(1.0, 0.7)]]
    } else {
        vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]
    };
    vec![
        Automorphism::HeisenbergTranslation(HeisenbergElement::new(vec![c(0.3, -0.8); n], 1.7)),
        Automorphism::Dilation(2.0),
        Automorphism::Unitary(unitary),
        Automorphism::Inversion,
    ]
}

#[test]
fn q_pairing_basics() {
    let base = SiegelPoint::base(2);
    assert!((q_pairing(&base, &base) - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn constants_match_their_closed_forms() {
    for n in 1..=3usize {
        let nf = n as f64;
        let szego = factorial(n as u32) / (4.0 * PI).powi(n as i32 + 1);
        assert!((KernelId::Szego.constant(n).unwrap().value() - szego).abs() < 1e-14 * szego);
        let base = SiegelPoint::base(n);
        let k = kernel_eval(KernelId::Szego, &base, &base).unwrap();
        assert!((k.re - szego).abs() < 1e-14 * szego && k.im.abs() < 1e-16);
        let b = KernelId::Bergman { nu: 0.5 }.constant(n).unwrap().value();
        let oracle = gamma_direct(nf + 2.5) / (gamma_direct(1.5) * (4.0 * PI).powf(nf + 1.0));
        assert!((b - oracle).abs() < 1e-12 * oracle);
    }
    let ball1 = KernelId::BallDirichlet.constant(1).unwrap().value();
    assert!((ball1 - 2.0 / (PI * PI)).abs() < 1e-15);
}

/// Lanczos-free oracle on half-integers and integers.
fn gamma_direct(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 1.0;
    }
    if x == 0.5 {
        return PI.sqrt();
    }
    (x - 1.0) * gamma_direct(x - 1.0)
}

#[test]
fn constants_print_symbolically() {
    assert_eq!(
        KernelId::Bergman { nu: 0.0 }
            .constant(1)
            .unwrap()
            .to_string(),
        "Γ(3)/(Γ(1)(4π)^2)"
    );
    assert_eq!(
        KernelId::Szego.constant(1).unwrap().to_string(),
        "Γ(2)/(4π)^2"
    );
    assert_eq!(
        KernelId::DirichletDot { m: 2 }
            .constant(1)
            .unwrap()
            .to_string(),
        "2^2/(Γ(2)(2π)^2)"
    );
    assert_eq!(
        KernelId::BallDirichlet.constant(1).unwrap().to_string(),
        "Γ(3)/π^2"
    );
    let printed = KernelId::printed_dirichlet_constant(1, 2);
    assert!(
        (printed.value() - 2.0 * KernelId::DirichletDot { m: 2 }.constant(1).unwrap().value())
            .abs()
            < 1e-15
    );
}

#[test]
fn registry_resolves_names() {
    for name in kernel_names() {
        let id = KernelId::from_name(name, Some(-1.5), Some(2)).unwrap();
        assert_eq!(id.name(), *name);
    }
    assert!(matches!(
        KernelId::from_name("poisson", None, None),
        Err(Error::Unknown { .. })
    ));
    assert!(KernelId::from_name("bergman", None, None).is_err());
}

#[test]
fn dirichlet_log_kernel_is_normalised_at_the_base_point() {
    let base = SiegelPoint::base(1);
    let id = KernelId::DirichletLog { m: 2 };
    assert!((kernel_eval(id, &base, &base).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    let zeta = point(&[c(0.7, -0.4)], 1.3, 0.2);
    assert!((kernel_eval(id, &base, &zeta).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn log_kernel_flags_branch_ambiguity() {
    // Far-apart points drive the ratio out of the right half-plane.
    let a = point(&[c(0.0, 0.0)], 50.0, 0.01);
    let b = point(&[c(0.0, 0.0)], -50.0, 0.01);
    let r = dirichlet_ratio(&a, &b).unwrap();
    if r.re <= 0.0 {
        assert!(matches!(
            kernel_eval(KernelId::DirichletDot { m: 2 }, &a, &b),
            Err(Error::Branch(_))
        ));
    }
}

#[test]
fn dilation_breaks_pointwise_invariance() {
    let base = SiegelPoint::base(1);
    let report =
        mobius_invariance_check(&Automorphism::Dilation(2.0), [&base, &base], [&base, &base])
            .unwrap();
    // Ratio 25/16 at ω = ζ = 𝐢.
    assert!((report.pointwise - 9.0 / 16.0).abs() < 1e-15);
    assert!(report.double_difference < 1e-15);
}

#[test]
fn lemma41_constant_at_the_anchor() {
    let v = lemma41_constant(0.0, 1.0, 1).unwrap();
    assert!((v - 16.0 * PI * PI).abs() < 1e-12 * v);
}

#[test]
fn lemma41_divergence_dichotomy() {
    for (a, b) in [(-1.0, 1.0), (-2.0, 0.5), (0.0, 0.0), (1.0, -0.5)] {
        assert!(matches!(
            lemma41_constant(a, b, 1),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(lemma41_nested(a, b, 1), Err(Error::Divergent(_))));
    }
}

#[test]
fn lemma41_beta_chain_matches_nested_quadrature() {
    for (a, b, n) in [(0.0, 1.0, 1), (1.0, 0.5, 1), (0.5, 2.0, 2), (-0.5, 1.5, 1)] {
        let closed = lemma41_constant(a, b, n).unwrap();
        let nested = lemma41_nested(a, b, n).unwrap();
        assert!(
            (closed - nested).abs() < 1e-10 * closed,
            "({a},{b},{n}): {closed} vs {nested}"
        );
    }
}

#[test]
fn lemma41_monte_carlo_within_three_sigma() {
    for (a, b) in [(0.0, 1.0), (1.0, 0.5)] {
        let est = lemma41_monte_carlo(a, b, 1.0, 200_000, 11).unwrap();
        let closed = lemma41_constant(a, b, 1).unwrap();
        assert!(
            est.sigmas_from(c(closed, 0.0)) < 3.0,
            "({a},{b}): {:?} vs {closed}",
            est
        );
        assert!(est.std_error < 0.05 * closed);
    }
}

#[test]
fn lemma41_full_integral_is_homogeneous() {
    let (a, b) = (0.0, 1.0);
    let z = [c(0.4, 0.3)];
    let p1 = point(&z, 0.5, 0.5);
    let p2 = point(&z, 0.5, 1.0);
    let r1 = lemma41_integral(a, b, &p1, &ConfigRule::around(&p1).unwrap().fast()).unwrap();
    let r2 = lemma41_integral(a, b, &p2, &ConfigRule::around(&p2).unwrap().fast()).unwrap();
    assert!((r2 / r1 - 0.5).abs() < 1e-6);
    let c0 = lemma41_constant(a, b, 1).unwrap();
    assert!((r1 * 0.5 - c0).abs() < 1e-5 * c0, "{} vs {c0}", r1 * 0.5);
}

#[test]
fn cayley_transfer_at_the_origin() {
    let o = BallPoint::origin(2);
    let check = cayley_transfer_check(&o, &o).unwrap();
    assert!((check.lhs - c(1.0, 0.0)).norm() < 1e-15 && check.rel_error < 1e-15);
    let log = cayley_transfer_log_check(&o, &o, 2).unwrap();
    assert!(log.lhs.norm() < 1e-15 && log.rhs.norm() < 1e-15);
}

#[test]
fn reproducing_property_on_a_reduced_grid() {
    let omega = point(&[c(0.2, 0.1)], 0.3, 0.8);
    let zeta = point(&[c(-0.1, 0.2)], -0.2, 1.1);
    let rule = ConfigRule::around(&omega).unwrap().fast();
    let check = reproducing_check(KernelId::Bergman { nu: 0.0 }, &omega, &zeta, &rule).unwrap();
    assert!(check.rel_error < 1e-4, "{check:?}");
}

#[test]
fn vertical_derivatives_match_differences() {
    let omega = point(&[c(0.2, 0.1)], 0.3, 0.8);
    let p = point(&[c(-0.3, 0.2)], 0.1, 0.5);
    for id in [
        KernelId::Bergman { nu: 0.5 },
        KernelId::WeightedDirichlet { nu: -1.5, m: 1 },
        KernelId::DirichletLog { m: 2 },
    ] {
        let f = KernelFunction::new(id, omega.clone()).unwrap();
        let s = 1e-4;
        // ζ_{n+1} ↦ ζ_{n+1} ± s along the real axis.
        let shift = |d: f64| SiegelPoint::new(p.zeta_prime.clone(), p.zeta_last + d);
        for m in 1..=2u32 {
            let fd = if m == 1 {
                (f.value(&shift(s)).unwrap() - f.value(&shift(-s)).unwrap()) / (2.0 * s)
            } else {
                (f.value(&shift(s)).unwrap() - 2.0 * f.value(&p).unwrap()
                    + f.value(&shift(-s)).unwrap())
                    / (s * s)
            };
            let exact = f.vertical_derivative(m, &p).unwrap();
            assert!(
                (exact - fd).norm() < 1e-5 * exact.norm(),
                "{id:?} m={m}: {exact} vs {fd}"
            );
        }
    }
}

#[test]
fn lemma51_ratio_is_finite() {
    let zeta = point(&[c(0.3, 0.0)], 0.2, 0.7);
    let rule = ConfigRule::around(&SiegelPoint::base(1)).unwrap().fast();
    let r = lemma51_ratio(&zeta, 2, &rule).unwrap();
    assert!(r.is_finite() && r > 0.0);
}

#[test]
fn tolerances_are_documented_defaults() {
    assert_eq!(Tolerances::default().one_dimensional, 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_is_hermitian_and_rho_on_the_diagonal(a in interior(2), b in interior(2)) {
        prop_assert!((q_pairing(&a, &b) - q_pairing(&b, &a).conj()).norm() < 1e-12 * (1.0 + q_pairing(&a, &b).norm()));
        prop_assert!((q_pairing(&a, &a) - c(a.rho(), 0.0)).norm() < 1e-12 * (1.0 + a.magnitude()));
    }

    #[test]
    fn kernels_are_hermitian(a in interior(1), b in interior(1)) {
        for id in [
            KernelId::Szego,
            KernelId::Bergman { nu: 0.3 },
            KernelId::WeightedDirichlet { nu: -2.0, m: 1 },
            KernelId::DirichletLog { m: 2 },
        ] {
            let (Ok(x), Ok(y)) = (kernel_eval(id, &a, &b), kernel_eval(id, &b, &a)) else { continue };
            prop_assert!((x - y.conj()).norm() < 1e-11 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn gram_matrices_are_positive_semidefinite(seed in any::<u64>(), count in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<SiegelPoint> = (0..count).map(|_| random_point(&mut rng, 1, 1.0, 1.0, (0.2, 1.5))).collect();
        for id in [KernelId::Szego, KernelId::Bergman { nu: 0.0 }, KernelId::WeightedDirichlet { nu: -1.5, m: 1 }, KernelId::DirichletLog { m: 2 }] {
            let g = gram_matrix(id, &pts).unwrap();
            let (min, trace) = gram_min_eigenvalue(&g);
            prop_assert!(min > -1e-10 * trace, "{id:?}: {min} vs trace {trace}");
        }
    }

    #[test]
    fn double_differences_are_invariant(z1 in interior(1), z2 in interior(1), w1 in interior(1), w2 in interior(1)) {
        for phi in all_generators(1) {
            let r = mobius_invariance_check(&phi, [&z1, &z2], [&w1, &w2]).unwrap();
            prop_assert!(r.double_difference < 1e-11, "{}: {}", phi.name(), r.double_difference);
        }
    }

    #[test]
    fn base_fixing_generators_are_pointwise_invariant(z in interior(2), w in interior(2)) {
        for phi in all_generators(2).into_iter().filter(|p| matches!(p, Automorphism::Unitary(_) | Automorphism::Inversion)) {
            let r = mobius_invariance_check(&phi, [&z, &z], [&w, &w]).unwrap();
            prop_assert!(r.pointwise < 1e-11, "{}: {}", phi.name(), r.pointwise);
        }
    }

    #[test]
    fn cayley_transfer_holds(w in ball(1), z in ball(1)) {
        let e = cayley_transfer_check(&w, &z).unwrap();
        prop_assert!(e.rel_error < 1e-10);
        let l = cayley_transfer_log_check(&w, &z, 2).unwrap();
        prop_assert!(l.rel_error < 1e-9 || l.rhs.norm() < 1e-12);
        let sym = cayley_transfer_check(&z, &w).unwrap();
        prop_assert!((sym.lhs - e.lhs.conj()).norm() < 1e-12 * e.lhs.norm());
    }
}
