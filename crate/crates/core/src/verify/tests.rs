use super::*;

fn quick(n: usize) -> VerifyConfig {
    VerifyConfig {
        n,
        fast: true,
        pairs: 10,
        mc_samples: 20_000,
        random_polynomials: 5,
        ..VerifyConfig::default()
    }
}

#[test]
fn cheap_suites_pass_and_are_sorted() {
    for name in ["group", "fock", "bargmann", "drury-arveson"] {
        let report = run_suite(name, &quick(1)).unwrap();
        let failures: Vec<_> = report
            .failures()
            .map(|c| (&c.id, c.rel_error, &c.error))
            .collect();
        assert!(report.passed, "{name}: {failures:?}");
        assert!(report.checks.windows(2).all(|w| w[0].id < w[1].id));
    }
}

#[test]
fn reports_are_deterministic_apart_from_wall_time() {
    let strip = |mut r: SuiteReport| {
        r.checks.iter_mut().for_each(|c| c.wall_time = 0.0);
        r
    };
    let a = strip(run_suite("group", &quick(2)).unwrap());
    let b = strip(run_suite("group", &quick(2)).unwrap());
    assert_eq!(a, b);
}

#[test]
fn config_errors() {
    assert!(matches!(
        run_suite("nope", &quick(1)),
        Err(Error::Unknown { .. })
    ));
    let bad = VerifyConfig { n: 3, ..quick(1) };
    assert!(run_suite("group", &bad).is_err());
    let bad = VerifyConfig {
        m: Some(1),
        ..quick(1)
    };
    assert!(bad.validate().is_err());
    let bad = VerifyConfig {
        nu: Some(-1.0),
        ..quick(1)
    };
    assert!(bad.validate().is_err());
    assert!(VerifyConfig::from_json(r#"{"n": 2, "bogus": 1}"#).is_err());
    let cfg = VerifyConfig::from_json(r#"{"n": 2, "fast": true}"#).unwrap();
    assert_eq!((cfg.n, cfg.fast, cfg.seed), (2, true, 7));
}

#[test]
fn orders() {
    assert_eq!(min_dirichlet_order(1), 2);
    assert_eq!(min_dirichlet_order(2), 2);
    assert_eq!(min_weighted_order(-2.0), 1);
    assert_eq!(min_weighted_order(-3.0), 2);
    assert_eq!(min_weighted_order(-1.5), 1);
}

#[test]
fn failed_computations_are_failures_and_report_lines_pass() {
    let t = Task::new("x", "anchor", 1e-3, || Err(Error::Divergent("test".into())));
    let c = t.execute();
    assert!(!c.pass && c.rel_error.is_none() && c.error.is_some());
    let t = Task::new("y", "anchor", 1e-3, || {
        Ok(CheckValue::new(
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ))
    })
    .report_only();
    assert!(t.execute().pass);
}

#[test]
fn csv_and_gnuplot_have_one_row_per_check() {
    let r = run_suite("group", &quick(1)).unwrap();
    assert_eq!(r.to_csv().lines().count(), r.checks.len() + 1);
    assert_eq!(r.to_gnuplot().lines().count(), r.checks.len() + 1);
}
