use qae_core::distributions::{classical_stats, discretize, DistributionSpec};
use qae_core::encoding::ObjectiveKind;
use qae_core::estimators::EstimatorConfig;
use qae_core::grover::{true_amplitude, AmplitudeProblem};
use qae_core::risk::{estimate_cvar, estimate_mean, estimate_var};

fn configs() -> Vec<EstimatorConfig> {
    [
        r#"{"algorithm":"exact"}"#,
        r#"{"algorithm":"canonical","m":7,"shots":200}"#,
        r#"{"algorithm":"iqae","epsilon":0.001,"alpha":0.05,"shots_per_round":100}"#,
        r#"{"algorithm":"mlae","schedule":[0,1,2,4,8],"shots_per_round":100,"alpha":0.05}"#,
        r#"{"algorithm":"fae","delta":0.05,"max_iter":4}"#,
    ]
    .iter()
    .map(|s| serde_json::from_str(s).unwrap())
    .collect()
}

#[test]
fn every_estimator_finds_the_amplitude() {
    let dd = discretize(&DistributionSpec::weibull(1.8, 3)).unwrap();
    let p = AmplitudeProblem::from_distribution(&dd, ObjectiveKind::Mean).unwrap();
    let a = true_amplitude(&p).unwrap();
    for cfg in configs() {
        let r = cfg.estimate(&p, 11).unwrap();
        assert!((r.a_hat - a).abs() < 0.02, "{}: {} vs {a}", cfg.algorithm(), r.a_hat);
        assert!(r.ci[0] <= r.a_hat && r.a_hat <= r.ci[1]);
        assert_eq!(r, cfg.estimate(&p, 11).unwrap());
    }
}

#[test]
fn risk_statistics_in_value_units() {
    let dd = discretize(&DistributionSpec::normal(0.1, 0.05, 4)).unwrap();
    let stats = classical_stats(&dd);
    let var = stats.var(0.95).unwrap().value;
    let cvar = stats.cvar(0.95).unwrap();
    let step = dd.step();
    for cfg in configs()
        .into_iter()
        .filter(|c| !matches!(c, EstimatorConfig::Canonical(_)))
    {
        let m = estimate_mean(&dd, &cfg, 3).unwrap();
        assert!(
            (m.estimate - stats.mean).abs() < 0.01,
            "{} mean {}",
            cfg.algorithm(),
            m.estimate
        );
        let v = estimate_var(&dd, 0.95, &cfg, 3).unwrap();
        assert!(
            (v.estimate - var).abs() <= step + 1e-12,
            "{} var {}",
            cfg.algorithm(),
            v.estimate
        );
        let c = estimate_cvar(&dd, 0.95, &cfg, 3).unwrap();
        assert!(
            (c.estimate - cvar).abs() < 0.01,
            "{} cvar {}",
            cfg.algorithm(),
            c.estimate
        );
    }
}

#[test]
fn seeds_matter() {
    let dd = discretize(&DistributionSpec::normal(0.1, 0.01, 3)).unwrap();
    let cfg = &configs()[2];
    let a = estimate_mean(&dd, cfg, 1).unwrap();
    let b = estimate_mean(&dd, cfg, 2).unwrap();
    assert_ne!(a.estimator_results[0].seed, b.estimator_results[0].seed);
    assert_ne!(a.estimate, b.estimate);
}
