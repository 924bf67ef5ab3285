//! Amplitude estimators, the classical Monte Carlo baseline and the
//! sample-complexity curves.
//!
//! Every quantum estimator consumes an [`AmplitudeProblem`] and a seed and
//! returns an [`EstimationResult`]. Runs are single-threaded and deterministic
//! given the seed.

mod bounds;
mod canonical;
mod cmc;
pub mod confint;
mod fae;
mod iqae;
mod mlae;

use serde::{Deserialize, Serialize};

use crate::grover::{true_amplitude, AmplitudeProblem, QueryCounter};
use crate::{Error, Result};

pub use bounds::{cmc_critical_value, cmc_reference, theoretical_bounds, TheoreticalBounds};
pub use canonical::{canonical_qae, CanonicalConfig};
pub use cmc::{cmc, CmcResult, CmcStatistic};
pub use fae::{fae, FaeConfig};
pub use iqae::{iqae, IqaeConfig};
pub use mlae::{log_likelihood, mlae, mle_maximize, MlaeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Exact,
    Canonical,
    Iqae,
    Mlae,
    Fae,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Canonical => "canonical",
            Algorithm::Iqae => "iqae",
            Algorithm::Mlae => "mlae",
            Algorithm::Fae => "fae",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one estimator run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub algorithm: Algorithm,
    pub a_hat: f64,
    pub ci: [f64; 2],
    /// Applications of `A` or `A†`: `Σ shots·(2k+1)`.
    pub oracle_queries_a: u64,
    /// Applications of `Q`: `Σ shots·k`.
    pub grover_applications: u64,
    pub shots_total: u64,
    pub rounds: u64,
    pub max_circuit_depth: u64,
    pub max_k: u64,
    pub seed: u64,
}

impl EstimationResult {
    pub(crate) fn from_counter(
        algorithm: Algorithm,
        a_hat: f64,
        ci: [f64; 2],
        counter: QueryCounter,
        seed: u64,
    ) -> Self {
        let a_hat = a_hat.clamp(0.0, 1.0);
        let ci = [ci[0].clamp(0.0, 1.0).min(a_hat), ci[1].clamp(0.0, 1.0).max(a_hat)];
        EstimationResult {
            algorithm,
            a_hat,
            ci,
            oracle_queries_a: counter.oracle_queries_a,
            grover_applications: counter.grover_applications,
            shots_total: counter.shots_total,
            rounds: counter.rounds,
            max_circuit_depth: counter.max_circuit_depth,
            max_k: counter.max_k,
            seed,
        }
    }

    pub fn ci_width(&self) -> f64 {
        self.ci[1] - self.ci[0]
    }
}

/// Which estimator to run and with what knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum EstimatorConfig {
    /// Reads the amplitude off the statevector. No queries are counted.
    Exact,
    Canonical(CanonicalConfig),
    Iqae(IqaeConfig),
    Mlae(MlaeConfig),
    Fae(FaeConfig),
}

impl EstimatorConfig {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            EstimatorConfig::Exact => Algorithm::Exact,
            EstimatorConfig::Canonical(_) => Algorithm::Canonical,
            EstimatorConfig::Iqae(_) => Algorithm::Iqae,
            EstimatorConfig::Mlae(_) => Algorithm::Mlae,
            EstimatorConfig::Fae(_) => Algorithm::Fae,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EstimatorConfig::Exact => Ok(()),
            EstimatorConfig::Canonical(c) => c.validate(),
            EstimatorConfig::Iqae(c) => c.validate(),
            EstimatorConfig::Mlae(c) => c.validate(),
            EstimatorConfig::Fae(c) => c.validate(),
        }
    }

    pub fn estimate(&self, problem: &AmplitudeProblem, seed: u64) -> Result<EstimationResult> {
        match self {
            EstimatorConfig::Exact => exact(problem, seed),
            EstimatorConfig::Canonical(c) => canonical_qae(problem, c.m, c.shots, seed),
            EstimatorConfig::Iqae(c) => iqae(problem, c, seed),
            EstimatorConfig::Mlae(c) => mlae(problem, &c.schedule, c.shots_per_round, c.alpha, seed),
            EstimatorConfig::Fae(c) => fae(problem, c, seed),
        }
    }
}

/// Exact amplitude with a zero-width interval.
pub fn exact(problem: &AmplitudeProblem, seed: u64) -> Result<EstimationResult> {
    let a = true_amplitude(problem)?;
    Ok(EstimationResult::from_counter(
        Algorithm::Exact,
        a,
        [a, a],
        QueryCounter::default(),
        seed,
    ))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("alpha {alpha} outside (0, 1)")))
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("epsilon {epsilon} outside (0, 0.5)")))
    }
}

pub(crate) fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        Err(Error::ZeroShots)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_json_round_trip() {
        let configs = vec![
            EstimatorConfig::Exact,
            EstimatorConfig::Canonical(CanonicalConfig { m: 5, shots: 100 }),
            EstimatorConfig::Iqae(IqaeConfig::new(1e-3, 0.05, 100)),
            EstimatorConfig::Mlae(MlaeConfig::exponential(3, 100, 0.05)),
            EstimatorConfig::Fae(FaeConfig::new(0.05, 3)),
        ];
        for c in configs {
            let text = serde_json::to_string(&c).unwrap();
            let back: EstimatorConfig = serde_json::from_str(&text).unwrap();
            assert_eq!(back, c, "{text}");
        }
        let c: EstimatorConfig =
            serde_json::from_str(r#"{"algorithm":"iqae","epsilon":0.001,"alpha":0.05,"shots_per_round":100}"#).unwrap();
        assert_eq!(c, EstimatorConfig::Iqae(IqaeConfig::new(1e-3, 0.05, 100)));
    }

    #[test]
    fn exact_estimator() {
        let p = AmplitudeProblem::from_amplitude(0.3).unwrap();
        let r = exact(&p, 7).unwrap();
        assert!((r.a_hat - 0.3).abs() < 1e-12);
        assert_eq!(r.ci_width(), 0.0);
        assert_eq!(r.oracle_queries_a, 0);
    }
}
