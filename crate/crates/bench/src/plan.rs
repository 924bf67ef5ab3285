//! Experiment plans. See `PLAN.md` for the JSON schema.

use std::path::{Path, PathBuf};

use qae_core::distributions::DistributionSpec;
use qae_core::estimators::{EstimatorConfig, FaeConfig, IqaeConfig, MlaeConfig};
use qae_core::risk::Statistic;
use serde::{Deserialize, Serialize};

use crate::{LabError, LabResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plan {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    /// Risk level for VaR and CVaR.
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_distributions")]
    pub distributions: Vec<DistributionSpec>,
    #[serde(default = "default_statistics")]
    pub statistics: Vec<Statistic>,
    /// Estimators compared by `tables`.
    #[serde(default = "default_estimators")]
    pub estimators: Vec<EstimatorConfig>,
    #[serde(default)]
    pub bounds: BoundsPlan,
    #[serde(default)]
    pub sweep: SweepPlan,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsPlan {
    pub alpha: f64,
    pub epsilons: Vec<f64>,
}

impl Default for BoundsPlan {
    fn default() -> Self {
        BoundsPlan {
            alpha: 0.05,
            epsilons: vec![0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005, 0.0002, 0.0001],
        }
    }
}

/// One estimator family swept over its budget knob.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepSeries {
    Iqae {
        epsilons: Vec<f64>,
        alpha: f64,
        shots_per_round: u64,
    },
    /// Exponential schedules `[0, 1, …, 2^{j−1}]` for each depth `j`.
    Mlae {
        depths: Vec<u32>,
        alpha: f64,
        shots_per_round: u64,
    },
    Fae {
        max_iters: Vec<u32>,
        delta: f64,
        #[serde(default)]
        shots: Option<[u64; 2]>,
    },
    Canonical {
        ancillas: Vec<u32>,
        shots: u64,
    },
    /// Classical Monte Carlo; one sample counts as one query.
    Cmc {
        samples: Vec<u64>,
        alpha: f64,
    },
}

/// A single sweep point: the estimator to run and its budget knob.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepPoint {
    Quantum(EstimatorConfig),
    Cmc { samples: u64, alpha: f64 },
}

impl SweepSeries {
    pub fn name(&self) -> &'static str {
        match self {
            SweepSeries::Iqae { .. } => "iqae",
            SweepSeries::Mlae { .. } => "mlae",
            SweepSeries::Fae { .. } => "fae",
            SweepSeries::Canonical { .. } => "canonical",
            SweepSeries::Cmc { .. } => "cmc",
        }
    }

    pub fn budget_param(&self) -> &'static str {
        match self {
            SweepSeries::Iqae { .. } => "epsilon",
            SweepSeries::Mlae { .. } => "depth",
            SweepSeries::Fae { .. } => "max_iter",
            SweepSeries::Canonical { .. } => "ancillas",
            SweepSeries::Cmc { .. } => "samples",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepSeries::Iqae { epsilons, .. } => epsilons.len(),
            SweepSeries::Mlae { depths, .. } => depths.len(),
            SweepSeries::Fae { max_iters, .. } => max_iters.len(),
            SweepSeries::Canonical { ancillas, .. } => ancillas.len(),
            SweepSeries::Cmc { samples, .. } => samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Budget value of point `i`, as written to the CSV.
    pub fn budget_value(&self, i: usize) -> f64 {
        match self {
            SweepSeries::Iqae { epsilons, .. } => epsilons[i],
            SweepSeries::Mlae { depths, .. } => depths[i] as f64,
            SweepSeries::Fae { max_iters, .. } => max_iters[i] as f64,
            SweepSeries::Canonical { ancillas, .. } => ancillas[i] as f64,
            SweepSeries::Cmc { samples, .. } => samples[i] as f64,
        }
    }

    pub fn point(&self, i: usize) -> SweepPoint {
        match self {
            SweepSeries::Iqae {
                epsilons,
                alpha,
                shots_per_round,
            } => SweepPoint::Quantum(EstimatorConfig::Iqae(IqaeConfig::new(
                epsilons[i],
                *alpha,
                *shots_per_round,
            ))),
            SweepSeries::Mlae {
                depths,
                alpha,
                shots_per_round,
            } => SweepPoint::Quantum(EstimatorConfig::Mlae(MlaeConfig::exponential(
                depths[i],
                *shots_per_round,
                *alpha,
            ))),
            SweepSeries::Fae {
                max_iters,
                delta,
                shots,
            } => SweepPoint::Quantum(EstimatorConfig::Fae(FaeConfig {
                delta: *delta,
                max_iter: max_iters[i],
                shots: *shots,
            })),
            SweepSeries::Canonical { ancillas, shots } => {
                SweepPoint::Quantum(EstimatorConfig::Canonical(qae_core::estimators::CanonicalConfig {
                    m: ancillas[i],
                    shots: *shots,
                }))
            }
            SweepSeries::Cmc { samples, alpha } => SweepPoint::Cmc {
                samples: samples[i],
                alpha: *alpha,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    /// Statistic estimated at every sweep point.
    pub statistic: Statistic,
    pub series: Vec<SweepSeries>,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            statistic: Statistic::Mean,
            series: vec![
                SweepSeries::Iqae {
                    epsilons: vec![0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001],
                    alpha: 0.05,
                    shots_per_round: 100,
                },
                SweepSeries::Mlae {
                    depths: vec![1, 2, 3, 4, 5, 6, 7, 8],
                    alpha: 0.05,
                    shots_per_round: 100,
                },
                SweepSeries::Fae {
                    max_iters: vec![1, 2, 3, 4, 5, 6],
                    delta: 0.05,
                    shots: None,
                },
                SweepSeries::Cmc {
                    samples: vec![100, 1_000, 10_000, 100_000, 1_000_000],
                    alpha: 0.05,
                },
            ],
        }
    }
}

fn default_seed() -> u64 {
    2024
}

fn default_repetitions() -> u32 {
    10
}

fn default_level() -> f64 {
    0.95
}

fn default_distributions() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::normal(0.1, 0.01, 4),
        DistributionSpec::normal(0.1, 0.05, 4),
        DistributionSpec::weibull(1.8, 4),
        DistributionSpec::uniform(0.0, 1.0, 4),
    ]
}

fn default_statistics() -> Vec<Statistic> {
    vec![Statistic::Mean, Statistic::Var, Statistic::Cvar]
}

fn default_estimators() -> Vec<EstimatorConfig> {
    vec![
        EstimatorConfig::Iqae(IqaeConfig::new(1e-3, 0.05, 100)),
        EstimatorConfig::Mlae(MlaeConfig::exponential(3, 100, 0.05)),
        EstimatorConfig::Fae(FaeConfig::new(0.05, 3)),
    ]
}

impl Default for Plan {
    fn default() -> Self {
        Plan {
            seed: default_seed(),
            repetitions: default_repetitions(),
            level: default_level(),
            distributions: default_distributions(),
            statistics: default_statistics(),
            estimators: default_estimators(),
            bounds: BoundsPlan::default(),
            sweep: SweepPlan::default(),
            output_dir: None,
        }
    }
}

impl Plan {
    pub fn from_json(text: &str) -> LabResult<Plan> {
        let plan: Plan = serde_json::from_str(text).map_err(|e| LabError::Plan(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> LabResult<Plan> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Plan::from_json(&text)
    }

    pub fn validate(&self) -> LabResult<()> {
        let bad = |m: String| Err(LabError::Plan(m));
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level {} outside (0, 1)", self.level));
        }
        for d in &self.distributions {
            d.validate()
                .map_err(|e| LabError::Plan(format!("{}: {e}", d.label())))?;
        }
        for e in &self.estimators {
            e.validate()
                .map_err(|err| LabError::Plan(format!("{}: {err}", e.algorithm())))?;
        }
        if self.bounds.epsilons.is_empty() {
            return bad("bounds.epsilons is empty".into());
        }
        for s in &self.sweep.series {
            if s.is_empty() {
                return bad(format!("sweep series {} has no points", s.name()));
            }
            let values: Vec<f64> = (0..s.len()).map(|i| s.budget_value(i)).collect();
            // Budgets must grow: larger knobs, or smaller epsilon for IQAE.
            let increasing = match s {
                SweepSeries::Iqae { .. } => values.windows(2).all(|w| w[1] < w[0]),
                _ => values.windows(2).all(|w| w[1] > w[0]),
            };
            if !increasing {
                return bad(format!("sweep series {} budgets are not strictly increasing", s.name()));
            }
            for i in 0..s.len() {
                if let SweepPoint::Quantum(cfg) = s.point(i) {
                    cfg.validate()
                        .map_err(|e| LabError::Plan(format!("{}: {e}", s.name())))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let plan = Plan::default();
        let text = serde_json::to_string_pretty(&plan).unwrap();
        assert_eq!(Plan::from_json(&text).unwrap(), plan);
    }

    #[test]
    fn empty_document_is_default() {
        assert_eq!(Plan::from_json("{}").unwrap(), Plan::default());
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(Plan::from_json(r#"{"repetitions":0}"#).is_err());
        assert!(Plan::from_json(r#"{"colour":"red"}"#).is_err());
        assert!(Plan::from_json(
            r#"{"sweep":{"statistic":"mean","series":[{"algorithm":"cmc","samples":[100,10],"alpha":0.05}]}}"#
        )
        .is_err());
    }
}
