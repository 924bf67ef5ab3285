//! Mean, value-at-risk and conditional value-at-risk in value units.
//!
//! VaR is found by bisection over grid indices, each probe estimating
//! `P[X ≤ x_l]` with the cdf-threshold objective. CVaR reuses the VaR index `l`
//! and its estimated tail probability `P̂`, estimates the CVaR objective and maps
//! the result with [`to_value_domain`].

use serde::{Deserialize, Serialize};

use crate::distributions::{
    classical_stats, continuous_reference, discretize, DiscretizedDistribution, DistributionSpec, LEVEL_TOLERANCE,
};
use crate::encoding::{to_value_domain, ObjectiveKind};
use crate::estimators::{EstimationResult, EstimatorConfig};
use crate::grover::AmplitudeProblem;
use crate::rng::derive_seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Mean,
    Var,
    Cvar,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Mean => "mean",
            Statistic::Var => "var",
            Statistic::Cvar => "cvar",
        }
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub statistic: Statistic,
    /// Requested level for VaR and CVaR.
    pub level: Option<f64>,
    pub estimate: f64,
    /// Estimated `P[X ≤ VaR]` at the chosen index.
    pub achieved_level: Option<f64>,
    pub ci: [f64; 2],
    /// Grid index of the VaR used by VaR and CVaR.
    pub var_index: Option<usize>,
    /// Set when a neighbouring grid point is also consistent with the probe intervals.
    pub level_ambiguous: bool,
    /// Plausible VaR grid values, ascending; more than one only when ambiguous.
    pub candidates: Vec<f64>,
    /// One entry per estimator call, in call order.
    pub estimator_results: Vec<EstimationResult>,
    pub classical_reference: f64,
    /// Exact `P[X ≤ x_l]` at the classical VaR index.
    pub classical_achieved_level: Option<f64>,
    pub continuous_reference: Option<f64>,
}

impl RiskReport {
    pub fn oracle_queries_a(&self) -> u64 {
        self.estimator_results.iter().map(|r| r.oracle_queries_a).sum()
    }

    pub fn grover_applications(&self) -> u64 {
        self.estimator_results.iter().map(|r| r.grover_applications).sum()
    }

    pub fn max_circuit_depth(&self) -> u64 {
        self.estimator_results
            .iter()
            .map(|r| r.max_circuit_depth)
            .max()
            .unwrap_or(0)
    }

    /// `|estimate − reference| / |reference|` in percent.
    pub fn relative_error(&self, reference: f64) -> f64 {
        (self.estimate - reference).abs() / reference.abs() * 100.0
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLevel(level))
    }
}

fn run(
    dd: &DiscretizedDistribution,
    kind: ObjectiveKind,
    estimator: &EstimatorConfig,
    seed: u64,
) -> Result<EstimationResult> {
    let problem = AmplitudeProblem::from_distribution(dd, kind)?;
    estimator.estimate(&problem, seed)
}

pub fn estimate_mean(dd: &DiscretizedDistribution, estimator: &EstimatorConfig, seed: u64) -> Result<RiskReport> {
    estimator.validate()?;
    let r = run(dd, ObjectiveKind::Mean, estimator, seed)?;
    let map = |a: f64| to_value_domain(a, dd, ObjectiveKind::Mean, None);
    Ok(RiskReport {
        statistic: Statistic::Mean,
        level: None,
        estimate: map(r.a_hat)?,
        achieved_level: None,
        ci: [map(r.ci[0])?, map(r.ci[1])?],
        var_index: None,
        level_ambiguous: false,
        candidates: Vec::new(),
        estimator_results: vec![r],
        classical_reference: classical_stats(dd).mean,
        classical_achieved_level: None,
        continuous_reference: None,
    })
}

/// Bisection for the smallest index `l` with `P̂[X ≤ x_l] ≥ level`.
///
/// The top index has `P = 1` exactly and is never probed. Probe `i` (0-based,
/// in call order) runs with seed `derive_seed(seed, i)`.
pub fn estimate_var(
    dd: &DiscretizedDistribution,
    level: f64,
    estimator: &EstimatorConfig,
    seed: u64,
) -> Result<RiskReport> {
    check_level(level)?;
    estimator.validate()?;
    let top = dd.len() - 1;
    let mut probes: Vec<(usize, EstimationResult)> = Vec::new();
    let (mut lo, mut hi) = (-1i64, top as i64);
    while hi - lo > 1 {
        let mid = ((lo + hi) / 2) as usize;
        let r = run(
            dd,
            ObjectiveKind::CdfThreshold { l: mid },
            estimator,
            derive_seed(seed, probes.len() as u64),
        )?;
        if r.a_hat >= level - LEVEL_TOLERANCE {
            hi = mid as i64;
        } else {
            lo = mid as i64;
        }
        probes.push((mid, r));
    }
    let index = hi as usize;
    let probe_at = |i: usize| probes.iter().find(|(j, _)| *j == i).map(|(_, r)| r);
    let (achieved, ci) = match probe_at(index) {
        Some(r) => (r.a_hat, r.ci),
        None => (1.0, [1.0, 1.0]),
    };

    let grid = dd.grid();
    let mut candidates = Vec::new();
    if index > 0 && probe_at(index - 1).is_some_and(|r| r.ci[1] >= level - LEVEL_TOLERANCE) {
        candidates.push(grid[index - 1]);
    }
    candidates.push(grid[index]);
    if index < top && ci[0] < level - LEVEL_TOLERANCE {
        candidates.push(grid[index + 1]);
    }

    let exact = classical_stats(dd).var(level)?;
    Ok(RiskReport {
        statistic: Statistic::Var,
        level: Some(level),
        estimate: grid[index],
        achieved_level: Some(achieved),
        ci: [candidates[0], *candidates.last().expect("nonempty")],
        var_index: Some(index),
        level_ambiguous: candidates.len() > 1,
        candidates,
        estimator_results: probes.into_iter().map(|(_, r)| r).collect(),
        classical_reference: exact.value,
        classical_achieved_level: Some(exact.achieved_level),
        continuous_reference: None,
    })
}

/// VaR with seed `derive_seed(seed, 0)`, then the CVaR objective with seed
/// `derive_seed(seed, 1)`, combined as `x_0 + Δx·l·â / P̂`.
pub fn estimate_cvar(
    dd: &DiscretizedDistribution,
    level: f64,
    estimator: &EstimatorConfig,
    seed: u64,
) -> Result<RiskReport> {
    let var = estimate_var(dd, level, estimator, derive_seed(seed, 0))?;
    let l = var.var_index.expect("var report carries its index");
    let p = var.achieved_level.expect("var report carries its level");
    if p <= LEVEL_TOLERANCE {
        return Err(Error::ZeroTailProbability);
    }
    let kind = ObjectiveKind::Cvar { l };
    let r = run(dd, kind, estimator, derive_seed(seed, 1))?;
    let map = |a: f64| to_value_domain(a, dd, kind, Some(p));
    let estimate = map(r.a_hat)?;
    let ci = [map(r.ci[0])?, map(r.ci[1])?];
    let mut results = var.estimator_results;
    results.push(r);
    Ok(RiskReport {
        statistic: Statistic::Cvar,
        level: Some(level),
        estimate,
        achieved_level: Some(p),
        ci,
        var_index: Some(l),
        level_ambiguous: var.level_ambiguous,
        candidates: var.candidates,
        estimator_results: results,
        classical_reference: classical_stats(dd).cvar(level)?,
        classical_achieved_level: var.classical_achieved_level,
        continuous_reference: None,
    })
}

/// Discretizes `spec`, runs the pipeline for `statistic` and attaches the
/// continuous reference. `level` is ignored for the mean.
pub fn evaluate(
    spec: &DistributionSpec,
    statistic: Statistic,
    level: f64,
    estimator: &EstimatorConfig,
    seed: u64,
) -> Result<RiskReport> {
    let dd = discretize(spec)?;
    let mut report = match statistic {
        Statistic::Mean => estimate_mean(&dd, estimator, seed)?,
        Statistic::Var => estimate_var(&dd, level, estimator, seed)?,
        Statistic::Cvar => estimate_cvar(&dd, level, estimator, seed)?,
    };
    let reference_level = if statistic == Statistic::Mean { 0.5 } else { level };
    let cont = continuous_reference(spec, reference_level)?;
    report.continuous_reference = Some(match statistic {
        Statistic::Mean => cont.mean,
        Statistic::Var => cont.var,
        Statistic::Cvar => cont.cvar,
    });
    Ok(report)
}
