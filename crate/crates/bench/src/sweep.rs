//! Error-versus-budget sweeps.
//!
//! Row `(d, s, p, r)` runs series `s` at budget point `p` on distribution `d`,
//! repetition `r`, with seed `row_seed(master, SWEEP_STREAM, [d, s, p, r])`.
//! Rows are computed in parallel and written in key order, so the worker count
//! never changes the output bytes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qae_core::distributions::{discretize, DiscretizedDistribution, DistributionSpec};
use qae_core::estimators::{cmc, CmcStatistic};
use qae_core::risk::{estimate_cvar, estimate_mean, estimate_var, RiskReport, Statistic};

use crate::plan::{Plan, SweepPoint};
use crate::{row_seed, thread_pool, LabError, LabResult, SWEEP_STREAM};

pub const SWEEP_FILE: &str = "sweep.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowKey {
    pub distribution: usize,
    pub series: usize,
    pub point: usize,
    pub repetition: usize,
}

impl RowKey {
    pub fn id(&self) -> String {
        format!(
            "d{}-s{}-p{}-r{}",
            self.distribution, self.series, self.point, self.repetition
        )
    }

    pub fn parse(id: &str) -> LabResult<RowKey> {
        let bad = || LabError::Usage(format!("row id {id:?} is not of the form d<i>-s<i>-p<i>-r<i>"));
        let parts: Vec<&str> = id.split('-').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let mut out = [0usize; 4];
        for ((part, prefix), slot) in parts.iter().zip(['d', 's', 'p', 'r']).zip(out.iter_mut()) {
            *slot = part.strip_prefix(prefix).and_then(|n| n.parse().ok()).ok_or_else(bad)?;
        }
        Ok(RowKey {
            distribution: out[0],
            series: out[1],
            point: out[2],
            repetition: out[3],
        })
    }

    pub fn seed(&self, master: u64) -> u64 {
        row_seed(
            master,
            SWEEP_STREAM,
            &[
                self.distribution as u64,
                self.series as u64,
                self.point as u64,
                self.repetition as u64,
            ],
        )
    }
}

/// One line of `sweep.csv`. Column order is the field order. Numeric result
/// columns are empty when `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub row_id: String,
    pub distribution: String,
    pub statistic: Statistic,
    pub algorithm: String,
    pub budget_param: String,
    pub budget_value: f64,
    pub repetition: usize,
    pub seed: u64,
    pub estimate: Option<f64>,
    pub reference: Option<f64>,
    pub relative_error_pct: Option<f64>,
    pub abs_error: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub ci_width: Option<f64>,
    pub grover_applications: Option<u64>,
    pub oracle_queries_a: Option<u64>,
    pub shots_total: Option<u64>,
    pub max_k: Option<u64>,
    pub max_circuit_depth: Option<u64>,
    pub error: String,
}

impl SweepRow {
    pub fn is_error(&self) -> bool {
        !self.error.is_empty()
    }
}

struct Outcome {
    estimate: f64,
    reference: f64,
    ci: [f64; 2],
    grover_applications: u64,
    oracle_queries_a: u64,
    shots_total: u64,
    max_k: u64,
    max_circuit_depth: u64,
}

fn risk_outcome(report: RiskReport) -> Outcome {
    Outcome {
        estimate: report.estimate,
        reference: report.classical_reference,
        ci: report.ci,
        grover_applications: report.grover_applications(),
        oracle_queries_a: report.oracle_queries_a(),
        shots_total: report.estimator_results.iter().map(|r| r.shots_total).sum(),
        max_k: report.estimator_results.iter().map(|r| r.max_k).max().unwrap_or(0),
        max_circuit_depth: report.max_circuit_depth(),
    }
}

fn run_point(
    dd: &DiscretizedDistribution,
    statistic: Statistic,
    level: f64,
    point: &SweepPoint,
    seed: u64,
) -> qae_core::Result<Outcome> {
    match point {
        SweepPoint::Quantum(cfg) => {
            let report = match statistic {
                Statistic::Mean => estimate_mean(dd, cfg, seed)?,
                Statistic::Var => estimate_var(dd, level, cfg, seed)?,
                Statistic::Cvar => estimate_cvar(dd, level, cfg, seed)?,
            };
            Ok(risk_outcome(report))
        }
        SweepPoint::Cmc { samples, alpha } => {
            let stats = qae_core::distributions::classical_stats(dd);
            let (stat, reference) = match statistic {
                Statistic::Mean => (CmcStatistic::Mean, stats.mean),
                Statistic::Var => (CmcStatistic::Var { level }, stats.var(level)?.value),
                Statistic::Cvar => (CmcStatistic::Cvar { level }, stats.cvar(level)?),
            };
            let r = cmc(dd, *samples, seed, stat, *alpha)?;
            Ok(Outcome {
                estimate: r.estimate,
                reference,
                ci: r.ci,
                grover_applications: *samples,
                oracle_queries_a: *samples,
                shots_total: *samples,
                max_k: 0,
                max_circuit_depth: 0,
            })
        }
    }
}

/// Computes a single row. `replay` uses this directly.
pub fn run_row(plan: &Plan, key: RowKey) -> LabResult<SweepRow> {
    let spec: &DistributionSpec = plan
        .distributions
        .get(key.distribution)
        .ok_or_else(|| LabError::Usage(format!("no distribution {}", key.distribution)))?;
    let series = plan
        .sweep
        .series
        .get(key.series)
        .ok_or_else(|| LabError::Usage(format!("no sweep series {}", key.series)))?;
    if key.point >= series.len() || key.repetition >= plan.repetitions as usize {
        return Err(LabError::Usage(format!("row {} is outside the plan", key.id())));
    }
    let seed = key.seed(plan.seed);
    let statistic = plan.sweep.statistic;
    let outcome = discretize(spec).and_then(|dd| run_point(&dd, statistic, plan.level, &series.point(key.point), seed));
    let mut row = SweepRow {
        row_id: key.id(),
        distribution: spec.label(),
        statistic,
        algorithm: series.name().to_string(),
        budget_param: series.budget_param().to_string(),
        budget_value: series.budget_value(key.point),
        repetition: key.repetition,
        seed,
        estimate: None,
        reference: None,
        relative_error_pct: None,
        abs_error: None,
        ci_lo: None,
        ci_hi: None,
        ci_width: None,
        grover_applications: None,
        oracle_queries_a: None,
        shots_total: None,
        max_k: None,
        max_circuit_depth: None,
        error: String::new(),
    };
    match outcome {
        Ok(o) => {
            let abs = (o.estimate - o.reference).abs();
            row.estimate = Some(o.estimate);
            row.reference = Some(o.reference);
            row.relative_error_pct = Some(abs / o.reference.abs() * 100.0);
            row.abs_error = Some(abs);
            row.ci_lo = Some(o.ci[0]);
            row.ci_hi = Some(o.ci[1]);
            row.ci_width = Some(o.ci[1] - o.ci[0]);
            row.grover_applications = Some(o.grover_applications);
            row.oracle_queries_a = Some(o.oracle_queries_a);
            row.shots_total = Some(o.shots_total);
            row.max_k = Some(o.max_k);
            row.max_circuit_depth = Some(o.max_circuit_depth);
        }
        Err(e) => row.error = e.to_string(),
    }
    Ok(row)
}

pub fn row_keys(plan: &Plan) -> Vec<RowKey> {
    let mut keys = Vec::new();
    for distribution in 0..plan.distributions.len() {
        for (series, s) in plan.sweep.series.iter().enumerate() {
            for point in 0..s.len() {
                for repetition in 0..plan.repetitions as usize {
                    keys.push(RowKey {
                        distribution,
                        series,
                        point,
                        repetition,
                    });
                }
            }
        }
    }
    keys
}

pub fn run_sweep(plan: &Plan, workers: usize) -> LabResult<Vec<SweepRow>> {
    plan.validate()?;
    let keys = row_keys(plan);
    let pool = thread_pool(workers)?;
    let mut rows: Vec<(RowKey, SweepRow)> = pool.install(|| {
        keys.par_iter()
            .map(|&k| run_row(plan, k).map(|r| (k, r)))
            .collect::<LabResult<Vec<_>>>()
    })?;
    rows.sort_by_key(|(k, _)| *k);
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

pub fn to_csv(rows: &[SweepRow]) -> LabResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
        .map_err(|e| LabError::io(std::path::Path::new(SWEEP_FILE), e))?;
    Ok(w.into_inner().expect("flushed"))
}

pub fn read_csv(path: &std::path::Path) -> LabResult<Vec<SweepRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize()
        .collect::<Result<Vec<SweepRow>, _>>()
        .map_err(|e| LabError::Schema {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
}
