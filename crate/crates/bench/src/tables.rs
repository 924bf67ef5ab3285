//! Mean / VaR / CVaR tables per distribution and estimator.
//!
//! Cell `(d, e, t)` runs statistic `t` with estimator `e` on distribution `d`;
//! repetition `r` uses seed `row_seed(master, TABLES_STREAM, [d, e, t, r])`
//! where `t` is the statistic's position in the plan.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qae_core::estimators::EstimatorConfig;
use qae_core::risk::{evaluate, RiskReport, Statistic};

use crate::plan::Plan;
use crate::{row_seed, thread_pool, LabResult, TABLES_STREAM};

pub const TABLES_JSON: &str = "tables.json";
pub const TABLES_TEXT: &str = "tables.txt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub distribution: String,
    pub statistic: Statistic,
    pub algorithm: String,
    pub estimator: EstimatorConfig,
    pub level: Option<f64>,
    pub repetitions: u32,
    pub seeds: Vec<u64>,
    pub estimates: Vec<f64>,
    pub mean_estimate: Option<f64>,
    /// Mean of the estimated `P[X ≤ VaR]` over repetitions.
    pub mean_achieved_level: Option<f64>,
    pub classical_reference: f64,
    pub classical_achieved_level: Option<f64>,
    pub continuous_reference: f64,
    /// Mean over repetitions of `|estimate − classical| / |classical|`, percent.
    pub mean_relative_error_pct: Option<f64>,
    /// `|mean_estimate − continuous| / |continuous|`, percent.
    pub delta_continuous_pct: Option<f64>,
    pub mean_grover_applications: Option<f64>,
    pub mean_oracle_queries_a: Option<f64>,
    pub max_circuit_depth: u64,
    pub level_ambiguous_runs: u32,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesReport {
    pub seed: u64,
    pub repetitions: u32,
    pub level: f64,
    pub cells: Vec<TableCell>,
}

impl TablesReport {
    pub fn has_errors(&self) -> bool {
        self.cells.iter().any(|c| !c.errors.is_empty())
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn cell(plan: &Plan, d: usize, e: usize, t: usize, runs: Vec<(u64, qae_core::Result<RiskReport>)>) -> TableCell {
    let spec = &plan.distributions[d];
    let statistic = plan.statistics[t];
    let estimator = plan.estimators[e].clone();
    let seeds = runs.iter().map(|(s, _)| *s).collect();
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for (seed, r) in runs {
        match r {
            Ok(r) => ok.push(r),
            Err(err) => errors.push(format!("seed {seed}: {err}")),
        }
    }
    // References are deterministic; recompute them if every run failed.
    let reference = ok
        .first()
        .cloned()
        .or_else(|| evaluate(spec, statistic, plan.level, &EstimatorConfig::Exact, 0).ok());
    let (classical, classical_level, continuous) = match &reference {
        Some(r) => (
            r.classical_reference,
            r.classical_achieved_level,
            r.continuous_reference.unwrap_or(f64::NAN),
        ),
        None => (f64::NAN, None, f64::NAN),
    };
    let mean_estimate = mean(ok.iter().map(|r| r.estimate));
    TableCell {
        distribution: spec.label(),
        statistic,
        algorithm: estimator.algorithm().to_string(),
        level: (statistic != Statistic::Mean).then_some(plan.level),
        repetitions: plan.repetitions,
        seeds,
        estimates: ok.iter().map(|r| r.estimate).collect(),
        mean_estimate,
        mean_achieved_level: mean(ok.iter().filter_map(|r| r.achieved_level)),
        classical_reference: classical,
        classical_achieved_level: classical_level,
        continuous_reference: continuous,
        mean_relative_error_pct: mean(ok.iter().map(|r| r.relative_error(classical))),
        delta_continuous_pct: mean_estimate.map(|m| (m - continuous).abs() / continuous.abs() * 100.0),
        mean_grover_applications: mean(ok.iter().map(|r| r.grover_applications() as f64)),
        mean_oracle_queries_a: mean(ok.iter().map(|r| r.oracle_queries_a() as f64)),
        max_circuit_depth: ok.iter().map(|r| r.max_circuit_depth()).max().unwrap_or(0),
        level_ambiguous_runs: ok.iter().filter(|r| r.level_ambiguous).count() as u32,
        estimator,
        errors,
    }
}

pub fn run_tables(plan: &Plan, workers: usize) -> LabResult<TablesReport> {
    plan.validate()?;
    let mut jobs = Vec::new();
    for d in 0..plan.distributions.len() {
        for e in 0..plan.estimators.len() {
            for t in 0..plan.statistics.len() {
                for r in 0..plan.repetitions as usize {
                    jobs.push([d, e, t, r]);
                }
            }
        }
    }
    let pool = thread_pool(workers)?;
    let results: Vec<(u64, qae_core::Result<RiskReport>)> = pool.install(|| {
        jobs.par_iter()
            .map(|&[d, e, t, r]| {
                let seed = row_seed(plan.seed, TABLES_STREAM, &[d as u64, e as u64, t as u64, r as u64]);
                let report = evaluate(
                    &plan.distributions[d],
                    plan.statistics[t],
                    plan.level,
                    &plan.estimators[e],
                    seed,
                );
                (seed, report)
            })
            .collect()
    });
    let reps = plan.repetitions as usize;
    let mut cells = Vec::new();
    let mut it = results.into_iter();
    for chunk_start in (0..jobs.len()).step_by(reps) {
        let [d, e, t, _] = jobs[chunk_start];
        let runs: Vec<_> = it.by_ref().take(reps).collect();
        cells.push(cell(plan, d, e, t, runs));
    }
    Ok(TablesReport {
        seed: plan.seed,
        repetitions: plan.repetitions,
        level: plan.level,
        cells,
    })
}

fn fmt_opt(x: Option<f64>, digits: usize) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.digits$}"),
        _ => "-".to_string(),
    }
}

/// Fixed-width text rendering, one block per distribution.
pub fn render_text(report: &TablesReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "seed {}  repetitions {}  level {}",
        report.seed, report.repetitions, report.level
    );
    let mut last = None;
    for c in &report.cells {
        if last.as_deref() != Some(c.distribution.as_str()) {
            let _ = writeln!(out, "\n{}", c.distribution);
            let _ = writeln!(
                out,
                "  {:<5} {:<9} {:>12} {:>10} {:>12} {:>12} {:>10} {:>10} {:>12} {:>12} {:>7}",
                "stat",
                "algorithm",
                "estimate",
                "level %",
                "classical",
                "continuous",
                "err %",
                "Δcont %",
                "grover",
                "A-queries",
                "depth"
            );
            last = Some(c.distribution.clone());
        }
        let _ = writeln!(
            out,
            "  {:<5} {:<9} {:>12} {:>10} {:>12.6} {:>12.6} {:>10} {:>10} {:>12} {:>12} {:>7}{}",
            c.statistic.name(),
            c.algorithm,
            fmt_opt(c.mean_estimate, 6),
            fmt_opt(c.mean_achieved_level.map(|l| l * 100.0), 2),
            c.classical_reference,
            c.continuous_reference,
            fmt_opt(c.mean_relative_error_pct, 4),
            fmt_opt(c.delta_continuous_pct, 2),
            fmt_opt(c.mean_grover_applications, 0),
            fmt_opt(c.mean_oracle_queries_a, 0),
            c.max_circuit_depth,
            if c.errors.is_empty() {
                String::new()
            } else {
                format!("  [{} failed]", c.errors.len())
            }
        );
    }
    out
}
