//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations: discretize a distribution, trace the Grover rotation of an
//! objective, and run a small error-versus-queries sweep.

use qae_core::distributions::{classical_stats, discretize, DiscretizedDistribution, DistributionSpec};
use qae_core::encoding::ObjectiveKind;
use qae_core::estimators::{cmc, CmcStatistic, EstimatorConfig, IqaeConfig};
use qae_core::grover::{AmplitudeProblem, GroverSampler};
use qae_core::risk::estimate_mean;
use qae_core::rng::derive_seed;
use wasm_bindgen::prelude::*;

/// Largest register the page may request.
pub const MAX_DEMO_QUBITS: usize = 7;

fn spec(kind: &str, p1: f64, p2: f64, n_qubits: usize) -> Result<DistributionSpec, String> {
    if n_qubits == 0 || n_qubits > MAX_DEMO_QUBITS {
        return Err(format!("n_qubits must be in 1..={MAX_DEMO_QUBITS}"));
    }
    let s = match kind {
        "normal" => DistributionSpec::normal(p1, p2, n_qubits),
        "weibull" => DistributionSpec::weibull(p1, n_qubits),
        "uniform" => DistributionSpec::uniform(p1, p2, n_qubits),
        other => return Err(format!("unknown distribution {other:?}")),
    };
    s.validate().map_err(|e| e.to_string())?;
    Ok(s)
}

fn load(kind: &str, p1: f64, p2: f64, n_qubits: usize) -> Result<DiscretizedDistribution, String> {
    discretize(&spec(kind, p1, p2, n_qubits)?).map_err(|e| e.to_string())
}

fn objective(name: &str, l: usize) -> Result<ObjectiveKind, String> {
    match name {
        "mean" => Ok(ObjectiveKind::Mean),
        "cdf" => Ok(ObjectiveKind::CdfThreshold { l }),
        "cvar" => Ok(ObjectiveKind::Cvar { l }),
        other => Err(format!("unknown objective {other:?}")),
    }
}

/// `[x_0..x_{N-1}, p_0..p_{N-1}, mean, VaR_level, CVaR_level]`.
pub fn distribution_summary(kind: &str, p1: f64, p2: f64, n_qubits: usize, level: f64) -> Result<Vec<f64>, String> {
    let dd = load(kind, p1, p2, n_qubits)?;
    let stats = classical_stats(&dd);
    let var = stats.var(level).map_err(|e| e.to_string())?.value;
    let cvar = stats.cvar(level).map_err(|e| e.to_string())?;
    let mut out = dd.grid().to_vec();
    out.extend_from_slice(dd.probs());
    out.extend([stats.mean, var, cvar]);
    Ok(out)
}

/// Simulated `P[good]` after `Q^k A|0⟩` for `k = 0..=k_max`.
pub fn grover_curve(
    kind: &str,
    p1: f64,
    p2: f64,
    n_qubits: usize,
    objective_name: &str,
    l: usize,
    k_max: u32,
) -> Result<Vec<f64>, String> {
    let dd = load(kind, p1, p2, n_qubits)?;
    let problem = AmplitudeProblem::from_distribution(&dd, objective(objective_name, l)?).map_err(|e| e.to_string())?;
    let mut sampler = GroverSampler::new(&problem).map_err(|e| e.to_string())?;
    (0..=k_max as u64)
        .map(|k| sampler.good_probability(k).map_err(|e| e.to_string()))
        .collect()
}

const SWEEP_EPSILONS: [f64; 5] = [0.03, 0.01, 0.003, 0.001, 0.0003];
const SWEEP_SAMPLES: [u64; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

/// Mean estimation error against query count. Flat triples
/// `[series, queries, relative_error_pct, ...]` with series 0 = IQAE, 1 = CMC.
pub fn mini_sweep(kind: &str, p1: f64, p2: f64, n_qubits: usize, seed: u64) -> Result<Vec<f64>, String> {
    let dd = load(kind, p1, p2, n_qubits)?;
    let truth = classical_stats(&dd).mean;
    let mut out = Vec::new();
    for (i, &eps) in SWEEP_EPSILONS.iter().enumerate() {
        let cfg = EstimatorConfig::Iqae(IqaeConfig::new(eps, 0.05, 100));
        let r = estimate_mean(&dd, &cfg, derive_seed(seed, i as u64)).map_err(|e| e.to_string())?;
        out.extend([
            0.0,
            r.grover_applications() as f64,
            (r.estimate - truth).abs() / truth.abs() * 100.0,
        ]);
    }
    for (i, &n) in SWEEP_SAMPLES.iter().enumerate() {
        let r = cmc(&dd, n, derive_seed(seed, 100 + i as u64), CmcStatistic::Mean, 0.05).map_err(|e| e.to_string())?;
        out.extend([1.0, n as f64, (r.estimate - truth).abs() / truth.abs() * 100.0]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = distributionSummary)]
pub fn distribution_summary_js(kind: &str, p1: f64, p2: f64, n_qubits: usize, level: f64) -> Result<Vec<f64>, JsError> {
    distribution_summary(kind, p1, p2, n_qubits, level).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = groverCurve)]
pub fn grover_curve_js(
    kind: &str,
    p1: f64,
    p2: f64,
    n_qubits: usize,
    objective_name: &str,
    l: usize,
    k_max: u32,
) -> Result<Vec<f64>, JsError> {
    grover_curve(kind, p1, p2, n_qubits, objective_name, l, k_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = miniSweep)]
pub fn mini_sweep_js(kind: &str, p1: f64, p2: f64, n_qubits: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    mini_sweep(kind, p1, p2, n_qubits, seed).map_err(|e| JsError::new(&e))
}
