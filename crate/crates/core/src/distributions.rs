//! Discretized probability distributions and their exact classical statistics.
//!
//! A [`DistributionSpec`] is projected onto `N = 2^n` grid points. Normal and
//! Weibull distributions use inclusive endpoints `x_i = lo + i·(hi − lo)/(N − 1)`
//! with probabilities proportional to the pdf; the uniform distribution on `[a, b)`
//! uses left endpoints `x_i = a + i·(b − a)/N` with equal weights.

use serde::{Deserialize, Serialize};
use statrs::function::{erf, gamma};

use crate::{Error, Result};

/// Slack when comparing a cumulative probability against a requested level, so
/// that exact statevector probabilities and classical sums agree on ties.
pub const LEVEL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionKind {
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// Weibull with the given shape and unit scale.
    Weibull {
        shape: f64,
    },
    /// Uniform on the half-open interval `[a, b)`.
    Uniform {
        a: f64,
        b: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    #[serde(flatten)]
    pub kind: DistributionKind,
    pub n_qubits: usize,
    /// Grid bounds `[lo, hi]`. Defaults: `μ ± 3σ` for normal, `[0, q_0.999]` for
    /// Weibull, `[a, b)` for uniform (where explicit bounds are not allowed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[f64; 2]>,
}

impl DistributionSpec {
    pub fn normal(mu: f64, sigma: f64, n_qubits: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::Normal { mu, sigma },
            n_qubits,
            bounds: None,
        }
    }

    pub fn weibull(shape: f64, n_qubits: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::Weibull { shape },
            n_qubits,
            bounds: None,
        }
    }

    pub fn uniform(a: f64, b: f64, n_qubits: usize) -> Self {
        DistributionSpec {
            kind: DistributionKind::Uniform { a, b },
            n_qubits,
            bounds: None,
        }
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Self {
        self.bounds = Some([lo, hi]);
        self
    }

    pub fn with_qubits(mut self, n_qubits: usize) -> Self {
        self.n_qubits = n_qubits;
        self
    }

    /// Short human-readable label, e.g. `N(0.1,0.01)`.
    pub fn label(&self) -> String {
        match self.kind {
            DistributionKind::Normal { mu, sigma } => format!("N({mu},{sigma})"),
            DistributionKind::Weibull { shape } => format!("W({shape})"),
            DistributionKind::Uniform { a, b } => format!("U[{a},{b})"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDistribution(m));
        if self.n_qubits == 0 {
            return bad("n_qubits must be at least 1".into());
        }
        if self.n_qubits > crate::qsim::MAX_QUBITS - 1 {
            return Err(Error::TooManyQubits(self.n_qubits + 1));
        }
        match self.kind {
            DistributionKind::Normal { mu, sigma } => {
                if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
                    return bad(format!("normal needs finite μ and σ > 0, got μ={mu}, σ={sigma}"));
                }
            }
            DistributionKind::Weibull { shape } => {
                if !(shape > 0.0 && shape.is_finite()) {
                    return bad(format!("weibull shape must be > 0, got {shape}"));
                }
            }
            DistributionKind::Uniform { a, b } => {
                if !(a < b && a.is_finite() && b.is_finite()) {
                    return bad(format!("uniform needs a < b, got [{a}, {b})"));
                }
                if self.bounds.is_some() {
                    return bad("uniform takes its bounds from [a, b)".into());
                }
            }
        }
        if let Some([lo, hi]) = self.bounds {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return bad(format!("bounds need lo < hi, got [{lo}, {hi}]"));
            }
        }
        Ok(())
    }

    /// Effective `[lo, hi]` after applying defaults.
    pub fn resolved_bounds(&self) -> [f64; 2] {
        if let Some(b) = self.bounds {
            return b;
        }
        match self.kind {
            DistributionKind::Normal { mu, sigma } => [mu - 3.0 * sigma, mu + 3.0 * sigma],
            DistributionKind::Weibull { shape } => [0.0, weibull_quantile(shape, 0.999)],
            DistributionKind::Uniform { a, b } => [a, b],
        }
    }

    fn log_pdf(&self, x: f64) -> f64 {
        match self.kind {
            DistributionKind::Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                -0.5 * z * z - sigma.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
            }
            DistributionKind::Weibull { shape } => {
                if x < 0.0 {
                    f64::NEG_INFINITY
                } else if x == 0.0 {
                    match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Greater) => f64::NEG_INFINITY,
                        Some(std::cmp::Ordering::Equal) => 0.0,
                        _ => f64::INFINITY,
                    }
                } else {
                    shape.ln() + (shape - 1.0) * x.ln() - x.powf(shape)
                }
            }
            DistributionKind::Uniform { a, b } => {
                if x >= a && x < b {
                    -(b - a).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }
}

/// Probabilities `p_x` on a strictly increasing grid of `2^n` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedDistribution {
    grid: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscretizedDistribution {
    pub fn new(grid: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if n < 2 || !n.is_power_of_two() || probs.len() != n {
            return Err(Error::InvalidDistribution(format!(
                "grid of {n} points and {} probabilities; need equal powers of two ≥ 2",
                probs.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidDistribution("grid is not strictly increasing".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidDistribution("negative or non-finite probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::UnnormalizedProbabilities(total));
        }
        Ok(DiscretizedDistribution { grid, probs })
    }

    /// All mass on grid index `index` of an evenly spaced grid `lo..hi` with `2^n` points.
    pub fn point_mass(n_qubits: usize, lo: f64, hi: f64, index: usize) -> Result<Self> {
        let n = 1usize << n_qubits;
        let grid = evenly_spaced(lo, hi, n);
        let mut probs = vec![0.0; n];
        *probs
            .get_mut(index)
            .ok_or(Error::InvalidDistribution(format!("index {index} outside grid of {n}")))? = 1.0;
        Self::new(grid, probs)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.grid.len().trailing_zeros() as usize
    }

    pub fn lo(&self) -> f64 {
        self.grid[0]
    }

    pub fn hi(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Spacing of an evenly spaced grid (`(hi − lo)/(N − 1)`).
    pub fn step(&self) -> f64 {
        (self.hi() - self.lo()) / (self.len() - 1) as f64
    }
}

fn evenly_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

/// Projects `spec` onto its `2^n` grid.
pub fn discretize(spec: &DistributionSpec) -> Result<DiscretizedDistribution> {
    spec.validate()?;
    let n = 1usize << spec.n_qubits;
    if let DistributionKind::Uniform { a, b } = spec.kind {
        let grid = (0..n).map(|i| a + i as f64 * (b - a) / n as f64).collect();
        return DiscretizedDistribution::new(grid, vec![1.0 / n as f64; n]);
    }
    let [lo, hi] = spec.resolved_bounds();
    let grid = evenly_spaced(lo, hi, n);
    let logs: Vec<f64> = grid.iter().map(|&x| spec.log_pdf(x)).collect();
    if logs.contains(&f64::INFINITY) {
        return Err(Error::InvalidDistribution("pdf is unbounded on the grid".into()));
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::InvalidDistribution("pdf underflows at every grid point".into()));
    }
    let weights: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    let probs = weights.iter().map(|w| w / total).collect();
    DiscretizedDistribution::new(grid, probs)
}

/// Value-at-risk on the grid: smallest grid point whose cdf reaches the level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridQuantile {
    pub index: usize,
    pub value: f64,
    /// `P[X ≤ value]`, at least the requested level.
    pub achieved_level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalStats {
    pub mean: f64,
    pub cdf: Vec<f64>,
    grid: Vec<f64>,
    probs: Vec<f64>,
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLevel(level))
    }
}

impl ClassicalStats {
    /// Smallest grid `x_l` with `cdf_l ≥ level` (linear scan).
    pub fn var(&self, level: f64) -> Result<GridQuantile> {
        check_level(level)?;
        let index = self
            .cdf
            .iter()
            .position(|&c| c >= level - LEVEL_TOLERANCE)
            .unwrap_or(self.cdf.len() - 1);
        Ok(GridQuantile {
            index,
            value: self.grid[index],
            achieved_level: self.cdf[index],
        })
    }

    /// Lower-tail conditional expectation `E[X | X ≤ VaR(level)]`.
    pub fn cvar(&self, level: f64) -> Result<f64> {
        let q = self.var(level)?;
        let num: f64 = (0..=q.index).map(|i| self.probs[i] * self.grid[i]).sum();
        Ok(num / self.cdf[q.index])
    }
}

/// Mean, cdf, VaR and CVaR of the discretized distribution, computed exactly.
pub fn classical_stats(dd: &DiscretizedDistribution) -> ClassicalStats {
    let mean = dd.grid.iter().zip(&dd.probs).map(|(x, p)| x * p).sum();
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = dd
        .probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    // The last entry is 1 by construction; pin it against rounding.
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    ClassicalStats {
        mean,
        cdf,
        grid: dd.grid.clone(),
        probs: dd.probs.clone(),
    }
}

/// Statistics of the untruncated continuous distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousReference {
    pub mean: f64,
    pub var: f64,
    pub cvar: f64,
}

fn std_normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erf::erfc_inv(2.0 * p)
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erf::erfc(-z / std::f64::consts::SQRT_2)
}

fn weibull_quantile(shape: f64, p: f64) -> f64 {
    (-(1.0 - p).ln()).powf(1.0 / shape)
}

/// Quantile of the continuous distribution at probability `p ∈ (0, 1)`.
pub fn continuous_quantile(spec: &DistributionSpec, p: f64) -> Result<f64> {
    check_level(p)?;
    Ok(match spec.kind {
        DistributionKind::Normal { mu, sigma } => mu + sigma * std_normal_quantile(p),
        DistributionKind::Weibull { shape } => weibull_quantile(shape, p),
        DistributionKind::Uniform { a, b } => a + p * (b - a),
    })
}

/// Continuous cdf `P[X ≤ x]`.
pub fn continuous_cdf(spec: &DistributionSpec, x: f64) -> f64 {
    match spec.kind {
        DistributionKind::Normal { mu, sigma } => std_normal_cdf((x - mu) / sigma),
        DistributionKind::Weibull { shape } => {
            if x <= 0.0 {
                0.0
            } else {
                1.0 - (-x.powf(shape)).exp()
            }
        }
        DistributionKind::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
    }
}

/// Continuous mean, quantile at `level` and lower-tail CVaR `E[X | X ≤ q_level]`.
pub fn continuous_reference(spec: &DistributionSpec, level: f64) -> Result<ContinuousReference> {
    let q = continuous_quantile(spec, level)?;
    Ok(match spec.kind {
        DistributionKind::Normal { mu, sigma } => {
            let z = (q - mu) / sigma;
            let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
            ContinuousReference {
                mean: mu,
                var: q,
                cvar: mu - sigma * pdf / level,
            }
        }
        DistributionKind::Weibull { shape } => {
            let s = 1.0 + 1.0 / shape;
            ContinuousReference {
                mean: gamma::gamma(s),
                var: q,
                cvar: gamma::gamma(s) * gamma::gamma_lr(s, q.powf(shape)) / level,
            }
        }
        DistributionKind::Uniform { a, b } => ContinuousReference {
            mean: 0.5 * (a + b),
            var: q,
            cvar: 0.5 * (a + q),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_and_probs() {
        let dd = discretize(&DistributionSpec::uniform(0.0, 1.0, 4)).unwrap();
        assert_eq!(dd.len(), 16);
        for (i, (&x, &p)) in dd.grid().iter().zip(dd.probs()).enumerate() {
            assert_eq!(x, i as f64 / 16.0);
            assert_eq!(p, 1.0 / 16.0);
        }
    }

    #[test]
    fn normal_is_symmetric() {
        let dd = discretize(&DistributionSpec::normal(0.1, 0.01, 4)).unwrap();
        let p = dd.probs();
        for i in 0..8 {
            assert!((p[i] - p[15 - i]).abs() < 1e-15);
        }
        assert!((classical_stats(&dd).mean - 0.1).abs() < 1e-12);
    }

    #[test]
    fn weibull_matches_independent_pdf() {
        // Direct pdf k·x^{k-1}·exp(-x^k) evaluated without the log path.
        let shape = 1.8;
        let dd = discretize(&DistributionSpec::weibull(shape, 4)).unwrap();
        let hi = (-(0.001f64).ln()).powf(1.0 / shape);
        let xs: Vec<f64> = (0..16).map(|i| hi * i as f64 / 15.0).collect();
        let w: Vec<f64> = xs
            .iter()
            .map(|&x| shape * x.powf(shape - 1.0) * (-x.powf(shape)).exp())
            .collect();
        let total: f64 = w.iter().sum();
        for i in 0..16 {
            assert!((dd.grid()[i] - xs[i]).abs() < 1e-14);
            assert!((dd.probs()[i] - w[i] / total).abs() < 1e-14);
        }
    }

    #[test]
    fn uniform_var_hits_top_grid_point() {
        let dd = discretize(&DistributionSpec::uniform(0.0, 1.0, 4)).unwrap();
        let q = classical_stats(&dd).var(0.95).unwrap();
        assert_eq!(q.value, 0.9375);
        assert_eq!(q.achieved_level, 1.0);
    }

    #[test]
    fn point_mass_statistics() {
        let dd = DiscretizedDistribution::point_mass(3, 0.0, 7.0, 5).unwrap();
        let s = classical_stats(&dd);
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.var(0.5).unwrap().value, 5.0);
        assert_eq!(s.cvar(0.5).unwrap(), 5.0);
    }

    #[test]
    fn normal_var_by_exhaustive_scan() {
        let dd = discretize(&DistributionSpec::normal(0.1, 0.01, 4)).unwrap();
        // Independent scan: accumulate until ≥ 0.95.
        let mut acc = 0.0;
        let mut expect = None;
        for (i, p) in dd.probs().iter().enumerate() {
            acc += p;
            if acc >= 0.95 {
                expect = Some(i);
                break;
            }
        }
        let q = classical_stats(&dd).var(0.95).unwrap();
        assert_eq!(Some(q.index), expect);
        assert_eq!(q.index, 12);
        assert!((q.value - 0.118).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_levels_and_specs() {
        let dd = discretize(&DistributionSpec::uniform(0.0, 1.0, 2)).unwrap();
        let s = classical_stats(&dd);
        assert!(matches!(s.var(0.0), Err(Error::InvalidLevel(_))));
        assert!(matches!(s.cvar(1.0), Err(Error::InvalidLevel(_))));
        assert!(discretize(&DistributionSpec::normal(0.0, 0.0, 4)).is_err());
        assert!(discretize(&DistributionSpec::weibull(-1.0, 4)).is_err());
        assert!(discretize(&DistributionSpec::uniform(1.0, 1.0, 4)).is_err());
        assert!(discretize(&DistributionSpec::normal(0.0, 1.0, 0)).is_err());
        assert!(discretize(&DistributionSpec::normal(0.0, 1.0, 4).with_bounds(1.0, 0.0)).is_err());
    }

    #[test]
    fn all_zero_weights_is_an_error() {
        let spec = DistributionSpec::normal(0.0, 1e-3, 3).with_bounds(100.0, 200.0);
        // log-pdf stays finite far in the tail, so this still discretizes
        assert!(discretize(&spec).is_ok());
        let spec = DistributionSpec::weibull(2.0, 3).with_bounds(-2.0, -1.0);
        assert!(matches!(discretize(&spec), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn continuous_references() {
        let n1 = continuous_reference(&DistributionSpec::normal(0.1, 0.01, 4), 0.95).unwrap();
        assert!((n1.var - 0.1164).abs() < 5e-4);
        let n5 = continuous_reference(&DistributionSpec::normal(0.1, 0.05, 4), 0.95).unwrap();
        assert!((n5.var - 0.1822).abs() < 5e-4);
        let w = continuous_reference(&DistributionSpec::weibull(1.8, 4), 0.95).unwrap();
        assert!((w.var - 1.8396).abs() < 5e-4);
        assert!((w.var - (-(0.05f64).ln()).powf(1.0 / 1.8)).abs() < 1e-12);
    }

    #[test]
    fn continuous_cvar_by_quadrature() {
        // Midpoint rule on E[X·1{X ≤ q}] / level.
        for spec in [
            DistributionSpec::normal(0.1, 0.05, 4),
            DistributionSpec::weibull(1.8, 4),
            DistributionSpec::uniform(0.0, 1.0, 4),
        ] {
            let r = continuous_reference(&spec, 0.95).unwrap();
            let lo = match spec.kind {
                DistributionKind::Normal { mu, sigma } => mu - 12.0 * sigma,
                DistributionKind::Weibull { .. } => 0.0,
                DistributionKind::Uniform { a, .. } => a,
            };
            let steps = 400_000;
            let h = (r.var - lo) / steps as f64;
            let mut acc = 0.0;
            for i in 0..steps {
                let x = lo + (i as f64 + 0.5) * h;
                acc += x * spec.log_pdf(x).exp() * h;
            }
            assert!(
                (acc / 0.95 - r.cvar).abs() < 1e-7,
                "{spec:?}: {} vs {}",
                acc / 0.95,
                r.cvar
            );
        }
    }

    #[test]
    fn normalization_and_monotone_cdf() {
        for spec in [
            DistributionSpec::normal(0.1, 0.01, 5),
            DistributionSpec::normal(0.1, 0.05, 6),
            DistributionSpec::weibull(1.8, 7),
            DistributionSpec::uniform(0.0, 1.0, 3),
        ] {
            let dd = discretize(&spec).unwrap();
            assert!((dd.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let s = classical_stats(&dd);
            assert!(s.cdf.windows(2).all(|w| w[0] <= w[1]));
            assert!((s.cdf[s.cdf.len() - 1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_roundtrips_through_json() {
        let spec = DistributionSpec::normal(0.1, 0.01, 4).with_bounds(0.05, 0.15);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"normal","mu":0.1,"sigma":0.01,"n_qubits":4,"bounds":[0.05,0.15]}"#
        );
        let back: DistributionSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
