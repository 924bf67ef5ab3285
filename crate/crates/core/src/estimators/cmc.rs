//! Classical Monte Carlo on a discretized distribution.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::check_alpha;
use super::confint::two_sided_z;
use crate::distributions::{DiscretizedDistribution, LEVEL_TOLERANCE};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "statistic", rename_all = "snake_case")]
pub enum CmcStatistic {
    Mean,
    Var { level: f64 },
    Cvar { level: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmcResult {
    pub statistic: CmcStatistic,
    pub estimate: f64,
    pub ci: [f64; 2],
    pub n_samples: u64,
    /// Sample standard deviation `s_n` of the draws.
    pub sample_std: f64,
    pub seed: u64,
}

/// Draws `n_samples` grid points from `dd` and returns the plug-in statistic
/// with a normal-approximation interval at confidence `1 − alpha`.
pub fn cmc(
    dd: &DiscretizedDistribution,
    n_samples: u64,
    seed: u64,
    statistic: CmcStatistic,
    alpha: f64,
) -> Result<CmcResult> {
    if n_samples < 2 {
        return Err(Error::InvalidConfig(format!(
            "n_samples = {n_samples}, need at least 2"
        )));
    }
    check_alpha(alpha)?;
    if let CmcStatistic::Var { level } | CmcStatistic::Cvar { level } = statistic {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::InvalidLevel(level));
        }
    }
    let grid = dd.grid();
    let mut cumulative = Vec::with_capacity(dd.len());
    let mut acc = 0.0;
    for p in dd.probs() {
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = rng_from_seed(seed);
    let mut counts = vec![0u64; dd.len()];
    for _ in 0..n_samples {
        let u = rng.gen::<f64>() * acc;
        let mut i = cumulative.partition_point(|&c| c <= u).min(dd.len() - 1);
        while dd.probs()[i] == 0.0 && i + 1 < dd.len() {
            i += 1;
        }
        counts[i] += 1;
    }

    let n = n_samples as f64;
    let moments = |upto: usize| {
        let m: u64 = counts[..=upto].iter().sum();
        let mean = counts[..=upto]
            .iter()
            .zip(grid)
            .map(|(&c, &x)| c as f64 * x)
            .sum::<f64>()
            / m as f64;
        let ss: f64 = counts[..=upto]
            .iter()
            .zip(grid)
            .map(|(&c, &x)| c as f64 * (x - mean).powi(2))
            .sum();
        let sd = if m > 1 { (ss / (m - 1) as f64).sqrt() } else { 0.0 };
        (m, mean, sd)
    };
    let quantile_index = |level: f64| {
        let target = level - LEVEL_TOLERANCE;
        let mut cum = 0u64;
        for (i, &c) in counts.iter().enumerate() {
            cum += c;
            if cum as f64 / n >= target {
                return i;
            }
        }
        counts.len() - 1
    };
    let z = two_sided_z(alpha);
    let (_, _, sample_std) = moments(dd.len() - 1);
    let (estimate, ci) = match statistic {
        CmcStatistic::Mean => {
            let (_, mean, sd) = moments(dd.len() - 1);
            let half = z * sd / n.sqrt();
            (mean, [mean - half, mean + half])
        }
        CmcStatistic::Var { level } => {
            let half = z * (level * (1.0 - level) / n).sqrt();
            let lo = grid[quantile_index((level - half).max(f64::MIN_POSITIVE))];
            let hi = grid[quantile_index((level + half).min(1.0))];
            (grid[quantile_index(level)], [lo, hi])
        }
        CmcStatistic::Cvar { level } => {
            let (m, mean, sd) = moments(quantile_index(level));
            let half = z * sd / (m as f64).sqrt();
            (mean, [mean - half, mean + half])
        }
    };
    Ok(CmcResult {
        statistic,
        estimate,
        ci: [ci[0].min(estimate), ci[1].max(estimate)],
        n_samples,
        sample_std,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{classical_stats, discretize, DistributionSpec};

    #[test]
    fn point_mass_is_exact() {
        let dd = DiscretizedDistribution::point_mass(3, 0.0, 1.0, 5).unwrap();
        let x = dd.grid()[5];
        for stat in [
            CmcStatistic::Mean,
            CmcStatistic::Var { level: 0.95 },
            CmcStatistic::Cvar { level: 0.95 },
        ] {
            let r = cmc(&dd, 1000, 4, stat, 0.05).unwrap();
            assert_eq!(r.estimate, x);
            assert_eq!(r.ci, [x, x]);
        }
    }

    #[test]
    fn uniform_mean_million_samples() {
        let dd = discretize(&DistributionSpec::uniform(0.0, 1.0, 4)).unwrap();
        let mut ok = 0;
        for seed in 0..20 {
            let r = cmc(&dd, 1_000_000, seed, CmcStatistic::Mean, 0.05).unwrap();
            if (r.estimate - 0.46875).abs() <= 1e-3 {
                ok += 1;
            }
        }
        assert_eq!(ok, 20);
    }

    #[test]
    fn quantiles_approach_classical_values() {
        let dd = discretize(&DistributionSpec::normal(0.1, 0.01, 4)).unwrap();
        let s = classical_stats(&dd);
        let v = cmc(&dd, 200_000, 9, CmcStatistic::Var { level: 0.95 }, 0.05).unwrap();
        assert_eq!(v.estimate, s.var(0.95).unwrap().value);
        let c = cmc(&dd, 200_000, 9, CmcStatistic::Cvar { level: 0.95 }, 0.05).unwrap();
        let exact = s.cvar(0.95).unwrap();
        assert!((c.estimate - exact).abs() < 1e-3 * exact.abs().max(1.0));
    }

    #[test]
    fn deterministic_and_validated() {
        let dd = discretize(&DistributionSpec::weibull(1.8, 4)).unwrap();
        let a = cmc(&dd, 500, 1, CmcStatistic::Mean, 0.05).unwrap();
        let b = cmc(&dd, 500, 1, CmcStatistic::Mean, 0.05).unwrap();
        assert_eq!(a, b);
        assert!(cmc(&dd, 1, 1, CmcStatistic::Mean, 0.05).is_err());
        assert!(cmc(&dd, 10, 1, CmcStatistic::Var { level: 1.0 }, 0.05).is_err());
    }
}
