//! Closed-form sample-complexity curves for a target error `ε` at confidence `1 − α`.
//!
//! Logarithms are natural except the inner `log₂`.

use serde::Serialize;

use super::confint::two_sided_z;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoreticalBounds {
    pub alpha: f64,
    pub epsilon: f64,
    /// Lower bound for MLAE: `√(α(1−α)) / ε`.
    pub mlae_lower: f64,
    /// Loose IQAE upper bound: `50/ε · ln(2/α · log₂(π/(4ε)))`.
    pub iqae_upper: f64,
    /// Empirical Clopper–Pearson IQAE bound: `0.8/ε · ln(2/α · log₂(π/(4ε)))`.
    pub cp_upper: f64,
    /// FAE upper bound: `4.1·10³/ε · ln(2/α · log₂(2π/(3ε)))`.
    pub fae_upper: f64,
    /// Classical Monte Carlo with unit sample standard deviation, see [`cmc_reference`].
    pub cmc_unit: f64,
}

fn check(alpha: f64, epsilon: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!("alpha {alpha} outside (0, 1)")));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidConfig(format!("epsilon {epsilon} outside (0, 0.5)")));
    }
    Ok(())
}

/// Critical value used by the Monte Carlo curve: the two-sided normal quantile
/// rounded to two decimals, as in a printed z-table (1.96 at α = 0.05).
pub fn cmc_critical_value(alpha: f64) -> f64 {
    (two_sided_z(alpha) * 100.0).round() / 100.0
}

/// Monte Carlo sample count `z_c(α)² s_n² / ε²`.
pub fn cmc_reference(alpha: f64, epsilon: f64, s_n: f64) -> Result<f64> {
    check(alpha, epsilon)?;
    let z = cmc_critical_value(alpha);
    Ok(z * z * s_n * s_n / (epsilon * epsilon))
}

pub fn theoretical_bounds(alpha: f64, epsilon: f64) -> Result<TheoreticalBounds> {
    check(alpha, epsilon)?;
    let pi = std::f64::consts::PI;
    let iqae_log = (2.0 / alpha * (pi / (4.0 * epsilon)).log2()).ln();
    let fae_log = (2.0 / alpha * (2.0 * pi / (3.0 * epsilon)).log2()).ln();
    Ok(TheoreticalBounds {
        alpha,
        epsilon,
        mlae_lower: (alpha * (1.0 - alpha)).sqrt() / epsilon,
        iqae_upper: 50.0 / epsilon * iqae_log,
        cp_upper: 0.8 / epsilon * iqae_log,
        fae_upper: 4.1e3 / epsilon * fae_log,
        cmc_unit: cmc_reference(alpha, epsilon, 1.0)?,
    })
}
