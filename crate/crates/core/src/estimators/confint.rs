//! Binomial and normal confidence intervals.

use statrs::function::{beta, erf};

/// Standard normal quantile `Φ⁻¹(p)`.
pub fn normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erf::erfc_inv(2.0 * p)
}

/// Two-sided critical value `z` with `P(|Z| ≤ z) = 1 − alpha`.
pub fn two_sided_z(alpha: f64) -> f64 {
    normal_quantile(1.0 - alpha / 2.0)
}

/// Exact (Clopper–Pearson) two-sided interval for a binomial proportion at
/// confidence `1 − alpha`, from `hits` successes in `trials` trials.
pub fn clopper_pearson(hits: u64, trials: u64, alpha: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let k = hits as f64;
    let n = trials as f64;
    let lo = if hits == 0 {
        0.0
    } else {
        beta::inv_beta_reg(k, n - k + 1.0, alpha / 2.0)
    };
    let hi = if hits == trials {
        1.0
    } else {
        beta::inv_beta_reg(k + 1.0, n - k, 1.0 - alpha / 2.0)
    };
    (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))
}

/// Hoeffding half-width for a proportion: `P(|p̂ − p| ≥ w) ≤ delta`.
pub fn hoeffding_halfwidth(trials: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}
