//! Iterative amplitude estimation with Clopper–Pearson rounds.
//!
//! The state is an interval `[θ_lo, θ_hi] ⊂ [0, π/2]` with `a = sin²θ`. Each
//! round picks the largest `K = 4k+2` (at least twice the previous one) whose
//! scaled interval `[Kθ_lo, Kθ_hi]` lies in one half-plane, measures `Q^k A|0⟩`
//! and inverts `P(good) = (1 − cos Kθ)/2` on that half-plane. Rounds with the
//! same `k` pool their shots. Each round's interval has level `α/T` with
//! `T = ⌈log₂(π/(8ε))⌉`. The run stops once `θ_hi − θ_lo ≤ 2ε`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::confint::clopper_pearson;
use super::{check_alpha, check_epsilon, check_shots, Algorithm, EstimationResult};
use crate::grover::{AmplitudeProblem, GroverSampler, MAX_GROVER_POWER};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

pub const DEFAULT_MAX_ROUNDS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IqaeConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub shots_per_round: u64,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u64,
}

fn default_max_rounds() -> u64 {
    DEFAULT_MAX_ROUNDS
}

impl IqaeConfig {
    pub fn new(epsilon: f64, alpha: f64, shots_per_round: u64) -> Self {
        IqaeConfig {
            epsilon,
            alpha,
            shots_per_round,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_alpha(self.alpha)?;
        check_shots(self.shots_per_round)?;
        if self.max_rounds == 0 {
            return Err(Error::InvalidConfig("max_rounds must be positive".into()));
        }
        Ok(())
    }

    /// Upper bound on the number of distinct powers, `⌈log₂(π/(8ε))⌉` (at least 1).
    pub fn round_budget(&self) -> u64 {
        (PI / (8.0 * self.epsilon)).log2().ceil().max(1.0) as u64
    }
}

/// Largest `k` with `4k+2 ≥ 2(4k_prev+2)` whose scaled interval fits in a half-plane.
/// Returns the previous `k` and orientation when no larger one fits.
fn find_next_k(k: u64, upper: bool, theta: [f64; 2]) -> (u64, bool) {
    let k_prev = 4 * k + 2;
    let width = theta[1] - theta[0];
    let k_max = if width > 0.0 {
        (PI / width).floor()
    } else {
        f64::INFINITY
    };
    let k_max = k_max.min((4 * MAX_GROVER_POWER + 2) as f64) as u64;
    if k_max < 2 {
        return (k, upper);
    }
    let mut big_k = k_max - (k_max - 2) % 4;
    while big_k >= 2 * k_prev {
        let lo = (big_k as f64 * theta[0]).rem_euclid(TAU);
        let hi = (big_k as f64 * theta[1]).rem_euclid(TAU);
        if lo <= hi && hi <= PI {
            return ((big_k - 2) / 4, true);
        }
        if lo >= PI && hi >= lo {
            return ((big_k - 2) / 4, false);
        }
        big_k -= 4;
    }
    (k, upper)
}

pub fn iqae(problem: &AmplitudeProblem, config: &IqaeConfig, seed: u64) -> Result<EstimationResult> {
    config.validate()?;
    let mut sampler = GroverSampler::new(problem)?;
    let mut rng = rng_from_seed(seed);
    let level = config.alpha / config.round_budget() as f64;
    let mut theta = [0.0, FRAC_PI_2];
    let (mut k, mut upper) = (0u64, true);
    let mut pooled: Option<(u64, u64, u64)> = None; // (k, hits, shots)
    while theta[1] - theta[0] > 2.0 * config.epsilon {
        if sampler.counter().rounds >= config.max_rounds {
            return Err(Error::NotConverged {
                algorithm: "iqae",
                reason: format!(
                    "round budget {} exhausted with theta interval [{}, {}]",
                    config.max_rounds, theta[0], theta[1]
                ),
            });
        }
        (k, upper) = find_next_k(k, upper, theta);
        let hits = sampler.measure(k, config.shots_per_round, &mut rng)?;
        let (h, n) = match pooled {
            Some((pk, ph, pn)) if pk == k => (ph + hits, pn + config.shots_per_round),
            _ => (hits, config.shots_per_round),
        };
        pooled = Some((k, h, n));
        let (p_lo, p_hi) = clopper_pearson(h, n, level);
        let (phi_lo, phi_hi) = if upper {
            ((1.0 - 2.0 * p_lo).acos(), (1.0 - 2.0 * p_hi).acos())
        } else {
            (TAU - (1.0 - 2.0 * p_hi).acos(), TAU - (1.0 - 2.0 * p_lo).acos())
        };
        let big_k = (4 * k + 2) as f64;
        let turns = (big_k * theta[0] / TAU).floor();
        let new_lo = (turns * TAU + phi_lo) / big_k;
        let new_hi = (turns * TAU + phi_hi) / big_k;
        theta = [new_lo.max(theta[0]), new_hi.min(theta[1])];
        if theta[0] > theta[1] {
            theta = [new_lo, new_hi];
        }
    }
    let ci = [theta[0].sin().powi(2), theta[1].sin().powi(2)];
    let a_hat = 0.5 * (ci[0] + ci[1]);
    Ok(EstimationResult::from_counter(
        Algorithm::Iqae,
        a_hat,
        ci,
        sampler.counter(),
        seed,
    ))
}
