//! Fixed-iteration amplitude estimation with cosine post-processing.
//!
//! The problem is first rescaled by `1/4` with one extra qubit, so the angle
//! `θ` of the rescaled amplitude satisfies `θ ≤ π/6`. Iteration `j = 1..max_iter`
//! uses power `m_j = 2^{j−1}` and `K_j = 4m_j + 2`.
//!
//! * Stage 1 estimates `c_j = cos(K_j θ) = 1 − 2·P(good)` with a Hoeffding
//!   interval and inverts it with `arccos`, which is unambiguous while
//!   `K_j θ ≤ π`. Once `2^{j+1}·θ_hi ≥ 3π/8` the run switches to stage 2 and
//!   fixes `j₀ = j`, `ν = 2^{j₀+1}·θ̂`.
//! * Stage 2 measures `c = cos(K_j θ)` at `m_j` and `c' = cos(K_j θ + ν)` at
//!   `m_j + m_{j₀}`. Then `sin(K_j θ) = (c·cos ν − c')/sin ν` and `K_j θ` follows
//!   from `atan2`; the branch is the one closest to the previous estimate.
//!
//! The amplitude of the original problem is `4·sin²θ̂`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::{check_shots, Algorithm, EstimationResult};
use crate::grover::{AmplitudeProblem, GroverSampler};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

pub const MAX_FAE_ITER: u32 = 20;
const RESCALE: f64 = 0.25;
const SWITCH_ANGLE: f64 = 3.0 * PI / 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaeConfig {
    /// Failure probability of the final interval.
    pub delta: f64,
    pub max_iter: u32,
    /// Shots per measurement in stage 1 and stage 2; `None` uses
    /// `⌊1944·ln(2/δ)⌋` and `⌊972·ln(2/δ)⌋`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<[u64; 2]>,
}

impl FaeConfig {
    pub fn new(delta: f64, max_iter: u32) -> Self {
        FaeConfig {
            delta,
            max_iter,
            shots: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!("delta {} outside (0, 1)", self.delta)));
        }
        if self.max_iter == 0 || self.max_iter > MAX_FAE_ITER {
            return Err(Error::InvalidConfig(format!(
                "max_iter {} outside [1, {MAX_FAE_ITER}]",
                self.max_iter
            )));
        }
        let [s1, s2] = self.stage_shots();
        check_shots(s1)?;
        check_shots(s2)
    }

    pub fn stage_shots(&self) -> [u64; 2] {
        self.shots.unwrap_or_else(|| {
            let l = (2.0 / self.delta).ln();
            [(1944.0 * l).floor() as u64, (972.0 * l).floor() as u64]
        })
    }
}

/// Half-width of a Hoeffding interval on `c = 1 − 2p` from `shots` samples.
fn cosine_halfwidth(shots: u64, delta: f64) -> f64 {
    (2.0 * (2.0 / delta).ln() / shots as f64).sqrt()
}

fn cosine_estimate(hits: u64, shots: u64) -> f64 {
    1.0 - 2.0 * hits as f64 / shots as f64
}

fn intersect(old: [f64; 2], new: [f64; 2]) -> [f64; 2] {
    let lo = old[0].max(new[0]);
    let hi = old[1].min(new[1]);
    if lo <= hi {
        [lo, hi]
    } else {
        new
    }
}

pub fn fae(problem: &AmplitudeProblem, config: &FaeConfig, seed: u64) -> Result<EstimationResult> {
    config.validate()?;
    let [n1, n2] = config.stage_shots();
    let delta_m = config.delta / (2 * config.max_iter) as f64;
    let eps1 = cosine_halfwidth(n1, delta_m);
    let eps2 = cosine_halfwidth(n2, delta_m);

    let mut sampler = GroverSampler::new(&problem.rescaled(RESCALE)?)?;
    let mut rng = rng_from_seed(seed);
    let mut interval = [0.0, PI / 6.0];
    let mut theta = 0.0;
    // (m_{j₀}, ν, uncertainty of ν)
    let mut stage2: Option<(u64, f64, f64)> = None;

    for j in 1..=config.max_iter {
        let m = 1u64 << (j - 1);
        let big_k = (4 * m + 2) as f64;
        match stage2 {
            None => {
                let c = cosine_estimate(sampler.measure(m, n1, &mut rng)?, n1);
                let c_lo = (c - eps1).max(-1.0);
                let c_hi = (c + eps1).min(1.0);
                interval = intersect(interval, [c_hi.acos() / big_k, c_lo.acos() / big_k]);
                theta = (c.clamp(-1.0, 1.0).acos() / big_k).clamp(interval[0], interval[1]);
                let scale = (1u64 << (j + 1)) as f64;
                if j < config.max_iter && scale * interval[1] >= SWITCH_ANGLE {
                    stage2 = Some((m, scale * theta, scale * (interval[1] - interval[0]) / 2.0));
                }
            }
            Some((m0, nu, nu_err)) => {
                let c = cosine_estimate(sampler.measure(m, n2, &mut rng)?, n2);
                let c_shift = cosine_estimate(sampler.measure(m + m0, n2, &mut rng)?, n2);
                let (sin_nu, cos_nu) = nu.sin_cos();
                let s = (c * cos_nu - c_shift) / sin_nu;
                let phi = s.atan2(c);
                let branch = ((theta * big_k - phi) / TAU).round();
                let candidate = (phi + TAU * branch) / big_k;

                let eps_s = (eps2 * (1.0 + cos_nu.abs()) + nu_err * (c.abs() + s.abs() * cos_nu.abs())) / sin_nu.abs();
                let radius = c.hypot(s).max(f64::MIN_POSITIVE);
                let spread = eps2.hypot(eps_s) / radius;
                if spread >= 1.0 / std::f64::consts::SQRT_2 {
                    return Err(Error::NotConverged {
                        algorithm: "fae",
                        reason: format!(
                            "angle ambiguity at iteration {j}: cosine noise {spread:.3} too large for the stage-2 shots"
                        ),
                    });
                }
                let half = spread.asin() / big_k;
                theta = candidate.clamp(0.0, FRAC_PI_2);
                interval = intersect(interval, [theta - half, theta + half]);
                theta = theta.clamp(interval[0], interval[1]);
            }
        }
    }

    let to_a = |t: f64| (4.0 * t.clamp(0.0, FRAC_PI_2).sin().powi(2)).min(1.0);
    Ok(EstimationResult::from_counter(
        Algorithm::Fae,
        to_a(theta),
        [to_a(interval[0]), to_a(interval[1])],
        sampler.counter(),
        seed,
    ))
}
