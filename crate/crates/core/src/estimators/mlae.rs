//! Maximum-likelihood amplitude estimation.
//!
//! Measurements at powers `m_k` with `h_k` good outcomes out of `N_k` give
//!
//! ```text
//! ℓ(θ) = Σ_k h_k·ln sin²((2m_k+1)θ) + (N_k − h_k)·ln cos²((2m_k+1)θ)
//! ```
//!
//! maximised over `θ ∈ [0, π/2]` by a dense grid followed by bisection on the score.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use super::confint::two_sided_z;
use super::{check_alpha, check_shots, Algorithm, EstimationResult};
use crate::grover::{AmplitudeProblem, GroverSampler, MAX_GROVER_POWER};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

const GRID_PER_PERIOD: usize = 10_000;
const REFINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlaeConfig {
    /// Grover powers, nondecreasing.
    pub schedule: Vec<u64>,
    pub shots_per_round: u64,
    /// Level of the Fisher-information interval.
    pub alpha: f64,
}

impl MlaeConfig {
    /// Schedule `[0, 1, 2, 4, …, 2^{j−1}]` (`j + 1` powers).
    pub fn exponential(j: u32, shots_per_round: u64, alpha: f64) -> Self {
        let mut schedule = vec![0];
        schedule.extend((0..j).map(|i| 1u64 << i));
        MlaeConfig {
            schedule,
            shots_per_round,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_schedule(&self.schedule)?;
        check_shots(self.shots_per_round)?;
        check_alpha(self.alpha)
    }
}

fn validate_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidConfig("empty schedule".into()));
    }
    if schedule.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig(format!(
            "schedule {schedule:?} is not nondecreasing"
        )));
    }
    match schedule.iter().find(|&&m| m > MAX_GROVER_POWER) {
        Some(&m) => Err(Error::PowerTooLarge(m)),
        None => Ok(()),
    }
}

/// `ℓ(θ)`; a zero count contributes nothing even where its log would be `−∞`.
pub fn log_likelihood(theta: f64, powers: &[u64], hits: &[u64], shots: &[u64]) -> f64 {
    let mut total = 0.0;
    for ((&m, &h), &n) in powers.iter().zip(hits).zip(shots) {
        let angle = (2 * m + 1) as f64 * theta;
        let (s, c) = angle.sin_cos();
        if h > 0 {
            total += h as f64 * (s * s).ln();
        }
        if n > h {
            total += (n - h) as f64 * (c * c).ln();
        }
    }
    total
}

/// Global maximiser of [`log_likelihood`] on `[0, π/2]`.
///
/// A grid of `10⁴·(2·max m + 1) + 1` points locates the best bracket (ties
/// resolved toward the smaller angle); the stationary point inside it is then
/// located to `1e-12` by bisection on `dℓ/dθ`. With no shots at all the likelihood is flat and `π/4` is returned.
pub fn mle_maximize(powers: &[u64], hits: &[u64], shots: &[u64]) -> f64 {
    assert!(
        powers.len() == hits.len() && hits.len() == shots.len(),
        "schedule and counts differ in length"
    );
    assert!(hits.iter().zip(shots).all(|(h, n)| h <= n), "more hits than shots");
    if shots.iter().all(|&n| n == 0) {
        return FRAC_PI_4;
    }
    let max_m = powers.iter().copied().max().unwrap_or(0) as usize;
    let intervals = GRID_PER_PERIOD * (2 * max_m + 1);
    let step = FRAC_PI_2 / intervals as f64;
    let ll = |t: f64| log_likelihood(t, powers, hits, shots);
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=intervals {
        let v = ll(i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let grid_theta = best_i as f64 * step;
    let lo = best_i.saturating_sub(1) as f64 * step;
    let hi = ((best_i + 1).min(intervals) as f64 * step).min(FRAC_PI_2);
    let score = |t: f64| score(t, powers, hits, shots);
    let (mut a, mut b) = (lo, hi);
    if score(a) > 0.0 && score(b) < 0.0 {
        // Bisection on the score until the bracket stops shrinking.
        while b - a > REFINE_TOL {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if score(mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    }
    // No interior stationary point in the bracket: the maximum is on its edge.
    let mut winner = (grid_theta, best);
    for t in [lo, hi] {
        let v = ll(t);
        if v > winner.1 || (v == winner.1 && t < winner.0) {
            winner = (t, v);
        }
    }
    winner.0
}

/// `dℓ/dθ = Σ_k 2K_k·(h_k·cot(K_kθ) − (N_k − h_k)·tan(K_kθ))`.
fn score(theta: f64, powers: &[u64], hits: &[u64], shots: &[u64]) -> f64 {
    let mut total = 0.0;
    for ((&m, &h), &n) in powers.iter().zip(hits).zip(shots) {
        let k = (2 * m + 1) as f64;
        let (s, c) = (k * theta).sin_cos();
        if h > 0 {
            total += 2.0 * k * h as f64 * c / s;
        }
        if n > h {
            total -= 2.0 * k * (n - h) as f64 * s / c;
        }
    }
    total
}

/// Observed Fisher information of `θ`, or the expected one `4·Σ N K²` when the
/// observed value is not usable.
fn fisher_information(theta: f64, powers: &[u64], hits: &[u64], shots: &[u64]) -> f64 {
    let mut observed = 0.0;
    let mut expected = 0.0;
    for ((&m, &h), &n) in powers.iter().zip(hits).zip(shots) {
        let k = (2 * m + 1) as f64;
        let (s, c) = (k * theta).sin_cos();
        let mut term = 0.0;
        if h > 0 {
            term += h as f64 / (s * s);
        }
        if n > h {
            term += (n - h) as f64 / (c * c);
        }
        observed += 2.0 * k * k * term;
        expected += 4.0 * n as f64 * k * k;
    }
    if observed.is_finite() && observed > 0.0 {
        observed
    } else {
        expected
    }
}

pub fn mlae(
    problem: &AmplitudeProblem,
    schedule: &[u64],
    shots_per_round: u64,
    alpha: f64,
    seed: u64,
) -> Result<EstimationResult> {
    validate_schedule(schedule)?;
    check_shots(shots_per_round)?;
    check_alpha(alpha)?;
    let mut sampler = GroverSampler::new(problem)?;
    let mut rng = rng_from_seed(seed);
    let mut hits = Vec::with_capacity(schedule.len());
    for &m in schedule {
        hits.push(sampler.measure(m, shots_per_round, &mut rng)?);
    }
    let shots = vec![shots_per_round; schedule.len()];
    let theta = mle_maximize(schedule, &hits, &shots);
    let sigma = fisher_information(theta, schedule, &hits, &shots).sqrt().recip();
    let z = two_sided_z(alpha);
    let lo = (theta - z * sigma).clamp(0.0, FRAC_PI_2);
    let hi = (theta + z * sigma).clamp(0.0, FRAC_PI_2);
    Ok(EstimationResult::from_counter(
        Algorithm::Mlae,
        theta.sin().powi(2),
        [lo.sin().powi(2), hi.sin().powi(2)],
        sampler.counter(),
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn brute_force(powers: &[u64], hits: &[u64], shots: &[u64], points: usize) -> f64 {
        let step = FRAC_PI_2 / points as f64;
        let mut best = (0.0, f64::NEG_INFINITY);
        for i in 0..=points {
            let t = i as f64 * step;
            let v = log_likelihood(t, powers, hits, shots);
            if v > best.1 {
                best = (t, v);
            }
        }
        best.0
    }

    #[test]
    fn single_power_closed_form() {
        for &(h, n) in &[(0u64, 100u64), (13, 100), (50, 100), (87, 100), (100, 100), (1, 3)] {
            let t = mle_maximize(&[0], &[h], &[n]);
            let want = (h as f64 / n as f64).sqrt().asin();
            assert!((t - want).abs() < 1e-9, "{h}/{n}: {t} vs {want}");
        }
    }

    #[test]
    fn flat_and_boundary() {
        assert_eq!(mle_maximize(&[0, 1], &[0, 0], &[0, 0]), FRAC_PI_4);
        assert!((mle_maximize(&[0], &[40], &[40]) - FRAC_PI_2).abs() < 1e-9);
        assert!(mle_maximize(&[0], &[0], &[40]).abs() < 1e-9);
    }

    #[test]
    fn matches_brute_force_grid() {
        let mut rng = crate::rng::rng_from_seed(99);
        for _ in 0..5 {
            let theta: f64 = rng.gen_range(0.02..1.55);
            let powers = [0u64, 1, 2, 4];
            let shots = [100u64; 4];
            let hits: Vec<u64> = powers
                .iter()
                .map(|&m| {
                    let p = (((2 * m + 1) as f64) * theta).sin().powi(2);
                    (0..100).filter(|_| rng.gen::<f64>() < p).count() as u64
                })
                .collect();
            let t = mle_maximize(&powers, &hits, &shots);
            let b = brute_force(&powers, &hits, &shots, 2_000_000);
            assert!((t - b).abs() < 1e-6, "theta {theta}: {t} vs {b}");
        }
    }

    #[test]
    fn schedule_validation() {
        assert_eq!(MlaeConfig::exponential(3, 100, 0.05).schedule, vec![0, 1, 2, 4]);
        let p = AmplitudeProblem::from_amplitude(0.2).unwrap();
        assert!(mlae(&p, &[], 10, 0.05, 0).is_err());
        assert!(mlae(&p, &[2, 1], 10, 0.05, 0).is_err());
        assert!(mlae(&p, &[0, 1], 0, 0.05, 0).is_err());
    }

    #[test]
    fn accounting() {
        let p = AmplitudeProblem::from_amplitude(0.2).unwrap();
        let r = mlae(&p, &[0, 1, 2, 4], 100, 0.05, 5).unwrap();
        assert_eq!(r.grover_applications, 700);
        assert_eq!(r.oracle_queries_a, 100 * (1 + 3 + 5 + 9));
        assert_eq!(r.rounds, 4);
        assert_eq!(r.max_k, 4);
        assert!(r.ci[0] <= r.a_hat && r.a_hat <= r.ci[1]);
    }

    #[test]
    fn parametric_bootstrap_spread() {
        let powers = [0u64, 1, 2, 4];
        let shots = [100u64; 4];
        let info: f64 = powers.iter().map(|&m| 4.0 * 100.0 * ((2 * m + 1) as f64).powi(2)).sum();
        let mut rng = crate::rng::rng_from_seed(3);
        let mut inside = 0;
        let mut total = 0;
        for theta in [0.1f64, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.9, 1.1, 1.3] {
            for _ in 0..200 {
                let hits: Vec<u64> = powers
                    .iter()
                    .map(|&m| {
                        let p = (((2 * m + 1) as f64) * theta).sin().powi(2);
                        (0..100).filter(|_| rng.gen::<f64>() < p).count() as u64
                    })
                    .collect();
                total += 1;
                if (mle_maximize(&powers, &hits, &shots) - theta).abs() <= 3.0 / info.sqrt() {
                    inside += 1;
                }
            }
        }
        assert!(inside * 100 >= total * 99, "{inside}/{total}");
    }
}
