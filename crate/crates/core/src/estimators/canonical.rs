//! Canonical amplitude estimation via phase estimation on `Q`.

use serde::{Deserialize, Serialize};

use super::{check_shots, Algorithm, EstimationResult};
use crate::grover::{build_grover, AmplitudeProblem, QueryCounter, GROVER_GLOBAL_PHASE};
use crate::qsim::{inverse_qft, sample, Circuit, MAX_QUBITS};
use crate::{Error, Result};

pub const MAX_ANCILLAS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalConfig {
    /// Number of evaluation qubits; the grid has `M = 2^m` points.
    pub m: u32,
    pub shots: u64,
}

impl CanonicalConfig {
    pub fn validate(&self) -> Result<()> {
        check_shots(self.shots)?;
        if self.m == 0 || self.m > MAX_ANCILLAS {
            return Err(Error::InvalidConfig(format!(
                "m = {} outside [1, {MAX_ANCILLAS}]",
                self.m
            )));
        }
        Ok(())
    }
}

/// Phase-estimation circuit: problem qubits first, then `m` evaluation qubits.
/// Evaluation qubit `j` controls `Q^{2^j}`.
pub fn qpe_circuit(problem: &AmplitudeProblem, m: u32) -> Result<Circuit> {
    let n = problem.n_total();
    let m = m as usize;
    let total = n + m;
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits(total));
    }
    let mut c = problem.a_circuit().widened(total)?;
    for j in 0..m {
        c.h(n + j);
    }
    let q = build_grover(problem).widened(total)?;
    for j in 0..m {
        let control = n + j;
        let cq = q.controlled(control)?;
        for _ in 0..(1u64 << j) {
            c.append(&cq)?;
            // The circuit realises −Q; this restores the relative phase.
            c.phase(control, -GROVER_GLOBAL_PHASE);
        }
    }
    let map: Vec<usize> = (n..total).collect();
    c.append(&inverse_qft(m).remapped(&map, total)?)?;
    Ok(c)
}

/// Error bound `2π√(a(1−a))/M + π²/M²`.
pub fn canonical_error_bound(a: f64, m: u32) -> f64 {
    let big_m = (1u64 << m) as f64;
    let pi = std::f64::consts::PI;
    2.0 * pi * (a * (1.0 - a)).sqrt() / big_m + pi * pi / (big_m * big_m)
}

/// Runs phase estimation with `m` evaluation qubits, samples `shots` outcomes and
/// returns `ã = sin²(πy/M)` for the most frequent `y`. Ties go to the smaller angle.
pub fn canonical_qae(problem: &AmplitudeProblem, m: u32, shots: u64, seed: u64) -> Result<EstimationResult> {
    CanonicalConfig { m, shots }.validate()?;
    let n = problem.n_total();
    let circuit = qpe_circuit(problem, m)?;
    let state = circuit.run_from_zero()?;
    let big_m = 1usize << m;
    let mut counts = vec![0u64; big_m];
    for (idx, c) in sample(&state, shots, seed)? {
        counts[(idx >> n) & (big_m - 1)] += c;
    }
    let angle_rank = |y: usize| y.min(big_m - y);
    let y = (0..big_m)
        .max_by(|&a, &b| {
            counts[a]
                .cmp(&counts[b])
                .then(angle_rank(b).cmp(&angle_rank(a)))
                .then(b.cmp(&a))
        })
        .expect("m ≥ 1");
    let a_hat = (std::f64::consts::PI * y as f64 / big_m as f64).sin().powi(2);
    let half = canonical_error_bound(a_hat, m);
    let k = big_m as u64 - 1;
    let counter = QueryCounter {
        oracle_queries_a: shots * (2 * k + 1),
        grover_applications: shots * k,
        shots_total: shots,
        rounds: 1,
        max_k: k,
        max_circuit_depth: circuit.metrics().depth as u64,
    };
    Ok(EstimationResult::from_counter(
        Algorithm::Canonical,
        a_hat,
        [a_hat - half, a_hat + half],
        counter,
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::StateVector;

    fn ancilla_distribution(problem: &AmplitudeProblem, m: u32) -> Vec<f64> {
        let n = problem.n_total();
        let s: StateVector = qpe_circuit(problem, m).unwrap().run_from_zero().unwrap();
        let mut out = vec![0.0; 1 << m];
        for (idx, p) in s.probabilities().into_iter().enumerate() {
            out[idx >> n] += p;
        }
        out
    }

    // Textbook phase-estimation outcome distribution for eigenphase ±θ/π,
    // each branch with weight 1/2.
    fn qpe_oracle(theta: f64, m: u32) -> Vec<f64> {
        let big_m = (1u64 << m) as f64;
        let pi = std::f64::consts::PI;
        let fejer = |omega: f64, y: f64| {
            let d = omega - y / big_m;
            let num = (pi * big_m * d).sin();
            let den = (pi * d).sin();
            if den.abs() < 1e-14 {
                1.0
            } else {
                (num / (big_m * den)).powi(2)
            }
        };
        (0..1u64 << m)
            .map(|y| 0.5 * fejer(theta / pi, y as f64) + 0.5 * fejer(1.0 - theta / pi, y as f64))
            .collect()
    }

    #[test]
    fn grid_aligned_phase_is_exact() {
        let a = (std::f64::consts::PI * 3.0 / 8.0).sin().powi(2);
        let p = AmplitudeProblem::from_amplitude(a).unwrap();
        let dist = ancilla_distribution(&p, 3);
        assert!((dist[3] + dist[5] - 1.0).abs() < 1e-10, "{dist:?}");
        for seed in 0..20 {
            let r = canonical_qae(&p, 3, 50, seed).unwrap();
            assert!((r.a_hat - a).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_amplitude() {
        let p = AmplitudeProblem::from_amplitude(0.0).unwrap();
        let dist = ancilla_distribution(&p, 4);
        assert!((dist[0] - 1.0).abs() < 1e-10);
        let r = canonical_qae(&p, 4, 10, 1).unwrap();
        assert_eq!(r.a_hat, 0.0);
    }

    #[test]
    fn outcome_distribution_matches_textbook_formula() {
        for &a in &[0.1, 0.37, 0.8] {
            let p = AmplitudeProblem::from_amplitude(a).unwrap();
            let theta = a.sqrt().asin();
            for m in [2, 4, 5] {
                let got = ancilla_distribution(&p, m);
                let want = qpe_oracle(theta, m);
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-9, "a={a} m={m}: {got:?} vs {want:?}");
                }
            }
        }
    }

    #[test]
    fn counts_and_limits() {
        let p = AmplitudeProblem::from_amplitude(0.2).unwrap();
        let r = canonical_qae(&p, 3, 10, 3).unwrap();
        assert_eq!(r.grover_applications, 70);
        assert_eq!(r.oracle_queries_a, 150);
        assert_eq!(r.max_k, 7);
        assert!(r.ci[0] <= r.a_hat && r.a_hat <= r.ci[1]);
        assert!(canonical_qae(&p, 0, 10, 3).is_err());
        assert!(canonical_qae(&p, 11, 10, 3).is_err());
        assert!(canonical_qae(&p, 20, 10, 3).is_err());
    }
}
