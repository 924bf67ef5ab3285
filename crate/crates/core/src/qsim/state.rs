use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use super::{Gate, GateKind, MAX_QUBITS, NORM_TOLERANCE};
use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// Dense amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::QubitOutOfRange { index, n_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the vector normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let state = StateVector { n_qubits, amplitudes };
        state.check_normalized()?;
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    /// `|amplitude_i|²` for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal probability that `qubit` reads 1. Panics on an invalid index;
    /// see [`probability_of_one`] for the checked form.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        let bit = 1usize << qubit;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies `gate` in place without validating indices.
    pub(crate) fn apply_unchecked(&mut self, gate: &Gate) {
        let t = 1usize << gate.target;
        let cmask = gate.control_mask();
        let amps = &mut self.amplitudes;
        match gate.kind {
            // Diagonal gates only touch the |1⟩ component of the target.
            GateKind::Z | GateKind::Phase(_) => {
                let factor = gate.kind.matrix()[1][1];
                let need = cmask | t;
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & need == need {
                        *a *= factor;
                    }
                }
            }
            GateKind::X => {
                for i in 0..amps.len() {
                    if i & t == 0 && i & cmask == cmask {
                        amps.swap(i, i | t);
                    }
                }
            }
            kind => {
                let m = kind.matrix();
                for i in 0..amps.len() {
                    if i & t == 0 && i & cmask == cmask {
                        let a0 = amps[i];
                        let a1 = amps[i | t];
                        amps[i] = m[0][0] * a0 + m[0][1] * a1;
                        amps[i | t] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
        }
    }

    /// Applies `gate` in place after validating it against this register.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }
}

/// Returns `U·state` for the unitary `U` of `gate`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate(state.n_qubits)?;
    state.check_normalized()?;
    let mut out = state.clone();
    out.apply_unchecked(gate);
    Ok(out)
}

/// Exact marginal probability of reading 1 on `qubit`.
pub fn probability_of_one(state: &StateVector, qubit: usize) -> Result<f64> {
    if qubit >= state.n_qubits {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            n_qubits: state.n_qubits,
        });
    }
    Ok(state.prob_one(qubit).clamp(0.0, 1.0))
}

/// Draws `shots` computational-basis measurements. Only observed outcomes appear
/// in the returned map. The same `(state, shots, seed)` always yields the same counts.
pub fn sample(state: &StateVector, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut cumulative = Vec::with_capacity(state.amplitudes.len());
    let mut acc = 0.0;
    for a in &state.amplitudes {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = rng_from_seed(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * total;
        let mut idx = cumulative.partition_point(|&c| c <= u);
        if idx >= cumulative.len() {
            idx = cumulative.len() - 1;
        }
        // Skip zero-probability entries that share a cumulative value.
        while state.amplitudes[idx].norm_sqr() == 0.0 && idx + 1 < cumulative.len() {
            idx += 1;
        }
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::zero(1).unwrap();
        let out = apply_gate(&s, &Gate::new(GateKind::H, 0)).unwrap();
        assert!((out.amplitudes()[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((probability_of_one(&out, 0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn x_on_zero() {
        let s = StateVector::zero(1).unwrap();
        let out = apply_gate(&s, &Gate::new(GateKind::X, 0)).unwrap();
        assert_eq!(out.amplitudes()[1], c(1.0));
        assert_eq!(probability_of_one(&out, 0).unwrap(), 1.0);
    }

    #[test]
    fn ry_loads_probability() {
        for a in [0.1, 0.25, 0.3, 0.9] {
            let theta = 2.0 * f64::asin(f64::sqrt(a));
            let s = StateVector::zero(1).unwrap();
            let out = apply_gate(&s, &Gate::new(GateKind::Ry(theta), 0)).unwrap();
            assert!((probability_of_one(&out, 0).unwrap() - a).abs() < 1e-12);
        }
    }

    #[test]
    fn errors_on_bad_inputs() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(
            apply_gate(&s, &Gate::new(GateKind::X, 2)),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(probability_of_one(&s, 5).is_err());
        let bad = StateVector {
            n_qubits: 1,
            amplitudes: vec![c(1.0), c(1.0)],
        };
        assert!(matches!(
            apply_gate(&bad, &Gate::new(GateKind::X, 0)),
            Err(Error::NotNormalized(_))
        ));
        assert!(StateVector::from_amplitudes(vec![c(1.0), c(0.0), c(0.0)]).is_err());
        assert!(matches!(sample(&s, 0, 1), Err(Error::ZeroShots)));
        assert!(matches!(StateVector::zero(21), Err(Error::TooManyQubits(21))));
    }

    #[test]
    fn sampling_deterministic_state() {
        let s = StateVector::zero(1).unwrap();
        let counts = sample(&s, 100, 3).unwrap();
        assert_eq!(counts.len(), 1);
        assert_eq!(counts[&0], 100);
        let one = StateVector::basis(3, 5).unwrap();
        assert_eq!(sample(&one, 10, 9).unwrap()[&5], 10);
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = apply_gate(&StateVector::zero(1).unwrap(), &Gate::new(GateKind::H, 0)).unwrap();
        assert_eq!(sample(&s, 1000, 11).unwrap(), sample(&s, 1000, 11).unwrap());
        assert_ne!(sample(&s, 1000, 11).unwrap(), sample(&s, 1000, 12).unwrap());
    }

    #[test]
    fn sampling_frequency_of_plus_state() {
        // 0.01 is ~6.3 binomial standard deviations at 10^5 shots.
        let s = apply_gate(&StateVector::zero(1).unwrap(), &Gate::new(GateKind::H, 0)).unwrap();
        let mut inside = 0;
        for seed in 0..100 {
            let counts = sample(&s, 100_000, seed).unwrap();
            let f = *counts.get(&1).unwrap_or(&0) as f64 / 1e5;
            if (f - 0.5).abs() <= 0.01 {
                inside += 1;
            }
        }
        assert!(inside >= 99);
    }
}
