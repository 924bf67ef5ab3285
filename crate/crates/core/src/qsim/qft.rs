use std::f64::consts::PI;

use super::Circuit;

/// Quantum Fourier transform on `m` qubits:
/// `|x⟩ ↦ 2^{-m/2} Σ_y e^{2πi·x·y/2^m} |y⟩` with qubit 0 as the least-significant bit.
///
/// Built from H, controlled phases and a final bit-reversal made of CNOT swaps.
pub fn qft(m: usize) -> Circuit {
    let mut c = Circuit::new(m);
    for j in (0..m).rev() {
        c.h(j);
        for k in (0..j).rev() {
            c.cphase(k, j, PI / (1u64 << (j - k)) as f64);
        }
    }
    for j in 0..m / 2 {
        c.swap(j, m - 1 - j);
    }
    c
}

/// Inverse of [`qft`].
pub fn inverse_qft(m: usize) -> Circuit {
    qft(m).inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{run_circuit, Gate, GateKind, StateVector};
    use num_complex::Complex64;
    use rand::Rng;

    fn dft_column(m: usize, x: usize) -> Vec<Complex64> {
        let dim = 1 << m;
        (0..dim)
            .map(|y| Complex64::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * PI * (x * y) as f64 / dim as f64))
            .collect()
    }

    #[test]
    fn single_qubit_is_hadamard() {
        let c = inverse_qft(1);
        assert_eq!(c.gates(), &[Gate::new(GateKind::H, 0)]);
    }

    #[test]
    fn matches_dft_on_basis_states() {
        for m in 1..=4 {
            for x in 0..1 << m {
                let out = run_circuit(&qft(m), &StateVector::basis(m, x).unwrap()).unwrap();
                for (a, b) in out.amplitudes().iter().zip(dft_column(m, x)) {
                    assert!((a - b).norm() < 1e-12, "m={m} x={x}");
                }
            }
        }
    }

    #[test]
    fn roundtrip_random_state() {
        let mut rng = crate::rng::rng_from_seed(5);
        let mut amps: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        let s = StateVector::from_amplitudes(amps).unwrap();
        let mut c = qft(3);
        c.append(&inverse_qft(3)).unwrap();
        let back = run_circuit(&c, &s).unwrap();
        for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn inverse_maps_phase_state_to_basis() {
        // Fourier state with phase y/2^m for m = 3, y = 5, evaluated directly.
        let (m, y) = (3usize, 5usize);
        let amps = dft_column(m, y);
        let s = StateVector::from_amplitudes(amps).unwrap();
        let out = run_circuit(&inverse_qft(m), &s).unwrap();
        assert!((out.probabilities()[y] - 1.0).abs() < 1e-10);
    }
}
