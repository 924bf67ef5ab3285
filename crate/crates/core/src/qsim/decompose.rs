//! Expansion of multi-controlled gates into the elementary set.
//!
//! The rule, applied recursively for a gate `U` with controls `c₁…c_k` (k ≥ 2)
//! on target `t`:
//!
//! * `X`, `Y`, `H` and `Z` are first rewritten through diagonal or `RY` gates:
//!   `C^k X = H_t · C^k Z · H_t`,
//!   `C^k Y = S_t · C^k X · S†_t`,
//!   `C^k H = C^k RY(π/2) · C^k Z` and `C^k Z = C^k PHASE(π)`.
//! * `PHASE(φ)` and `RY(θ)` use the ancilla-free square-root construction with
//!   `V² = U` (`V = PHASE(φ/2)` or `RY(θ/2)`), in time order:
//!   `C^{k-1}V(c₁…c_{k-1}; t)`, `C^{k-1}X(c₁…c_{k-1}; c_k)`, `CV†(c_k; t)`,
//!   `C^{k-1}X(c₁…c_{k-1}; c_k)`, `CV(c_k; t)`.
//!
//! The expansion is exact (no global phase), so it can be checked by simulation.
//! A k-controlled phase costs `P(2) = 5` and `P(k) = 3·P(k-1) + 6` for k ≥ 3
//! elementary gates, e.g. 5, 21, 69 for k = 2, 3, 4.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{Gate, GateKind};

/// Calls `f` for each elementary gate (≤ 1 control) of the expansion of `gate`.
pub fn for_each_elementary(gate: &Gate, f: &mut impl FnMut(&Gate)) {
    if gate.controls.len() <= 1 {
        f(gate);
        return;
    }
    let t = gate.target;
    let cs = &gate.controls;
    match gate.kind {
        GateKind::X => {
            f(&Gate::new(GateKind::H, t));
            for_each_elementary(&Gate::controlled(GateKind::Z, cs, t), f);
            f(&Gate::new(GateKind::H, t));
        }
        GateKind::Y => {
            f(&Gate::new(GateKind::Phase(-FRAC_PI_2), t));
            for_each_elementary(&Gate::controlled(GateKind::X, cs, t), f);
            f(&Gate::new(GateKind::Phase(FRAC_PI_2), t));
        }
        GateKind::H => {
            for_each_elementary(&Gate::controlled(GateKind::Z, cs, t), f);
            for_each_elementary(&Gate::controlled(GateKind::Ry(FRAC_PI_2), cs, t), f);
        }
        GateKind::Z => {
            for_each_elementary(&Gate::controlled(GateKind::Phase(PI), cs, t), f);
        }
        GateKind::Phase(_) | GateKind::Ry(_) => {
            let root = match gate.kind {
                GateKind::Phase(phi) => GateKind::Phase(phi / 2.0),
                GateKind::Ry(theta) => GateKind::Ry(theta / 2.0),
                _ => unreachable!(),
            };
            let (last, rest) = cs.split_last().expect("at least two controls");
            for_each_elementary(&Gate::controlled(root, rest, t), f);
            for_each_elementary(&Gate::controlled(GateKind::X, rest, *last), f);
            f(&Gate::controlled(root.inverse(), &[*last], t));
            for_each_elementary(&Gate::controlled(GateKind::X, rest, *last), f);
            f(&Gate::controlled(root, &[*last], t));
        }
    }
}

/// The expansion of `gate` as an explicit gate list.
pub fn decompose(gate: &Gate) -> Vec<Gate> {
    let mut out = Vec::new();
    for_each_elementary(gate, &mut |g: &Gate| out.push(g.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{Circuit, StateVector};
    use num_complex::Complex64;
    use rand::Rng;

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = crate::rng::rng_from_seed(seed);
        let mut amps: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn expansion_matches_direct_application() {
        let kinds = [
            GateKind::H,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::Ry(0.83),
            GateKind::Phase(-1.37),
        ];
        for (seed, kind) in kinds.into_iter().enumerate() {
            for k in 2..=4 {
                let controls: Vec<usize> = (1..=k).collect();
                let gate = Gate::controlled(kind, &controls, 0);
                let n = k + 1;
                let s = random_state(n, seed as u64 * 10 + k as u64);
                let mut direct = s.clone();
                direct.apply(&gate).unwrap();
                let mut expanded = s.clone();
                for g in decompose(&gate) {
                    assert!(g.controls.len() <= 1);
                    expanded.apply(&g).unwrap();
                }
                let overlap = direct.inner(&expanded);
                assert!(
                    (overlap - Complex64::new(1.0, 0.0)).norm() < 1e-12,
                    "{kind:?} with {k} controls: overlap {overlap}"
                );
            }
        }
    }

    #[test]
    fn phase_cost_recurrence() {
        let counts: Vec<usize> = (2..=5)
            .map(|k| {
                let controls: Vec<usize> = (1..=k).collect();
                decompose(&Gate::controlled(GateKind::Phase(0.4), &controls, 0)).len()
            })
            .collect();
        assert_eq!(counts, vec![5, 21, 69, 213]);
    }

    #[test]
    fn metrics_count_expanded_gates() {
        let mut c = Circuit::new(3);
        c.mcz(&[0, 1], 2);
        assert_eq!(c.metrics().gate_count, 5);
    }
}
