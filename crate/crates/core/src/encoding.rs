//! Distribution loader and objective circuits.
//!
//! The loader maps `|0⟩_n` to `Σ_x √p_x |x⟩_n`. An objective circuit acts on the
//! `n` distribution qubits plus one objective qubit (index `n`) and rotates
//! `|x⟩|0⟩ ↦ √(1 − f(x))|x⟩|0⟩ + √f(x)|x⟩|1⟩`, so after loader and objective the
//! objective qubit reads 1 with probability `Σ_x p_x f(x)`.
//!
//! Both circuits are exact: every basis-state branch gets its own controlled `RY`,
//! with open controls realised by `X` conjugation walked in Gray-code order.

use serde::{Deserialize, Serialize};

use crate::distributions::DiscretizedDistribution;
use crate::qsim::{Circuit, Gate, GateKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// `f(i) = i / (N − 1)`.
    Mean,
    /// `f(i) = 1` for `i ≤ l`, else 0.
    CdfThreshold { l: usize },
    /// `f(i) = i / l` for `i ≤ l`, else 0; `f(0) = 1` when `l = 0`.
    Cvar { l: usize },
}

impl ObjectiveKind {
    pub fn validate(&self, n_points: usize) -> Result<()> {
        match *self {
            ObjectiveKind::Mean => Ok(()),
            ObjectiveKind::CdfThreshold { l } | ObjectiveKind::Cvar { l } if l < n_points => Ok(()),
            _ => Err(Error::InvalidObjective(format!(
                "{self:?} outside grid of {n_points} points"
            ))),
        }
    }

    /// Objective function value at grid index `i`, clamped to `[0, 1]`.
    pub fn f(&self, i: usize, n_points: usize) -> f64 {
        let v = match *self {
            ObjectiveKind::Mean => i as f64 / (n_points - 1) as f64,
            ObjectiveKind::CdfThreshold { l } => {
                if i <= l {
                    1.0
                } else {
                    0.0
                }
            }
            ObjectiveKind::Cvar { l } => {
                if i > l {
                    0.0
                } else if l == 0 {
                    1.0
                } else {
                    i as f64 / l as f64
                }
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// `Σ_i p_i f(i)`: the amplitude the objective encodes, computed classically.
    pub fn expected(&self, dd: &DiscretizedDistribution) -> f64 {
        let n = dd.len();
        dd.probs().iter().enumerate().map(|(i, p)| p * self.f(i, n)).sum()
    }
}

/// Tracks which control qubits are currently inverted by `X` so that a run of
/// pattern-controlled gates only toggles the bits that change.
struct OpenControls<'a> {
    controls: &'a [usize],
    flipped: usize,
}

impl<'a> OpenControls<'a> {
    fn new(controls: &'a [usize]) -> Self {
        OpenControls { controls, flipped: 0 }
    }

    /// Bit `j` of `pattern` is the required value of `controls[j]`.
    fn select(&mut self, circuit: &mut Circuit, pattern: usize) {
        let want = !pattern & ((1usize << self.controls.len()) - 1);
        self.toggle(circuit, want ^ self.flipped);
        self.flipped = want;
    }

    fn release(mut self, circuit: &mut Circuit) {
        let f = self.flipped;
        self.toggle(circuit, f);
        self.flipped = 0;
    }

    fn toggle(&self, circuit: &mut Circuit, bits: usize) {
        for (j, &q) in self.controls.iter().enumerate() {
            if bits >> j & 1 == 1 {
                circuit.x(q);
            }
        }
    }
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn ry_angle(f: f64) -> f64 {
    2.0 * f.clamp(0.0, 1.0).sqrt().asin()
}

/// State-preparation circuit for `dd` on `n = log2 N` qubits (conditional
/// probability rotation tree, most-significant qubit first).
pub fn build_loader(dd: &DiscretizedDistribution) -> Result<Circuit> {
    let total: f64 = dd.probs().iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::UnnormalizedProbabilities(total));
    }
    let n = dd.n_qubits();
    let probs = dd.probs();
    let mut circuit = Circuit::new(n);
    for q in (0..n).rev() {
        let controls: Vec<usize> = (q + 1..n).collect();
        let block = 1usize << (q + 1);
        let half = 1usize << q;
        let mut frame = OpenControls::new(&controls);
        for step in 0..1usize << controls.len() {
            let prefix = gray(step);
            let start = prefix * block;
            let p0: f64 = probs[start..start + half].iter().sum();
            let p1: f64 = probs[start + half..start + block].iter().sum();
            if p0 + p1 <= 0.0 || p1 <= 0.0 {
                continue;
            }
            let theta = 2.0 * p1.sqrt().atan2(p0.sqrt());
            frame.select(&mut circuit, prefix);
            circuit.push(Gate::controlled(GateKind::Ry(theta), &controls, q))?;
        }
        frame.release(&mut circuit);
    }
    Ok(circuit)
}

/// Objective rotation for `kind` on `n` distribution qubits plus objective qubit `n`.
pub fn build_objective(n: usize, kind: ObjectiveKind) -> Result<Circuit> {
    let n_points = 1usize << n;
    kind.validate(n_points)?;
    let controls: Vec<usize> = (0..n).collect();
    let mut circuit = Circuit::new(n + 1);
    let mut frame = OpenControls::new(&controls);
    for step in 0..n_points {
        let i = gray(step);
        let f = kind.f(i, n_points);
        if f <= 0.0 {
            continue;
        }
        frame.select(&mut circuit, i);
        circuit.push(Gate::controlled(GateKind::Ry(ry_angle(f)), &controls, n))?;
    }
    frame.release(&mut circuit);
    Ok(circuit)
}

/// Maps an amplitude estimate back to value units.
///
/// * `Mean`: `x_0 + (x_{N−1} − x_0)·â`.
/// * `CdfThreshold`: `â` itself (a probability).
/// * `Cvar { l }`: the index-domain tail mean `l·â / P̂[X ≤ x_l]` mapped affinely,
///   `x_0 + Δx·l·â / P̂`. For grids starting at 0 this is `x_l·â / P̂`.
///   `tail_probability` must carry `P̂[X ≤ x_l]`.
pub fn to_value_domain(
    a_hat: f64,
    dd: &DiscretizedDistribution,
    kind: ObjectiveKind,
    tail_probability: Option<f64>,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&a_hat) {
        return Err(Error::InvalidConfig(format!("amplitude {a_hat} outside [0, 1]")));
    }
    kind.validate(dd.len())?;
    match kind {
        ObjectiveKind::Mean => Ok(dd.lo() + (dd.hi() - dd.lo()) * a_hat),
        ObjectiveKind::CdfThreshold { .. } => Ok(a_hat),
        ObjectiveKind::Cvar { l } => {
            let p = tail_probability
                .ok_or_else(|| Error::InvalidConfig("cvar mapping needs the tail probability".into()))?;
            if p <= 0.0 {
                return Err(Error::ZeroTailProbability);
            }
            let index_mean = l as f64 * a_hat / p;
            Ok(dd.lo() + dd.step() * index_mean)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{classical_stats, discretize, DistributionSpec};

    fn loaded_probs(dd: &DiscretizedDistribution) -> Vec<f64> {
        build_loader(dd).unwrap().run_from_zero().unwrap().probabilities()
    }

    #[test]
    fn uniform_loader_matches_hadamards() {
        let dd = discretize(&DistributionSpec::uniform(0.0, 1.0, 4)).unwrap();
        let mut h = Circuit::new(4);
        (0..4).for_each(|q| {
            h.h(q);
        });
        let expect = h.run_from_zero().unwrap();
        let got = build_loader(&dd).unwrap().run_from_zero().unwrap();
        for (a, b) in got.amplitudes().iter().zip(expect.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
            assert!((b.re - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn point_mass_loader() {
        let dd = DiscretizedDistribution::point_mass(4, 0.0, 1.0, 5).unwrap();
        let p = loaded_probs(&dd);
        assert!((p[0b0101] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loader_reproduces_probabilities_with_real_amplitudes() {
        for spec in [
            DistributionSpec::normal(0.1, 0.01, 4),
            DistributionSpec::normal(0.1, 0.05, 5),
            DistributionSpec::weibull(1.8, 6),
        ] {
            let dd = discretize(&spec).unwrap();
            let state = build_loader(&dd).unwrap().run_from_zero().unwrap();
            for (a, p) in state.amplitudes().iter().zip(dd.probs()) {
                assert!((a.norm_sqr() - p).abs() < 1e-10);
                assert!(a.im.abs() < 1e-10 && a.re > -1e-10);
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        // Bypass the checked constructor through serde.
        let dd: DiscretizedDistribution = serde_json::from_str(r#"{"grid":[0.0,1.0],"probs":[0.5,0.6]}"#).unwrap();
        assert!(matches!(build_loader(&dd), Err(Error::UnnormalizedProbabilities(_))));
    }

    fn objective_prob(dd: &DiscretizedDistribution, kind: ObjectiveKind) -> f64 {
        let n = dd.n_qubits();
        let mut c = build_loader(dd).unwrap().widened(n + 1).unwrap();
        c.append(&build_objective(n, kind).unwrap()).unwrap();
        c.run_from_zero().unwrap().prob_one(n)
    }

    #[test]
    fn threshold_at_top_is_certain() {
        let dd = discretize(&DistributionSpec::weibull(1.8, 4)).unwrap();
        assert!((objective_prob(&dd, ObjectiveKind::CdfThreshold { l: 15 }) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_mean_objective() {
        let dd = discretize(&DistributionSpec::uniform(0.0, 1.0, 4)).unwrap();
        let p = objective_prob(&dd, ObjectiveKind::Mean);
        // Σ i / (16·15) = 120 / 240.
        assert!((p - 0.5).abs() < 1e-10);
        let v = to_value_domain(p, &dd, ObjectiveKind::Mean, None).unwrap();
        assert!((v - 0.46875).abs() < 1e-10);
    }

    #[test]
    fn cvar_objective_matches_direct_sum() {
        let dd = discretize(&DistributionSpec::normal(0.1, 0.01, 4)).unwrap();
        let stats = classical_stats(&dd);
        let q = stats.var(0.95).unwrap();
        let kind = ObjectiveKind::Cvar { l: q.index };
        let direct: f64 = (0..=q.index).map(|i| i as f64 / q.index as f64 * dd.probs()[i]).sum();
        let p = objective_prob(&dd, kind);
        assert!((p - direct).abs() < 1e-10);
        let v = to_value_domain(p, &dd, kind, Some(q.achieved_level)).unwrap();
        assert!((v - stats.cvar(0.95).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn value_domain_endpoints_and_errors() {
        let dd = discretize(&DistributionSpec::normal(0.1, 0.01, 4)).unwrap();
        assert_eq!(to_value_domain(0.0, &dd, ObjectiveKind::Mean, None).unwrap(), dd.lo());
        assert!((to_value_domain(1.0, &dd, ObjectiveKind::Mean, None).unwrap() - dd.hi()).abs() < 1e-15);
        assert!(matches!(
            to_value_domain(0.2, &dd, ObjectiveKind::Cvar { l: 3 }, Some(0.0)),
            Err(Error::ZeroTailProbability)
        ));
        assert!(to_value_domain(1.5, &dd, ObjectiveKind::Mean, None).is_err());
        assert!(build_objective(4, ObjectiveKind::CdfThreshold { l: 16 }).is_err());
    }

    #[test]
    fn cvar_with_zero_index_is_total() {
        assert_eq!(ObjectiveKind::Cvar { l: 0 }.f(0, 16), 1.0);
        assert_eq!(ObjectiveKind::Cvar { l: 0 }.f(1, 16), 0.0);
    }

    #[test]
    fn zero_branches_keep_register_populations() {
        let dd = discretize(&DistributionSpec::weibull(1.8, 4)).unwrap();
        let mut c = build_loader(&dd).unwrap().widened(5).unwrap();
        c.append(&build_objective(4, ObjectiveKind::CdfThreshold { l: 6 }).unwrap())
            .unwrap();
        let p = c.run_from_zero().unwrap().probabilities();
        for x in 0..16 {
            // Marginal over the objective qubit equals p_x.
            assert!((p[x] + p[x | 16] - dd.probs()[x]).abs() < 1e-12);
            if x > 6 {
                assert!((p[x] - dd.probs()[x]).abs() < 1e-12);
            }
        }
    }
}
