//! Amplitude-estimation problems and the Grover operator.
//!
//! For a state-preparation circuit `A` with `A|0⟩ = √(1−a)|ψ₀⟩|0⟩ + √a|ψ₁⟩|1⟩`
//! the Grover operator is realised in time order as
//!
//! 1. `Z` on the objective qubit (phase flip of the good states),
//! 2. `A†`,
//! 3. `X` on every qubit, a multi-controlled `Z`, `X` on every qubit
//!    (sign flip of `|0…0⟩`),
//! 4. `A`.
//!
//! The product equals `−Q` where `Q` rotates the good/bad plane by `+2θ_a`
//! (`a = sin²θ_a`). The extra global phase is invisible to measurements of
//! `Q^k A|0⟩`, where `P(good) = sin²((2k+1)θ_a)`, but becomes a relative phase
//! when `Q` is controlled; [`GROVER_GLOBAL_PHASE`] records it for that case.

use rand::Rng;

use crate::distributions::DiscretizedDistribution;
use crate::encoding::{build_loader, build_objective, ObjectiveKind};
use crate::qsim::{qubit_levels, Circuit, DepthTransfer, Gate, GateKind, StateVector};
use crate::rng::SimRng;
use crate::{Error, Result};

/// `build_grover(p) = e^{i·GROVER_GLOBAL_PHASE} · Q`.
pub const GROVER_GLOBAL_PHASE: f64 = std::f64::consts::PI;

/// Largest Grover power placed in a single circuit.
pub const MAX_GROVER_POWER: u64 = 1 << 20;

/// State-preparation circuit `A` and the qubit whose `|1⟩` marks good states.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeProblem {
    a_circuit: Circuit,
    objective_qubit: usize,
}

impl AmplitudeProblem {
    pub fn new(a_circuit: Circuit, objective_qubit: usize) -> Result<Self> {
        let n = a_circuit.n_qubits();
        if objective_qubit >= n {
            return Err(Error::QubitOutOfRange {
                index: objective_qubit,
                n_qubits: n,
            });
        }
        if n > crate::qsim::MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        Ok(AmplitudeProblem {
            a_circuit,
            objective_qubit,
        })
    }

    /// Single-qubit problem `A = RY(2·arcsin √a)`.
    pub fn from_amplitude(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidConfig(format!("amplitude {a} outside [0, 1]")));
        }
        let mut c = Circuit::new(1);
        c.ry(0, 2.0 * a.sqrt().asin());
        Self::new(c, 0)
    }

    /// Loader for `dd` followed by the objective rotation for `kind`.
    pub fn from_distribution(dd: &DiscretizedDistribution, kind: ObjectiveKind) -> Result<Self> {
        let n = dd.n_qubits();
        let mut a = build_loader(dd)?.widened(n + 1)?;
        a.append(&build_objective(n, kind)?)?;
        Self::new(a, n)
    }

    /// Problem whose amplitude is `factor · a`, using one extra qubit rotated by
    /// `RY(2·arcsin √factor)` controlled on the old objective qubit.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor <= 1.0) {
            return Err(Error::InvalidConfig(format!("rescale factor {factor} outside (0, 1]")));
        }
        let n = self.n_total();
        let mut a = self.a_circuit.widened(n + 1)?;
        a.push(Gate::controlled(
            GateKind::Ry(2.0 * factor.sqrt().asin()),
            &[self.objective_qubit],
            n,
        ))?;
        Self::new(a, n)
    }

    pub fn a_circuit(&self) -> &Circuit {
        &self.a_circuit
    }

    pub fn objective_qubit(&self) -> usize {
        self.objective_qubit
    }

    pub fn n_total(&self) -> usize {
        self.a_circuit.n_qubits()
    }
}

/// Exact `P(objective = 1)` after `A|0⟩`.
pub fn true_amplitude(problem: &AmplitudeProblem) -> Result<f64> {
    let s = problem.a_circuit.run_from_zero()?;
    Ok(s.prob_one(problem.objective_qubit).clamp(0.0, 1.0))
}

/// The Grover operator circuit (equal to `Q` up to [`GROVER_GLOBAL_PHASE`]).
pub fn build_grover(problem: &AmplitudeProblem) -> Circuit {
    let n = problem.n_total();
    let mut q = Circuit::new(n);
    q.z(problem.objective_qubit);
    q.append(&problem.a_circuit.inverse()).expect("same register");
    for i in 0..n {
        q.x(i);
    }
    if n == 1 {
        q.z(0);
    } else {
        let controls: Vec<usize> = (0..n - 1).collect();
        q.mcz(&controls, n - 1);
    }
    for i in 0..n {
        q.x(i);
    }
    q.append(&problem.a_circuit).expect("same register");
    q
}

/// `A` followed by `k` copies of the Grover operator.
pub fn apply_power(problem: &AmplitudeProblem, k: u64) -> Result<Circuit> {
    if k > MAX_GROVER_POWER {
        return Err(Error::PowerTooLarge(k));
    }
    let q = build_grover(problem);
    let mut c = problem.a_circuit.clone();
    for _ in 0..k {
        c.append(&q)?;
    }
    Ok(c)
}

/// Query and shot accounting shared by all sampling estimators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounter {
    /// Applications of `A` or `A†`: `Σ shots·(2k+1)`.
    pub oracle_queries_a: u64,
    /// Applications of the Grover operator: `Σ shots·k`.
    pub grover_applications: u64,
    pub shots_total: u64,
    pub rounds: u64,
    pub max_k: u64,
    pub max_circuit_depth: u64,
}

/// Simulates measurements of `Q^k A|0⟩` on the objective qubit.
///
/// Good-state probabilities are obtained by running the actual circuits on the
/// statevector; `Q` is applied incrementally and the probability for each power
/// is cached, so asking for powers in increasing order costs one `Q` application
/// per new power.
#[derive(Debug, Clone)]
pub struct GroverSampler {
    problem: AmplitudeProblem,
    grover: Circuit,
    state: StateVector,
    good_probs: Vec<f64>,
    gate_count_a: usize,
    gate_count_q: usize,
    depth_transfer: DepthTransfer,
    depth_levels: Vec<Vec<usize>>,
    counter: QueryCounter,
}

impl GroverSampler {
    pub fn new(problem: &AmplitudeProblem) -> Result<Self> {
        let state = problem.a_circuit.run_from_zero()?;
        let p0 = state.prob_one(problem.objective_qubit).clamp(0.0, 1.0);
        let grover = build_grover(problem);
        Ok(GroverSampler {
            gate_count_a: problem.a_circuit.metrics().gate_count,
            gate_count_q: grover.metrics().gate_count,
            depth_transfer: DepthTransfer::of(&grover),
            depth_levels: vec![qubit_levels(&problem.a_circuit)],
            problem: problem.clone(),
            grover,
            state,
            good_probs: vec![p0],
            counter: QueryCounter::default(),
        })
    }

    pub fn problem(&self) -> &AmplitudeProblem {
        &self.problem
    }

    pub fn grover_circuit(&self) -> &Circuit {
        &self.grover
    }

    /// Exact good-state probability after `Q^k A|0⟩`. Not counted as a query.
    pub fn good_probability(&mut self, k: u64) -> Result<f64> {
        if k > MAX_GROVER_POWER {
            return Err(Error::PowerTooLarge(k));
        }
        let k = k as usize;
        while self.good_probs.len() <= k {
            self.grover.apply_to(&mut self.state)?;
            self.good_probs
                .push(self.state.prob_one(self.problem.objective_qubit).clamp(0.0, 1.0));
        }
        Ok(self.good_probs[k])
    }

    /// Gate count of `A Q^k` over the elementary set.
    pub fn gate_count(&self, k: u64) -> u64 {
        (self.gate_count_a + k as usize * self.gate_count_q) as u64
    }

    /// Depth of `A Q^k` over the elementary set.
    pub fn depth(&mut self, k: u64) -> u64 {
        let k = k as usize;
        while self.depth_levels.len() <= k {
            let next = self.depth_transfer.apply(self.depth_levels.last().expect("nonempty"));
            self.depth_levels.push(next);
        }
        self.depth_levels[k].iter().copied().max().unwrap_or(0) as u64
    }

    /// Runs `shots` measurements of `Q^k A|0⟩` and returns the number of good outcomes.
    pub fn measure(&mut self, k: u64, shots: u64, rng: &mut SimRng) -> Result<u64> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let p = self.good_probability(k)?;
        let hits = (0..shots).filter(|_| rng.gen::<f64>() < p).count() as u64;
        let depth = self.depth(k);
        let c = &mut self.counter;
        c.oracle_queries_a += shots * (2 * k + 1);
        c.grover_applications += shots * k;
        c.shots_total += shots;
        c.rounds += 1;
        c.max_k = c.max_k.max(k);
        c.max_circuit_depth = c.max_circuit_depth.max(depth);
        Ok(hits)
    }

    pub fn counter(&self) -> QueryCounter {
        self.counter
    }
}
