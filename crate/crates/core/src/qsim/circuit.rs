use super::decompose::for_each_elementary;
use super::{Gate, GateKind, StateVector, MAX_QUBITS};
use crate::{Error, Result};

/// Ordered list of gates over a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CircuitMetrics {
    pub gate_count: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    fn add(&mut self, gate: Gate) -> &mut Self {
        if let Err(e) = gate.validate(self.n_qubits) {
            panic!("invalid gate {gate:?}: {e}");
        }
        self.gates.push(gate);
        self
    }

    // Builder shorthands. These panic on invalid indices; use `push` for checked insertion.

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.add(Gate::new(GateKind::H, q))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.add(Gate::new(GateKind::X, q))
    }

    pub fn y(&mut self, q: usize) -> &mut Self {
        self.add(Gate::new(GateKind::Y, q))
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.add(Gate::new(GateKind::Z, q))
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> &mut Self {
        self.add(Gate::new(GateKind::Ry(theta), q))
    }

    pub fn phase(&mut self, q: usize, phi: f64) -> &mut Self {
        self.add(Gate::new(GateKind::Phase(phi), q))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Self {
        self.add(Gate::controlled(GateKind::X, &[control], target))
    }

    pub fn cphase(&mut self, control: usize, target: usize, phi: f64) -> &mut Self {
        self.add(Gate::controlled(GateKind::Phase(phi), &[control], target))
    }

    pub fn mcry(&mut self, controls: &[usize], target: usize, theta: f64) -> &mut Self {
        self.add(Gate::controlled(GateKind::Ry(theta), controls, target))
    }

    pub fn mcz(&mut self, controls: &[usize], target: usize) -> &mut Self {
        self.add(Gate::controlled(GateKind::Z, controls, target))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.cx(a, b).cx(b, a).cx(a, b)
    }

    /// Appends all gates of `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::DimensionMismatch {
                circuit: other.n_qubits,
                state: self.n_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Same gates on a register of `n_qubits ≥ self.n_qubits()` qubits.
    pub fn widened(&self, n_qubits: usize) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits);
        c.append(self)?;
        Ok(c)
    }

    /// Same gates with qubit `q` relabelled to `map[q]` on a register of `n_qubits`.
    pub fn remapped(&self, map: &[usize], n_qubits: usize) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits);
        for g in &self.gates {
            let lookup = |q: usize| {
                map.get(q).copied().ok_or(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: map.len(),
                })
            };
            let controls = g.controls.iter().map(|&q| lookup(q)).collect::<Result<Vec<_>>>()?;
            c.push(Gate {
                kind: g.kind,
                target: lookup(g.target)?,
                controls,
            })?;
        }
        Ok(c)
    }

    /// The adjoint: gates reversed and each inverted analytically.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Every gate gains `control` as an extra control. `control` must be idle in `self`.
    pub fn controlled(&self, control: usize) -> Result<Circuit> {
        let n = self.n_qubits.max(control + 1);
        let mut c = Circuit::new(n);
        for g in &self.gates {
            c.push(g.with_control(control))?;
        }
        Ok(c)
    }

    /// Applies the circuit in place.
    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                circuit: self.n_qubits,
                state: state.n_qubits(),
            });
        }
        for g in &self.gates {
            state.apply_unchecked(g);
        }
        Ok(())
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run_from_zero(&self) -> Result<StateVector> {
        if self.n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(self.n_qubits));
        }
        let mut s = StateVector::zero(self.n_qubits)?;
        self.apply_to(&mut s)?;
        Ok(s)
    }

    pub fn metrics(&self) -> CircuitMetrics {
        circuit_metrics(self)
    }
}

/// Applies every gate of `circuit` in order to a copy of `initial`.
pub fn run_circuit(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    initial.check_normalized()?;
    let mut s = initial.clone();
    circuit.apply_to(&mut s)?;
    Ok(s)
}

/// Gate count and as-soon-as-possible depth over the elementary gate set.
///
/// Gates with two or more controls are first expanded with
/// [`decompose::for_each_elementary`](super::decompose::for_each_elementary);
/// each elementary gate occupies one layer on every qubit it touches.
pub fn circuit_metrics(circuit: &Circuit) -> CircuitMetrics {
    let mut count = 0usize;
    for g in &circuit.gates {
        for_each_elementary(g, &mut |_: &Gate| count += 1);
    }
    CircuitMetrics {
        gate_count: count,
        depth: qubit_levels(circuit).into_iter().max().unwrap_or(0),
    }
}

/// Max-plus transfer of per-qubit layer levels through a circuit.
///
/// `after[q] = max_s(before[s] + delay[s][q])`, which lets the depth of a circuit
/// repeated `k` times be computed without materialising the repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthTransfer {
    delay: Vec<Vec<i64>>,
}

const UNREACHABLE: i64 = i64::MIN / 4;

impl DepthTransfer {
    pub fn of(circuit: &Circuit) -> Self {
        let n = circuit.n_qubits;
        let mut delay = Vec::with_capacity(n);
        for source in 0..n {
            let mut level = vec![UNREACHABLE; n];
            level[source] = 0;
            for g in &circuit.gates {
                for_each_elementary(g, &mut |e: &Gate| {
                    let layer = e.qubits().map(|q| level[q]).max().unwrap_or(UNREACHABLE) + 1;
                    for q in e.qubits() {
                        level[q] = layer;
                    }
                });
            }
            delay.push(level);
        }
        DepthTransfer { delay }
    }

    pub fn apply(&self, before: &[usize]) -> Vec<usize> {
        let n = self.delay.len();
        (0..n)
            .map(|q| {
                (0..n)
                    .filter(|&s| self.delay[s][q] > UNREACHABLE / 2)
                    .map(|s| before[s] as i64 + self.delay[s][q])
                    .max()
                    .unwrap_or(before[q] as i64)
                    .max(0) as usize
            })
            .collect()
    }
}

/// Per-qubit layer levels after running `circuit` from an empty schedule.
pub fn qubit_levels(circuit: &Circuit) -> Vec<usize> {
    let mut level = vec![0usize; circuit.n_qubits];
    for g in &circuit.gates {
        for_each_elementary(g, &mut |e: &Gate| {
            let layer = e.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
            for q in e.qubits() {
                level[q] = layer;
            }
        });
    }
    level
}
