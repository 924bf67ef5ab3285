//! Gate-model statevector simulator.
//!
//! Conventions:
//! * qubit 0 is the least-significant bit of a basis index;
//! * the elementary gate set is `{H, X, Y, Z, RY(θ), PHASE(φ)}` with at most one
//!   control. Gates with more controls are applied directly to the amplitudes,
//!   and decomposed (see [`decompose`]) only when counting gates and depth.

mod circuit;
pub mod decompose;
mod gate;
mod qft;
mod state;

pub use circuit::{circuit_metrics, qubit_levels, run_circuit, Circuit, CircuitMetrics, DepthTransfer};
pub use gate::{Gate, GateKind};
pub use qft::{inverse_qft, qft};
pub use state::{apply_gate, probability_of_one, sample, StateVector};

/// Soft cap on register size (2^20 complex doubles = 16 MiB).
pub const MAX_QUBITS: usize = 20;

/// Tolerance used when validating that an input state is normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;
