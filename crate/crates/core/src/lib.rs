//! Quantum amplitude estimation on a dense statevector simulator.
//!
//! The crate is organised bottom-up:
//!
//! * [`qsim`]: gates, circuits, statevectors, seeded sampling and circuit metrics.
//! * [`distributions`]: discretized normal / Weibull / uniform distributions and
//!   their exact classical statistics.
//! * [`encoding`]: distribution loader and objective circuits (mean, cdf threshold, CVaR).
//! * [`grover`]: amplitude problems, the Grover operator and its powers.
//! * [`estimators`]: canonical QAE, IQAE, MLAE, FAE, classical Monte Carlo and the
//!   closed-form sample-complexity bounds.
//! * [`risk`]: mean, VaR and CVaR pipelines in value units.
//!
//! Qubit 0 is the least-significant bit of every basis index.

pub mod distributions;
pub mod encoding;
mod error;
pub mod estimators;
pub mod grover;
pub mod qsim;
pub mod risk;
pub mod rng;

pub use error::{Error, Result};
