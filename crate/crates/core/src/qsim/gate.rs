use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    /// Rotation about Y by the given angle in radians.
    Ry(f64),
    /// `diag(1, e^{iφ})`.
    Phase(f64),
}

impl GateKind {
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
            }
            GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            GateKind::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            GateKind::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
            GateKind::Ry(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            GateKind::Phase(phi) => [
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, phi)],
            ],
        }
    }

    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::Ry(theta) => GateKind::Ry(-theta),
            GateKind::Phase(phi) => GateKind::Phase(-phi),
            k => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::Ry(_) => "ry",
            GateKind::Phase(_) => "p",
        }
    }
}

/// A single-target gate with an arbitrary set of (closed) controls.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Gate {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    pub fn controlled(kind: GateKind, controls: &[usize], target: usize) -> Self {
        Gate {
            kind,
            target,
            controls: controls.to_vec(),
        }
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            target: self.target,
            controls: self.controls.clone(),
        }
    }

    /// Same gate with one more control qubit.
    pub fn with_control(&self, control: usize) -> Gate {
        let mut controls = self.controls.clone();
        controls.push(control);
        Gate {
            kind: self.kind,
            target: self.target,
            controls,
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target).chain(self.controls.iter().copied())
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        for (i, &c) in self.controls.iter().enumerate() {
            if c == self.target || self.controls[..i].contains(&c) {
                return Err(Error::OverlappingQubits(c));
            }
        }
        Ok(())
    }

    pub(crate) fn control_mask(&self) -> usize {
        self.controls.iter().fold(0, |m, &c| m | (1 << c))
    }
}
