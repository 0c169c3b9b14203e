//! Logical circuits and their reference semantics.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::gate::{canonical, hadamard, rz, TwoQubitGate, C64};
use crate::state::{GateApplication, QuantumState};

/// One logical gate. Qubit indices refer to the logical register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogicalGate {
    Rz { q: usize, theta: f64 },
    H { q: usize },
    Cz { a: usize, b: usize },
    /// Matchgate with `a` as the left tensor factor.
    Mg { gate: TwoQubitGate, a: usize, b: usize },
}

impl LogicalGate {
    pub fn kind(&self) -> GateKind {
        match self {
            LogicalGate::Rz { .. } => GateKind::Rz,
            LogicalGate::H { .. } => GateKind::H,
            LogicalGate::Cz { .. } => GateKind::Cz,
            LogicalGate::Mg { .. } => GateKind::Mg,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            LogicalGate::Rz { q, .. } | LogicalGate::H { q } => vec![q],
            LogicalGate::Cz { a, b } | LogicalGate::Mg { a, b, .. } => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Rz,
    H,
    Cz,
    Mg,
}

impl GateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GateKind::Rz => "rz",
            GateKind::H => "h",
            GateKind::Cz => "cz",
            GateKind::Mg => "mg",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rz" => Some(GateKind::Rz),
            "h" => Some(GateKind::H),
            "cz" => Some(GateKind::Cz),
            "mg" => Some(GateKind::Mg),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateKind::Cz | GateKind::Mg)
    }
}

/// Ordered gate list on `k` logical qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogicalCircuit {
    qubits: usize,
    gates: Vec<LogicalGate>,
}

impl LogicalCircuit {
    pub fn new(qubits: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::Validation("circuit needs at least one qubit".into()));
        }
        Ok(Self { qubits, gates: Vec::new() })
    }

    pub fn with_gates(qubits: usize, gates: impl IntoIterator<Item = LogicalGate>) -> Result<Self> {
        let mut c = Self::new(qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: LogicalGate) -> Result<()> {
        let qs = gate.qubits();
        for &q in &qs {
            if q >= self.qubits {
                return Err(Error::Validation(format!("qubit {q} out of range for {} qubits", self.qubits)));
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Validation(format!("two-qubit gate on identical qubits ({}, {})", qs[0], qs[0])));
        }
        match gate {
            LogicalGate::Rz { theta, .. } if !theta.is_finite() => {
                return Err(Error::Validation("rotation angle must be finite".into()));
            }
            LogicalGate::Mg { gate, .. } if !gate.is_matchgate() => {
                return Err(Error::Validation("MG gate is not a matchgate".into()));
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[LogicalGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Single-qubit gates plus matchgates on neighboring logical indices.
    pub fn is_nearest_neighbor_model(&self) -> bool {
        self.gates.iter().all(|g| match *g {
            LogicalGate::Rz { .. } | LogicalGate::H { .. } => true,
            LogicalGate::Mg { a, b, .. } => a.abs_diff(b) == 1,
            LogicalGate::Cz { .. } => false,
        })
    }

    /// Applies the circuit to a `k`-qubit state (qubit `q` is bit `q`).
    pub fn apply_to(&self, state: &mut QuantumState) -> Result<()> {
        if state.qubit_count() != self.qubits {
            return Err(Error::Shape(format!(
                "state has {} qubits, circuit has {}",
                state.qubit_count(),
                self.qubits
            )));
        }
        for g in &self.gates {
            match *g {
                LogicalGate::Rz { q, theta } => state.apply_single(q, &rz(theta))?,
                LogicalGate::H { q } => state.apply_single(q, &hadamard())?,
                LogicalGate::Cz { a, b } => state.apply(&GateApplication::new(canonical::cz(), a, b)?)?,
                LogicalGate::Mg { gate, a, b } => state.apply(&GateApplication::new(gate, a, b)?)?,
            }
        }
        Ok(())
    }
}

/// Angles `(α, β, γ)` with `U ≃ Rz(α)·H·Rz(β)·H·Rz(γ)` up to global phase.
pub fn euler_angles(u: &Matrix2<C64>) -> (f64, f64, f64) {
    let (a, b, c) = zyz_angles(&to_special_unitary(u));
    let half_pi = std::f64::consts::FRAC_PI_2;
    (a + half_pi, b, c - half_pi)
}

/// Program-order gates realizing `u` on logical qubit `q` up to global phase.
pub fn single_qubit_gates(q: usize, u: &Matrix2<C64>) -> Vec<LogicalGate> {
    let (a, b, c) = euler_angles(u);
    vec![
        LogicalGate::Rz { q, theta: c },
        LogicalGate::H { q },
        LogicalGate::Rz { q, theta: b },
        LogicalGate::H { q },
        LogicalGate::Rz { q, theta: a },
    ]
}

fn to_special_unitary(u: &Matrix2<C64>) -> Matrix2<C64> {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    u * C64::from_polar(1.0, -det.arg() / 2.0)
}

/// Exact `V = Rz(a)·Ry(b)·Rz(c)` for `V ∈ SU(2)`.
pub(crate) fn zyz_angles(v: &Matrix2<C64>) -> (f64, f64, f64) {
    let p = v[(0, 0)];
    let q = v[(1, 0)];
    let b = 2.0 * q.norm().atan2(p.norm());
    let sum = if p.norm() > 1e-14 { -2.0 * p.arg() } else { 0.0 };
    let diff = if q.norm() > 1e-14 { 2.0 * q.arg() } else { 0.0 };
    ((sum + diff) / 2.0, b, (sum - diff) / 2.0)
}

/// Rewrites a matchgate on `(a, b)` into `Rz`, `H` and `CZ` gates, exact up
/// to global phase.
pub fn matchgate_to_rz_h_cz(gate: &TwoQubitGate, a: usize, b: usize) -> Vec<LogicalGate> {
    use std::f64::consts::FRAC_PI_2;
    let m = gate.matrix();
    let even = Matrix2::new(m[(0, 0)], m[(0, 3)], m[(3, 0)], m[(3, 3)]);
    let odd = Matrix2::new(m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]);
    let det = even[(0, 0)] * even[(1, 1)] - even[(0, 1)] * even[(1, 0)];
    let phase = C64::from_polar(1.0, -det.arg() / 2.0);
    let (a1, a2, a3) = zyz_angles(&(even * phase));
    let (b1, b2, b3) = zyz_angles(&(odd * phase));

    // G(Rz(α), Rz(β)) = Rz((α+β)/2) ⊗ Rz((α−β)/2)
    let rz_pair = |alpha: f64, beta: f64| {
        vec![LogicalGate::Rz { q: a, theta: (alpha + beta) / 2.0 }, LogicalGate::Rz { q: b, theta: (alpha - beta) / 2.0 }]
    };
    // exp(iθ XX) = (H⊗H)·CNOT·(I⊗Rz(−2θ))·CNOT·(H⊗H)
    let xx = |theta: f64| {
        vec![
            LogicalGate::H { q: a },
            LogicalGate::Cz { a, b },
            LogicalGate::H { q: b },
            LogicalGate::Rz { q: b, theta: -2.0 * theta },
            LogicalGate::H { q: b },
            LogicalGate::Cz { a, b },
            LogicalGate::H { q: a },
        ]
    };
    // exp(iθ X⊗Y) and exp(iθ Y⊗X) by conjugating with S on one side.
    let conj = |q: usize, theta: f64| {
        if theta == 0.0 {
            return Vec::new();
        }
        let mut out = vec![LogicalGate::Rz { q, theta: -FRAC_PI_2 }];
        out.extend(xx(theta));
        out.push(LogicalGate::Rz { q, theta: FRAC_PI_2 });
        out
    };

    // Program order: rightmost factor of G(Rz)·G(Ry)·G(Rz) first.
    // G(Ry(α), Ry(β)) = exp(−i(α−β)/4·XY)·exp(−i(α+β)/4·YX)
    let mut out = rz_pair(a3, b3);
    out.extend(conj(a, -(a2 + b2) / 4.0));
    out.extend(conj(b, -(a2 - b2) / 4.0));
    out.extend(rz_pair(a1, b1));
    out.retain(|g| !matches!(g, LogicalGate::Rz { theta, .. } if *theta == 0.0));
    out
}
