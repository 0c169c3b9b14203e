//! Statevector check of a schedule against its logical circuit.

use super::{Encoding, LogicalCircuit, PhysicalSchedule, Slot};
use crate::error::{Error, Result};
use crate::gate::{c, C64};
use crate::state::{ancilla_intact, max_qubits, GateApplication, LocalState, QuantumState};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub inputs: usize,
    pub simulated_qubits: usize,
    /// Minimum over inputs of `|⟨expected|out⟩|² / ⟨out|out⟩`.
    pub worst_fidelity: f64,
    /// Largest `|‖out‖² − 1|`.
    pub norm_error: f64,
    /// Common global phase (from the first input).
    pub phase: C64,
    /// Largest distance between an input's phase and the common phase.
    pub phase_deviation: f64,
    pub worst_ancilla_infidelity: f64,
    pub ancilla_count: usize,
    pub layout_restored: bool,
    pub tolerance: f64,
    pub passed: bool,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "inputs: {} on {} qubits", self.inputs, self.simulated_qubits)?;
        writeln!(f, "worst fidelity: {:.12}", self.worst_fidelity)?;
        writeln!(f, "norm error: {:.3e}", self.norm_error)?;
        writeln!(f, "global phase: {:.12}{:+.12}i (deviation {:.3e})", self.phase.re, self.phase.im, self.phase_deviation)?;
        writeln!(f, "ancillas: {} checked, worst infidelity {:.3e}", self.ancilla_count, self.worst_ancilla_infidelity)?;
        writeln!(f, "layout restored: {}", self.layout_restored)?;
        writeln!(f, "result: {}", if self.passed { "pass" } else { "FAIL" })
    }
}

/// Map from vertex to simulated index.
struct Register {
    index: Vec<Option<usize>>,
    size: usize,
}

impl Register {
    fn at(&self, v: usize) -> usize {
        self.index[v].expect("active vertex")
    }
}

/// Statevector of `logical` (bit `q` = logical qubit `q`) embedded through
/// `layout`, with ancillas in their clamp states.
fn embed(reg: &Register, layout: &[Slot], encoding: Encoding, k: usize, logical: &[C64]) -> Result<QuantumState> {
    let mut hosts: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut plus = Vec::new();
    for (v, s) in layout.iter().enumerate() {
        match s {
            Slot::Qubit(q) => hosts[*q].push(reg.at(v)),
            Slot::Plus => plus.push(reg.at(v)),
            _ => {}
        }
    }
    let width = if encoding == Encoding::Pair { 2 } else { 1 };
    for (q, h) in hosts.iter().enumerate() {
        if h.len() != width {
            return Err(Error::Config(format!("logical qubit {q} has {} host vertices, expected {width}", h.len())));
        }
    }
    let mut amps = vec![c(0., 0.); 1 << reg.size];
    let weight = (0.5f64).powf(plus.len() as f64 / 2.0);
    for (x, &a) in logical.iter().enumerate() {
        if a == c(0., 0.) {
            continue;
        }
        let mut base = 0usize;
        for (q, h) in hosts.iter().enumerate() {
            if x >> q & 1 == 1 {
                for &i in h {
                    base |= 1 << i;
                }
            }
        }
        for sub in 0..1usize << plus.len() {
            let mut idx = base;
            for (j, &p) in plus.iter().enumerate() {
                if sub >> j & 1 == 1 {
                    idx |= 1 << p;
                }
            }
            amps[idx] += a * weight;
        }
    }
    QuantumState::from_amplitudes(reg.size, amps)
}

/// Runs the schedule and the circuit on `{|0⟩, |1⟩, |+⟩, |+i⟩}^k` inputs.
pub fn verify(circuit: &LogicalCircuit, schedule: &PhysicalSchedule, tol: f64) -> Result<VerifyReport> {
    let k = circuit.qubit_count();
    if schedule.logical_qubits != k {
        return Err(Error::Shape(format!("schedule has {} logical qubits, circuit has {k}", schedule.logical_qubits)));
    }
    let active = schedule.active_vertices();
    if active.len() > max_qubits() {
        return Err(Error::Resource(format!(
            "unverifiable at desk scale: {} qubits exceed the cap of {}",
            active.len(),
            max_qubits()
        )));
    }
    let mut index = vec![None; schedule.initial.len()];
    for (i, &v) in active.iter().enumerate() {
        index[v] = Some(i);
    }
    let reg = Register { index, size: active.len() };
    let apps: Vec<GateApplication> = schedule
        .applications()
        .map(|a| GateApplication { gate: a.gate, pair: (reg.at(a.pair.0), reg.at(a.pair.1)) })
        .collect();
    let ancillas: Vec<(usize, LocalState)> = schedule
        .final_layout
        .iter()
        .enumerate()
        .filter_map(|(v, s)| match s {
            Slot::Zero => Some((reg.at(v), LocalState::Zero)),
            Slot::Plus => Some((reg.at(v), LocalState::Plus)),
            _ => None,
        })
        .collect();

    let mut report = VerifyReport {
        inputs: 0,
        simulated_qubits: reg.size,
        worst_fidelity: 1.0,
        norm_error: 0.0,
        phase: c(1., 0.),
        phase_deviation: 0.0,
        worst_ancilla_infidelity: 0.0,
        ancilla_count: ancillas.len(),
        layout_restored: schedule.initial == schedule.final_layout,
        tolerance: tol,
        passed: false,
    };
    let mut first_phase = None;
    let total = 4usize.pow(k as u32);
    for combo in 0..total {
        let locals: Vec<LocalState> = (0..k).map(|q| LocalState::SPANNING[combo / 4usize.pow(q as u32) % 4]).collect();
        let factors: Vec<(Vec<usize>, Vec<C64>)> =
            locals.iter().enumerate().map(|(q, s)| (vec![q], s.amplitudes().to_vec())).collect();
        let logical_in = QuantumState::from_factors(k, &factors)?;
        let mut logical_out = logical_in.clone();
        circuit.apply_to(&mut logical_out)?;

        let mut state = embed(&reg, &schedule.initial, schedule.encoding, k, logical_in.amplitudes())?;
        let expected = embed(&reg, &schedule.final_layout, schedule.encoding, k, logical_out.amplitudes())?;
        state.apply_all(&apps)?;

        let norm_sq = state.norm().powi(2);
        let ov = expected.inner(&state)?;
        let fid = if norm_sq > 0.0 { ov.norm_sqr() / norm_sq } else { 0.0 };
        report.worst_fidelity = report.worst_fidelity.min(fid);
        report.norm_error = report.norm_error.max((norm_sq - 1.0).abs());
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { c(0., 0.) };
        let p0 = *first_phase.get_or_insert(phase);
        report.phase_deviation = report.phase_deviation.max((phase - p0).norm());
        for &(v, local) in &ancillas {
            let chk = ancilla_intact(&state, v, local)?;
            report.worst_ancilla_infidelity = report.worst_ancilla_infidelity.max(chk.infidelity);
        }
        report.inputs += 1;
    }
    report.phase = first_phase.unwrap_or(c(1., 0.));
    report.passed = report.worst_fidelity >= 1.0 - tol
        && report.norm_error <= tol
        && report.phase_deviation <= 2.0 * tol.sqrt()
        && report.worst_ancilla_infidelity <= tol;
    Ok(report)
}
