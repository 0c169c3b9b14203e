//! Resource accounting recomputed from tagged schedules.

use std::collections::BTreeMap;

use super::{GateKind, ItemKind, PhysicalSchedule, Strategy};
use crate::gate::{canonical, TAU_ALG};
use crate::graph::{detect_chain_with_pendant, detect_cycle_with_pendant};

/// Constant `c` in the `c·log₂(n)` bound for two-qubit gates on binary trees.
pub const BINARY_TREE_C: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: String,
    pub limit: f64,
    pub observed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResourceReport {
    pub total_gates: usize,
    pub fswaps: usize,
    pub routing_fswaps: usize,
    pub gadget_fswaps: usize,
    pub payload_gates: usize,
    pub physical_qubits: usize,
    /// Routing f-SWAPs spent on each Hadamard, in schedule order.
    pub fswaps_per_h: Vec<usize>,
    /// f-SWAPs spent on each logical two-qubit gate, in circuit order.
    pub fswaps_per_two_qubit_gate: Vec<usize>,
    /// Gadget f-SWAPs per gadget invocation.
    pub gadget_fswaps_per_invocation: Vec<usize>,
    pub bounds: Vec<BoundCheck>,
}

impl ResourceReport {
    pub fn gadget_invocations(&self) -> usize {
        self.gadget_fswaps_per_invocation.len()
    }

    pub fn max_fswaps_per_h(&self) -> usize {
        self.fswaps_per_h.iter().copied().max().unwrap_or(0)
    }

    pub fn max_fswaps_per_two_qubit_gate(&self) -> usize {
        self.fswaps_per_two_qubit_gate.iter().copied().max().unwrap_or(0)
    }

    pub fn bounds_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }
}

impl std::fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "total gates: {}", self.total_gates)?;
        writeln!(f, "f-SWAPs: {} (routing {}, gadget {})", self.fswaps, self.routing_fswaps, self.gadget_fswaps)?;
        writeln!(f, "payload gates: {}", self.payload_gates)?;
        writeln!(f, "physical qubits: {}", self.physical_qubits)?;
        writeln!(f, "max f-SWAPs per H: {}", self.max_fswaps_per_h())?;
        writeln!(f, "max f-SWAPs per two-qubit gate: {}", self.max_fswaps_per_two_qubit_gate())?;
        writeln!(f, "gadget invocations: {}", self.gadget_invocations())?;
        for b in &self.bounds {
            let verdict = if b.pass { "pass" } else { "FAIL" };
            writeln!(f, "bound {}: observed {} limit {} {verdict}", b.name, b.observed, b.limit)?;
        }
        Ok(())
    }
}

fn check(name: impl Into<String>, limit: f64, observed: f64) -> BoundCheck {
    BoundCheck { name: name.into(), limit, observed, pass: observed <= limit }
}

fn exact(name: impl Into<String>, expected: usize, observed: usize) -> BoundCheck {
    BoundCheck { name: name.into(), limit: expected as f64, observed: observed as f64, pass: expected == observed }
}

/// Exact recount from the schedule's provenance tags.
pub fn count_resources(schedule: &PhysicalSchedule) -> ResourceReport {
    let fswap = canonical::fswap();
    let mut r = ResourceReport {
        total_gates: schedule.items.len(),
        physical_qubits: schedule.active_vertices().len(),
        ..Default::default()
    };
    let mut per_h: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut per_two: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_gadget: BTreeMap<(usize, Option<usize>), usize> = BTreeMap::new();
    for item in &schedule.items {
        let t = item.tag;
        let is_fswap = item.app.gate.approx_eq(&fswap, TAU_ALG);
        if t.gate_kind.is_two_qubit() {
            per_two.entry(t.gate).or_insert(0);
        }
        if let Some((s, GateKind::H)) = t.step {
            per_h.entry((t.gate, s)).or_insert(0);
        }
        match t.kind {
            ItemKind::Payload => r.payload_gates += 1,
            ItemKind::Route => r.routing_fswaps += 1,
            ItemKind::Gadget => {
                r.gadget_fswaps += 1;
                *per_gadget.entry((t.gate, t.step.map(|s| s.0))).or_insert(0) += 1;
            }
        }
        if is_fswap {
            r.fswaps += 1;
        }
        if is_fswap && t.kind != ItemKind::Payload && t.gate_kind.is_two_qubit() {
            *per_two.get_mut(&t.gate).unwrap() += 1;
        }
        if t.kind == ItemKind::Route {
            match t.step {
                Some((s, GateKind::H)) => *per_h.get_mut(&(t.gate, s)).unwrap() += 1,
                // Restoring moves of a logical H belong to its only step.
                None if t.gate_kind == GateKind::H => *per_h.entry((t.gate, 0)).or_insert(0) += 1,
                _ => {}
            }
        }
    }
    r.fswaps_per_h = per_h.into_values().collect();
    r.fswaps_per_two_qubit_gate = per_two.into_values().collect();
    r.gadget_fswaps_per_invocation = per_gadget.into_values().collect();
    r.bounds = bounds(schedule, &r);
    r
}

fn bounds(schedule: &PhysicalSchedule, r: &ResourceReport) -> Vec<BoundCheck> {
    let g = &schedule.graph;
    let mut out = Vec::new();
    match schedule.strategy {
        Strategy::CycleRotation => {
            if let Some(shape) = detect_cycle_with_pendant(g) {
                let n = shape.cycle.len() as f64;
                out.push(check("f-SWAPs per H <= n^2/2", n * n / 2.0, r.max_fswaps_per_h() as f64));
            }
        }
        Strategy::ChainCenterShuttle => {
            if let Some(shape) = detect_chain_with_pendant(g) {
                let n = shape.chain.len() as f64;
                out.push(check("f-SWAPs per H <= n^2", n * n, r.max_fswaps_per_h() as f64));
            }
        }
        Strategy::BinaryTreeLeaves => {
            let log_n = (g.vertex_count() as f64).log2();
            out.push(check(
                "f-SWAPs per two-qubit gate <= c*log2(n)",
                BINARY_TREE_C * log_n,
                r.max_fswaps_per_two_qubit_gate() as f64,
            ));
        }
        Strategy::HairCombHGadget if schedule.nearest_neighbor_model => {
            out.push(exact("total gates = logical gates", schedule.logical_gates, r.total_gates));
            out.push(exact("physical qubits = 2k", 2 * schedule.logical_qubits, r.physical_qubits));
        }
        Strategy::HairCombFswapEncoded => {
            let worst = r.gadget_fswaps_per_invocation.iter().copied().find(|&c| c != 4).unwrap_or(4);
            out.push(exact("gadget f-SWAPs per f-SWAP gadget = 4", 4, worst));
        }
        _ => {}
    }
    out
}

/// Observed `c = max f-SWAPs per two-qubit gate / log₂(n)`.
pub fn observed_tree_constant(schedule: &PhysicalSchedule, report: &ResourceReport) -> f64 {
    report.max_fswaps_per_two_qubit_gate() as f64 / (schedule.graph.vertex_count() as f64).log2()
}
