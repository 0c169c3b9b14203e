//! Compilation of logical circuits onto interaction graphs.

mod circuit;
mod encoded;
mod resources;
mod routing;
mod strategy;
mod tokens;
mod verify;

pub use circuit::{euler_angles, matchgate_to_rz_h_cz, single_qubit_gates, GateKind, LogicalCircuit, LogicalGate};
pub use resources::{count_resources, observed_tree_constant, BoundCheck, ResourceReport, BINARY_TREE_C};
pub use routing::{route, DEFAULT_ROUTING_BUDGET};
pub use strategy::{compile, compile_with, placement_for, simulate_nnn_gate, Strategy};
pub use verify::{verify, VerifyReport};

use crate::graph::{InteractionGraph, Role, Vertex};
use crate::state::GateApplication;

/// Contents of one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// Holds logical qubit `q` (one vertex of its block under pair encoding).
    Qubit(usize),
    /// Clamped `|0⟩` ancilla.
    Zero,
    /// Clamped `|+⟩` ancilla.
    Plus,
    /// Not used by the schedule.
    Idle,
}

impl Slot {
    pub fn role(&self) -> Role {
        match self {
            Slot::Qubit(_) => Role::Computational,
            Slot::Zero => Role::AncillaZero,
            Slot::Plus => Role::AncillaPlus,
            Slot::Idle => Role::Unassigned,
        }
    }
}

/// How a logical qubit is stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// One vertex per logical qubit.
    Single,
    /// `|0⟩_L = |00⟩`, `|1⟩_L = |11⟩` on two adjacent vertices.
    Pair,
}

/// Why a schedule item exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemKind {
    /// f-SWAP moving states against a `|0⟩` vertex.
    Route,
    /// f-SWAP belonging to a gadget body.
    Gadget,
    /// Gate carrying the logical action.
    Payload,
}

impl ItemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ItemKind::Route => "route",
            ItemKind::Gadget => "gadget",
            ItemKind::Payload => "payload",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "route" => Some(ItemKind::Route),
            "gadget" => Some(ItemKind::Gadget),
            "payload" => Some(ItemKind::Payload),
            _ => None,
        }
    }
}

/// Attribution of a schedule item to the logical gate that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    /// Index into the logical circuit.
    pub gate: usize,
    pub gate_kind: GateKind,
    /// Primitive step within the lowered gate; `None` for layout restoration.
    pub step: Option<(usize, GateKind)>,
    pub kind: ItemKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleItem {
    pub app: GateApplication,
    pub tag: Provenance,
}

/// Compiler output: the host graph, initial and final vertex contents and
/// the tagged gate program.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSchedule {
    pub graph: InteractionGraph,
    pub strategy: Strategy,
    pub logical_qubits: usize,
    pub logical_gates: usize,
    pub nearest_neighbor_model: bool,
    pub encoding: Encoding,
    pub initial: Vec<Slot>,
    pub final_layout: Vec<Slot>,
    pub items: Vec<ScheduleItem>,
}

impl PhysicalSchedule {
    pub fn applications(&self) -> impl Iterator<Item = &GateApplication> {
        self.items.iter().map(|i| &i.app)
    }

    pub fn initial_roles(&self) -> Vec<Role> {
        self.initial.iter().map(Slot::role).collect()
    }

    /// Vertices the schedule touches or assigns.
    pub fn active_vertices(&self) -> Vec<Vertex> {
        let mut used = vec![false; self.initial.len()];
        for (v, s) in self.initial.iter().enumerate() {
            used[v] |= *s != Slot::Idle;
        }
        for (v, s) in self.final_layout.iter().enumerate() {
            used[v] |= *s != Slot::Idle;
        }
        for it in &self.items {
            used[it.app.pair.0] = true;
            used[it.app.pair.1] = true;
        }
        (0..used.len()).filter(|&v| used[v]).collect()
    }

    /// Vertices holding logical qubit `q` in `slots`, ascending.
    pub fn hosts(slots: &[Slot], q: usize) -> Vec<Vertex> {
        (0..slots.len()).filter(|&v| slots[v] == Slot::Qubit(q)).collect()
    }
}
