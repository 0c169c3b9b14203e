//! Lowering for strategies that keep one logical qubit per vertex.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::routing::route;
use super::{GateKind, ItemKind, LogicalCircuit, LogicalGate, Provenance, ScheduleItem, Slot};
use crate::error::{Error, Result};
use crate::gate::{canonical, TwoQubitGate};
use crate::graph::{InteractionGraph, Vertex};
use crate::state::GateApplication;

#[derive(Debug, Clone, Copy)]
enum Prim {
    Rz(usize, f64),
    H(usize),
    Mg(TwoQubitGate, usize, usize),
    /// Final f-SWAP of a logical SWAP; relabels the two vertices.
    SwapFinish(usize, usize),
}

impl Prim {
    fn kind(&self) -> GateKind {
        match self {
            Prim::Rz(..) => GateKind::Rz,
            Prim::H(_) => GateKind::H,
            Prim::Mg(..) | Prim::SwapFinish(..) => GateKind::Mg,
        }
    }
}

/// `CZ ≃ (Rz(π/2)⊗Rz(π/2))·(H⊗H)·exp(iπ/4·XX)·(H⊗H)`, program order.
fn lower(gate: &LogicalGate) -> Vec<Prim> {
    match *gate {
        LogicalGate::Rz { q, theta } => vec![Prim::Rz(q, theta)],
        LogicalGate::H { q } => vec![Prim::H(q)],
        LogicalGate::Mg { gate, a, b } => vec![Prim::Mg(gate, a, b)],
        LogicalGate::Cz { a, b } => vec![
            Prim::H(a),
            Prim::H(b),
            Prim::Mg(canonical::xx_rotation(FRAC_PI_4), a, b),
            Prim::H(a),
            Prim::H(b),
            Prim::Rz(a, FRAC_PI_2),
            Prim::Rz(b, FRAC_PI_2),
        ],
    }
}

fn position(slots: &[Slot], q: usize) -> Vertex {
    slots.iter().position(|s| *s == Slot::Qubit(q)).expect("qubit present in layout")
}

struct Emitter<'a> {
    g: &'a InteractionGraph,
    items: Vec<ScheduleItem>,
}

impl Emitter<'_> {
    fn emit(&mut self, gate: TwoQubitGate, u: Vertex, v: Vertex, tag: Provenance) -> Result<()> {
        if !self.g.has_edge(u, v) {
            return Err(Error::Topology(format!("no edge between {u} and {v}")));
        }
        self.items.push(ScheduleItem { app: GateApplication::new(gate, u, v)?, tag });
        Ok(())
    }
}

/// Path from `from` to `to` through qubit and `|0⟩` vertices only.
fn token_path(g: &InteractionGraph, slots: &[Slot], from: Vertex, to: Vertex) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            while *path.last().unwrap() != from {
                path.push(parent[*path.last().unwrap()]);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX && matches!(slots[w], Slot::Qubit(_) | Slot::Zero) {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// `SWAP = f-SWAP · CZ` on two adjacent qubits, program order.
fn swap_steps(a: usize, b: usize) -> Vec<Prim> {
    let mut steps = lower(&LogicalGate::Cz { a, b });
    steps.push(Prim::SwapFinish(a, b));
    steps
}

/// Returns the tagged program and the final layout.
///
/// Routing moves of each logical gate are undone after it when `restore` is
/// set. Pairs that hole routing cannot make adjacent are brought together by
/// logical SWAPs, which permute the qubits for good.
pub(super) fn compile_tokens(
    g: &InteractionGraph,
    circuit: &LogicalCircuit,
    initial: &[Slot],
    restore: bool,
    budget: usize,
) -> Result<(Vec<ScheduleItem>, Vec<Slot>)> {
    for q in 0..circuit.qubit_count() {
        let hosts = initial.iter().filter(|s| **s == Slot::Qubit(q)).count();
        if hosts != 1 {
            return Err(Error::Config(format!("logical qubit {q} has {hosts} host vertices, expected 1")));
        }
    }
    if !initial.contains(&Slot::Plus) && circuit.gates().iter().any(|g| matches!(g, LogicalGate::H { .. } | LogicalGate::Cz { .. })) {
        return Err(Error::Compile("placement has no |+⟩ ancilla for Hadamard gates".into()));
    }
    let fswap = canonical::fswap();
    let mut slots = initial.to_vec();
    let mut out = Emitter { g, items: Vec::new() };
    let step_cap = 64 * g.vertex_count().max(4);
    for (gi, gate) in circuit.gates().iter().enumerate() {
        let gate_kind = gate.kind();
        let mut moves: Vec<(Vertex, Vertex)> = Vec::new();
        let mut queue: VecDeque<Prim> = lower(gate).into();
        let mut si = 0;
        while let Some(prim) = queue.pop_front() {
            if si > step_cap {
                return Err(Error::Routing(format!("logical gate {gi} did not converge after {step_cap} steps")));
            }
            let step = Some((si, prim.kind()));
            let tag = |kind| Provenance { gate: gi, gate_kind, step, kind };
            si += 1;
            let adjacent = |s: &[Slot], a: usize, b: usize| g.has_edge(position(s, a), position(s, b));
            let path = match prim {
                Prim::Rz(..) => Ok(Vec::new()),
                Prim::H(q) => route(g, &slots, &[q], |s| next_to_plus(g, s, q), budget),
                Prim::Mg(_, a, b) | Prim::SwapFinish(a, b) => route(g, &slots, &[a, b], |s| adjacent(s, a, b), budget),
            };
            let path = match (path, prim) {
                (Ok(p), _) => p,
                (Err(Error::Routing(_)), Prim::Mg(_, a, b) | Prim::SwapFinish(a, b)) => {
                    // Step `b` toward `a`: a hole move or a logical SWAP.
                    let (pa, pb) = (position(&slots, a), position(&slots, b));
                    let path = token_path(g, &slots, pb, pa)
                        .ok_or_else(|| Error::Routing(format!("qubits {a} and {b} cannot be brought together")))?;
                    let x = path[1];
                    queue.push_front(prim);
                    match slots[x] {
                        Slot::Zero => {
                            out.emit(fswap, pb, x, tag(ItemKind::Route))?;
                            slots.swap(pb, x);
                            moves.push((pb, x));
                        }
                        Slot::Qubit(c) => {
                            for p in swap_steps(b, c).into_iter().rev() {
                                queue.push_front(p);
                            }
                        }
                        _ => unreachable!("token paths avoid ancillas and idle vertices"),
                    }
                    continue;
                }
                (Err(e), _) => return Err(e),
            };
            for &(u, v) in &path {
                out.emit(fswap, u, v, tag(ItemKind::Route))?;
                slots.swap(u, v);
            }
            moves.extend(path);
            match prim {
                Prim::Rz(q, theta) => {
                    let u = position(&slots, q);
                    let nbrs = g.neighbors(u);
                    let w = *nbrs
                        .iter()
                        .find(|&&w| slots[w] != Slot::Idle)
                        .or(nbrs.first())
                        .ok_or_else(|| Error::Topology(format!("vertex {u} is isolated")))?;
                    out.emit(canonical::rz_first(theta), u, w, tag(ItemKind::Payload))?;
                }
                Prim::H(q) => {
                    let u = position(&slots, q);
                    let plus = g.neighbors(u).iter().copied().find(|&w| slots[w] == Slot::Plus).expect("routed next to |+⟩");
                    out.emit(canonical::hh(), u, plus, tag(ItemKind::Payload))?;
                }
                Prim::Mg(gate, a, b) => {
                    out.emit(gate, position(&slots, a), position(&slots, b), tag(ItemKind::Payload))?;
                }
                Prim::SwapFinish(a, b) => {
                    let (pa, pb) = (position(&slots, a), position(&slots, b));
                    out.emit(fswap, pa, pb, tag(ItemKind::Payload))?;
                    slots.swap(pa, pb);
                }
            }
        }
        if restore {
            let tag = Provenance { gate: gi, gate_kind, step: None, kind: ItemKind::Route };
            for &(u, v) in moves.iter().rev() {
                out.emit(fswap, u, v, tag)?;
                slots.swap(u, v);
            }
        }
    }
    Ok((out.items, slots))
}

fn next_to_plus(g: &InteractionGraph, slots: &[Slot], q: usize) -> bool {
    g.neighbors(position(slots, q)).iter().any(|&w| slots[w] == Slot::Plus)
}
