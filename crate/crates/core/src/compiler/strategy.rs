//! Strategy selection, default placements and the compile entry points.

use super::encoded::{compile_encoded, EncodedLayout};
use super::resources::{count_resources, ResourceReport};
use super::routing::DEFAULT_ROUTING_BUDGET;
use super::tokens::compile_tokens;
use super::{Encoding, LogicalCircuit, LogicalGate, PhysicalSchedule, Slot};
use crate::error::{Error, Result};
use crate::gadgets::{fswap_gadget, GateSequence};
use crate::gate::TwoQubitGate;
use crate::graph::{
    detect_chain_with_pendant, detect_complete_binary_tree, detect_cycle_with_pendant, detect_hair_comb, detect_star,
    detect_wheel, InteractionGraph, Role, Vertex,
};

/// Compilation scheme. `Auto` tries the others in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Auto,
    HairCombHGadget,
    HairCombFswapEncoded,
    CycleRotation,
    ChainCenterShuttle,
    ChainPendantEncoded,
    StarHub,
    BinaryTreeLeaves,
    WheelHub,
}

impl Strategy {
    /// Concrete strategies in `Auto` order.
    pub const ALL: [Strategy; 8] = [
        Strategy::HairCombHGadget,
        Strategy::HairCombFswapEncoded,
        Strategy::CycleRotation,
        Strategy::ChainCenterShuttle,
        Strategy::ChainPendantEncoded,
        Strategy::StarHub,
        Strategy::BinaryTreeLeaves,
        Strategy::WheelHub,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::Auto => "Auto",
            Strategy::HairCombHGadget => "HairCombHGadget",
            Strategy::HairCombFswapEncoded => "HairCombFswapEncoded",
            Strategy::CycleRotation => "CycleRotation",
            Strategy::ChainCenterShuttle => "ChainCenterShuttle",
            Strategy::ChainPendantEncoded => "ChainPendantEncoded",
            Strategy::StarHub => "StarHub",
            Strategy::BinaryTreeLeaves => "BinaryTreeLeaves",
            Strategy::WheelHub => "WheelHub",
        }
    }

    /// Case-insensitive; `_` and `-` are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let norm: String = s.chars().filter(|c| *c != '_' && *c != '-').flat_map(char::to_lowercase).collect();
        std::iter::once(Strategy::Auto)
            .chain(Strategy::ALL)
            .find(|st| st.as_str().to_lowercase() == norm)
            .ok_or_else(|| Error::Config(format!("unknown strategy '{s}'")))
    }

    pub fn encoding(&self) -> Encoding {
        match self {
            Strategy::HairCombFswapEncoded | Strategy::ChainPendantEncoded => Encoding::Pair,
            _ => Encoding::Single,
        }
    }

    /// Whether states return to their initial vertices after every logical gate.
    pub fn restores_layout(&self) -> bool {
        *self != Strategy::CycleRotation
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn precondition(strategy: Strategy, msg: impl Into<String>) -> Error {
    Error::Compile(format!("{strategy}: {}", msg.into()))
}

fn needs_hole(circuit: &LogicalCircuit) -> bool {
    circuit.gates().iter().any(|g| match *g {
        LogicalGate::Cz { a, b } | LogicalGate::Mg { a, b, .. } => a.abs_diff(b) != 1,
        _ => false,
    })
}

/// Default vertex contents for `strategy` with `k` logical qubits.
/// `hole_required` asks the hair comb scheme to keep spare vertices as `|0⟩`
/// routing space instead of leaving them unused.
pub fn placement_for(strategy: Strategy, g: &InteractionGraph, k: usize, hole_required: bool) -> Result<Vec<Slot>> {
    let n = g.vertex_count();
    let mut slots = vec![Slot::Idle; n];
    let shape_err = |what: &str| precondition(strategy, format!("graph is not a {what}"));
    let capacity = |need: String| precondition(strategy, format!("capacity exceeded: {need}"));
    match strategy {
        Strategy::Auto => return Err(Error::Config("Auto has no placement of its own".into())),
        Strategy::HairCombHGadget => {
            let shape = detect_hair_comb(g).ok_or_else(|| shape_err("hair comb"))?;
            let m = shape.backbone.len();
            if k > m {
                return Err(capacity(format!("{k} qubits on a backbone of {m}")));
            }
            let spare = if hole_required { Slot::Zero } else { Slot::Idle };
            for i in 0..m {
                let busy = i < k;
                slots[shape.backbone[i]] = if busy { Slot::Qubit(i) } else { spare };
                slots[shape.teeth[i]] = if busy { Slot::Plus } else { spare };
            }
        }
        Strategy::HairCombFswapEncoded => {
            let shape = detect_hair_comb(g).ok_or_else(|| shape_err("hair comb"))?;
            let m = shape.backbone.len();
            if 2 * k > m {
                return Err(capacity(format!("{k} encoded qubits need {} backbone vertices, have {m}", 2 * k)));
            }
            for i in 0..2 * k {
                slots[shape.backbone[i]] = Slot::Qubit(i / 2);
                slots[shape.teeth[i]] = Slot::Zero;
            }
        }
        Strategy::CycleRotation => {
            let shape = detect_cycle_with_pendant(g).ok_or_else(|| shape_err("cycle with pendant"))?;
            let len = shape.cycle.len();
            if k + 1 > len {
                return Err(capacity(format!("{k} qubits on a cycle of {len} need one free cycle vertex")));
            }
            for (i, &v) in shape.cycle.iter().enumerate() {
                slots[v] = if i < k { Slot::Qubit(i) } else { Slot::Zero };
            }
            slots[shape.pendant] = Slot::Plus;
        }
        Strategy::ChainCenterShuttle => {
            let shape = detect_chain_with_pendant(g).ok_or_else(|| shape_err("chain with pendant"))?;
            if shape.at_endpoint() {
                return Err(precondition(strategy, "pendant sits at a chain endpoint"));
            }
            let len = shape.chain.len();
            let mut chain = shape.chain.clone();
            let mut a = shape.attach_index;
            if a < len - 1 - a {
                chain.reverse();
                a = len - 1 - a;
            }
            if k > a || k > len - a {
                return Err(capacity(format!("{k} qubits with the pendant at chain position {a} of {len}")));
            }
            for (i, &v) in chain.iter().enumerate() {
                slots[v] = if i < k { Slot::Qubit(i) } else { Slot::Zero };
            }
            slots[shape.pendant] = Slot::Plus;
        }
        Strategy::ChainPendantEncoded => {
            let layout = pendant_layout(g, k)?;
            for (q, &(u, v)) in layout.blocks.iter().enumerate() {
                slots[u] = Slot::Qubit(q);
                slots[v] = Slot::Qubit(q);
            }
            if let EncodedLayout { plus: Some(p), zero: Some(z), .. } = layout {
                slots[p] = Slot::Plus;
                slots[z] = Slot::Zero;
            }
        }
        Strategy::StarHub => {
            let hub = detect_star(g).ok_or_else(|| shape_err("star"))?;
            let leaves: Vec<Vertex> = g.neighbors(hub).to_vec();
            fill_sites(&mut slots, &leaves, k).map_err(|e| capacity(e))?;
            slots[hub] = Slot::Zero;
        }
        Strategy::BinaryTreeLeaves => {
            detect_complete_binary_tree(g).ok_or_else(|| shape_err("complete binary tree"))?;
            let leaves: Vec<Vertex> = (n / 2..n).collect();
            fill_sites(&mut slots, &leaves, k).map_err(|e| capacity(e))?;
            for s in slots.iter_mut().take(n / 2) {
                *s = Slot::Zero;
            }
        }
        Strategy::WheelHub => {
            let (hub, rim) = detect_wheel(g).ok_or_else(|| shape_err("wheel"))?;
            if k + 1 > rim.len() {
                return Err(capacity(format!("{k} qubits on a rim of {} need one free rim vertex", rim.len())));
            }
            for (i, &v) in rim.iter().enumerate() {
                slots[v] = if i < k { Slot::Qubit(i) } else { Slot::Zero };
            }
            slots[hub] = Slot::Plus;
        }
    }
    Ok(slots)
}

/// First `k` sites computational, the last one `|+⟩`, the rest `|0⟩`.
fn fill_sites(slots: &mut [Slot], sites: &[Vertex], k: usize) -> std::result::Result<(), String> {
    if k + 1 > sites.len() {
        return Err(format!("{k} qubits plus one |+⟩ site need {} sites, have {}", k + 1, sites.len()));
    }
    for (i, &v) in sites.iter().enumerate() {
        slots[v] = if i < k { Slot::Qubit(i) } else { Slot::Zero };
    }
    slots[*sites.last().unwrap()] = Slot::Plus;
    Ok(())
}

fn hair_comb_layout(g: &InteractionGraph, k: usize) -> Result<EncodedLayout> {
    let strategy = Strategy::HairCombFswapEncoded;
    let shape = detect_hair_comb(g).ok_or_else(|| precondition(strategy, "graph is not a hair comb"))?;
    if 2 * k > shape.backbone.len() {
        return Err(precondition(strategy, "capacity exceeded"));
    }
    let blocks = (0..k).map(|q| (shape.backbone[2 * q], shape.backbone[2 * q + 1])).collect();
    let mut tooth = vec![None; g.vertex_count()];
    for (b, t) in shape.backbone.iter().zip(&shape.teeth) {
        tooth[*b] = Some(*t);
    }
    Ok(EncodedLayout { blocks, tooth, plus: None, zero: None })
}

fn pendant_layout(g: &InteractionGraph, k: usize) -> Result<EncodedLayout> {
    let strategy = Strategy::ChainPendantEncoded;
    let shape = detect_chain_with_pendant(g).ok_or_else(|| precondition(strategy, "graph is not a chain with pendant"))?;
    if shape.at_endpoint() {
        return Err(precondition(strategy, "pendant sits at a chain endpoint"));
    }
    let len = shape.chain.len();
    let a = shape.attach_index;
    let at = |i: usize| shape.chain[i];
    let (blocks, plus): (Vec<(Vertex, Vertex)>, Vertex) = if a + 2 * k <= len {
        ((0..k).map(|q| (at(a + 2 * q), at(a + 2 * q + 1))).collect(), at(a - 1))
    } else if 2 * k <= a + 1 {
        ((0..k).map(|q| (at(a - 2 * q), at(a - 2 * q - 1))).collect(), at(a + 1))
    } else {
        return Err(precondition(
            strategy,
            format!("capacity exceeded: {k} encoded qubits do not fit beside the pendant at chain position {a} of {len}"),
        ));
    };
    Ok(EncodedLayout { blocks, tooth: Vec::new(), plus: Some(plus), zero: Some(shape.pendant) })
}

/// Token placement from graph roles: computational vertices in ascending
/// order host qubits `0..k`; surplus computational vertices become `|0⟩`.
fn placement_from_roles(strategy: Strategy, roles: &[Role], k: usize) -> Result<Vec<Slot>> {
    let mut next = 0;
    let slots: Vec<Slot> = roles
        .iter()
        .map(|r| match r {
            Role::Computational if next < k => {
                next += 1;
                Slot::Qubit(next - 1)
            }
            Role::Computational | Role::AncillaZero => Slot::Zero,
            Role::AncillaPlus => Slot::Plus,
            Role::Unassigned => Slot::Idle,
        })
        .collect();
    if next < k {
        return Err(precondition(strategy, format!("roles provide {next} computational vertices, circuit needs {k}")));
    }
    Ok(slots)
}

fn structure_holds(strategy: Strategy, g: &InteractionGraph) -> Result<()> {
    let ok = match strategy {
        Strategy::HairCombHGadget | Strategy::HairCombFswapEncoded => detect_hair_comb(g).is_some(),
        Strategy::CycleRotation => detect_cycle_with_pendant(g).is_some(),
        Strategy::ChainCenterShuttle | Strategy::ChainPendantEncoded => {
            detect_chain_with_pendant(g).is_some_and(|s| !s.at_endpoint())
        }
        Strategy::StarHub => detect_star(g).is_some(),
        Strategy::BinaryTreeLeaves => detect_complete_binary_tree(g).is_some(),
        Strategy::WheelHub => detect_wheel(g).is_some(),
        Strategy::Auto => true,
    };
    if ok {
        Ok(())
    } else {
        Err(precondition(strategy, "graph does not have the required structure"))
    }
}

/// Compiles with the graph's roles (when present) or the strategy's default placement.
pub fn compile(
    circuit: &LogicalCircuit,
    g: &InteractionGraph,
    strategy: Strategy,
) -> Result<(PhysicalSchedule, ResourceReport)> {
    compile_with(circuit, g, strategy, DEFAULT_ROUTING_BUDGET)
}

pub fn compile_with(
    circuit: &LogicalCircuit,
    g: &InteractionGraph,
    strategy: Strategy,
    budget: usize,
) -> Result<(PhysicalSchedule, ResourceReport)> {
    if strategy == Strategy::Auto {
        let mut failures = Vec::new();
        for st in Strategy::ALL {
            match compile_with(circuit, g, st, budget) {
                Ok(out) => return Ok(out),
                Err(Error::Compile(m)) => failures.push(m),
                Err(e) => failures.push(e.to_string()),
            }
        }
        return Err(Error::Compile(format!("no applicable strategy ({})", failures.join("; "))));
    }
    structure_holds(strategy, g)?;
    let k = circuit.qubit_count();
    let default = placement_for(strategy, g, k, needs_hole(circuit));
    let (initial, items, final_layout) = match strategy.encoding() {
        Encoding::Single => {
            let initial = if g.has_roles() { placement_from_roles(strategy, g.roles(), k)? } else { default? };
            let (items, final_layout) = compile_tokens(g, circuit, &initial, strategy.restores_layout(), budget)?;
            (initial, items, final_layout)
        }
        Encoding::Pair => {
            let initial = default?;
            if g.has_roles() && g.roles().iter().zip(&initial).any(|(r, s)| *r != s.role()) {
                return Err(Error::Config(format!("graph roles do not match the {strategy} placement")));
            }
            let layout = match strategy {
                Strategy::HairCombFswapEncoded => hair_comb_layout(g, k)?,
                _ => pendant_layout(g, k)?,
            };
            let items = compile_encoded(g, circuit, &layout)?;
            (initial.clone(), items, initial)
        }
    };
    let schedule = PhysicalSchedule {
        graph: g.clone(),
        strategy,
        logical_qubits: k,
        logical_gates: circuit.len(),
        nearest_neighbor_model: circuit.is_nearest_neighbor_model(),
        encoding: strategy.encoding(),
        initial,
        final_layout,
        items,
    };
    let report = count_resources(&schedule);
    Ok((schedule, report))
}

/// The f-SWAP gadget for a gate between backbone vertex `i` and the
/// backbone vertex two steps further, through the tooth of the middle vertex.
pub fn simulate_nnn_gate(g: &InteractionGraph, i: Vertex, gate: &TwoQubitGate) -> Result<GateSequence> {
    let shape = detect_hair_comb(g).ok_or_else(|| Error::Topology("graph is not a hair comb".into()))?;
    let p = shape
        .backbone
        .iter()
        .position(|&v| v == i)
        .ok_or_else(|| Error::Topology(format!("vertex {i} is not on the backbone")))?;
    if p + 2 >= shape.backbone.len() {
        return Err(Error::Topology(format!("backbone vertex {i} has no next-nearest neighbor after it")));
    }
    let b = &shape.backbone;
    fswap_gadget(g, b[p], b[p + 1], b[p + 2], shape.teeth[p + 1], gate)
}
