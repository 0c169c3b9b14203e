//! Structural certificates that a graph supports one of the universal
//! compilation schemes.
//!
//! Every certificate carries a role assignment and a strategy, and is only
//! emitted after a two-gate probe circuit compiles with them and verifies.

use std::collections::BTreeSet;

use crate::compiler::{compile, placement_for, verify, LogicalCircuit, LogicalGate, Strategy};
use crate::error::{Error, Result};
use crate::graph::{detect_chain_with_pendant, detect_hair_comb, search_cycles, search_paths, InteractionGraph, Role, Vertex};

/// Verification tolerance of the probe circuit.
pub const PROBE_TOLERANCE: f64 = 1e-8;

/// Default node-expansion budget for the cycle and path searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    LargeCycle,
    TStructurePath,
    Degree3Path,
    AncillaConnectableSet,
    PendantOnChain,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::LargeCycle,
        Condition::TStructurePath,
        Condition::Degree3Path,
        Condition::AncillaConnectableSet,
        Condition::PendantOnChain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::LargeCycle => "LargeCycle",
            Condition::TStructurePath => "TStructurePath",
            Condition::Degree3Path => "Degree3Path",
            Condition::AncillaConnectableSet => "AncillaConnectableSet",
            Condition::PendantOnChain => "PendantOnChain",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown condition '{s}'")))
    }
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of the probe compilation for a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeStatus {
    Verified,
    /// Compiled, but the register exceeds the statevector cap.
    Unverifiable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalityCertificate {
    pub condition: Condition,
    /// Cycle, path or vertex set, depending on the condition.
    pub witness: Vec<Vertex>,
    pub roles: Vec<Role>,
    pub overhead: String,
    pub strategy: Strategy,
    pub probe: ProbeStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub k: usize,
    pub certificates: Vec<UniversalityCertificate>,
    /// Some search ran out of budget, so missing certificates are not conclusive.
    pub exhausted: bool,
}

/// Verdict of an analysis. There is deliberately no "not universal".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NoCertificate,
    Unknown,
}

impl Analysis {
    pub fn verdict(&self) -> Verdict {
        if !self.certificates.is_empty() {
            Verdict::Certified
        } else if self.exhausted {
            Verdict::Unknown
        } else {
            Verdict::NoCertificate
        }
    }
}

/// Witness and roles before strategy selection.
struct Candidate {
    witness: Vec<Vertex>,
    roles: Vec<Role>,
    overhead: String,
    /// Tried in order before the generic token strategies.
    preferred: Vec<Strategy>,
}

const TOKEN_STRATEGIES: [Strategy; 6] = [
    Strategy::HairCombHGadget,
    Strategy::CycleRotation,
    Strategy::ChainCenterShuttle,
    Strategy::StarHub,
    Strategy::BinaryTreeLeaves,
    Strategy::WheelHub,
];

/// Searches for every certificate with `k` computational qubits.
pub fn analyze(g: &InteractionGraph, k: usize, budget: u64) -> Result<Analysis> {
    if k == 0 {
        return Err(Error::Validation("k must be at least 1".into()));
    }
    let mut out = Analysis { k, certificates: Vec::new(), exhausted: false };
    if budget == 0 {
        out.exhausted = true;
        return Ok(out);
    }
    // Chains and cycles offer no site for a |+⟩ ancilla.
    if g.max_degree() <= 2 {
        return Ok(out);
    }
    let probe = probe_circuit(k)?;
    for condition in Condition::ALL {
        let (candidate, complete) = match condition {
            Condition::LargeCycle => large_cycle(g, k, budget),
            Condition::TStructurePath => t_structure_path(g, k, budget),
            Condition::Degree3Path => degree3_path(g, k, budget),
            Condition::AncillaConnectableSet => (ancilla_connectable_set(g, k), true),
            Condition::PendantOnChain => (pendant_on_chain(g, k), true),
        };
        out.exhausted |= !complete;
        let Some(c) = candidate else { continue };
        let strategies = c.preferred.iter().copied().chain(TOKEN_STRATEGIES);
        let mut seen = BTreeSet::new();
        for strategy in strategies.filter(|s| seen.insert(s.as_str())) {
            if let Some(status) = run_probe(g, &probe, &c.roles, strategy) {
                out.certificates.push(UniversalityCertificate {
                    condition,
                    witness: c.witness.clone(),
                    roles: c.roles.clone(),
                    overhead: c.overhead.clone(),
                    strategy,
                    probe: status,
                });
                break;
            }
        }
    }
    Ok(out)
}

/// `H(0)·CZ(0,1)`, or `H(0)·RZ(0)` for a single qubit.
pub fn probe_circuit(k: usize) -> Result<LogicalCircuit> {
    let second = if k >= 2 { LogicalGate::Cz { a: 0, b: 1 } } else { LogicalGate::Rz { q: 0, theta: 0.5 } };
    LogicalCircuit::with_gates(k, vec![LogicalGate::H { q: 0 }, second])
}

fn run_probe(g: &InteractionGraph, probe: &LogicalCircuit, roles: &[Role], strategy: Strategy) -> Option<ProbeStatus> {
    let host = g.clone().with_roles(roles.to_vec()).ok()?;
    let (schedule, _) = compile(probe, &host, strategy).ok()?;
    match verify(probe, &schedule, PROBE_TOLERANCE) {
        Ok(r) if r.passed => Some(ProbeStatus::Verified),
        Err(Error::Resource(_)) => Some(ProbeStatus::Unverifiable),
        _ => None,
    }
}

/// Roles with `qubits` computational, `plus` as the `|+⟩` site and `zero` as `|0⟩`.
fn assign(n: usize, qubits: &[Vertex], plus: Vertex, zero: impl IntoIterator<Item = Vertex>) -> Vec<Role> {
    let mut roles = vec![Role::Unassigned; n];
    for z in zero {
        roles[z] = Role::AncillaZero;
    }
    for &q in qubits {
        roles[q] = Role::Computational;
    }
    roles[plus] = Role::AncillaPlus;
    roles
}

/// Longest cycle of at least `k + 2` vertices with an off-cycle neighbor.
fn large_cycle(g: &InteractionGraph, k: usize, budget: u64) -> (Option<Candidate>, bool) {
    let n = g.vertex_count();
    let mut best: Option<(Vec<Vertex>, Vertex)> = None;
    let complete = search_cycles(g, budget, |cycle| {
        if cycle.len() < k + 2 || best.as_ref().is_some_and(|(b, _)| b.len() >= cycle.len()) {
            return;
        }
        let on: BTreeSet<Vertex> = cycle.iter().copied().collect();
        let attach = cycle.iter().flat_map(|&v| g.neighbors(v)).copied().filter(|w| !on.contains(w)).min();
        if let Some(p) = attach {
            best = Some((cycle.to_vec(), p));
        }
    });
    let candidate = best.map(|(cycle, plus)| {
        // Start the qubits at the cycle vertex next to the |+⟩ site.
        let start = cycle.iter().position(|&v| g.has_edge(v, plus)).unwrap();
        let mut rotated = cycle[start..].to_vec();
        rotated.extend_from_slice(&cycle[..start]);
        let len = rotated.len();
        Candidate {
            roles: assign(n, &rotated[..k], plus, rotated[k..].iter().copied()),
            overhead: format!("at most n^2/2 f-SWAPs per H with n = {len}"),
            witness: rotated,
            preferred: vec![Strategy::CycleRotation],
        }
    });
    (candidate, complete)
}

fn pendant_of(g: &InteractionGraph, v: Vertex) -> Option<Vertex> {
    g.neighbors(v).iter().copied().find(|&w| g.degree(w) == 1)
}

/// First path of `k` vertices that each carry a degree-one pendant.
fn t_structure_path(g: &InteractionGraph, k: usize, budget: u64) -> (Option<Candidate>, bool) {
    let mut found: Option<Vec<Vertex>> = None;
    let complete = search_paths(
        g,
        budget,
        |v| g.degree(v) > 1 && pendant_of(g, v).is_some(),
        |path| {
            if found.is_none() && path.len() == k {
                found = Some(path.to_vec());
            }
        },
    );
    let candidate = found.map(|path| {
        let pendants: Vec<Vertex> = path.iter().map(|&v| pendant_of(g, v).unwrap()).collect();
        let mut roles = assign(g.vertex_count(), &path, pendants[0], []);
        for &p in &pendants {
            roles[p] = Role::AncillaPlus;
        }
        Candidate {
            witness: path,
            roles,
            overhead: format!("as many gates as a nearest-neighbor circuit on {k} qubits, {} physical qubits", 2 * k),
            preferred: vec![Strategy::HairCombHGadget],
        }
    });
    (candidate, complete)
}

/// First path of `2k` vertices that all have degree greater than two.
fn degree3_path(g: &InteractionGraph, k: usize, budget: u64) -> (Option<Candidate>, bool) {
    let n = g.vertex_count();
    let mut found: Option<Vec<Vertex>> = None;
    let complete = search_paths(
        g,
        budget,
        |v| g.degree(v) > 2,
        |path| {
            if found.is_none() && path.len() == 2 * k {
                found = Some(path.to_vec());
            }
        },
    );
    let candidate = found.map(|path| {
        let on: BTreeSet<Vertex> = path.iter().copied().collect();
        let off: BTreeSet<Vertex> = path.iter().flat_map(|&v| g.neighbors(v)).copied().filter(|w| !on.contains(w)).collect();
        let plus = off.iter().copied().find(|&w| g.has_edge(w, path[0])).or(off.first().copied()).unwrap_or(path[k]);
        let zero = path[k..].iter().copied().chain(off.iter().copied()).filter(|&w| w != plus);
        let mut roles = assign(n, &path[..k], plus, zero);
        let mut preferred = Vec::new();
        // The encoded hair comb layout fixes its own roles.
        if detect_hair_comb(g).is_some() {
            if let Ok(slots) = placement_for(Strategy::HairCombFswapEncoded, g, k, false) {
                roles = slots.iter().map(|s| s.role()).collect();
                preferred.push(Strategy::HairCombFswapEncoded);
            }
        }
        Candidate {
            witness: path,
            roles,
            overhead: "4 additional f-SWAPs per next-nearest-neighbor gate".into(),
            preferred,
        }
    });
    (candidate, complete)
}

/// Grows a connected `|0⟩` region from a maximum-degree vertex until its
/// boundary offers `k` computational sites and one `|+⟩` site.
fn ancilla_connectable_set(g: &InteractionGraph, k: usize) -> Option<Candidate> {
    let n = g.vertex_count();
    let seed = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))?;
    let mut region: BTreeSet<Vertex> = BTreeSet::from([seed]);
    loop {
        let boundary: Vec<Vertex> = region
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .copied()
            .filter(|w| !region.contains(w))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if boundary.len() >= k + 1 {
            let qubits = &boundary[..k];
            let plus = boundary[k];
            let size = region.len();
            let roles = assign(n, qubits, plus, region.iter().copied());
            let mut witness = qubits.to_vec();
            witness.push(plus);
            return Some(Candidate {
                witness,
                roles,
                overhead: format!("routing through a |0⟩ region of {size} vertex(es) per gate"),
                preferred: Vec::new(),
            });
        }
        let next = boundary.iter().copied().max_by_key(|&w| (g.degree(w), std::cmp::Reverse(w)))?;
        region.insert(next);
    }
}

/// A chain with a pendant away from the endpoints, in the encoded layout.
fn pendant_on_chain(g: &InteractionGraph, k: usize) -> Option<Candidate> {
    let shape = detect_chain_with_pendant(g).filter(|s| !s.at_endpoint())?;
    let slots = placement_for(Strategy::ChainPendantEncoded, g, k, false).ok()?;
    let len = shape.chain.len();
    let mut witness = shape.chain.clone();
    witness.push(shape.pendant);
    Some(Candidate {
        witness,
        roles: slots.iter().map(|s| s.role()).collect(),
        overhead: format!("O(n) f-SWAPs per logical gate with n = {len}"),
        preferred: vec![Strategy::ChainPendantEncoded],
    })
}
