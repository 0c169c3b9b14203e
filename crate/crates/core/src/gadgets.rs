//! Gadget gate sequences: f-SWAP gadgets, the H-gadget, hole routing,
//! 2-to-1 encoding and the encoded CZ constructions.
//!
//! A [`GateSequence`] is a program: `ops[0]` runs first. Operator products
//! written right-to-left are transcribed with the rightmost factor first.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::gate::{canonical, hadamard, make_gate, TwoQubitGate, Unitary2, C64, TAU_ALG};
use crate::graph::{shortest_path, InteractionGraph, Vertex};
use crate::state::{Clamp, GateApplication};

/// Ordered matchgate program with the ancilla clamps it relies on.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateSequence {
    pub ops: Vec<GateApplication>,
    pub clamps: Vec<(Vertex, Clamp)>,
}

impl GateSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Appends `gate` on the oriented pair `(u, v)` after checking the edge.
    pub fn push(&mut self, g: &InteractionGraph, gate: TwoQubitGate, u: Vertex, v: Vertex) -> Result<()> {
        if u >= g.vertex_count() || v >= g.vertex_count() || !g.has_edge(u, v) {
            return Err(Error::Topology(format!("no edge between {u} and {v}")));
        }
        if !gate.is_matchgate() {
            return Err(Error::Validation(format!("gate on ({u},{v}) is not a matchgate")));
        }
        self.ops.push(GateApplication::new(gate, u, v)?);
        Ok(())
    }

    pub fn clamp(&mut self, v: Vertex, value: Clamp) {
        if !self.clamps.iter().any(|(w, _)| *w == v) {
            self.clamps.push((v, value));
        }
    }

    pub fn extend(&mut self, other: GateSequence) {
        self.ops.extend(other.ops);
        for (v, cl) in other.clamps {
            self.clamp(v, cl);
        }
    }

    /// Reversed program with adjoint gates.
    pub fn inverse(&self) -> GateSequence {
        GateSequence {
            ops: self.ops.iter().rev().map(|a| GateApplication { gate: a.gate.adjoint(), pair: a.pair }).collect(),
            clamps: self.clamps.clone(),
        }
    }

    pub fn fswap_count(&self) -> usize {
        let f = canonical::fswap();
        self.ops.iter().filter(|a| a.gate.approx_eq(&f, TAU_ALG)).count()
    }

    /// Checks every gate is a matchgate on an existing edge.
    pub fn validate_on(&self, g: &InteractionGraph) -> Result<()> {
        for a in &self.ops {
            let (u, v) = a.pair;
            if !g.has_edge(u, v) {
                return Err(Error::Topology(format!("no edge between {u} and {v}")));
            }
            if !a.gate.is_matchgate() {
                return Err(Error::Validation(format!("gate on ({u},{v}) is not a matchgate")));
            }
        }
        Ok(())
    }
}

fn fswap() -> TwoQubitGate {
    canonical::fswap()
}

/// Five-gate sequence simulating `G` on `(i_prev, i_next)` through the
/// T structure at `i`, with `ancilla` clamped to `|0⟩`.
pub fn fswap_gadget(
    g: &InteractionGraph,
    i_prev: Vertex,
    i: Vertex,
    i_next: Vertex,
    ancilla: Vertex,
    gate: &TwoQubitGate,
) -> Result<GateSequence> {
    let mut s = GateSequence::new();
    s.clamp(ancilla, Clamp::Zero);
    s.push(g, fswap(), ancilla, i)?;
    s.push(g, fswap(), i, i_prev)?;
    s.push(g, *gate, i, i_next)?;
    s.push(g, fswap(), i, i_prev)?;
    s.push(g, fswap(), ancilla, i)?;
    Ok(s)
}

/// Simulates `G` on `(chain[0], chain[3])` by hiding both middle qubits in
/// their `|0⟩` pendants.
pub fn third_neighbor_gadget(
    g: &InteractionGraph,
    chain: [Vertex; 4],
    ancillas: [Vertex; 2],
    gate: &TwoQubitGate,
) -> Result<GateSequence> {
    let [c0, c1, c2, c3] = chain;
    let [a1, a2] = ancillas;
    let mut s = GateSequence::new();
    s.clamp(a1, Clamp::Zero);
    s.clamp(a2, Clamp::Zero);
    s.push(g, fswap(), a1, c1)?;
    s.push(g, fswap(), a2, c2)?;
    s.push(g, fswap(), c1, c0)?;
    s.push(g, fswap(), c2, c1)?;
    s.push(g, *gate, c2, c3)?;
    s.push(g, fswap(), c2, c1)?;
    s.push(g, fswap(), c1, c0)?;
    s.push(g, fswap(), a2, c2)?;
    s.push(g, fswap(), a1, c1)?;
    Ok(s)
}

/// `G(H,H)` on `(i, ancilla)`: Hadamard on `i`, ancilla clamped to `|+⟩`.
/// The orientation matters: `G(H,H)` is not symmetric under exchange.
pub fn h_gadget(g: &InteractionGraph, i: Vertex, ancilla: Vertex) -> Result<GateSequence> {
    let mut s = GateSequence::new();
    s.clamp(ancilla, Clamp::Plus);
    s.push(g, canonical::hh(), i, ancilla)?;
    Ok(s)
}

/// Moves the `|0⟩` hole along `path` (which starts at the hole), one f-SWAP
/// per edge. Returns the sequence and the final hole position.
pub fn hole_route(g: &InteractionGraph, hole_at: Vertex, path: &[Vertex]) -> Result<(GateSequence, Vertex)> {
    if path.first() != Some(&hole_at) {
        return Err(Error::Validation("hole path must start at the hole".into()));
    }
    let mut s = GateSequence::new();
    s.clamp(hole_at, Clamp::Zero);
    for w in path.windows(2) {
        s.push(g, fswap(), w[0], w[1])?;
    }
    Ok((s, *path.last().unwrap()))
}

/// Outcome of [`bring_adjacent`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacentRoute {
    pub sequence: GateSequence,
    pub inverse: GateSequence,
    /// Contents per vertex after the moves.
    pub layout: Vec<Option<usize>>,
}

/// Walks `qubit_a`'s state along a shortest path until it sits next to
/// `qubit_b`. `layout[v]` names the state held at `v`; `None` marks a `|0⟩`
/// vertex, which any f-SWAP can pass through without a sign.
pub fn bring_adjacent(g: &InteractionGraph, layout: &[Option<usize>], qubit_a: usize, qubit_b: usize) -> Result<AdjacentRoute> {
    let find = |lay: &[Option<usize>], q: usize| {
        lay.iter()
            .position(|x| *x == Some(q))
            .ok_or_else(|| Error::Routing(format!("qubit {q} is not in the layout")))
    };
    let mut lay = layout.to_vec();
    let mut seq = GateSequence::new();
    for (v, x) in layout.iter().enumerate() {
        if x.is_none() {
            seq.clamp(v, Clamp::Zero);
        }
    }
    let pos_b = find(&lay, qubit_b)?;
    loop {
        let pos_a = find(&lay, qubit_a)?;
        if g.has_edge(pos_a, pos_b) {
            break;
        }
        let path = shortest_path(g, pos_a, pos_b)?;
        let target = path[1];
        if lay[target].is_some() {
            // Pull the nearest hole into `target` without disturbing a or b.
            let blocked = |v: Vertex| v == pos_a || v == pos_b;
            let hole_path = nearest_hole_path(g, &lay, target, blocked).ok_or_else(|| {
                Error::Routing(format!("no |0⟩ vertex can reach {target} without displacing the targets"))
            })?;
            for w in hole_path.windows(2).rev() {
                seq.push(g, fswap(), w[0], w[1])?;
                lay.swap(w[0], w[1]);
            }
        }
        seq.push(g, fswap(), target, pos_a)?;
        lay.swap(target, pos_a);
    }
    Ok(AdjacentRoute { inverse: seq.inverse(), sequence: seq, layout: lay })
}

/// Shortest path from `from` to the closest empty vertex, avoiding `blocked`.
fn nearest_hole_path(
    g: &InteractionGraph,
    lay: &[Option<usize>],
    from: Vertex,
    blocked: impl Fn(Vertex) -> bool,
) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    parent[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if lay[u].is_none() {
            let mut path = vec![u];
            while *path.last().unwrap() != from {
                path.push(parent[*path.last().unwrap()]);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX && !blocked(w) {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// A logical qubit stored as `|0⟩_L = |00⟩`, `|1⟩_L = |11⟩` on an adjacent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodedBlock(pub Vertex, pub Vertex);

/// Ordered encoded blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedRegister {
    pub blocks: Vec<EncodedBlock>,
}

impl EncodedRegister {
    pub fn new(g: &InteractionGraph, blocks: Vec<EncodedBlock>) -> Result<Self> {
        let mut seen = vec![false; g.vertex_count()];
        for b in &blocks {
            if !g.has_edge(b.0, b.1) {
                return Err(Error::Topology(format!("block ({},{}) is not an edge", b.0, b.1)));
            }
            for v in [b.0, b.1] {
                if seen[v] {
                    return Err(Error::Validation(format!("vertex {v} used by two blocks")));
                }
                seen[v] = true;
            }
        }
        Ok(Self { blocks })
    }
}

/// Prepares `|bit⟩_L` from `|00⟩`: nothing for 0, `G(X,X)` for 1.
pub fn encode_logical(g: &InteractionGraph, block: EncodedBlock, bit: bool) -> Result<GateSequence> {
    let mut s = GateSequence::new();
    if !g.has_edge(block.0, block.1) {
        return Err(Error::Topology(format!("block ({},{}) is not an edge", block.0, block.1)));
    }
    if bit {
        s.push(g, canonical::xx(), block.0, block.1)?;
    }
    Ok(s)
}

/// Logical single-qubit gate `A` as `G(A,A)` on the block.
pub fn logical_gate(g: &InteractionGraph, block: EncodedBlock, a: &Unitary2) -> Result<GateSequence> {
    let mut s = GateSequence::new();
    s.push(g, make_gate(a, a), block.0, block.1)?;
    Ok(s)
}

/// Moves the state at `psi` through the encoded block next to it:
/// `|ψ⟩|φ⟩_L → |φ⟩_L|ψ⟩`, the block landing on `(psi, block.0)` and `ψ` on `block.1`.
pub fn logical_swap_through(g: &InteractionGraph, psi: Vertex, block: EncodedBlock) -> Result<GateSequence> {
    let mut s = GateSequence::new();
    s.push(g, fswap(), psi, block.0)?;
    s.push(g, fswap(), block.0, block.1)?;
    Ok(s)
}

/// Moves `first` (a block) through `second` along the chain
/// `first.0 – first.1 – second.0 – second.1`; afterwards `second`'s logical
/// state sits on `(first.0, first.1)` and `first`'s on `(second.0, second.1)`.
pub fn block_exchange(g: &InteractionGraph, first: EncodedBlock, second: EncodedBlock) -> Result<GateSequence> {
    let mut s = logical_swap_through(g, first.1, second)?;
    s.extend(logical_swap_through(g, first.0, EncodedBlock(first.1, second.0))?);
    Ok(s)
}

/// One step of a matchgate-plus-Hadamard template on a single oriented edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemplateStep {
    Gate(TwoQubitGate),
    /// `H` on both qubits of the edge.
    HadamardBoth,
}

/// `SWAP = f-SWAP · CZ` with `CZ ≃ (Rz(π/2)⊗Rz(π/2))·(H⊗H)·exp(iπ/4·XX)·(H⊗H)`,
/// in program order.
pub fn swap_via_matchgates_and_h() -> Vec<TemplateStep> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    vec![
        TemplateStep::HadamardBoth,
        TemplateStep::Gate(canonical::xx_rotation(FRAC_PI_4)),
        TemplateStep::HadamardBoth,
        TemplateStep::Gate(canonical::rz_both(FRAC_PI_2)),
        TemplateStep::Gate(fswap()),
    ]
}

/// Operator product of a template; H-slots are dropped when `with_h` is false.
pub fn template_product(steps: &[TemplateStep], with_h: bool) -> Matrix4<C64> {
    let h = hadamard();
    let hh = h.kronecker(&h);
    steps.iter().fold(Matrix4::identity(), |acc, step| match step {
        TemplateStep::Gate(g) => g.matrix() * acc,
        TemplateStep::HadamardBoth if with_h => hh * acc,
        TemplateStep::HadamardBoth => acc,
    })
}

/// Supplies Hadamards on both qubits of an interface pair using only
/// matchgates and ancillas; states end on the vertices they started on.
pub trait HadamardProvider {
    fn hadamard_pair(&mut self, g: &InteractionGraph, u: Vertex, v: Vertex) -> Result<GateSequence>;
}

/// A `|+⟩` ancilla adjacent to both interface qubits (shared, as on a wheel hub).
#[derive(Debug, Clone, Copy)]
pub struct SharedPlusProvider {
    pub plus: Vertex,
}

impl HadamardProvider for SharedPlusProvider {
    fn hadamard_pair(&mut self, g: &InteractionGraph, u: Vertex, v: Vertex) -> Result<GateSequence> {
        let mut s = h_gadget(g, u, self.plus)?;
        s.extend(h_gadget(g, v, self.plus)?);
        Ok(s)
    }
}

/// Shuttles a `|+⟩` ancilla onto `site` (the first interface qubit) using a
/// `|0⟩` ancilla: both ancillas must neighbor `site`.
///
/// The qubit at `site` is first parked in the `|0⟩` ancilla, then the `|+⟩`
/// ancilla moves into `site`, where it neighbors both interface states.
#[derive(Debug, Clone, Copy)]
pub struct ShuttleProvider {
    pub site: Vertex,
    pub plus: Vertex,
    pub zero: Vertex,
}

impl HadamardProvider for ShuttleProvider {
    fn hadamard_pair(&mut self, g: &InteractionGraph, u: Vertex, v: Vertex) -> Result<GateSequence> {
        if u != self.site {
            return Err(Error::Routing(format!("shuttle serves site {} but was asked for {u}", self.site)));
        }
        let mut s = GateSequence::new();
        s.clamp(self.plus, Clamp::Plus);
        s.clamp(self.zero, Clamp::Zero);
        s.push(g, fswap(), self.zero, self.site)?;
        s.push(g, fswap(), self.plus, self.site)?;
        s.push(g, canonical::hh(), self.zero, self.site)?;
        s.push(g, canonical::hh(), v, self.site)?;
        s.push(g, fswap(), self.plus, self.site)?;
        s.push(g, fswap(), self.zero, self.site)?;
        Ok(s)
    }
}

/// `CZ = G(H,H)·G(X,X)·SWAP·G(H,H)` on the interface pair `(u, v)`, with the
/// SWAP expanded through [`swap_via_matchgates_and_h`] and every Hadamard
/// supplied by `provider`.
pub fn encoded_cz_sequence(
    g: &InteractionGraph,
    u: Vertex,
    v: Vertex,
    provider: &mut dyn HadamardProvider,
) -> Result<GateSequence> {
    let mut s = GateSequence::new();
    s.push(g, canonical::hh(), u, v)?;
    for step in swap_via_matchgates_and_h() {
        match step {
            TemplateStep::Gate(gate) => s.push(g, gate, u, v)?,
            TemplateStep::HadamardBoth => s.extend(provider.hadamard_pair(g, u, v)?),
        }
    }
    s.push(g, canonical::xx(), u, v)?;
    s.push(g, canonical::hh(), u, v)?;
    Ok(s)
}

/// Logical CZ between two adjacent blocks `(p1,p2)`, `(p3,p4)` at the end of
/// a chain, with a `|+⟩` and a `|0⟩` ancilla both attached to `p1`.
///
/// The second block's first qubit is swapped through the first block so that
/// one component of each logical qubit sits on `(p1, p2)`; the encoded CZ
/// runs there with Hadamards shuttled in through `p1`; the swap-through is
/// then undone.
pub fn appendix_cz_procedure(
    g: &InteractionGraph,
    first: EncodedBlock,
    second: EncodedBlock,
    plus: Vertex,
    zero: Vertex,
) -> Result<GateSequence> {
    let (p1, p2, p3, p4) = (first.0, first.1, second.0, second.1);
    let chain_ok = g.has_edge(p1, p2) && g.has_edge(p2, p3) && g.has_edge(p3, p4);
    let ancillas_ok = plus != zero && g.has_edge(plus, p1) && g.has_edge(zero, p1);
    let distinct = [p1, p2, p3, p4].iter().all(|&p| p != plus && p != zero);
    if !(chain_ok && ancillas_ok && distinct) {
        return Err(Error::Config(
            "expected chain p1-p2-p3-p4 with both ancillas attached to p1".into(),
        ));
    }
    let mut s = GateSequence::new();
    s.clamp(plus, Clamp::Plus);
    s.clamp(zero, Clamp::Zero);
    // p3 through (p1, p2): F[2,3] then F[1,2].
    s.push(g, fswap(), p2, p3)?;
    s.push(g, fswap(), p1, p2)?;
    let mut shuttle = ShuttleProvider { site: p1, plus, zero };
    s.extend(encoded_cz_sequence(g, p1, p2, &mut shuttle)?);
    s.push(g, fswap(), p1, p2)?;
    s.push(g, fswap(), p2, p3)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{gates_equal_up_to_phase, TwoQubitGate};
    use crate::graph::{build_family, GraphFamily};

    #[test]
    fn swap_template_matches_swap() {
        let t = swap_via_matchgates_and_h();
        let with_h = TwoQubitGate::from_matrix(template_product(&t, true)).unwrap();
        assert!(gates_equal_up_to_phase(&with_h, &canonical::swap(), 1e-10));
        let without = TwoQubitGate::from_matrix(template_product(&t, false)).unwrap();
        assert!(!gates_equal_up_to_phase(&without, &canonical::swap(), 1e-10));
    }

    #[test]
    fn encoded_cz_identity_is_exact_cz() {
        // G(H,H)·G(X,X)·SWAP·G(H,H) = CZ as 4×4 operators.
        let hh = canonical::hh();
        let prod = hh.compose(&canonical::xx()).compose(&canonical::swap()).compose(&hh);
        assert!(prod.approx_eq(&canonical::cz(), 1e-12));
    }

    #[test]
    fn missing_edges_are_topology_errors() {
        let g = build_family(GraphFamily::Chain(4)).unwrap();
        assert!(matches!(fswap_gadget(&g, 0, 1, 2, 3, &canonical::fswap()), Err(Error::Topology(_))));
        assert!(matches!(h_gadget(&g, 0, 2), Err(Error::Topology(_))));
        assert!(matches!(hole_route(&g, 0, &[0, 2]), Err(Error::Topology(_))));
        assert!(matches!(encode_logical(&g, EncodedBlock(0, 2), true), Err(Error::Topology(_))));
    }

    #[test]
    fn gadget_shapes() {
        let g = build_family(GraphFamily::HairComb(4)).unwrap();
        let s = fswap_gadget(&g, 0, 1, 2, 5, &canonical::fswap()).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.fswap_count(), 5);
        let s = third_neighbor_gadget(&g, [0, 1, 2, 3], [5, 6], &canonical::identity()).unwrap();
        assert_eq!((s.len(), s.fswap_count()), (9, 8));
    }

    #[test]
    fn appendix_requires_fig5_region() {
        let g = build_family(GraphFamily::ChainWithPendant { n: 6, attach: 3 }).unwrap();
        let err = appendix_cz_procedure(&g, EncodedBlock(1, 2), EncodedBlock(3, 4), 0, 6).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn star_bring_adjacent_uses_one_fswap() {
        let g = build_family(GraphFamily::Star(5)).unwrap();
        let layout = vec![None, Some(0), None, Some(1), None];
        let r = bring_adjacent(&g, &layout, 0, 1).unwrap();
        assert_eq!(r.sequence.len(), 1);
        assert_eq!(r.layout[0], Some(0));
        let r = bring_adjacent(&g, &[Some(0), Some(1), None, None, None], 0, 1).unwrap();
        assert!(r.sequence.is_empty());
    }
}
