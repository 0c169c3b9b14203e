//! Lowering for the 2-to-1 encoded strategies.

use super::circuit::matchgate_to_rz_h_cz;
use super::{ItemKind, LogicalCircuit, LogicalGate, Provenance, ScheduleItem};
use crate::error::{Error, Result};
use crate::gadgets::{appendix_cz_procedure, block_exchange, fswap_gadget, EncodedBlock, GateSequence};
use crate::gate::{canonical, TAU_ALG};
use crate::graph::{InteractionGraph, Vertex};
use crate::state::GateApplication;

/// Block slots along a chain, plus the ancillas the logical CZ needs.
#[derive(Debug, Clone, PartialEq)]
pub(super) struct EncodedLayout {
    pub blocks: Vec<(Vertex, Vertex)>,
    /// `tooth[v]`: the `|0⟩` pendant of backbone vertex `v` (hair comb only).
    pub tooth: Vec<Option<Vertex>>,
    /// Ancillas of the end-of-chain CZ procedure (pendant layouts only).
    pub plus: Option<Vertex>,
    pub zero: Option<Vertex>,
}

fn lower(gate: &LogicalGate) -> Vec<LogicalGate> {
    match *gate {
        LogicalGate::Mg { gate, a, b } => matchgate_to_rz_h_cz(&gate, a, b),
        other => vec![other],
    }
}

struct Builder<'a> {
    g: &'a InteractionGraph,
    layout: &'a EncodedLayout,
    items: Vec<ScheduleItem>,
    /// `slot_of[q]`: block slot currently holding logical qubit `q`.
    slot_of: Vec<usize>,
}

impl Builder<'_> {
    fn emit_seq(&mut self, seq: &GateSequence, tag: Provenance, kind_of: impl Fn(usize, &GateApplication) -> ItemKind) {
        for (i, app) in seq.ops.iter().enumerate() {
            self.items.push(ScheduleItem { app: *app, tag: Provenance { kind: kind_of(i, app), ..tag } });
        }
    }

    fn block(&self, q: usize) -> EncodedBlock {
        let (u, v) = self.layout.blocks[self.slot_of[q]];
        EncodedBlock(u, v)
    }

    /// Exchanges the contents of block slots `s - 1` and `s`.
    fn exchange(&mut self, s: usize, tag: Provenance, undo: bool) -> Result<()> {
        let (a, b) = (self.layout.blocks[s - 1], self.layout.blocks[s]);
        let seq = block_exchange(self.g, EncodedBlock(a.0, a.1), EncodedBlock(b.0, b.1))?;
        let seq = if undo { seq.inverse() } else { seq };
        self.emit_seq(&seq, tag, |_, _| ItemKind::Route);
        for slot in self.slot_of.iter_mut() {
            if *slot == s {
                *slot = s - 1;
            } else if *slot == s - 1 {
                *slot = s;
            }
        }
        Ok(())
    }

    fn move_down(&mut self, q: usize, target: usize, tag: Provenance, log: &mut Vec<usize>) -> Result<()> {
        while self.slot_of[q] > target {
            let s = self.slot_of[q];
            self.exchange(s, tag, false)?;
            log.push(s);
        }
        Ok(())
    }

    fn cz(&mut self, a: usize, b: usize, tag: Provenance) -> Result<()> {
        let mut log = Vec::new();
        let fswap = canonical::fswap();
        let route_tag = Provenance { kind: ItemKind::Route, ..tag };
        if let (Some(plus), Some(zero)) = (self.layout.plus, self.layout.zero) {
            self.move_down(a, 0, route_tag, &mut log)?;
            self.move_down(b, 1, route_tag, &mut log)?;
            let seq = appendix_cz_procedure(self.g, self.block(a), self.block(b), plus, zero)?;
            self.emit_seq(&seq, tag, |_, app| {
                if app.gate.approx_eq(&fswap, TAU_ALG) {
                    ItemKind::Gadget
                } else {
                    ItemKind::Payload
                }
            });
        } else {
            let (lo, hi) = if self.slot_of[a] < self.slot_of[b] { (a, b) } else { (b, a) };
            let target = self.slot_of[lo] + 1;
            self.move_down(hi, target, route_tag, &mut log)?;
            let (EncodedBlock(p0, p1), EncodedBlock(p2, _)) = (self.block(lo), self.block(hi));
            let anc = self.layout.tooth.get(p1).copied().flatten().ok_or_else(|| {
                Error::Topology(format!("backbone vertex {p1} has no |0⟩ tooth"))
            })?;
            // f-SWAP across (p0, p2) through the tooth of p1, then two
            // nearest-neighbor f-SWAPs restore the blocks: net sign (−1)^{ab}.
            let gadget = fswap_gadget(self.g, p0, p1, p2, anc, &fswap)?;
            self.emit_seq(&gadget, tag, |i, _| if i == 2 { ItemKind::Payload } else { ItemKind::Gadget });
            let mut tail = GateSequence::new();
            tail.push(self.g, fswap, p0, p1)?;
            tail.push(self.g, fswap, p1, p2)?;
            self.emit_seq(&tail, tag, |_, _| ItemKind::Payload);
        }
        for &s in log.iter().rev() {
            self.exchange(s, route_tag, true)?;
        }
        Ok(())
    }
}

pub(super) fn compile_encoded(
    g: &InteractionGraph,
    circuit: &LogicalCircuit,
    layout: &EncodedLayout,
) -> Result<Vec<ScheduleItem>> {
    let k = circuit.qubit_count();
    if layout.blocks.len() != k {
        return Err(Error::Config(format!("{} blocks for {k} logical qubits", layout.blocks.len())));
    }
    let mut b = Builder { g, layout, items: Vec::new(), slot_of: (0..k).collect() };
    for (gi, gate) in circuit.gates().iter().enumerate() {
        for (si, prim) in lower(gate).into_iter().enumerate() {
            let tag = Provenance { gate: gi, gate_kind: gate.kind(), step: Some((si, prim.kind())), kind: ItemKind::Payload };
            match prim {
                LogicalGate::Rz { q, theta } => {
                    let EncodedBlock(u, v) = b.block(q);
                    let mut s = GateSequence::new();
                    s.push(g, canonical::rz_first(theta), u, v)?;
                    b.emit_seq(&s, tag, |_, _| ItemKind::Payload);
                }
                LogicalGate::H { q } => {
                    let EncodedBlock(u, v) = b.block(q);
                    let mut s = GateSequence::new();
                    s.push(g, canonical::hh(), u, v)?;
                    b.emit_seq(&s, tag, |_, _| ItemKind::Payload);
                }
                LogicalGate::Cz { a, b: c } => b.cz(a, c, tag)?,
                LogicalGate::Mg { .. } => unreachable!("matchgates are rewritten before lowering"),
            }
        }
    }
    debug_assert!(b.slot_of.iter().enumerate().all(|(q, s)| q == *s));
    Ok(b.items)
}
