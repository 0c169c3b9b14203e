//! Breadth-first token routing with f-SWAPs against `|0⟩` vertices.

use std::collections::HashSet;

use super::Slot;
use crate::error::{Error, Result};
use crate::graph::{InteractionGraph, Vertex};

/// Default cap on explored configurations.
pub const DEFAULT_ROUTING_BUDGET: usize = 400_000;

fn key(slots: &[Slot], tracked: &[usize]) -> Vec<u8> {
    slots
        .iter()
        .map(|s| match s {
            Slot::Zero => 0,
            Slot::Plus => 1,
            Slot::Idle => 2,
            Slot::Qubit(q) => match tracked.iter().position(|t| t == q) {
                Some(i) => 4 + i as u8,
                None => 3,
            },
        })
        .collect()
}

/// Shortest list of f-SWAP moves reaching a configuration accepted by `goal`.
///
/// A move exchanges a qubit or `|+⟩` ancilla with a neighboring `|0⟩` vertex,
/// which is an exact relocation. `Idle` vertices are walls. Qubits other than
/// `tracked` are treated as interchangeable when deduplicating states, so
/// `goal` must depend only on tracked qubits and ancilla positions; untracked qubits appear to it as
/// `Slot::Qubit(usize::MAX)`.
pub fn route(
    g: &InteractionGraph,
    slots: &[Slot],
    tracked: &[usize],
    goal: impl Fn(&[Slot]) -> bool,
    budget: usize,
) -> Result<Vec<(Vertex, Vertex)>> {
    if goal(slots) {
        return Ok(Vec::new());
    }
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    let decode = |k: &[u8]| -> Vec<Slot> {
        k.iter()
            .map(|&b| match b {
                0 => Slot::Zero,
                1 => Slot::Plus,
                2 => Slot::Idle,
                3 => Slot::Qubit(usize::MAX),
                t => Slot::Qubit(tracked[(t - 4) as usize]),
            })
            .collect()
    };
    let start = key(slots, tracked);
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    // (configuration key, parent index, move that produced it)
    let mut nodes: Vec<(Vec<u8>, usize, (Vertex, Vertex))> = vec![(start, usize::MAX, (0, 0))];
    let mut head = 0;
    while head < nodes.len() {
        let cur = nodes[head].0.clone();
        for &(u, v) in &edges {
            let (a, b) = (cur[u], cur[v]);
            let ok = (a == 0 && (b == 1 || b >= 3)) || (b == 0 && (a == 1 || a >= 3));
            if !ok {
                continue;
            }
            let mut next = cur.clone();
            next.swap(u, v);
            if seen.contains(&next) {
                continue;
            }
            seen.insert(next.clone());
            let done = goal(&decode(&next));
            nodes.push((next, head, (u, v)));
            if done {
                let mut moves = Vec::new();
                let mut i = nodes.len() - 1;
                while i != 0 {
                    moves.push(nodes[i].2);
                    i = nodes[i].1;
                }
                moves.reverse();
                return Ok(moves);
            }
            if nodes.len() > budget {
                return Err(Error::Routing(format!("routing budget of {budget} configurations exhausted")));
            }
        }
        head += 1;
    }
    Err(Error::Routing("no reachable configuration satisfies the routing goal".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, GraphFamily};

    #[test]
    fn routes_token_next_to_plus_on_cycle() {
        let g = build_family(GraphFamily::CycleWithPendant { n: 6, attach: 0 }).unwrap();
        let mut slots = vec![Slot::Zero; 7];
        slots[6] = Slot::Plus;
        slots[3] = Slot::Qubit(0);
        let moves = route(&g, &slots, &[0], |s| s[0] == Slot::Qubit(0), 1000).unwrap();
        assert_eq!(moves.len(), 3);
        for (u, v) in moves {
            slots.swap(u, v);
        }
        assert_eq!(slots[0], Slot::Qubit(0));
    }

    #[test]
    fn idle_vertices_block_routes() {
        let g = build_family(GraphFamily::Chain(3)).unwrap();
        let slots = [Slot::Qubit(0), Slot::Idle, Slot::Zero];
        assert!(route(&g, &slots, &[0], |s| s[2] == Slot::Qubit(0), 1000).is_err());
    }
}
