mod common;

use common::*;
use matchgeo::compiler::*;
use matchgeo::gate::{canonical, TAU_ALG};
use matchgeo::graph::{build_family, detect_cycle_with_pendant, GraphFamily, InteractionGraph};
use std::f64::consts::PI;

fn soundness_graph(strategy: Strategy) -> InteractionGraph {
    let family = match strategy {
        Strategy::HairCombHGadget => GraphFamily::HairComb(3),
        Strategy::HairCombFswapEncoded => GraphFamily::HairComb(6),
        Strategy::CycleRotation => GraphFamily::CycleWithPendant { n: 5, attach: 0 },
        Strategy::ChainCenterShuttle => GraphFamily::ChainWithPendant { n: 7, attach: 3 },
        Strategy::ChainPendantEncoded => GraphFamily::ChainWithPendant { n: 7, attach: 1 },
        Strategy::StarHub => GraphFamily::Star(5),
        Strategy::BinaryTreeLeaves => GraphFamily::CompleteBinaryTree(3),
        Strategy::WheelHub => GraphFamily::Wheel(4),
        Strategy::Auto => unreachable!(),
    };
    build_family(family).unwrap()
}

#[test]
fn every_strategy_compiles_random_circuits_soundly() {
    let mut rng = rng(2024);
    for strategy in Strategy::ALL {
        let g = soundness_graph(strategy);
        for trial in 0..20 {
            let k = 1 + trial % 3;
            let circ = random_circuit(k, 10, &mut rng);
            let t = std::time::Instant::now();
            let (sched, report) = compile(&circ, &g, strategy).unwrap_or_else(|e| panic!("{strategy}: {e}"));
            let v = verify(&circ, &sched, 1e-8).unwrap();
            println!("{strategy} k={k} gates={} fid={} t={:?}", sched.items.len(), v.worst_fidelity, t.elapsed());
            assert!(v.passed, "{strategy} trial {trial}: {v}");
            assert!(report.bounds_pass(), "{strategy}: {report}");
        }
    }
}

fn family(f: GraphFamily) -> InteractionGraph {
    build_family(f).unwrap()
}

fn circuit(k: usize, gates: &[LogicalGate]) -> LogicalCircuit {
    LogicalCircuit::with_gates(k, gates.to_vec()).unwrap()
}

#[test]
fn hadamard_at_the_gadget_site_is_one_gate() {
    let g = family(GraphFamily::CycleWithPendant { n: 6, attach: 0 });
    let circ = circuit(1, &[LogicalGate::H { q: 0 }]);
    let (sched, report) = compile(&circ, &g, Strategy::CycleRotation).unwrap();
    assert_eq!(sched.items.len(), 1);
    assert!(sched.items[0].app.gate.approx_eq(&canonical::hh(), TAU_ALG));
    assert_eq!(report.fswaps, 0);
    assert!(verify(&circ, &sched, 1e-10).unwrap().passed);
}

#[test]
fn cycle_hadamard_opposite_the_site_stays_within_half_n_squared() {
    for n in 4..=9 {
        let g = family(GraphFamily::CycleWithPendant { n, attach: 0 });
        let shape = detect_cycle_with_pendant(&g).unwrap();
        let k = n / 2 + 1;
        let q = n / 2;
        assert_eq!(shape.cycle[q], shape.cycle[0] + q);
        let circ = circuit(k, &[LogicalGate::H { q }]);
        let (sched, report) = compile(&circ, &g, Strategy::CycleRotation).unwrap();
        let limit = (n * n) as f64 / 2.0;
        assert!(report.max_fswaps_per_h() as f64 <= limit, "n={n}: {report}");
        assert!(report.bounds_pass());
        assert!(verify(&circ, &sched, 1e-8).unwrap().passed);
    }
}

#[test]
fn chain_shuttle_hadamard_stays_within_n_squared() {
    for (n, attach) in [(5, 2), (7, 3), (8, 4), (9, 3)] {
        let g = family(GraphFamily::ChainWithPendant { n, attach });
        let k = attach.min(n - attach);
        for q in 0..k {
            let circ = circuit(k, &[LogicalGate::H { q }]);
            let (sched, report) = compile(&circ, &g, Strategy::ChainCenterShuttle).unwrap();
            assert!(report.max_fswaps_per_h() <= n * n, "n={n} q={q}: {report}");
            assert!(report.bounds_pass());
            assert!(verify(&circ, &sched, 1e-8).unwrap().passed);
        }
    }
}

#[test]
fn star_runs_a_random_eight_gate_circuit() {
    let g = family(GraphFamily::Star(6));
    let mut rng = rng(8);
    for _ in 0..5 {
        let circ = random_circuit(3, 8, &mut rng);
        let (sched, _) = compile(&circ, &g, Strategy::StarHub).unwrap();
        let v = verify(&circ, &sched, 1e-8).unwrap();
        assert!(v.passed && v.simulated_qubits <= 6, "{v}");
    }
}

#[test]
fn deleting_a_gate_is_detected() {
    let g = family(GraphFamily::Star(6));
    let circ = circuit(2, &[LogicalGate::H { q: 0 }, LogicalGate::Cz { a: 0, b: 1 }, LogicalGate::Rz { q: 1, theta: 0.7 }]);
    let (sched, _) = compile(&circ, &g, Strategy::StarHub).unwrap();
    assert!(verify(&circ, &sched, 1e-8).unwrap().passed);
    let payloads: Vec<usize> = (0..sched.items.len()).filter(|&i| sched.items[i].tag.kind == ItemKind::Payload).collect();
    for &i in &payloads {
        let mut broken = sched.clone();
        broken.items.remove(i);
        let v = verify(&circ, &broken, 1e-8).unwrap();
        assert!(!v.passed, "deleting item {i} went unnoticed");
        assert!(v.worst_fidelity < 1.0 - 1e-3 || v.worst_ancilla_infidelity > 1e-3);
    }
}

#[test]
fn empty_circuit_verifies_as_identity() {
    for strategy in Strategy::ALL {
        let g = soundness_graph(strategy);
        let circ = LogicalCircuit::new(2).unwrap();
        let (sched, report) = compile(&circ, &g, strategy).unwrap();
        assert!(sched.items.is_empty());
        assert_eq!(report.total_gates, 0);
        let v = verify(&circ, &sched, 1e-12).unwrap();
        assert!(v.passed && (v.worst_fidelity - 1.0).abs() < 1e-12, "{strategy}: {v}");
    }
}

#[test]
fn compilation_is_deterministic() {
    let mut rng = rng(77);
    for strategy in Strategy::ALL {
        let g = soundness_graph(strategy);
        let circ = random_circuit(2, 8, &mut rng);
        let a = compile(&circ, &g, strategy).unwrap();
        let b = compile(&circ, &g, strategy).unwrap();
        assert_eq!(a, b, "{strategy}");
    }
}

#[test]
fn every_item_is_attributed_to_one_logical_gate() {
    let mut rng = rng(5);
    let fswap = canonical::fswap();
    for strategy in Strategy::ALL {
        let g = soundness_graph(strategy);
        let circ = random_circuit(3, 10, &mut rng);
        let (sched, report) = compile(&circ, &g, strategy).unwrap();
        let mut fswaps = 0;
        for item in &sched.items {
            let t = item.tag;
            assert!(t.gate < circ.len(), "{strategy}");
            assert_eq!(t.gate_kind, circ.gates()[t.gate].kind(), "{strategy}");
            if item.app.gate.approx_eq(&fswap, TAU_ALG) {
                fswaps += 1;
            }
            if t.kind != ItemKind::Payload {
                assert!(item.app.gate.approx_eq(&fswap, TAU_ALG), "{strategy}: non-payload item is not an f-SWAP");
            }
        }
        assert_eq!(fswaps, report.fswaps);
        assert_eq!(report.routing_fswaps + report.gadget_fswaps + report.payload_gates, report.total_gates);
        assert!(report.bounds_pass(), "{strategy}: {report}");
    }
}

#[test]
fn nnn_gate_costs_four_fswaps() {
    let g = family(GraphFamily::HairComb(5));
    let fswap = canonical::fswap();
    let mut rng = rng(3);
    for i in 0..3 {
        for gate in [random_matchgate(&mut rng), canonical::identity(), fswap] {
            let seq = simulate_nnn_gate(&g, i, &gate).unwrap();
            assert_eq!(seq.len(), 5);
            let apps = &seq.ops;
            let fs = apps.iter().filter(|a| a.gate.approx_eq(&fswap, TAU_ALG)).count();
            let expected = if gate.approx_eq(&fswap, TAU_ALG) { 5 } else { 4 };
            assert_eq!(fs, expected);
            assert!(apps[2].gate.approx_eq(&gate, 0.0));
        }
    }
    assert!(simulate_nnn_gate(&g, 3, &fswap).is_err());
    assert!(simulate_nnn_gate(&family(GraphFamily::Star(5)), 0, &fswap).is_err());
}

#[test]
fn hair_comb_nn_model_costs_no_overhead() {
    let mut rng = rng(11);
    for k in 3..=5 {
        let g = family(GraphFamily::HairComb(k));
        let mut gates = Vec::new();
        for i in 0..12 {
            let q = i % k;
            gates.push(match i % 3 {
                0 => LogicalGate::H { q },
                1 => LogicalGate::Rz { q, theta: 0.3 * i as f64 },
                _ => LogicalGate::Mg { gate: random_matchgate(&mut rng), a: q.min(k - 2), b: q.min(k - 2) + 1 },
            });
        }
        let circ = circuit(k, &gates);
        assert!(circ.is_nearest_neighbor_model());
        let (sched, report) = compile(&circ, &g, Strategy::HairCombHGadget).unwrap();
        assert_eq!(report.total_gates, circ.len());
        assert_eq!(report.physical_qubits, 2 * k);
        assert_eq!(report.fswaps_per_h.iter().sum::<usize>(), 0);
        assert!(report.bounds_pass(), "{report}");
        assert!(verify(&circ, &sched, 1e-8).unwrap().passed);
    }
}

#[test]
fn binary_tree_two_qubit_gates_cost_logarithmic_fswaps() {
    let mut constants = Vec::new();
    for depth in 3..=5 {
        let g = family(GraphFamily::CompleteBinaryTree(depth));
        let n = g.vertex_count();
        let leaves = (n + 1) / 2;
        let k = 3;
        let mut worst = 0.0f64;
        // Pairs of leaves spread across the tree, including the two extremes.
        for (a, b) in [(0, 1), (0, 2), (1, 2), (2, 0)] {
            let circ = circuit(k, &[LogicalGate::Cz { a, b }, LogicalGate::Mg { gate: canonical::xx_rotation(0.4), a: b, b: a }]);
            let (sched, report) = compile(&circ, &g, Strategy::BinaryTreeLeaves).unwrap();
            assert!(report.bounds_pass(), "depth {depth}: {report}");
            worst = worst.max(observed_tree_constant(&sched, &report));
            if sched.active_vertices().len() <= 14 {
                assert!(verify(&circ, &sched, 1e-8).unwrap().passed);
            }
        }
        let mut rng = rng(depth as u64);
        for _ in 0..20 {
            let circ = random_circuit(3, 10, &mut rng);
            let (sched, report) = compile(&circ, &g, Strategy::BinaryTreeLeaves).unwrap();
            assert!(report.bounds_pass(), "depth {depth}: {report}");
            worst = worst.max(observed_tree_constant(&sched, &report));
        }
        println!("depth {depth} (n={n}, {leaves} leaves): c = {worst:.3}");
        constants.push(worst);
    }
    for c in &constants {
        assert!(*c <= BINARY_TREE_C);
    }
}

#[test]
fn auto_rejects_a_bare_chain() {
    let g = family(GraphFamily::Chain(8));
    let circ = circuit(2, &[LogicalGate::H { q: 0 }, LogicalGate::Cz { a: 0, b: 1 }]);
    let err = compile(&circ, &g, Strategy::Auto).unwrap_err();
    assert!(err.to_string().contains("no applicable strategy"), "{err}");
}

#[test]
fn auto_picks_the_first_applicable_strategy() {
    let circ = circuit(2, &[LogicalGate::H { q: 0 }, LogicalGate::Cz { a: 0, b: 1 }]);
    for (f, expected) in [
        (GraphFamily::HairComb(3), Strategy::HairCombHGadget),
        (GraphFamily::CycleWithPendant { n: 5, attach: 0 }, Strategy::CycleRotation),
        (GraphFamily::Star(5), Strategy::StarHub),
        (GraphFamily::Wheel(5), Strategy::WheelHub),
    ] {
        let (sched, _) = compile(&circ, &family(f), Strategy::Auto).unwrap();
        assert_eq!(sched.strategy, expected);
    }
}

#[test]
fn capacity_and_shape_errors() {
    let circ = circuit(4, &[LogicalGate::H { q: 3 }]);
    assert!(compile(&circ, &family(GraphFamily::HairComb(3)), Strategy::HairCombHGadget).is_err());
    assert!(compile(&circ, &family(GraphFamily::Star(4)), Strategy::StarHub).is_err());
    assert!(compile(&circ, &family(GraphFamily::Star(6)), Strategy::WheelHub).is_err());
    let one = circuit(1, &[LogicalGate::Rz { q: 0, theta: PI }]);
    assert!(compile(&one, &family(GraphFamily::ChainWithPendant { n: 6, attach: 0 }), Strategy::ChainCenterShuttle).is_err());
}
