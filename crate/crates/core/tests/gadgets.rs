mod common;

use common::*;
use matchgeo::gadgets::*;
use matchgeo::gate::{c, canonical, hadamard, Unitary2, C64};
use matchgeo::graph::{build_family, GraphFamily, InteractionGraph};
use matchgeo::state::*;

fn random_factor(k: usize, rng: &mut rand::rngs::StdRng) -> Vec<C64> {
    random_state(k, rng).amplitudes().to_vec()
}

fn encoded_factor(local: LocalState) -> Vec<C64> {
    let [a, b] = local.amplitudes();
    vec![a, c(0., 0.), c(0., 0.), b]
}

#[test]
fn fswap_gadget_equals_direct_gate_on_clamped_subspace() {
    // chain 0-1-2-3 with pendant 4 on vertex 1
    let g = build_family(GraphFamily::ChainWithPendant { n: 4, attach: 1 }).unwrap();
    let mut rng = rng(7);
    for _ in 0..50 {
        let gate = random_matchgate(&mut rng);
        let seq = fswap_gadget(&g, 0, 1, 2, 4, &gate).unwrap();
        let direct = [GateApplication::new(gate, 0, 2).unwrap()];
        assert!(operators_equal_on_subspace(&seq.ops, &direct, &[(4, Clamp::Zero)], 5, 1e-10).unwrap());
        assert!(!operators_equal_on_subspace(&seq.ops, &direct, &[], 5, 1e-10).unwrap());
    }
}

#[test]
fn fswap_gadget_identity_and_fswap_payloads() {
    let g = build_family(GraphFamily::ChainWithPendant { n: 4, attach: 1 }).unwrap();
    let id = fswap_gadget(&g, 0, 1, 2, 4, &canonical::identity()).unwrap();
    assert!(operators_equal_on_subspace(&id.ops, &[], &[(4, Clamp::Zero)], 5, 1e-12).unwrap());
    let f = fswap_gadget(&g, 0, 1, 2, 4, &canonical::fswap()).unwrap();
    assert_eq!(f.fswap_count(), 5);
    let direct = [GateApplication::new(canonical::fswap(), 0, 2).unwrap()];
    assert!(operators_equal_on_subspace(&f.ops, &direct, &[(4, Clamp::Zero)], 5, 1e-12).unwrap());
}

#[test]
fn third_neighbor_gadget_on_hair_comb() {
    let g = build_family(GraphFamily::HairComb(4)).unwrap();
    let mut rng = rng(11);
    let clamps = [(4, Clamp::Zero), (5, Clamp::Zero), (6, Clamp::Zero), (7, Clamp::Zero)];
    for _ in 0..20 {
        let gate = random_matchgate(&mut rng);
        let seq = third_neighbor_gadget(&g, [0, 1, 2, 3], [5, 6], &gate).unwrap();
        let direct = [GateApplication::new(gate, 0, 3).unwrap()];
        assert!(operators_equal_on_subspace(&seq.ops, &direct, &clamps, 8, 1e-10).unwrap());
    }
    let id = third_neighbor_gadget(&g, [0, 1, 2, 3], [5, 6], &canonical::identity()).unwrap();
    assert!(operators_equal_on_subspace(&id.ops, &[], &clamps, 8, 1e-12).unwrap());
}

#[test]
fn h_gadget_acts_as_hadamard() {
    let g = InteractionGraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let seq = h_gadget(&g, 1, 2).unwrap();
    // |0⟩ → |+⟩, ancilla unchanged
    let mut s = QuantumState::init(3, &[(2, LocalState::Plus)]).unwrap();
    s.apply_all(&seq.ops).unwrap();
    let expected = QuantumState::init(3, &[(1, LocalState::Plus), (2, LocalState::Plus)]).unwrap();
    assert!((fidelity(&s, &expected).unwrap() - 1.0).abs() < 1e-12);
    // twice is identity
    s.apply_all(&seq.ops).unwrap();
    let start = QuantumState::init(3, &[(2, LocalState::Plus)]).unwrap();
    assert!((fidelity(&s, &start).unwrap() - 1.0).abs() < 1e-12);
    // entangled with the bystander 0
    let mut rng = rng(3);
    for _ in 0..100 {
        let pair = random_factor(2, &mut rng);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let input = QuantumState::from_factors(3, &[(vec![0, 1], pair.clone()), (vec![2], vec![c(r, 0.), c(r, 0.)])]).unwrap();
        let mut out = input.clone();
        out.apply_all(&seq.ops).unwrap();
        let mut expected = input;
        expected.apply_single(1, &hadamard()).unwrap();
        let diff: f64 = out.amplitudes().iter().zip(expected.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        assert!(diff <= 1e-10);
        assert!(ancilla_intact(&out, 2, LocalState::Plus).unwrap().infidelity <= 1e-10);
    }
}

#[test]
fn hole_routes() {
    let g = build_family(GraphFamily::Chain(3)).unwrap();
    let mut rng = rng(5);
    let psi = random_local(&mut rng);
    let (seq, end) = hole_route(&g, 0, &[0, 1]).unwrap();
    assert_eq!((seq.len(), end), (1, 1));
    let mut s = QuantumState::init(3, &[(1, psi)]).unwrap();
    s.apply_all(&seq.ops).unwrap();
    let expected = QuantumState::init(3, &[(0, psi)]).unwrap();
    assert!((fidelity(&s, &expected).unwrap() - 1.0).abs() < 1e-12);

    // cycle(4): hole at 0 makes one revolution; the others shift one step
    // against the hole's direction, with no phase.
    let g = build_family(GraphFamily::Cycle(4)).unwrap();
    let (seq, end) = hole_route(&g, 0, &[0, 1, 2, 3, 0]).unwrap();
    assert_eq!((seq.len(), end), (4, 0));
    for _ in 0..10 {
        let three = random_factor(3, &mut rng);
        let input = QuantumState::from_factors(4, &[(vec![1, 2, 3], three.clone())]).unwrap();
        let mut out = input.clone();
        out.apply_all(&seq.ops).unwrap();
        // state formerly on (1,2,3) now on (3,1,2)
        let expected = QuantumState::from_factors(4, &[(vec![3, 1, 2], three)]).unwrap();
        let ov = out.inner(&expected).unwrap();
        assert!((ov - c(1., 0.)).norm() <= 1e-10);
    }
}

#[test]
fn hole_route_preserves_distant_entanglement() {
    // chain 0-1-2-3 plus vertex 4 hanging off 3; qubit 1 entangled with 4
    let g = InteractionGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let mut rng = rng(9);
    let pair = random_factor(2, &mut rng);
    let input = QuantumState::from_factors(5, &[(vec![1, 4], pair.clone())]).unwrap();
    let (seq, _) = hole_route(&g, 0, &[0, 1, 2]).unwrap();
    let mut out = input;
    out.apply_all(&seq.ops).unwrap();
    let expected = QuantumState::from_factors(5, &[(vec![0, 4], pair)]).unwrap();
    assert!((out.inner(&expected).unwrap() - c(1., 0.)).norm() <= 1e-10);
}

#[test]
fn bring_adjacent_on_trees_stays_within_path_bound() {
    let depth = 3;
    let g = build_family(GraphFamily::CompleteBinaryTree(depth)).unwrap();
    let n = g.vertex_count();
    let leaves: Vec<usize> = (n / 2..n).collect();
    for &a in &leaves {
        for &b in &leaves {
            if a == b {
                continue;
            }
            let mut layout = vec![None; n];
            layout[a] = Some(0);
            layout[b] = Some(1);
            let r = bring_adjacent(&g, &layout, 0, 1).unwrap();
            assert!(r.sequence.len() <= 2 * (2 * depth), "{a}->{b}: {}", r.sequence.len());
            let pa = r.layout.iter().position(|x| *x == Some(0)).unwrap();
            let pb = r.layout.iter().position(|x| *x == Some(1)).unwrap();
            assert!(g.has_edge(pa, pb));
            assert_eq!(r.inverse.len(), r.sequence.len());
        }
    }
}

#[test]
fn encoding_and_logical_gates() {
    let g = build_family(GraphFamily::Chain(2)).unwrap();
    let block = EncodedBlock(0, 1);
    let mut s = QuantumState::init(2, &[]).unwrap();
    s.apply_all(&encode_logical(&g, block, true).unwrap().ops).unwrap();
    s.apply_all(&logical_gate(&g, block, &Unitary2::identity()).unwrap().ops).unwrap();
    assert!((s.amplitudes()[3].norm() - 1.0).abs() < 1e-12);

    let mut s = QuantumState::init(2, &[]).unwrap();
    s.apply_all(&logical_gate(&g, block, &Unitary2::x()).unwrap().ops).unwrap();
    assert!((s.amplitudes()[3].norm() - 1.0).abs() < 1e-12);

    let theta = 0.9;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut s = QuantumState::from_amplitudes(2, vec![c(r, 0.), c(0., 0.), c(0., 0.), c(r, 0.)]).unwrap();
    s.apply_all(&logical_gate(&g, block, &Unitary2::rz(theta)).unwrap().ops).unwrap();
    assert!((s.amplitudes()[0] - C64::from_polar(r, -theta / 2.0)).norm() < 1e-12);
    assert!((s.amplitudes()[3] - C64::from_polar(r, theta / 2.0)).norm() < 1e-12);
}

#[test]
fn logical_swap_through_relocates_cleanly() {
    let g = build_family(GraphFamily::Chain(3)).unwrap();
    let seq = logical_swap_through(&g, 0, EncodedBlock(1, 2)).unwrap();
    assert_eq!(seq.fswap_count(), 2);
    // |1⟩|1⟩_L → |1⟩_L|1⟩ with + sign
    let mut s = QuantumState::init(3, &[(0, LocalState::One), (1, LocalState::One), (2, LocalState::One)]).unwrap();
    s.apply_all(&seq.ops).unwrap();
    assert!((s.amplitudes()[7] - c(1., 0.)).norm() < 1e-12);
    let mut rng = rng(21);
    for _ in 0..50 {
        let psi = random_local(&mut rng);
        let phi = random_local(&mut rng);
        let input = QuantumState::from_factors(3, &[(vec![0], psi.amplitudes().to_vec()), (vec![1, 2], encoded_factor(phi))]).unwrap();
        let mut out = input;
        out.apply_all(&seq.ops).unwrap();
        let expected = QuantumState::from_factors(3, &[(vec![0, 1], encoded_factor(phi)), (vec![2], psi.amplitudes().to_vec())]).unwrap();
        assert!((out.inner(&expected).unwrap() - c(1., 0.)).norm() <= 1e-10);
    }
}

#[test]
fn block_exchange_swaps_logical_states() {
    let g = build_family(GraphFamily::Chain(4)).unwrap();
    let seq = block_exchange(&g, EncodedBlock(0, 1), EncodedBlock(2, 3)).unwrap();
    assert_eq!(seq.fswap_count(), 4);
    let mut rng = rng(4);
    let a = random_local(&mut rng);
    let b = random_local(&mut rng);
    let input = QuantumState::from_factors(4, &[(vec![0, 1], encoded_factor(a)), (vec![2, 3], encoded_factor(b))]).unwrap();
    let mut out = input;
    out.apply_all(&seq.ops).unwrap();
    let expected = QuantumState::from_factors(4, &[(vec![0, 1], encoded_factor(b)), (vec![2, 3], encoded_factor(a))]).unwrap();
    assert!((out.inner(&expected).unwrap() - c(1., 0.)).norm() <= 1e-10);
}

fn logical_inputs(n: usize, blocks: &[(usize, usize)], ancillas: &[(usize, LocalState)]) -> Vec<(QuantumState, QuantumState)> {
    // (input, expected after logical CZ between the two blocks)
    let mut out = Vec::new();
    for a in LocalState::SPANNING {
        for b in LocalState::SPANNING {
            let mut factors = vec![
                (vec![blocks[0].0, blocks[0].1], encoded_factor(a)),
                (vec![blocks[1].0, blocks[1].1], encoded_factor(b)),
            ];
            for (v, s) in ancillas {
                factors.push((vec![*v], s.amplitudes().to_vec()));
            }
            let input = QuantumState::from_factors(n, &factors).unwrap();
            let mut expected = input.clone();
            expected.apply(&GateApplication::new(canonical::cz(), blocks[0].0, blocks[1].0).unwrap()).unwrap();
            out.push((input, expected));
        }
    }
    out
}

#[test]
fn encoded_cz_with_shared_plus_ancilla() {
    // chain 0-1-2-3 with a |+⟩ ancilla 4 adjacent to both interface qubits
    let g = InteractionGraph::new(5, [(0, 1), (1, 2), (2, 3), (1, 4), (2, 4)]).unwrap();
    let mut provider = SharedPlusProvider { plus: 4 };
    let seq = encoded_cz_sequence(&g, 1, 2, &mut provider).unwrap();
    assert!(seq.ops.iter().all(|a| a.gate.is_matchgate()));
    let mut phase = None;
    for (input, expected) in logical_inputs(5, &[(0, 1), (2, 3)], &[(4, LocalState::Plus)]) {
        let mut out = input;
        out.apply_all(&seq.ops).unwrap();
        let ov = expected.inner(&out).unwrap();
        assert!(ov.norm() >= 1.0 - 1e-8);
        let p = *phase.get_or_insert(ov);
        assert!((ov - p).norm() <= 1e-8);
        assert!(ancilla_intact(&out, 4, LocalState::Plus).unwrap().infidelity <= 1e-9);
    }
}

#[test]
fn appendix_procedure_implements_logical_cz() {
    for n in [6, 7] {
        let g = build_family(GraphFamily::ChainWithPendant { n, attach: 1 }).unwrap();
        let pendant = n;
        let seq = appendix_cz_procedure(&g, EncodedBlock(1, 2), EncodedBlock(3, 4), 0, pendant).unwrap();
        seq.validate_on(&g).unwrap();
        let mut phase = None;
        let ancillas = [(0, LocalState::Plus), (pendant, LocalState::Zero)];
        for (input, expected) in logical_inputs(n + 1, &[(1, 2), (3, 4)], &ancillas) {
            let mut out = input;
            out.apply_all(&seq.ops).unwrap();
            let ov = expected.inner(&out).unwrap();
            assert!(ov.norm() >= 1.0 - 1e-8, "fidelity {}", ov.norm());
            let p = *phase.get_or_insert(ov);
            assert!((ov - p).norm() <= 1e-8);
            assert!(ancilla_intact(&out, 0, LocalState::Plus).unwrap().infidelity <= 1e-9);
            assert!(ancilla_intact(&out, pendant, LocalState::Zero).unwrap().infidelity <= 1e-9);
        }
    }
}
