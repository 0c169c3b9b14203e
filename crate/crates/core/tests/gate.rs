mod common;

use approx::assert_abs_diff_eq;
use common::*;
use matchgeo::gate::*;
use nalgebra::Matrix2;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_4;

fn u2(m: Matrix2<C64>) -> Unitary2 {
    Unitary2::new(m).unwrap()
}

#[test]
fn random_matchgates_pass_and_perturbed_ones_fail() {
    let mut rng = rng(500);
    for _ in 0..500 {
        let a = random_unitary2(&mut rng);
        let b = random_unitary2(&mut rng);
        let b = b * C64::from_polar(1.0, (a.determinant() / b.determinant()).arg() / 2.0);
        let g = make_gate(&u2(a), &u2(b));
        assert!(g.is_matchgate());
        assert!(is_matchgate(g.matrix(), TAU_ALG));
        // Rescaling one row of B by a phase changes det B by that phase.
        let mut m = *g.matrix();
        let bump = C64::from_polar(1.0, 1e-3);
        m[(1, 1)] *= bump;
        m[(1, 2)] *= bump;
        assert!(!is_matchgate(&m, TAU_ALG));
    }
}

#[test]
fn matchgates_are_closed_under_products() {
    let canon = [
        canonical::identity(),
        canonical::fswap(),
        canonical::hh(),
        canonical::xx(),
        canonical::rz_first(0.7),
        canonical::rz_both(-1.1),
        canonical::xx_rotation(0.4),
    ];
    for a in &canon {
        for b in &canon {
            assert!(a.compose(b).is_matchgate());
        }
    }
    let mut rng = rng(100);
    for _ in 0..100 {
        let (a, b) = (random_matchgate(&mut rng), random_matchgate(&mut rng));
        assert!(a.compose(&b).is_matchgate());
    }
}

#[test]
fn canonical_verdicts() {
    assert!(!canonical::swap().is_matchgate());
    assert!(canonical::swap().is_parity_preserving());
    assert!(canonical::fswap().is_matchgate());
    assert!(canonical::hh().is_matchgate());
    let swap = make_gate(&Unitary2::identity(), &Unitary2::x());
    assert!(swap.approx_eq(&canonical::swap(), 0.0));
    assert!(!swap.is_matchgate());
    let fswap = make_gate(&Unitary2::z(), &Unitary2::x());
    assert!(fswap.approx_eq(&canonical::fswap(), 0.0));
}

#[test]
fn generator_examples() {
    let mut xy = GeneratorCoeffs::from_array([FRAC_PI_4, FRAC_PI_4, 0., 0., 0., 0.]);
    let g = gate_from_generators(&xy);
    let ix = pauli_x() * c(0., 1.);
    assert!(g.approx_eq(&make_gate(&Unitary2::identity(), &u2(ix)), 1e-12));
    xy = GeneratorCoeffs::from_array([0., 0., 0., 0., FRAC_PI_4, FRAC_PI_4]);
    let z = gate_from_generators(&xy);
    let product = z.compose(&g);
    let (phase, _) = global_phase(
        &product.entries_row_major(),
        &canonical::fswap().entries_row_major(),
    )
    .unwrap()
    .unwrap();
    assert_abs_diff_eq!(phase.re, 0.0, epsilon = 1e-10);
    assert_abs_diff_eq!(phase.im, 1.0, epsilon = 1e-10);
}

#[test]
fn generator_outputs_stay_parity_preserving() {
    let mut rng = rng(7);
    use rand::Rng;
    for _ in 0..100 {
        let coeffs: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-4.0..4.0));
        let g = gate_from_generators(&GeneratorCoeffs::from_array(coeffs));
        assert!(off_pattern_norm(g.matrix()) < 1e-12);
        assert!(g.is_matchgate());
    }
}

#[test]
fn global_phase_examples() {
    let f = canonical::fswap().entries_row_major();
    let i_f: Vec<C64> = f.iter().map(|z| z * c(0., 1.)).collect();
    assert!(equal_up_to_global_phase(&i_f, &f, TAU_ALG).unwrap());
    assert!(!equal_up_to_global_phase(&canonical::swap().entries_row_major(), &f, TAU_ALG).unwrap());
    let id = canonical::identity().entries_row_major();
    assert!(equal_up_to_global_phase(&id, &id, 0.0).unwrap());
    assert!(equal_up_to_global_phase(&id[..4], &id, TAU_ALG).is_err());
}

fn angle() -> impl Strategy<Value = f64> {
    -6.3f64..6.3
}

proptest! {
    #[test]
    fn exchange_conjugate_is_an_involution(a in angle(), b in angle(), t in angle(), p in angle()) {
        let g = gate_from_generators(&GeneratorCoeffs::from_array([a, b, t, p, a - b, t + p]));
        let twice = exchange_conjugate(&exchange_conjugate(&g).unwrap()).unwrap();
        prop_assert!(twice.approx_eq(&g, TAU_ALG));
    }

    #[test]
    fn exchange_conjugate_is_swap_conjugation(a in angle(), b in angle(), t in angle()) {
        let g = gate_from_generators(&GeneratorCoeffs::from_array([a, b, t, 0.3, -0.2, a]));
        let s = canonical::swap();
        let direct = s.compose(&g).compose(&s);
        prop_assert!(exchange_conjugate(&g).unwrap().approx_eq(&direct, 1e-12));
    }

    #[test]
    fn rz_blocks_factorize(alpha in angle(), beta in angle()) {
        let g = make_gate(&Unitary2::rz(alpha), &Unitary2::rz(beta));
        let left = rz((alpha + beta) / 2.0);
        let right = rz((alpha - beta) / 2.0);
        let expected = left.kronecker(&right);
        let got = g.matrix();
        for r in 0..4 {
            for col in 0..4 {
                prop_assert!((got[(r, col)] - expected[(r, col)]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn non_parity_preserving_conjugation_is_rejected() {
    let mut m = *canonical::identity().matrix();
    m.swap_rows(0, 1);
    let g = TwoQubitGate::from_matrix(m).unwrap();
    assert!(exchange_conjugate(&g).is_err());
}
