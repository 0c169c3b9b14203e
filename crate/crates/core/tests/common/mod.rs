#![allow(dead_code)]

use matchgeo::gate::{c, make_gate, TwoQubitGate, Unitary2, C64};
use matchgeo::state::{QuantumState, LocalState};
use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn gaussian(rng: &mut StdRng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-distributed 2×2 unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary2(rng: &mut StdRng) -> Matrix2<C64> {
    let mut cols = [[c(0., 0.); 2]; 2];
    for col in cols.iter_mut() {
        for x in col.iter_mut() {
            *x = c(gaussian(rng), gaussian(rng));
        }
    }
    let norm = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let n0 = norm(&cols[0]);
    let e0 = [cols[0][0] / n0, cols[0][1] / n0];
    let proj = e0[0].conj() * cols[1][0] + e0[1].conj() * cols[1][1];
    let w = [cols[1][0] - proj * e0[0], cols[1][1] - proj * e0[1]];
    let n1 = norm(&w);
    let e1 = [w[0] / n1, w[1] / n1];
    Matrix2::new(e0[0], e1[0], e0[1], e1[1])
}

/// Random matchgate: independent Haar blocks with B rephased so det A = det B.
pub fn random_matchgate(rng: &mut StdRng) -> TwoQubitGate {
    let a = random_unitary2(rng);
    let b = random_unitary2(rng);
    let ratio = a.determinant() / b.determinant();
    let b = b * C64::from_polar(1.0, ratio.arg() / 2.0);
    make_gate(&Unitary2::new(a).unwrap(), &Unitary2::new(b).unwrap())
}

pub fn random_local(rng: &mut StdRng) -> LocalState {
    LocalState::Amplitudes(c(gaussian(rng), gaussian(rng)), c(gaussian(rng), gaussian(rng)))
}

pub fn random_state(n: usize, rng: &mut StdRng) -> QuantumState {
    let amps: Vec<C64> = (0..1usize << n).map(|_| c(gaussian(rng), gaussian(rng))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    QuantumState::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

pub fn random_circuit(k: usize, gates: usize, rng: &mut StdRng) -> matchgeo::compiler::LogicalCircuit {
    use matchgeo::compiler::{LogicalCircuit, LogicalGate};
    let mut circ = LogicalCircuit::new(k).unwrap();
    for _ in 0..gates {
        let q = rng.gen_range(0..k);
        let choice = if k == 1 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
        let gate = match choice {
            0 => LogicalGate::Rz { q, theta: rng.gen_range(-3.0..3.0) },
            1 => LogicalGate::H { q },
            _ => {
                let mut r = rng.gen_range(0..k - 1);
                if r >= q {
                    r += 1;
                }
                if choice == 2 {
                    LogicalGate::Cz { a: q, b: r }
                } else {
                    LogicalGate::Mg { gate: random_matchgate(rng), a: q, b: r }
                }
            }
        };
        circ.push(gate).unwrap();
    }
    circ
}
