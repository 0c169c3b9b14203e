//! Matchgate algebra.
//!
//! A two-qubit gate `G(A, B)` acts as `A` on the even-parity subspace
//! `span{|00⟩, |11⟩}` and as `B` on the odd-parity subspace
//! `span{|01⟩, |10⟩}`; it is a matchgate when `det A = det B`.
//!
//! Basis ordering is `|00⟩, |01⟩, |10⟩, |11⟩` with the first operand of an
//! oriented pair as the left tensor factor.

use nalgebra::{Complex, Matrix2, Matrix4};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Tolerance for algebraic identities built from exact constants.
pub const TAU_ALG: f64 = 1e-10;

/// Row/column indices of the even-parity block inside a 4×4 gate.
const EVEN: [usize; 2] = [0, 3];
/// Row/column indices of the odd-parity block inside a 4×4 gate.
const ODD: [usize; 2] = [1, 2];

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn pauli_i() -> Matrix2<C64> {
    Matrix2::identity()
}

pub fn pauli_x() -> Matrix2<C64> {
    Matrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
}

pub fn pauli_y() -> Matrix2<C64> {
    Matrix2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
}

pub fn pauli_z() -> Matrix2<C64> {
    Matrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
}

pub fn hadamard() -> Matrix2<C64> {
    (pauli_x() + pauli_z()) * c(std::f64::consts::FRAC_1_SQRT_2, 0.)
}

/// `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})`, the determinant-one form.
pub fn rz(theta: f64) -> Matrix2<C64> {
    let h = theta / 2.0;
    Matrix2::new(C64::from_polar(1.0, -h), c(0., 0.), c(0., 0.), C64::from_polar(1.0, h))
}

fn max_abs_diff<'a>(a: impl Iterator<Item = &'a C64>, b: impl Iterator<Item = &'a C64>) -> f64 {
    a.zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub(crate) fn is_unitary2(m: &Matrix2<C64>, tol: f64) -> bool {
    let p = m.adjoint() * m;
    max_abs_diff(p.iter(), Matrix2::<C64>::identity().iter()) <= tol
}

pub(crate) fn is_unitary4(m: &Matrix4<C64>, tol: f64) -> bool {
    let p = m.adjoint() * m;
    max_abs_diff(p.iter(), Matrix4::<C64>::identity().iter()) <= tol
}

/// A validated 2×2 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Matrix2<C64>);

impl Unitary2 {
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        if is_unitary2(&m, TAU_ALG) {
            Ok(Self(m))
        } else {
            Err(Error::Validation("2x2 matrix is not unitary".into()))
        }
    }

    pub fn identity() -> Self {
        Self(pauli_i())
    }
    pub fn x() -> Self {
        Self(pauli_x())
    }
    pub fn y() -> Self {
        Self(pauli_y())
    }
    pub fn z() -> Self {
        Self(pauli_z())
    }
    pub fn h() -> Self {
        Self(hadamard())
    }
    pub fn rz(theta: f64) -> Self {
        Self(rz(theta))
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn det(&self) -> C64 {
        self.0.determinant()
    }
}

/// Parity blocks `(A, B)` of a parity-preserving gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityBlocks {
    pub even: Unitary2,
    pub odd: Unitary2,
}

/// A 4×4 two-qubit unitary, optionally carrying its parity blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitGate {
    matrix: Matrix4<C64>,
    blocks: Option<ParityBlocks>,
    matchgate: bool,
}

/// Embeds `A` on `{|00⟩,|11⟩}` and `B` on `{|01⟩,|10⟩}`.
pub fn embed_blocks(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for r in 0..2 {
        for col in 0..2 {
            m[(EVEN[r], EVEN[col])] = a[(r, col)];
            m[(ODD[r], ODD[col])] = b[(r, col)];
        }
    }
    m
}

fn extract_blocks(m: &Matrix4<C64>) -> (Matrix2<C64>, Matrix2<C64>) {
    let a = Matrix2::from_fn(|r, col| m[(EVEN[r], EVEN[col])]);
    let b = Matrix2::from_fn(|r, col| m[(ODD[r], ODD[col])]);
    (a, b)
}

/// Largest magnitude outside the parity-preserving block pattern.
pub fn off_pattern_norm(m: &Matrix4<C64>) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..4 {
        for col in 0..4 {
            let same_parity = ((r as u32).count_ones() % 2) == ((col as u32).count_ones() % 2);
            if !same_parity {
                worst = worst.max(m[(r, col)].norm());
            }
        }
    }
    worst
}

/// Builds `G(A, B)`; both blocks must already be unitary.
pub fn make_gate(a: &Unitary2, b: &Unitary2) -> TwoQubitGate {
    let matchgate = (a.det() - b.det()).norm() <= TAU_ALG;
    TwoQubitGate {
        matrix: embed_blocks(a.matrix(), b.matrix()),
        blocks: Some(ParityBlocks { even: *a, odd: *b }),
        matchgate,
    }
}

/// True iff `g` is unitary, parity-preserving and `|det A − det B| ≤ tol`.
pub fn is_matchgate(g: &Matrix4<C64>, tol: f64) -> bool {
    if !is_unitary4(g, tol) || off_pattern_norm(g) > tol {
        return false;
    }
    let (a, b) = extract_blocks(g);
    (a.determinant() - b.determinant()).norm() <= tol
}

impl TwoQubitGate {
    /// Validating constructor from raw blocks.
    pub fn from_blocks(a: Matrix2<C64>, b: Matrix2<C64>) -> Result<Self> {
        let a = Unitary2::new(a).map_err(|_| Error::Validation("block A is not unitary".into()))?;
        let b = Unitary2::new(b).map_err(|_| Error::Validation("block B is not unitary".into()))?;
        Ok(make_gate(&a, &b))
    }

    /// Validating constructor from a full 4×4 matrix.
    pub fn from_matrix(m: Matrix4<C64>) -> Result<Self> {
        if !is_unitary4(&m, TAU_ALG) {
            return Err(Error::Validation("4x4 matrix is not unitary".into()));
        }
        let blocks = if off_pattern_norm(&m) <= TAU_ALG {
            let (a, b) = extract_blocks(&m);
            match (Unitary2::new(a), Unitary2::new(b)) {
                (Ok(even), Ok(odd)) => Some(ParityBlocks { even, odd }),
                _ => None,
            }
        } else {
            None
        };
        Ok(Self { matrix: m, blocks, matchgate: is_matchgate(&m, TAU_ALG) })
    }

    /// Wraps a matrix without any validation; flags are still computed.
    /// Used when reading possibly corrupted schedules, which must reach the
    /// verifier rather than fail at parse time.
    pub fn from_matrix_unchecked(m: Matrix4<C64>) -> Self {
        Self { matrix: m, blocks: None, matchgate: is_matchgate(&m, TAU_ALG) }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn blocks(&self) -> Option<&ParityBlocks> {
        self.blocks.as_ref()
    }

    pub fn is_matchgate(&self) -> bool {
        self.matchgate
    }

    pub fn is_parity_preserving(&self) -> bool {
        off_pattern_norm(&self.matrix) <= TAU_ALG
    }

    /// Operator product `self · rhs` (rhs acts first).
    pub fn compose(&self, rhs: &TwoQubitGate) -> TwoQubitGate {
        let m = self.matrix * rhs.matrix;
        // Products of unitaries stay unitary up to rounding.
        Self::from_matrix(m).expect("product of unitaries is unitary")
    }

    pub fn adjoint(&self) -> TwoQubitGate {
        Self::from_matrix(self.matrix.adjoint()).expect("adjoint of a unitary is unitary")
    }

    /// Row-major entries.
    pub fn entries_row_major(&self) -> [C64; 16] {
        let mut out = [c(0., 0.); 16];
        for r in 0..4 {
            for col in 0..4 {
                out[4 * r + col] = self.matrix[(r, col)];
            }
        }
        out
    }

    pub fn from_entries_row_major(entries: &[C64]) -> Result<Self> {
        if entries.len() != 16 {
            return Err(Error::Shape(format!("expected 16 entries, got {}", entries.len())));
        }
        Self::from_matrix(Matrix4::from_fn(|r, col| entries[4 * r + col]))
    }

    pub fn approx_eq(&self, other: &TwoQubitGate, tol: f64) -> bool {
        max_abs_diff(self.matrix.iter(), other.matrix.iter()) <= tol
    }
}

/// Canonical gates.
pub mod canonical {
    use super::*;

    pub fn identity() -> TwoQubitGate {
        make_gate(&Unitary2::identity(), &Unitary2::identity())
    }

    /// `G(Z, X)`.
    pub fn fswap() -> TwoQubitGate {
        make_gate(&Unitary2::z(), &Unitary2::x())
    }

    /// `G(I, X)`: parity-preserving but not a matchgate.
    pub fn swap() -> TwoQubitGate {
        make_gate(&Unitary2::identity(), &Unitary2::x())
    }

    pub fn hh() -> TwoQubitGate {
        make_gate(&Unitary2::h(), &Unitary2::h())
    }

    pub fn xx() -> TwoQubitGate {
        make_gate(&Unitary2::x(), &Unitary2::x())
    }

    /// `G(Rz(θ), Rz(θ)) = Rz(θ) ⊗ I`.
    pub fn rz_first(theta: f64) -> TwoQubitGate {
        make_gate(&Unitary2::rz(theta), &Unitary2::rz(theta))
    }

    /// `Rz(θ) ⊗ Rz(θ)`.
    pub fn rz_both(theta: f64) -> TwoQubitGate {
        make_gate(&Unitary2::rz(2.0 * theta), &Unitary2::identity())
    }

    /// `exp(iθ XX)`.
    pub fn xx_rotation(theta: f64) -> TwoQubitGate {
        let rot = pauli_i() * c(theta.cos(), 0.) + pauli_x() * c(0., theta.sin());
        let u = Unitary2(rot);
        make_gate(&u, &u)
    }

    /// `CZ`, which is not a matchgate.
    pub fn cz() -> TwoQubitGate {
        make_gate(&Unitary2::z(), &Unitary2::identity())
    }
}

/// Weights for the generator Hamiltonians `{XX, YY, XY, YX, IZ, ZI}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeneratorCoeffs {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
    pub yx: f64,
    pub iz: f64,
    pub zi: f64,
}

impl GeneratorCoeffs {
    pub fn from_array(v: [f64; 6]) -> Self {
        Self { xx: v[0], yy: v[1], xy: v[2], yx: v[3], iz: v[4], zi: v[5] }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.xx, self.yy, self.xy, self.yx, self.iz, self.zi]
    }

    /// The Hermitian generator `Σ c_k P_k`.
    pub fn hamiltonian(&self) -> Matrix4<C64> {
        let (x, y, z, i) = (pauli_x(), pauli_y(), pauli_z(), pauli_i());
        let terms = [
            (self.xx, x.kronecker(&x)),
            (self.yy, y.kronecker(&y)),
            (self.xy, x.kronecker(&y)),
            (self.yx, y.kronecker(&x)),
            (self.iz, i.kronecker(&z)),
            (self.zi, z.kronecker(&i)),
        ];
        terms.iter().fold(Matrix4::zeros(), |acc, (w, p)| acc + p * c(*w, 0.))
    }
}

/// `exp(i Σ c_k P_k)` via Hermitian eigendecomposition.
pub fn gate_from_generators(coeffs: &GeneratorCoeffs) -> TwoQubitGate {
    let h = coeffs.hamiltonian();
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, l)));
    let mut m = v * d * v.adjoint();
    // Parity is exact for these generators; clear rounding noise off the pattern.
    for r in 0..4 {
        for col in 0..4 {
            if ((r as u32).count_ones() % 2) != ((col as u32).count_ones() % 2) {
                m[(r, col)] = c(0., 0.);
            }
        }
    }
    TwoQubitGate::from_matrix(m).expect("exponential of a Hermitian generator is unitary")
}

/// True iff some phase `φ` gives `max|u − e^{iφ} v| ≤ tol`, with `φ` fixed from
/// the largest-magnitude entry of `v`.
pub fn equal_up_to_global_phase(u: &[C64], v: &[C64], tol: f64) -> Result<bool> {
    Ok(global_phase(u, v)?.map(|(_, dev)| dev <= tol).unwrap_or(false))
}

/// Returns the phase `e^{iφ}` aligning `v` to `u` and the residual max deviation.
/// `None` when `v` vanishes identically or the pivot of `u` vanishes.
pub fn global_phase(u: &[C64], v: &[C64]) -> Result<Option<(C64, f64)>> {
    if u.len() != v.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", u.len(), v.len())));
    }
    let pivot = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i);
    let Some(p) = pivot else { return Ok(Some((c(1., 0.), 0.0))) };
    if v[p].norm() == 0.0 {
        let dev = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
        return Ok(Some((c(1., 0.), dev)));
    }
    if u[p].norm() == 0.0 {
        return Ok(None);
    }
    let ratio = u[p] / v[p];
    let phase = ratio / ratio.norm();
    let dev = u.iter().zip(v).map(|(a, b)| (a - phase * b).norm()).fold(0.0, f64::max);
    Ok(Some((phase, dev)))
}

/// Matrix-level convenience for [`equal_up_to_global_phase`].
pub fn gates_equal_up_to_phase(u: &TwoQubitGate, v: &TwoQubitGate, tol: f64) -> bool {
    equal_up_to_global_phase(u.matrix.as_slice(), v.matrix.as_slice(), tol).unwrap_or(false)
}

/// `SWAP · g · SWAP`; in block form `G(A, B) ↦ G(A, XBX)`.
pub fn exchange_conjugate(g: &TwoQubitGate) -> Result<TwoQubitGate> {
    if !g.is_parity_preserving() {
        return Err(Error::Validation("exchange_conjugate needs a parity-preserving gate".into()));
    }
    let s = *canonical::swap().matrix();
    TwoQubitGate::from_matrix(s * g.matrix * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn real4(rows: [[f64; 4]; 4]) -> Matrix4<C64> {
        Matrix4::from_fn(|r, col| c(rows[r][col], 0.))
    }

    #[test]
    fn fswap_matches_printed_matrix() {
        let expected = real4([[1., 0., 0., 0.], [0., 0., 1., 0.], [0., 1., 0., 0.], [0., 0., 0., -1.]]);
        let g = canonical::fswap();
        assert_eq!(*g.matrix(), expected);
        assert!(g.is_matchgate());
    }

    #[test]
    fn identity_blocks_give_identity() {
        let g = make_gate(&Unitary2::identity(), &Unitary2::identity());
        assert_eq!(*g.matrix(), Matrix4::identity());
    }

    #[test]
    fn swap_is_not_a_matchgate() {
        let g = canonical::swap();
        let expected = real4([[1., 0., 0., 0.], [0., 0., 1., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.]]);
        assert_eq!(*g.matrix(), expected);
        assert!(!g.is_matchgate());
        assert!(!is_matchgate(g.matrix(), TAU_ALG));
        assert!(is_matchgate(canonical::hh().matrix(), TAU_ALG));
    }

    #[test]
    fn non_unitary_block_is_named() {
        let bad = pauli_x() * c(2.0, 0.);
        let err = TwoQubitGate::from_blocks(pauli_i(), bad).unwrap_err();
        assert!(err.to_string().contains("block B"));
        let err = TwoQubitGate::from_blocks(bad, pauli_i()).unwrap_err();
        assert!(err.to_string().contains("block A"));
    }

    #[test]
    fn non_parity_preserving_is_rejected() {
        let h = hadamard();
        let m = h.kronecker(&pauli_i());
        assert!(!is_matchgate(&m, TAU_ALG));
        let g = TwoQubitGate::from_matrix(m).unwrap();
        assert!(exchange_conjugate(&g).is_err());
    }

    #[test]
    fn heisenberg_quarter_turn() {
        let g = gate_from_generators(&GeneratorCoeffs { xx: FRAC_PI_4, yy: FRAC_PI_4, ..Default::default() });
        let expected = make_gate(&Unitary2::identity(), &Unitary2(pauli_x() * c(0., 1.)));
        assert!(g.approx_eq(&expected, 1e-12));
        assert!(g.is_matchgate());
    }

    #[test]
    fn zero_generators_give_identity() {
        let g = gate_from_generators(&GeneratorCoeffs::default());
        assert!(g.approx_eq(&canonical::identity(), 1e-14));
    }

    #[test]
    fn fswap_from_generators_has_phase_i() {
        let z = gate_from_generators(&GeneratorCoeffs { iz: FRAC_PI_4, zi: FRAC_PI_4, ..Default::default() });
        let xy = gate_from_generators(&GeneratorCoeffs { xx: FRAC_PI_4, yy: FRAC_PI_4, ..Default::default() });
        let prod = z.compose(&xy);
        let f = canonical::fswap();
        let (phase, dev) = global_phase(prod.matrix().as_slice(), f.matrix().as_slice()).unwrap().unwrap();
        assert!(dev <= TAU_ALG);
        assert!((phase - c(0., 1.)).norm() <= TAU_ALG);
        let scaled = f.matrix() * c(0., 1.);
        assert!(max_abs_diff(prod.matrix().iter(), scaled.iter()) <= TAU_ALG);
    }

    #[test]
    fn phase_equality_cases() {
        let f = canonical::fswap();
        let fi = f.matrix() * c(0., 1.);
        assert!(equal_up_to_global_phase(fi.as_slice(), f.matrix().as_slice(), TAU_ALG).unwrap());
        assert!(!gates_equal_up_to_phase(&canonical::swap(), &f, TAU_ALG));
        assert!(gates_equal_up_to_phase(&canonical::identity(), &canonical::identity(), 0.0));
        assert!(equal_up_to_global_phase(&[c(1., 0.)], &[c(1., 0.), c(0., 0.)], 1.0).is_err());
    }

    #[test]
    fn exchange_conjugate_examples() {
        let f = canonical::fswap();
        assert!(exchange_conjugate(&f).unwrap().approx_eq(&f, TAU_ALG));
        let theta = 0.731;
        let g = canonical::rz_first(theta);
        let expected = pauli_i().kronecker(&rz(theta));
        let conj = exchange_conjugate(&g).unwrap();
        assert!(max_abs_diff(conj.matrix().iter(), expected.iter()) <= TAU_ALG);
        assert_eq!(exchange_conjugate(&canonical::identity()).unwrap(), canonical::identity());
    }

    #[test]
    fn rz_first_is_tensor_product() {
        let theta = 1.234;
        let expected = rz(theta).kronecker(&pauli_i());
        assert!(max_abs_diff(canonical::rz_first(theta).matrix().iter(), expected.iter()) <= 1e-15);
        let both = rz(theta).kronecker(&rz(theta));
        assert!(max_abs_diff(canonical::rz_both(theta).matrix().iter(), both.iter()) <= 1e-15);
    }

    #[test]
    fn xx_rotation_is_matchgate() {
        let g = canonical::xx_rotation(FRAC_PI_4);
        assert!(g.is_matchgate());
        let x = pauli_x();
        let xx = x.kronecker(&x);
        let expected = Matrix4::identity() * c(FRAC_PI_4.cos(), 0.) + xx * c(0., FRAC_PI_4.sin());
        assert!(max_abs_diff(g.matrix().iter(), expected.iter()) <= 1e-15);
    }
}
