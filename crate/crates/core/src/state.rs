//! Dense state-vector engine used as the ground-truth oracle.
//!
//! Qubit `i` is bit `i` of the basis index (little-endian).

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::gate::{c, global_phase, TwoQubitGate, C64};
use crate::graph::Vertex;

/// Default cap on simulated qubits.
pub const DEFAULT_MAX_QUBITS: usize = 20;
/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "MATCHGEO_MAX_QUBITS";

/// The active qubit cap, honoring [`MAX_QUBITS_ENV`].
pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

fn check_cap(n: usize) -> Result<()> {
    let cap = max_qubits();
    if n > cap {
        Err(Error::Resource(format!("{n} qubits exceed the state-vector cap of {cap}")))
    } else {
        Ok(())
    }
}

/// A single-qubit pure state used for preparation and ancilla checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalState {
    Zero,
    One,
    Plus,
    PlusI,
    Amplitudes(C64, C64),
}

impl LocalState {
    pub fn amplitudes(&self) -> [C64; 2] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            LocalState::Zero => [c(1., 0.), c(0., 0.)],
            LocalState::One => [c(0., 0.), c(1., 0.)],
            LocalState::Plus => [c(r, 0.), c(r, 0.)],
            LocalState::PlusI => [c(r, 0.), c(0., r)],
            LocalState::Amplitudes(a, b) => {
                let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                [a / norm, b / norm]
            }
        }
    }

    /// Spanning set used for subspace and register checks.
    pub const SPANNING: [LocalState; 4] = [LocalState::Zero, LocalState::One, LocalState::Plus, LocalState::PlusI];
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: usize,
    amps: Vec<C64>,
}

/// A two-qubit gate on an ordered vertex pair; the first vertex is the left
/// tensor factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateApplication {
    pub gate: TwoQubitGate,
    pub pair: (Vertex, Vertex),
}

impl GateApplication {
    pub fn new(gate: TwoQubitGate, u: Vertex, v: Vertex) -> Result<Self> {
        if u == v {
            return Err(Error::Validation(format!("gate on identical vertices ({u},{u})")));
        }
        Ok(Self { gate, pair: (u, v) })
    }
}

impl QuantumState {
    /// Product state; vertices not listed start in `|0⟩`.
    pub fn init(n: usize, preps: &[(Vertex, LocalState)]) -> Result<Self> {
        let factors: Vec<(Vec<Vertex>, Vec<C64>)> =
            preps.iter().map(|(v, s)| (vec![*v], s.amplitudes().to_vec())).collect();
        Self::from_factors(n, &factors)
    }

    /// Tensor product of multi-qubit factors. Factor `(vs, amps)` has
    /// `amps.len() == 2^vs.len()`, with `vs[j]` as bit `j` of the local index.
    pub fn from_factors(n: usize, factors: &[(Vec<Vertex>, Vec<C64>)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("state needs at least one qubit".into()));
        }
        check_cap(n)?;
        let mut used = vec![false; n];
        for (vs, amps) in factors {
            if amps.len() != 1 << vs.len() {
                return Err(Error::Shape(format!("factor on {} qubits has {} amplitudes", vs.len(), amps.len())));
            }
            for &v in vs {
                if v >= n || used[v] {
                    return Err(Error::Validation(format!("vertex {v} invalid or prepared twice")));
                }
                used[v] = true;
            }
        }
        let mut amps = vec![c(1., 0.)];
        let mut order: Vec<Vertex> = Vec::new();
        for (vs, local) in factors {
            let mut next = Vec::with_capacity(amps.len() * local.len());
            for l in local {
                for a in &amps {
                    next.push(a * l);
                }
            }
            amps = next;
            order.extend(vs);
        }
        // `amps` is indexed by bits in `order`; scatter into the full register.
        let mut full = vec![c(0., 0.); 1 << n];
        for (k, a) in amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let mut idx = 0usize;
            for (j, &v) in order.iter().enumerate() {
                if (k >> j) & 1 == 1 {
                    idx |= 1 << v;
                }
            }
            full[idx] = *a;
        }
        let mut state = Self { n, amps: full };
        state.normalize();
        Ok(state)
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        check_cap(n)?;
        if amps.len() != 1 << n {
            return Err(Error::Shape(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        Ok(Self { n, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    pub fn apply(&mut self, app: &GateApplication) -> Result<()> {
        let (u, v) = app.pair;
        if u >= self.n || v >= self.n || u == v {
            return Err(Error::Validation(format!("invalid pair ({u},{v}) for {} qubits", self.n)));
        }
        let m = app.gate.matrix();
        let (bu, bv) = (1usize << u, 1usize << v);
        for base in 0..self.amps.len() {
            if base & (bu | bv) != 0 {
                continue;
            }
            let idx = [base, base | bv, base | bu, base | bu | bv];
            let x = idx.map(|i| self.amps[i]);
            for r in 0..4 {
                self.amps[idx[r]] = m[(r, 0)] * x[0] + m[(r, 1)] * x[1] + m[(r, 2)] * x[2] + m[(r, 3)] * x[3];
            }
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, apps: impl IntoIterator<Item = &'a GateApplication>) -> Result<()> {
        for app in apps {
            self.apply(app)?;
        }
        Ok(())
    }

    /// Applies a single-qubit matrix to vertex `v`.
    pub fn apply_single(&mut self, v: Vertex, m: &Matrix2<C64>) -> Result<()> {
        if v >= self.n {
            return Err(Error::Validation(format!("vertex {v} out of range")));
        }
        let bit = 1usize << v;
        for base in 0..self.amps.len() {
            if base & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[base], self.amps[base | bit]);
            self.amps[base] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            self.amps[base | bit] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::Shape(format!("states on {} and {} qubits", self.n, other.n)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Reduced density matrix of one vertex.
    pub fn reduced_density(&self, v: Vertex) -> Result<Matrix2<C64>> {
        if v >= self.n {
            return Err(Error::Validation(format!("vertex {v} out of range")));
        }
        let bit = 1usize << v;
        let mut rho = Matrix2::zeros();
        for base in 0..self.amps.len() {
            if base & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[base], self.amps[base | bit]);
            rho[(0, 0)] += a0 * a0.conj();
            rho[(0, 1)] += a0 * a1.conj();
            rho[(1, 0)] += a1 * a0.conj();
            rho[(1, 1)] += a1 * a1.conj();
        }
        Ok(rho)
    }
}

/// `|⟨s1|s2⟩|`.
pub fn fidelity(s1: &QuantumState, s2: &QuantumState) -> Result<f64> {
    Ok(s1.inner(s2)?.norm())
}

/// Result of checking one vertex against an expected pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaCheck {
    /// `1 − ⟨e|ρ|e⟩`.
    pub infidelity: f64,
    pub purity: f64,
    pub entangled: bool,
}

pub fn ancilla_intact(state: &QuantumState, v: Vertex, expected: LocalState) -> Result<AncillaCheck> {
    let rho = state.reduced_density(v)?;
    let e = expected.amplitudes();
    let mut overlap = c(0., 0.);
    for r in 0..2 {
        for col in 0..2 {
            overlap += e[r].conj() * rho[(r, col)] * e[col];
        }
    }
    let purity = (rho * rho).trace().re;
    Ok(AncillaCheck { infidelity: (1.0 - overlap.re).max(0.0), purity, entangled: purity < 1.0 - 1e-10 })
}

/// Ancilla clamp values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clamp {
    Zero,
    Plus,
}

impl Clamp {
    pub fn local_state(self) -> LocalState {
        match self {
            Clamp::Zero => LocalState::Zero,
            Clamp::Plus => LocalState::Plus,
        }
    }
}

/// Every product input where clamped vertices hold their fixed states and the
/// free vertices range over [`LocalState::SPANNING`].
pub fn spanning_inputs(n: usize, clamped: &[(Vertex, Clamp)]) -> Result<Vec<QuantumState>> {
    let mut fixed: Vec<Option<LocalState>> = vec![None; n];
    for &(v, cl) in clamped {
        if v >= n {
            return Err(Error::Validation(format!("clamped vertex {v} out of range")));
        }
        fixed[v] = Some(cl.local_state());
    }
    let free: Vec<Vertex> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    let total = 4usize.checked_pow(free.len() as u32).ok_or_else(|| Error::Resource("too many inputs".into()))?;
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut preps: Vec<(Vertex, LocalState)> =
            (0..n).filter_map(|v| fixed[v].map(|s| (v, s))).collect();
        for (j, &v) in free.iter().enumerate() {
            preps.push((v, LocalState::SPANNING[(code >> (2 * j)) & 3]));
        }
        out.push(QuantumState::init(n, &preps)?);
    }
    Ok(out)
}

/// True iff both sequences agree on the clamped subspace up to one common
/// global phase.
pub fn operators_equal_on_subspace(
    seq_a: &[GateApplication],
    seq_b: &[GateApplication],
    clamped: &[(Vertex, Clamp)],
    n: usize,
    tol: f64,
) -> Result<bool> {
    check_cap(n)?;
    let mut common: Option<C64> = None;
    for input in spanning_inputs(n, clamped)? {
        let mut a = input.clone();
        a.apply_all(seq_a)?;
        let mut b = input;
        b.apply_all(seq_b)?;
        let phase = match common {
            Some(p) => p,
            None => match global_phase(a.amplitudes(), b.amplitudes())? {
                Some((p, _)) => {
                    common = Some(p);
                    p
                }
                None => return Ok(false),
            },
        };
        let dev = a.amps.iter().zip(&b.amps).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max);
        if dev > tol {
            return Ok(false);
        }
    }
    Ok(true)
}
