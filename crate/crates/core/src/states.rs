//! Pure and mixed states on small registers, the two three-qubit families
//! used throughout the crate, and seeded Haar sampling.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{contract, dimension, Error, Result};
use crate::tensor::{c, hermitian_eigenvalues, ComplexMatrix, SplitLayout, SubsystemDims, C64, HERMITIAN_TOL, PSD_CLAMP};

/// Tolerance on norms and traces of validated states.
pub const STATE_TOL: f64 = 1e-10;

/// Deterministic random stream `stream` under master seed `seed`.
///
/// ChaCha's stream parameter gives independent sequences per index, so a
/// sample's value depends only on `(seed, stream)` and never on scheduling.
pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Unit-norm amplitude vector over an ordered list of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: SubsystemDims,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(dims: SubsystemDims, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != dims.total() {
            return dimension(format!(
                "{} amplitudes for total dimension {}",
                amps.len(),
                dims.total()
            ));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return contract("amplitudes must be finite");
        }
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > STATE_TOL {
            return contract(format!("state is not normalized (|psi|^2 = {norm2})"));
        }
        Ok(Self { dims, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(dims: SubsystemDims, amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return contract("cannot normalize a zero or non-finite vector");
        }
        Self::new(dims, amps.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis state with the given flat (big-endian) index.
    pub fn basis(dims: SubsystemDims, index: usize) -> Result<Self> {
        let mut amps = vec![C64::default(); dims.total()];
        if index >= amps.len() {
            return dimension("basis index out of range");
        }
        amps[index] = c(1.0, 0.0);
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: self.projector(),
        }
    }

    /// Applies one local operator per subsystem, `(U_0 ⊗ U_1 ⊗ ...) |ψ>`.
    pub fn apply_local(&self, ops: &[ComplexMatrix]) -> Result<Self> {
        if ops.len() != self.dims.len() {
            return dimension("need exactly one operator per subsystem");
        }
        let strides = self.dims.strides();
        let mut amps = self.amps.clone();
        for (k, op) in ops.iter().enumerate() {
            let d = self.dims.as_slice()[k];
            if op.rows() != d || op.cols() != d {
                return dimension(format!("operator {k} is not {d}x{d}"));
            }
            let mut next = vec![C64::default(); amps.len()];
            for (idx, slot) in next.iter_mut().enumerate() {
                let digit = (idx / strides[k]) % d;
                let base = idx - digit * strides[k];
                *slot = (0..d).map(|j| op[(digit, j)] * amps[base + j * strides[k]]).sum();
            }
            amps = next;
        }
        Self::normalized(self.dims.clone(), amps)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix with subsystem dims.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: SubsystemDims,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: SubsystemDims, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return dimension("density matrix shape does not match subsystem dims");
        }
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::Numerical("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Numerical(format!("density matrix trace is {tr}")));
        }
        let ev = hermitian_eigenvalues(&matrix)?;
        if ev.last().is_some_and(|&low| low < PSD_CLAMP) {
            return Err(Error::Numerical("density matrix has a negative eigenvalue".into()));
        }
        Ok(Self { dims, matrix })
    }

    /// Equal-weight or weighted mixture of pure states, `Σ p_i |ψ_i><ψ_i|`.
    pub fn mixture(parts: &[(f64, &PureState)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Contract("empty mixture".into()))?;
        let dims = first.1.dims.clone();
        let n = dims.total();
        let mut m = ComplexMatrix::zeros(n, n);
        for (p, s) in parts {
            if s.dims != dims {
                return dimension("mixture components have different dims");
            }
            m = &m + &s.projector().scale(c(*p, 0.0));
        }
        Self::new(dims, m)
    }

    pub fn maximally_mixed(dims: SubsystemDims) -> Self {
        let n = dims.total();
        Self {
            matrix: ComplexMatrix::identity(n).scale(c(1.0 / n as f64, 0.0)),
            dims,
        }
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reduced state on `keep` (sorted subsystem indices).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let m = crate::tensor::partial_trace(&self.matrix, &self.dims, keep)?;
        Self::new(self.dims.select(keep)?, m)
    }
}

/// Reduced density matrix of a pure state on the subsystems in `keep`.
pub fn reduce(s: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    s.dims.check_subset(keep)?;
    DensityMatrix::new(s.dims.select(keep)?, reduced_matrix(s, keep))
}

/// `Tr_rest |ψ><ψ|` as a bare matrix, computed as `M M†` for the reshaped
/// amplitude matrix `M` (kept digits by traced digits).
pub(crate) fn reduced_matrix(s: &PureState, keep: &[usize]) -> ComplexMatrix {
    let layout = SplitLayout::new(&s.dims, keep);
    let (dk, dt) = (layout.dim_a, layout.dim_b);
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in i..dk {
            let z: C64 = (0..dt)
                .map(|t| s.amps[layout.index[i * dt + t]] * s.amps[layout.index[j * dt + t]].conj())
                .sum();
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
    }
    out
}

/// Coefficients of the five-term canonical form of a three-qubit pure state,
/// `λ0|000> + λ1 e^{iϕ}|100> + λ2|101> + λ3|110> + λ4|111>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtFamily {
    pub lambda: [f64; 5],
    /// Relative phase on the `|100>` term, in `[0, 2π)`.
    pub phase: f64,
}

impl SchmidtFamily {
    pub fn new(lambda: [f64; 5], phase: f64) -> Result<Self> {
        if lambda.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
            return contract("Schmidt coefficients must be finite and nonnegative");
        }
        let norm2: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm2 - 1.0).abs() > STATE_TOL {
            return contract(format!("Schmidt coefficients are not normalized (sum of squares {norm2})"));
        }
        if !(0.0..2.0 * PI).contains(&phase) {
            return contract("phase must lie in [0, 2pi)");
        }
        Ok(Self { lambda, phase })
    }

    /// Random member: `|N(0,1)|` coefficients normalized, uniform phase.
    /// `w_type` forces `λ4 = 0`; `ordered` swaps so that `λ2 ≤ λ3`.
    pub fn sample<R: Rng>(rng: &mut R, w_type: bool, ordered: bool) -> Self {
        let mut l = [0.0f64; 5];
        for x in l.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *x = g.abs();
        }
        if w_type {
            l[4] = 0.0;
        }
        if ordered && l[2] > l[3] {
            l.swap(2, 3);
        }
        let n = l.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in l.iter_mut() {
            *x /= n;
        }
        let phase = rng.random::<f64>() * 2.0 * PI;
        Self { lambda: l, phase }
    }
}

/// `sinθ cosφ|000> + sinθ sinφ|101> + cosθ|110>` with θ, φ in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleFamily {
    pub theta: f64,
    pub phi: f64,
}

impl AngleFamily {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let ok = |x: f64| (0.0..=FRAC_PI_2).contains(&x);
        if !ok(theta) || !ok(phi) {
            return contract(format!("angles ({theta}, {phi}) must lie in [0, pi/2]"));
        }
        Ok(Self { theta, phi })
    }
}

pub fn schmidt_state(p: &SchmidtFamily) -> Result<PureState> {
    let p = SchmidtFamily::new(p.lambda, p.phase)?;
    let [l0, l1, l2, l3, l4] = p.lambda;
    let mut amps = vec![C64::default(); 8];
    amps[0b000] = c(l0, 0.0);
    amps[0b100] = C64::from_polar(l1, p.phase);
    amps[0b101] = c(l2, 0.0);
    amps[0b110] = c(l3, 0.0);
    amps[0b111] = c(l4, 0.0);
    PureState::new(SubsystemDims::qubits(3), amps)
}

pub fn angle_state(p: &AngleFamily) -> Result<PureState> {
    let p = AngleFamily::new(p.theta, p.phi)?;
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let mut amps = vec![C64::default(); 8];
    amps[0b000] = c(st * cp, 0.0);
    amps[0b101] = c(st * sp, 0.0);
    amps[0b110] = c(ct, 0.0);
    PureState::normalized(SubsystemDims::qubits(3), amps)
}

/// Haar-random pure state: a normalized vector of i.i.d. complex standard
/// normal amplitudes. Deterministic in `seed`.
pub fn haar_random_pure(dims: &SubsystemDims, seed: u64) -> PureState {
    haar_random_pure_with(dims, &mut seeded_stream(seed, 0))
}

pub fn haar_random_pure_with<R: Rng>(dims: &SubsystemDims, rng: &mut R) -> PureState {
    loop {
        let amps: Vec<C64> = (0..dims.total())
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(s) = PureState::normalized(dims.clone(), amps) {
            return s;
        }
    }
}

/// Haar-random single-qubit unitary (SU(2) from a random unit quaternion).
pub fn random_su2<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let v = haar_random_pure_with(&SubsystemDims::qubits(1), rng);
    let (a, b) = (v.amps[0], v.amps[1]);
    ComplexMatrix::from_vec(2, 2, vec![a, -b.conj(), b, a.conj()]).expect("static shape")
}

pub fn bell_phi_plus() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(
        SubsystemDims::qubits(2),
        vec![c(s, 0.0), C64::default(), C64::default(), c(s, 0.0)],
    )
    .expect("normalized")
}

/// `(|0...0> + |1...1>)/√2` on `n` qubits.
pub fn ghz(n: usize) -> PureState {
    let dims = SubsystemDims::qubits(n);
    let mut amps = vec![C64::default(); dims.total()];
    amps[0] = c(1.0, 0.0);
    amps[dims.total() - 1] = c(1.0, 0.0);
    PureState::normalized(dims, amps).expect("nonzero")
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w_state(n: usize) -> PureState {
    let dims = SubsystemDims::qubits(n);
    let mut amps = vec![C64::default(); dims.total()];
    for k in 0..n {
        amps[1 << k] = c(1.0, 0.0);
    }
    PureState::normalized(dims, amps).expect("nonzero")
}

/// On-disk form of a pure state: `{"dims": [...], "re": [...], "im": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StateFile {
    pub fn from_state(s: &PureState) -> Self {
        Self {
            dims: s.dims.as_slice().to_vec(),
            re: s.amps.iter().map(|z| z.re).collect(),
            im: s.amps.iter().map(|z| z.im).collect(),
        }
    }

    pub fn into_state(self) -> Result<PureState> {
        if self.re.len() != self.im.len() {
            return dimension("re and im arrays differ in length");
        }
        let dims = SubsystemDims::new(self.dims)?;
        let amps = self.re.iter().zip(&self.im).map(|(&r, &i)| c(r, i)).collect();
        PureState::new(dims, amps)
    }
}

pub fn state_to_json(s: &PureState) -> String {
    serde_json::to_string(&StateFile::from_state(s)).expect("plain data serializes")
}

pub fn state_from_json(text: &str) -> Result<PureState> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::Contract(format!("malformed state file: {e}")))?;
    file.into_state()
}
