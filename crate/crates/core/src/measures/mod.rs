//! Bipartite correlation measures: pure-state concurrence, tangle and
//! entropy of entanglement, the two-qubit Wootters concurrence, the closed
//! forms for the canonical three-qubit families, and the decomposition
//! oracles for assistance and formation quantities on mixed states.

mod oracle;

use serde::{Deserialize, Serialize};

pub use oracle::{assistance_oracle, formation_oracle, OracleConfig, OracleReport};

use crate::error::{contract, dimension, Error, Result};
use crate::flags::Flag;
use crate::states::{reduced_matrix, AngleFamily, DensityMatrix, PureState, SchmidtFamily};
use crate::tensor::{hermitian_eigen, hermitian_eigenvalues, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Concurrence,
    Tangle,
    ConcurrenceOfAssistance,
    TangleOfAssistance,
    EntanglementEntropy,
}

impl MeasureKind {
    pub fn is_assisted(self) -> bool {
        matches!(self, Self::ConcurrenceOfAssistance | Self::TangleOfAssistance)
    }
}

/// Split of a register's subsystems into two nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// `side_a` lists the subsystems of the first party; the rest of the
    /// `n` subsystems form the second.
    pub fn new(side_a: &[usize], n: usize) -> Result<Self> {
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != side_a.len() || a.iter().any(|&i| i >= n) {
            return contract(format!("invalid party {side_a:?} for {n} subsystems"));
        }
        let b: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
        if a.is_empty() || b.is_empty() {
            return contract("both sides of a bipartition must be nonempty");
        }
        Ok(Self { side_a: a, side_b: b })
    }

    /// The one-to-group cut `k | rest`.
    pub fn one_vs_rest(k: usize, n: usize) -> Result<Self> {
        Self::new(&[k], n)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn subsystems(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }

    fn check_for(&self, n: usize) -> Result<()> {
        if self.subsystems() != n {
            return contract(format!(
                "bipartition covers {} subsystems, state has {n}",
                self.subsystems()
            ));
        }
        Ok(())
    }
}

/// `tr ρ_A²` of the first side of a pure state.
fn marginal_purity(s: &PureState, part: &Bipartition) -> Result<f64> {
    part.check_for(s.dims().len())?;
    let r = reduced_matrix(s, part.side_a());
    Ok(r.as_slice().iter().map(|z| z.norm_sqr()).sum())
}

/// `√(2(1 − tr ρ_A²))`.
pub fn concurrence_pure(s: &PureState, part: &Bipartition) -> Result<f64> {
    Ok(tangle_pure(s, part)?.sqrt())
}

/// `2(1 − tr ρ_A²)`.
pub fn tangle_pure(s: &PureState, part: &Bipartition) -> Result<f64> {
    Ok((2.0 * (1.0 - marginal_purity(s, part)?)).max(0.0))
}

/// Von Neumann entropy (base 2) of the reduced state on the first side.
pub fn entanglement_entropy(s: &PureState, part: &Bipartition) -> Result<f64> {
    part.check_for(s.dims().len())?;
    let ev = hermitian_eigenvalues(&reduced_matrix(s, part.side_a()))?;
    Ok(ev
        .into_iter()
        .filter(|&mu| mu > 0.0)
        .map(|mu| -mu * mu.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Square roots of the eigenvalues of `ρ ρ̃`, descending.
///
/// With `ρ = Σ v_i v_i†` over subnormalized eigenvectors, the `η` are the
/// singular values of the symmetric matrix `τ_ij = v_i† (σ_y⊗σ_y) v_j*`.
/// They are read off the Hermitian dilation `[[0, τ], [τ†, 0]]`, whose
/// eigenvalues are `±η`. This keeps the small `η` accurate to machine
/// precision instead of taking square roots of rounding noise.
pub fn wootters_etas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    if rho.dims().as_slice() != [2, 2] {
        return contract("Wootters concurrence needs a two-qubit state");
    }
    let eig = hermitian_eigen(rho.matrix())?;
    let v: Vec<Vec<C64>> = (0..4)
        .map(|k| {
            let w = eig.values[k].max(0.0).sqrt();
            eig.vector(k).into_iter().map(|z| z * w).collect()
        })
        .collect();
    // σ_y⊗σ_y is real: it maps |00>,|01>,|10>,|11> to -|11>,|10>,|01>,-|00>
    let flip = |x: &[C64]| [-x[3], x[2], x[1], -x[0]];
    let mut dilation = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            let fy = flip(&v[j]);
            let t: C64 = (0..4).map(|a| v[i][a].conj() * fy[a].conj()).sum();
            dilation[(i, 4 + j)] = t;
            dilation[(4 + j, i)] = t.conj();
        }
    }
    let ev = hermitian_eigenvalues(&dilation)?;
    let mut etas = [0.0; 4];
    for (eta, lam) in etas.iter_mut().zip(ev) {
        *eta = lam.max(0.0);
    }
    Ok(etas)
}

/// `max(0, η1 − η2 − η3 − η4)`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let [e1, e2, e3, e4] = wootters_etas(rho)?;
    Ok((e1 - e2 - e3 - e4).max(0.0))
}

/// Which value of the canonical five-term family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchmidtCut {
    /// `A|BC`
    OneToGroup,
    /// `ρ_AB`
    AB,
    /// `ρ_AC`
    AC,
}

/// Closed-form concurrence of assistance for the five-term family:
/// `2λ0√(λ2²+λ3²+λ4²)` across `A|BC`, `2λ0√(λ3²+λ4²)` for `ρ_AB` and
/// `2λ0√(λ2²+λ4²)` for `ρ_AC`, with the kets read as `|ABC>`.
/// (`λ2|101>` only couples `A` with `C`.)
pub fn assistance_closed_schmidt(p: &SchmidtFamily, cut: SchmidtCut) -> f64 {
    let [l0, _, l2, l3, l4] = p.lambda;
    let inner = match cut {
        SchmidtCut::OneToGroup => l2 * l2 + l3 * l3 + l4 * l4,
        SchmidtCut::AB => l3 * l3 + l4 * l4,
        SchmidtCut::AC => l2 * l2 + l4 * l4,
    };
    2.0 * l0 * inner.sqrt()
}

/// Closed-form one-to-group concurrences `(C_{A|BC}, C_{B|AC}, C_{C|AB})`
/// of the angle family.
pub fn angle_concurrences_closed(p: &AngleFamily) -> [f64; 3] {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let ca = 2.0 * st * cp * (st * st * sp * sp + ct * ct).sqrt();
    let cb = (2.0 * p.theta).sin();
    let cc = 2.0 * st * sp * (st * st * cp * cp + ct * ct).sqrt();
    [ca, cb, cc]
}

/// A measure value with the qualifiers needed to interpret it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub flags: Vec<Flag>,
}

impl MeasureValue {
    fn exact(value: f64) -> Self {
        Self { value, flags: Vec::new() }
    }
}

/// Evaluates `kind` across a cut of a pure state. Assisted measures reduce
/// to the plain pure-state values.
pub fn pure_value(s: &PureState, part: &Bipartition, kind: MeasureKind) -> Result<MeasureValue> {
    let v = match kind {
        MeasureKind::Concurrence | MeasureKind::ConcurrenceOfAssistance => concurrence_pure(s, part)?,
        MeasureKind::Tangle | MeasureKind::TangleOfAssistance => tangle_pure(s, part)?,
        MeasureKind::EntanglementEntropy => entanglement_entropy(s, part)?,
    };
    Ok(MeasureValue::exact(v))
}

/// Evaluates `kind` across a cut of a mixed state.
///
/// Two-qubit concurrence and tangle use the Wootters formula; concurrence
/// on larger registers and both assisted measures go through the
/// decomposition oracles and carry bound flags.
pub fn mixed_value(
    rho: &DensityMatrix,
    part: &Bipartition,
    kind: MeasureKind,
    cfg: &OracleConfig,
) -> Result<MeasureValue> {
    part.check_for(rho.dims().len())?;
    let two_qubit = rho.dims().as_slice() == [2, 2];
    match kind {
        MeasureKind::Concurrence if two_qubit => Ok(MeasureValue::exact(wootters_concurrence(rho)?)),
        MeasureKind::Tangle if two_qubit => Ok(MeasureValue::exact(wootters_concurrence(rho)?.powi(2))),
        MeasureKind::Concurrence => Ok(formation_oracle(rho, part, cfg)?.into()),
        MeasureKind::Tangle => dimension("mixed-state tangle is only available for two qubits"),
        MeasureKind::ConcurrenceOfAssistance | MeasureKind::TangleOfAssistance => {
            Ok(assistance_oracle(rho, part, kind, cfg)?.into())
        }
        MeasureKind::EntanglementEntropy => Err(Error::Contract(
            "entropy of entanglement is only defined here for pure states".into(),
        )),
    }
}
