//! Decomposition search for assistance (maximum average) and formation
//! (minimum average) quantities of mixed states.
//!
//! With `ρ = Σ_j μ_j |e_j><e_j|` of rank `r`, every `m`-member pure-state
//! ensemble is `√p_i |ψ_i> = Σ_j U_ij √μ_j |e_j>` for an `m x r` isometry `U`.
//! Mixing two members by a 2x2 unitary keeps the ensemble valid, so the
//! search is a pattern search over such pairwise rotations, started from
//! random isometries. Each restart draws from its own `(seed, restart)`
//! stream and the best restart wins, so results do not depend on thread
//! scheduling.

use std::f64::consts::FRAC_PI_4;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Bipartition, MeasureKind, MeasureValue};
use crate::error::{contract, Result};
use crate::flags::Flag;
use crate::states::{seeded_stream, DensityMatrix};
use crate::tensor::{c, hermitian_eigen, SplitLayout, C64};

/// Largest density-matrix rank the oracle accepts.
pub const MAX_ORACLE_RANK: usize = 4;

const RANK_CUTOFF: f64 = 1e-12;
const PHASES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub restarts: usize,
    /// Members per ensemble; `None` means `rank²`.
    pub ensemble_size: Option<usize>,
    /// The search stops once the rotation angle shrinks below this.
    pub step_tolerance: f64,
    /// Cap on full sweeps over member pairs, per restart.
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            ensemble_size: None,
            step_tolerance: 1e-6,
            max_iterations: 500,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 || self.ensemble_size == Some(0) {
            return contract("oracle restarts, iterations and ensemble size must be positive");
        }
        if !(self.step_tolerance > 0.0) {
            return contract("oracle step tolerance must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Best average found. A lower bound when maximizing, an upper bound
    /// when minimizing.
    pub value: f64,
    pub direction: Direction,
    /// Whether the winning restart reached the step tolerance.
    pub converged: bool,
    pub rank: usize,
    pub ensemble_size: usize,
}

impl OracleReport {
    pub fn flags(&self) -> Vec<Flag> {
        let mut f = vec![match self.direction {
            Direction::Maximize => Flag::OracleLowerBound,
            Direction::Minimize => Flag::OracleUpperBound,
        }];
        if !self.converged {
            f.push(Flag::OracleNotConverged);
        }
        f
    }
}

impl From<OracleReport> for MeasureValue {
    fn from(r: OracleReport) -> Self {
        MeasureValue {
            value: r.value,
            flags: r.flags(),
        }
    }
}

/// Concurrence or tangle of assistance: the largest ensemble average of the
/// pure-state value across `part`.
pub fn assistance_oracle(
    rho: &DensityMatrix,
    part: &Bipartition,
    objective: MeasureKind,
    cfg: &OracleConfig,
) -> Result<OracleReport> {
    let score = match objective {
        MeasureKind::ConcurrenceOfAssistance => Score::Concurrence,
        MeasureKind::TangleOfAssistance => Score::Tangle,
        other => return contract(format!("{other:?} is not an assistance objective")),
    };
    search(rho, part, score, Direction::Maximize, cfg)
}

/// Convex-roof concurrence: the smallest ensemble average of the pure-state
/// concurrence across `part`.
pub fn formation_oracle(rho: &DensityMatrix, part: &Bipartition, cfg: &OracleConfig) -> Result<OracleReport> {
    search(rho, part, Score::Concurrence, Direction::Minimize, cfg)
}

#[derive(Debug, Clone, Copy)]
enum Score {
    Concurrence,
    Tangle,
}

/// Scores unnormalized members `√p |ψ>` stored in split-layout order.
struct MemberScore {
    dim_a: usize,
    dim_b: usize,
    score: Score,
}

impl MemberScore {
    /// `p · f(ψ)` for `v = √p |ψ>`.
    fn eval(&self, v: &[C64]) -> f64 {
        let (da, db) = (self.dim_a, self.dim_b);
        let mut p = 0.0;
        let mut purity = 0.0;
        for i in 0..da {
            let ri = &v[i * db..(i + 1) * db];
            let nii: f64 = ri.iter().map(|z| z.norm_sqr()).sum();
            p += nii;
            purity += nii * nii;
            for j in i + 1..da {
                let rj = &v[j * db..(j + 1) * db];
                let g: C64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                purity += 2.0 * g.norm_sqr();
            }
        }
        let deficit = (2.0 * (p * p - purity)).max(0.0);
        match self.score {
            Score::Concurrence => deficit.sqrt(),
            Score::Tangle if p > 0.0 => deficit / p,
            Score::Tangle => 0.0,
        }
    }
}

fn search(
    rho: &DensityMatrix,
    part: &Bipartition,
    score: Score,
    direction: Direction,
    cfg: &OracleConfig,
) -> Result<OracleReport> {
    cfg.validate()?;
    part.check_for(rho.dims().len())?;
    let dims = rho.dims();
    let dim_of = |side: &[usize]| side.iter().map(|&k| dims.as_slice()[k]).product::<usize>();
    let (da, db) = (dim_of(part.side_a()), dim_of(part.side_b()));
    if da.min(db) != 2 {
        return contract("decomposition oracle needs a qubit on the smaller side of the cut");
    }
    // put the qubit side first
    let qubit_side = if da == 2 { part.side_a() } else { part.side_b() };
    let layout = SplitLayout::new(dims, qubit_side);

    let eig = hermitian_eigen(rho.matrix())?;
    let support: Vec<(f64, Vec<C64>)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > RANK_CUTOFF)
        .map(|(k, &mu)| {
            let e = eig.vector(k);
            let w = layout.index.iter().map(|&idx| e[idx] * mu.sqrt()).collect();
            (mu, w)
        })
        .collect();
    let rank = support.len();
    if rank > MAX_ORACLE_RANK {
        return contract(format!("rank {rank} exceeds the oracle limit {MAX_ORACLE_RANK}"));
    }
    let weighted: Vec<Vec<C64>> = support.into_iter().map(|(_, w)| w).collect();
    let members = cfg.ensemble_size.unwrap_or(rank * rank);
    if members < rank {
        return contract("ensemble size must be at least the rank");
    }
    let scorer = MemberScore {
        dim_a: layout.dim_a,
        dim_b: layout.dim_b,
        score,
    };
    let sign = match direction {
        Direction::Maximize => 1.0,
        Direction::Minimize => -1.0,
    };

    let runs: Vec<(f64, bool)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = seeded_stream(cfg.seed, restart as u64);
            let iso = if restart == 0 {
                identity_isometry(members, rank)
            } else {
                random_isometry(&mut rng, members, rank)
            };
            let ensemble = mix(&iso, &weighted);
            pattern_search(ensemble, &scorer, sign, cfg)
        })
        .collect();

    let (best, converged) = runs
        .into_iter()
        .fold((f64::NEG_INFINITY, false), |acc, run| if run.0 > acc.0 { run } else { acc });
    Ok(OracleReport {
        value: sign * best,
        direction,
        converged,
        rank,
        ensemble_size: members,
    })
}

/// Members `Σ_j U_ij w_j`.
fn mix(iso: &[Vec<C64>], weighted: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let d = weighted[0].len();
    iso.iter()
        .map(|row| {
            let mut v = vec![C64::default(); d];
            for (u, w) in row.iter().zip(weighted) {
                for (vi, wi) in v.iter_mut().zip(w) {
                    *vi += u * wi;
                }
            }
            v
        })
        .collect()
}

fn identity_isometry(m: usize, r: usize) -> Vec<Vec<C64>> {
    (0..m)
        .map(|i| (0..r).map(|j| if i == j { c(1.0, 0.0) } else { C64::default() }).collect())
        .collect()
}

/// `m x r` matrix with orthonormal columns, from Gram-Schmidt on a complex
/// Gaussian matrix (Haar-distributed on the Stiefel manifold).
fn random_isometry<R: Rng>(rng: &mut R, m: usize, r: usize) -> Vec<Vec<C64>> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(r);
    while cols.len() < r {
        let mut v: Vec<C64> = (0..m)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    (0..m).map(|i| cols.iter().map(|col| col[i]).collect()).collect()
}

/// Maximizes `sign · Σ_i score(member_i)` over pairwise member rotations.
/// Returns the objective (times `sign`) and whether the step fell below
/// tolerance within the sweep cap.
fn pattern_search(mut ens: Vec<Vec<C64>>, scorer: &MemberScore, sign: f64, cfg: &OracleConfig) -> (f64, bool) {
    let m = ens.len();
    let mut scores: Vec<f64> = ens.iter().map(|v| sign * scorer.eval(v)).collect();
    let phases: Vec<C64> = (0..PHASES)
        .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / PHASES as f64))
        .collect();
    let d = ens.first().map_or(0, Vec::len);
    let mut trial_i = vec![C64::default(); d];
    let mut trial_k = vec![C64::default(); d];
    let mut best_i = vec![C64::default(); d];
    let mut best_k = vec![C64::default(); d];

    let mut step = FRAC_PI_4;
    let mut sweeps = 0;
    while step > cfg.step_tolerance && sweeps < cfg.max_iterations && m > 1 {
        sweeps += 1;
        let (sn, cs) = step.sin_cos();
        let mut improved = false;
        for i in 0..m {
            for k in i + 1..m {
                let current = scores[i] + scores[k];
                let mut best = (current, 0.0, 0.0);
                for ph in &phases {
                    // [[c, -e^{iφ} s], [e^{-iφ} s, c]] on members (i, k)
                    let a = ph * sn;
                    let b = ph.conj() * sn;
                    for t in 0..d {
                        trial_i[t] = ens[i][t] * cs - a * ens[k][t];
                        trial_k[t] = b * ens[i][t] + ens[k][t] * cs;
                    }
                    let si = sign * scorer.eval(&trial_i);
                    let sk = sign * scorer.eval(&trial_k);
                    if si + sk > best.0 {
                        best = (si + sk, si, sk);
                        best_i.copy_from_slice(&trial_i);
                        best_k.copy_from_slice(&trial_k);
                    }
                }
                if best.0 > current + 1e-15 {
                    ens[i].copy_from_slice(&best_i);
                    ens[k].copy_from_slice(&best_k);
                    scores[i] = best.1;
                    scores[k] = best.2;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (scores.iter().sum(), step <= cfg.step_tolerance || m <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{concurrence_pure, tangle_pure, wootters_concurrence};
    use crate::states::{bell_phi_plus, ghz, haar_random_pure, reduce, w_state};
    use crate::tensor::SubsystemDims;

    fn qubit_cut() -> Bipartition {
        Bipartition::new(&[0], 2).unwrap()
    }

    #[test]
    fn pure_input_returns_pure_value() {
        let s = haar_random_pure(&SubsystemDims::qubits(2), 9);
        let rho = s.to_density();
        let cfg = OracleConfig::default();
        let ca = assistance_oracle(&rho, &qubit_cut(), MeasureKind::ConcurrenceOfAssistance, &cfg).unwrap();
        let ta = assistance_oracle(&rho, &qubit_cut(), MeasureKind::TangleOfAssistance, &cfg).unwrap();
        assert_eq!(ca.rank, 1);
        assert!((ca.value - concurrence_pure(&s, &qubit_cut()).unwrap()).abs() < 1e-12);
        assert!((ta.value - tangle_pure(&s, &qubit_cut()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ghz_pair_has_unit_assistance() {
        // X-basis measurement on the third qubit leaves a Bell pair either way.
        let rho = reduce(&ghz(3), &[0, 1]).unwrap();
        let r = assistance_oracle(&rho, &qubit_cut(), MeasureKind::ConcurrenceOfAssistance, &OracleConfig::default())
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
        assert!(r.converged);
        assert_eq!(r.flags(), vec![Flag::OracleLowerBound]);
    }

    #[test]
    fn formation_examples() {
        let cfg = OracleConfig::default();
        let bell = bell_phi_plus().to_density();
        assert!((formation_oracle(&bell, &qubit_cut(), &cfg).unwrap().value - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(SubsystemDims::qubits(2));
        let r = formation_oracle(&mixed, &qubit_cut(), &cfg).unwrap();
        assert!(r.value < 1e-3, "{}", r.value);
        assert_eq!(r.direction, Direction::Minimize);
    }

    #[test]
    fn w_pair_brackets() {
        let rho = reduce(&w_state(3), &[0, 1]).unwrap();
        let cfg = OracleConfig::default();
        let wc = wootters_concurrence(&rho).unwrap();
        let ca = assistance_oracle(&rho, &qubit_cut(), MeasureKind::ConcurrenceOfAssistance, &cfg).unwrap();
        let cf = formation_oracle(&rho, &qubit_cut(), &cfg).unwrap();
        assert!(ca.value >= wc - 1e-9);
        assert!((cf.value - wc).abs() < 5e-3);
        assert!((ca.value - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let rho = reduce(&haar_random_pure(&SubsystemDims::qubits(3), 4), &[0, 1]).unwrap();
        let cfg = OracleConfig::with_seed(99);
        let a = assistance_oracle(&rho, &qubit_cut(), MeasureKind::ConcurrenceOfAssistance, &cfg).unwrap();
        let b = assistance_oracle(&rho, &qubit_cut(), MeasureKind::ConcurrenceOfAssistance, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_requests() {
        let cfg = OracleConfig::default();
        let rho = reduce(&w_state(3), &[0, 1]).unwrap();
        assert!(assistance_oracle(&rho, &qubit_cut(), MeasureKind::Concurrence, &cfg).is_err());
        let bad = OracleConfig {
            restarts: 0,
            ..OracleConfig::default()
        };
        assert!(formation_oracle(&rho, &qubit_cut(), &bad).is_err());
        let s = haar_random_pure(&SubsystemDims::qubits(4), 1);
        let rank2 = reduce(&s, &[0, 1, 2]).unwrap();
        let part = Bipartition::new(&[0], 3).unwrap();
        assert!(assistance_oracle(&rank2, &part, MeasureKind::ConcurrenceOfAssistance, &cfg).is_ok());
        // rank 8
        let mixed = DensityMatrix::maximally_mixed(SubsystemDims::qubits(3));
        assert!(assistance_oracle(&mixed, &part, MeasureKind::ConcurrenceOfAssistance, &cfg).is_err());
    }
}
