//! Weight chain for a four-qubit pure state `A B1 B2 B3`.
//!
//! Level `i` splits `A|B_i…B_{N−1}` into the pair `A B_i` and the remaining
//! group `A|B_{i+1}…B_{N−1}`; at the last level the group is the single pair
//! `A B_{N−1}`. Each level weight makes its tripartite equality exact, so
//! substituting the weights back telescopes to the total one-to-group value.

use serde::{Deserialize, Serialize};

use crate::error::{contract, dimension, Result};
use crate::flags::{normalize, Flag};
use crate::measures::{mixed_value, pure_value, Bipartition, MeasureKind, MeasureValue, OracleConfig};
use crate::polygamy::{gamma_weight, TripleValues, Weight, ORDER_TOL, ZERO_TOL};
use crate::states::{reduce, PureState};

/// Subsystem count supported by [`chain_weights`].
pub const CHAIN_PARTIES: usize = 4;
/// Slack for the theorem comparisons and the expansion residual.
pub const CHAIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLevel {
    pub pair_label: String,
    pub group_label: String,
    /// One-to-group value this level splits.
    pub total: f64,
    pub pair: f64,
    pub group: f64,
    /// Makes `total = γ·min(pair, group) + max(pair, group)` exact; negative
    /// when the level is not `ordered`.
    pub weight: Weight,
    /// Whether `total` dominates both `pair` and `group`, the premise under
    /// which the weight is a polygamy weight.
    pub ordered: bool,
    /// Whether `pair ≥ group`, the comparison the theorem's split is built on.
    pub pair_dominates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub measure: MeasureKind,
    /// `Q_{A|B1…B_{N−1}}`.
    pub total: f64,
    pub levels: Vec<ChainLevel>,
    /// `Γ_k = γ_1⋯γ_k`, degenerate levels counting as 0.
    pub cumulative: Vec<f64>,
    /// `|expansion − total|`; `None` when a level weight is infinite.
    pub expansion_residual: Option<f64>,
    /// Number of leading levels with `pair ≥ group`, provided all later
    /// levels have `pair ≤ group`. `None` when the comparisons interleave.
    pub split_index: Option<usize>,
    pub flags: Vec<Flag>,
}

impl ChainReport {
    pub fn ordering(&self) -> Vec<String> {
        self.levels
            .iter()
            .flat_map(|l| [l.pair_label.clone(), l.group_label.clone()])
            .collect()
    }

    pub fn level_weights(&self) -> Vec<Weight> {
        self.levels.iter().map(|l| l.weight).collect()
    }

    pub fn pair_values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.pair).collect()
    }

    pub fn group_values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.group).collect()
    }

    fn gammas(&self) -> Option<Vec<f64>> {
        self.levels
            .iter()
            .map(|l| match l.weight {
                Weight::Infinite => None,
                w => Some(w.value()),
            })
            .collect()
    }
}

fn label(parties: &[usize]) -> String {
    parties
        .iter()
        .map(|&k| if k == 0 { "A".to_string() } else { format!("B{k}") })
        .collect()
}

/// Value of `kind` between subsystem 0 and `rest` of a pure state, on the
/// reduced state when `rest` does not cover the register.
fn cut_value(
    s: &PureState,
    rest: &[usize],
    kind: MeasureKind,
    cfg: &OracleConfig,
) -> Result<MeasureValue> {
    let n = s.dims().len();
    if rest.len() + 1 == n {
        return pure_value(s, &Bipartition::one_vs_rest(0, n)?, kind);
    }
    let mut keep = vec![0];
    keep.extend_from_slice(rest);
    let rho = reduce(s, &keep)?;
    mixed_value(&rho, &Bipartition::new(&[0], keep.len())?, kind, cfg)
}

/// Per-level values and weights of a four-qubit pure state.
///
/// Pair cuts are two-qubit states: Wootters for concurrence, the
/// assistance oracle for assisted measures. The group cut `A|B2B3` is a
/// rank-two 2×4 state handled by the matching oracle.
pub fn chain_weights(s: &PureState, measure: MeasureKind, cfg: &OracleConfig) -> Result<ChainReport> {
    if s.dims().as_slice() != [2; CHAIN_PARTIES] {
        return dimension(format!("the weight chain needs {CHAIN_PARTIES} qubits"));
    }
    if !matches!(
        measure,
        MeasureKind::Concurrence | MeasureKind::ConcurrenceOfAssistance | MeasureKind::TangleOfAssistance
    ) {
        return contract(format!("{measure:?} is not supported by the weight chain"));
    }
    let mut flags = Vec::new();
    let mut eval = |rest: &[usize]| -> Result<f64> {
        let v = cut_value(s, rest, measure, cfg)?;
        flags.extend(v.flags);
        Ok(v.value)
    };

    let parties: Vec<usize> = (1..CHAIN_PARTIES).collect();
    let total = eval(&parties)?;
    let mut level_total = total;
    let mut levels = Vec::new();
    let mut weight_flags = Vec::new();
    for i in 0..CHAIN_PARTIES - 2 {
        let pair = eval(&parties[i..=i])?;
        let group = eval(&parties[i + 1..])?;
        let (weight, ordered) = level_weight(level_total, pair, group, &mut weight_flags)?;
        levels.push(ChainLevel {
            pair_label: label(&[0, parties[i]]),
            group_label: if i + 2 == parties.len() {
                label(&[0, parties[i + 1]])
            } else {
                format!("A|{}", label(&parties[i + 1..]))
            },
            total: level_total,
            pair,
            group,
            weight,
            ordered,
            pair_dominates: pair >= group,
        });
        level_total = group;
    }

    let cumulative = levels
        .iter()
        .scan(1.0, |acc, l| {
            *acc *= l.weight.value();
            Some(*acc)
        })
        .collect();
    let mut report = ChainReport {
        measure,
        total,
        levels,
        cumulative,
        expansion_residual: None,
        split_index: None,
        flags: Vec::new(),
    };
    report.expansion_residual = expansion(&report).map(|e| (e - total).abs());
    report.split_index = split_index(&report.levels);
    flags.extend(weight_flags);
    if report.split_index.is_none_or(|m| m == 0) || report.levels.iter().any(|l| !l.ordered) {
        flags.push(Flag::HypothesisViolated);
    }
    normalize(&mut flags);
    report.flags = flags;
    Ok(report)
}

/// Weight making `total = γ·min + max` exact, and whether the level is
/// ordered. An unordered level keeps the exact weight, negative or infinite,
/// and is flagged: the group value of a mixed cut can fall below a pair
/// value, and the chain identity holds regardless.
fn level_weight(total: f64, pair: f64, group: f64, flags: &mut Vec<Flag>) -> Result<(Weight, bool)> {
    if total >= pair.max(group) - ORDER_TOL {
        let report = gamma_weight(&TripleValues::new(total, pair, group)?);
        flags.extend(report.flags);
        return Ok((report.weight, true));
    }
    flags.push(Flag::HypothesisViolated);
    let (lo, hi) = (pair.min(group), pair.max(group));
    let weight = if lo > ZERO_TOL {
        Weight::Finite((total - hi) / lo)
    } else {
        Weight::Infinite
    };
    Ok((weight, false))
}

/// Nested substitution of every level equality, innermost last.
fn expansion(r: &ChainReport) -> Option<f64> {
    let gammas = r.gammas()?;
    let last = r.levels.last()?.group;
    Some(r.levels.iter().zip(gammas).rev().fold(last, |next, (l, g)| {
        if l.pair_dominates {
            l.pair + g * next
        } else {
            g * l.pair + next
        }
    }))
}

fn split_index(levels: &[ChainLevel]) -> Option<usize> {
    let m = levels.iter().take_while(|l| l.pair_dominates).count();
    levels[m..].iter().all(|l| l.pair <= l.group).then_some(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The ordering hypothesis does not hold for this state.
    NotApplicable,
    /// A level weight is infinite.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub verdict: Verdict,
    /// Right-hand side for the observed split, when one applies.
    pub bound: Option<f64>,
    pub flags: Vec<Flag>,
}

/// Checks the multipartite bound with split `m`:
/// `Q ≤ Σ_{i≤m} Γ_{i−1} Q_{AB_i} + Γ_m(Σ_{j>m} γ_j Q_{AB_j} + Q_{AB_{N−1}})`
/// for `1 ≤ m < N−2`, and the equality
/// `Q = Σ_{i≤N−2} Γ_{i−1} Q_{AB_i} + Γ_{N−2} Q_{AB_{N−1}}` when every level
/// has its pair dominating.
pub fn verify_theorem2(r: &ChainReport) -> TheoremCheck {
    let not_applicable = TheoremCheck {
        verdict: Verdict::NotApplicable,
        bound: None,
        flags: vec![Flag::HypothesisViolated],
    };
    if r.levels.iter().any(|l| !l.ordered) {
        return not_applicable;
    }
    let Some(gammas) = r.gammas() else {
        return TheoremCheck {
            verdict: Verdict::Skipped,
            bound: None,
            flags: vec![Flag::NonPolygamous],
        };
    };
    let levels = r.levels.len();
    let m = match r.split_index {
        Some(m) if m >= 1 => m,
        _ => return not_applicable,
    };
    let last = r.levels[levels - 1].group;
    let mut prefix = 1.0;
    let mut bound = 0.0;
    for (l, g) in r.levels[..m].iter().zip(&gammas) {
        bound += prefix * l.pair;
        prefix *= g;
    }
    let tail: f64 = r.levels[m..].iter().zip(&gammas[m..]).map(|(l, g)| g * l.pair).sum::<f64>() + last;
    bound += prefix * tail;
    let verdict = if m == levels {
        if (bound - r.total).abs() <= CHAIN_TOL {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    } else if bound >= r.total - CHAIN_TOL {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    TheoremCheck {
        verdict,
        bound: Some(bound),
        flags: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, haar_random_pure, haar_random_pure_with, seeded_stream, PureState};
    use crate::tensor::SubsystemDims;

    fn level(pair: f64, group: f64, weight: f64) -> ChainLevel {
        ChainLevel {
            pair_label: String::new(),
            group_label: String::new(),
            total: 0.0,
            pair,
            group,
            weight: Weight::Finite(weight),
            ordered: true,
            pair_dominates: pair >= group,
        }
    }

    fn synthetic(total: f64, levels: Vec<ChainLevel>) -> ChainReport {
        let split = split_index(&levels);
        let mut r = ChainReport {
            measure: MeasureKind::ConcurrenceOfAssistance,
            total,
            levels,
            cumulative: Vec::new(),
            expansion_residual: None,
            split_index: split,
            flags: Vec::new(),
        };
        r.expansion_residual = expansion(&r).map(|e| (e - total).abs());
        r
    }

    #[test]
    fn product_state_is_degenerate_everywhere() {
        let s = PureState::basis(SubsystemDims::qubits(4), 0).unwrap();
        let r = chain_weights(&s, MeasureKind::ConcurrenceOfAssistance, &OracleConfig::default()).unwrap();
        assert_eq!(r.total, 0.0);
        assert!(r.pair_values().iter().chain(&r.group_values()).all(|&v| v == 0.0));
        assert!(r.level_weights().iter().all(|w| *w == Weight::Degenerate));
        assert!(r.flags.contains(&Flag::Degenerate));
        assert_eq!(r.expansion_residual, Some(0.0));
    }

    #[test]
    fn ghz4_chain() {
        let r = chain_weights(&ghz(4), MeasureKind::ConcurrenceOfAssistance, &OracleConfig::default()).unwrap();
        assert!((r.total - 1.0).abs() < 1e-12);
        for l in &r.levels {
            assert!((l.pair - 1.0).abs() < 1e-9 && (l.group - 1.0).abs() < 1e-9, "{l:?}");
        }
        assert!(r.levels[0].weight.value() < 1e-9);
        assert!(r.expansion_residual.unwrap() <= 1e-9);
        assert_eq!(r.ordering(), ["AB1", "A|B2B3", "AB2", "AB3"]);
        let check = verify_theorem2(&r);
        assert_eq!(check.verdict, Verdict::Holds);
    }

    #[test]
    fn haar_chains_telescope() {
        let cfg = OracleConfig::default();
        for seed in 0..3 {
            let s = haar_random_pure(&SubsystemDims::qubits(4), seed);
            let r = chain_weights(&s, MeasureKind::ConcurrenceOfAssistance, &cfg).unwrap();
            assert!(r.expansion_residual.unwrap() <= 1e-9, "{r:?}");
            for k in 1..r.cumulative.len() {
                let w = r.levels[k].weight.value();
                assert!((r.cumulative[k] - r.cumulative[k - 1] * w).abs() <= 1e-12);
            }
            assert_ne!(verify_theorem2(&r).verdict, Verdict::Fails);
        }
    }

    #[test]
    fn rejects_unsupported_requests() {
        let cfg = OracleConfig::default();
        assert!(chain_weights(&ghz(3), MeasureKind::ConcurrenceOfAssistance, &cfg).is_err());
        assert!(chain_weights(&ghz(4), MeasureKind::EntanglementEntropy, &cfg).is_err());
    }

    #[test]
    fn theorem_with_interior_split() {
        // level 1: 1.0 = 0.8 + 0.6/3; level 2: 0.6 = 0.25·0.4 + 0.5
        let r = synthetic(1.0, vec![level(0.8, 0.6, 1.0 / 3.0), level(0.4, 0.5, 0.25)]);
        assert!(r.expansion_residual.unwrap() < 1e-15);
        assert_eq!(r.split_index, Some(1));
        let check = verify_theorem2(&r);
        assert_eq!(check.verdict, Verdict::Holds);
        assert!((check.bound.unwrap() - 1.0).abs() < 1e-15);
        let low = synthetic(1.1, r.levels.clone());
        assert_eq!(verify_theorem2(&low).verdict, Verdict::Fails);
    }

    #[test]
    fn corollary_equality() {
        // 1.0 = 0.6 + 0.8·0.5, 0.5 = 0.4 + 0.5·0.2
        let r = synthetic(1.0, vec![level(0.6, 0.5, 0.8), level(0.4, 0.2, 0.5)]);
        assert_eq!(r.split_index, Some(2));
        assert_eq!(verify_theorem2(&r).verdict, Verdict::Holds);
        let off = synthetic(1.1, vec![level(0.6, 0.5, 0.8), level(0.4, 0.2, 0.5)]);
        assert_eq!(verify_theorem2(&off).verdict, Verdict::Fails);
    }

    #[test]
    fn hypothesis_violations_are_not_failures() {
        let interleaved = synthetic(1.0, vec![level(0.3, 0.8, 0.5), level(0.4, 0.2, 0.5)]);
        assert_eq!(interleaved.split_index, None);
        assert_eq!(verify_theorem2(&interleaved).verdict, Verdict::NotApplicable);
        let none_dominate = synthetic(1.0, vec![level(0.3, 0.8, 0.5), level(0.2, 0.6, 0.5)]);
        assert_eq!(none_dominate.split_index, Some(0));
        assert_eq!(verify_theorem2(&none_dominate).verdict, Verdict::NotApplicable);
    }

    #[test]
    fn group_below_pair_is_recorded_not_rejected() {
        // Q(A|B2B3) falls below both Q(AB2) and Q(AB3) for this state
        let s = haar_random_pure_with(&SubsystemDims::qubits(4), &mut seeded_stream(0, 8));
        let r = chain_weights(&s, MeasureKind::ConcurrenceOfAssistance, &OracleConfig::default()).unwrap();
        let l = &r.levels[1];
        assert!(!l.ordered && l.total < l.pair.min(l.group), "{l:?}");
        assert!(l.weight.value() < 0.0);
        assert!(r.flags.contains(&Flag::HypothesisViolated));
        assert!(r.expansion_residual.unwrap() <= 1e-9);
        assert_eq!(verify_theorem2(&r).verdict, Verdict::NotApplicable);
    }

    #[test]
    fn unordered_level_outranks_infinite() {
        let mut r = synthetic(1.0, vec![level(0.6, 0.5, 0.8), level(0.4, 0.2, 0.5)]);
        r.levels[1].weight = Weight::Infinite;
        r.levels[0].ordered = false;
        assert_eq!(verify_theorem2(&r).verdict, Verdict::NotApplicable);
    }

    #[test]
    fn infinite_level_is_skipped() {
        let mut r = synthetic(1.0, vec![level(0.6, 0.5, 0.8), level(0.4, 0.2, 0.5)]);
        r.levels[1].weight = Weight::Infinite;
        let check = verify_theorem2(&r);
        assert_eq!(check.verdict, Verdict::Skipped);
        assert!(check.flags.contains(&Flag::NonPolygamous));
        assert_eq!(expansion(&r), None);
    }
}
