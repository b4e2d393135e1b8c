use serde::{Deserialize, Serialize};

/// Qualifiers attached to every reported number. An empty flag set means the
/// value is exact up to floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// Best value found by a maximizing decomposition search.
    OracleLowerBound,
    /// Best value found by a minimizing decomposition search.
    OracleUpperBound,
    /// The decomposition search hit its iteration cap.
    OracleNotConverged,
    /// The smaller operand is zero and the equality holds for every weight;
    /// the weight is reported as 0.
    Degenerate,
    /// Every positive weight satisfies the one-to-group equality.
    AnyWeight,
    /// The smaller operand is zero while the residual is not: no finite weight.
    NonPolygamous,
    /// The critical exponent exceeds the bisection cap.
    UnboundedAtCap,
    /// Theorem hypothesis did not hold for this sample.
    HypothesisViolated,
}

/// Sorted, duplicate-free flag list.
pub(crate) fn normalize(flags: &mut Vec<Flag>) {
    flags.sort();
    flags.dedup();
}
