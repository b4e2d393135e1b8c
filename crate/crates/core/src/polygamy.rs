//! Polygamy weights in equality form, their regime classification, the
//! critical (largest admissible) polygamy exponents, and the elementary
//! inequalities that tie weights and exponents together.
//!
//! For a tripartite split with values `Q_{A|BC}`, `Q_AB`, `Q_AC` and
//! `(lo, hi) = (min, max)(Q_AB, Q_AC)`, the weight `γ` makes
//! `Q_{A|BC} = γ·lo + hi` exact. The one-to-group weight `δ` does the same
//! for the three values `E_{A|BC}, E_{B|AC}, E_{C|AB}` sorted descending:
//! `e1 = e2 + δ·e3`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::flags::{normalize, Flag};
use crate::measures::angle_concurrences_closed;
use crate::states::{AngleFamily, SchmidtFamily};

/// Slack on ordering constraints between measure values.
pub const ORDER_TOL: f64 = 1e-9;
/// Values at or below this are treated as zero when forming ratios, and
/// residuals at or below it count as saturated.
pub const ZERO_TOL: f64 = 1e-12;
/// Bracket of the critical-exponent bisection.
pub const BETA_MIN: f64 = 1e-6;
pub const BETA_CAP: f64 = 64.0;

/// `(Q_{A|BC}, Q_AB, Q_AC)` for one state and measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleValues {
    pub q_one_to_group: f64,
    pub q_ab: f64,
    pub q_ac: f64,
}

impl TripleValues {
    /// Rejects negative or non-finite values and triples in which a pair
    /// exceeds the one-to-group value (a correlation measure cannot grow
    /// under partial trace).
    pub fn new(q_one_to_group: f64, q_ab: f64, q_ac: f64) -> Result<Self> {
        let all = [q_one_to_group, q_ab, q_ac];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return contract(format!("triple values must be finite and nonnegative: {all:?}"));
        }
        if q_one_to_group < q_ab.max(q_ac) - ORDER_TOL {
            return contract(format!(
                "one-to-group value {q_one_to_group} is below a pair value ({q_ab}, {q_ac})"
            ));
        }
        Ok(Self {
            q_one_to_group,
            q_ab,
            q_ac,
        })
    }

    /// `(lo, hi)` of the two pair values.
    pub fn ordered_pairs(&self) -> (f64, f64) {
        (self.q_ab.min(self.q_ac), self.q_ab.max(self.q_ac))
    }
}

/// `(E_{A|BC}, E_{B|AC}, E_{C|AB})` for one tripartite state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneToGroupValues {
    pub e_a: f64,
    pub e_b: f64,
    pub e_c: f64,
}

impl OneToGroupValues {
    pub fn new(e_a: f64, e_b: f64, e_c: f64) -> Result<Self> {
        let v = Self { e_a, e_b, e_c };
        v.sorted()?;
        Ok(v)
    }

    /// Values in descending order.
    pub fn sorted(&self) -> Result<[f64; 3]> {
        let mut s = [self.e_a, self.e_b, self.e_c];
        if s.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return contract(format!("one-to-group values must be finite and nonnegative: {s:?}"));
        }
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Weight {
    Finite(f64),
    /// The smaller operand vanishes but the residual does not.
    Infinite,
    /// The smaller operand and the residual both vanish; any weight works.
    /// Reported as 0.
    Degenerate,
}

impl Weight {
    /// Numeric value: the weight, 0 for degenerate, `+∞` for infinite.
    pub fn value(&self) -> f64 {
        match *self {
            Weight::Finite(g) => g,
            Weight::Degenerate => 0.0,
            Weight::Infinite => f64::INFINITY,
        }
    }
}

/// Where a state's correlation distribution falls relative to the
/// `Q_AB + Q_AC = Q_{A|BC}` diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `0 ≤ γ ≤ 1`: the plain polygamy inequality holds.
    Blue,
    /// `1 < γ ≤ 2`
    Orange,
    /// `2 < γ ≤ 3`
    Yellow,
    /// `γ > 3`
    White,
    /// `γ` infinite: the distribution sits on a coordinate axis.
    Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum CriticalPower {
    Finite(f64),
    /// The inequality holds for every positive exponent.
    Unbounded,
    /// The root lies beyond [`BETA_CAP`].
    UnboundedAtCap,
    /// No positive exponent works.
    NonPolygamous,
}

impl CriticalPower {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            CriticalPower::Finite(b) => Some(b),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub weight: Weight,
    pub regime: Regime,
    pub critical_power: CriticalPower,
    /// Larger over smaller of the two right-hand-side values; `None` when
    /// the smaller one vanishes.
    pub k_ratio: Option<f64>,
    pub flags: Vec<Flag>,
}

pub fn classify_regime(weight: &Weight) -> Regime {
    match *weight {
        Weight::Infinite => Regime::Axis,
        Weight::Degenerate => Regime::Blue,
        Weight::Finite(g) if g <= 1.0 => Regime::Blue,
        Weight::Finite(g) if g <= 2.0 => Regime::Orange,
        Weight::Finite(g) if g <= 3.0 => Regime::Yellow,
        Weight::Finite(_) => Regime::White,
    }
}

/// Weight of `total = γ·lo + hi`, shared by both weight definitions.
fn equality_weight(total: f64, lo: f64, hi: f64, flags: &mut Vec<Flag>, degenerate_flag: Flag) -> Weight {
    let residual = total - hi;
    if lo > ZERO_TOL {
        Weight::Finite(residual.max(0.0) / lo)
    } else if residual > ZERO_TOL {
        flags.push(Flag::NonPolygamous);
        Weight::Infinite
    } else {
        flags.push(Flag::Degenerate);
        flags.push(degenerate_flag);
        Weight::Degenerate
    }
}

fn report(weight: Weight, critical_power: CriticalPower, lo: f64, hi: f64, mut flags: Vec<Flag>) -> WeightReport {
    if critical_power == CriticalPower::UnboundedAtCap {
        flags.push(Flag::UnboundedAtCap);
    }
    normalize(&mut flags);
    WeightReport {
        regime: classify_regime(&weight),
        weight,
        critical_power,
        k_ratio: (lo > ZERO_TOL).then(|| hi / lo),
        flags,
    }
}

/// Polygamy weight `γ` with `Q_{A|BC} = γ·min(Q_AB, Q_AC) + max(Q_AB, Q_AC)`.
pub fn gamma_weight(v: &TripleValues) -> WeightReport {
    let (lo, hi) = v.ordered_pairs();
    let mut flags = Vec::new();
    let weight = equality_weight(v.q_one_to_group, lo, hi, &mut flags, Flag::Degenerate);
    let power = critical_power(v).unwrap_or(CriticalPower::Unbounded);
    report(weight, power, lo, hi, flags)
}

/// One-to-group weight `δ` with `e1 = e2 + δ·e3` for the descending values.
pub fn delta_weight(v: &OneToGroupValues) -> Result<WeightReport> {
    let [e1, e2, e3] = v.sorted()?;
    let mut flags = Vec::new();
    let weight = equality_weight(e1, e3, e2, &mut flags, Flag::AnyWeight);
    let power = eta_power_critical(v).unwrap_or(CriticalPower::Unbounded);
    Ok(report(weight, power, e3, e2, flags))
}

/// Whether the angle-family concurrences satisfy
/// `C_{A|BC} ≥ C_{B|AC} ≥ C_{C|AB}` (closed boundaries, 1e-12 slack).
pub fn angle_in_region(p: &AngleFamily) -> bool {
    let [ca, cb, cc] = angle_concurrences_closed(p);
    ca >= cb - ZERO_TOL && cb >= cc - ZERO_TOL
}

/// Closed-form `δ_C` of the angle family inside the ordering region.
///
/// The separable boundaries `φ = 0` and `θ = π/2` report `δ_C = 1`; there
/// `C_{C|AB}` or `C_{B|AC}` vanishes, the equality holds for every weight,
/// and `1` is the value that recovers the plain triangle inequality. The
/// same convention covers in-region points where `C_{C|AB} = 0`.
pub fn delta_c_closed(p: &AngleFamily) -> Result<f64> {
    let p = AngleFamily::new(p.theta, p.phi)?;
    if p.phi.abs() <= ZERO_TOL || (p.theta - FRAC_PI_2).abs() <= ZERO_TOL {
        return Ok(1.0);
    }
    if !angle_in_region(&p) {
        return Err(Error::Region(format!(
            "(theta, phi) = ({}, {}) violates C_A|BC >= C_B|AC >= C_C|AB",
            p.theta, p.phi
        )));
    }
    let [_, _, cc] = angle_concurrences_closed(&p);
    if cc <= ZERO_TOL {
        return Ok(1.0);
    }
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let num = cp * (st * st * sp * sp + ct * ct).sqrt() - ct;
    let den = sp * (st * st * cp * cp + ct * ct).sqrt();
    Ok(num / den)
}

/// `γ = √(1 + λ3²/(λ2²+λ4²)) − √((λ3²+λ4²)/(λ2²+λ4²))` for `λ2 ≤ λ3`.
pub fn gamma_closed_schmidt(p: &SchmidtFamily) -> Result<f64> {
    let [_, _, l2, l3, l4] = p.lambda;
    if l2 > l3 {
        return contract("closed-form weight needs lambda2 <= lambda3");
    }
    let d = l2 * l2 + l4 * l4;
    if !(d > 0.0) {
        return contract("closed-form weight needs lambda2^2 + lambda4^2 > 0");
    }
    Ok((1.0 + l3 * l3 / d).sqrt() - ((l3 * l3 + l4 * l4) / d).sqrt())
}

/// Weight surface in `x = λ2/λ4`, `y = λ3/λ4`:
/// `√(1 + y²/(1+x²)) − √((1+y²)/(1+x²))`.
///
/// The expression is the weight only for `x ≤ y`; the arguments are swapped
/// otherwise, which is the weight of the state with `λ2` and `λ3` exchanged.
pub fn gamma_surface(x: f64, y: f64) -> f64 {
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    let a = 1.0 + x * x;
    (1.0 + y * y / a).sqrt() - ((1.0 + y * y) / a).sqrt()
}

/// `Q_AB^β + Q_AC^β ≥ Q_{A|BC}^β` with slack `1e-12` on the scale of
/// `Q_{A|BC}^β`. False for non-positive `β`.
///
/// The inequality is homogeneous, so it is tested divided through by
/// `Q_{A|BC}^β`: an absolute slack would accept every exponent once
/// `Q_{A|BC}^β` itself drops below `1e-12`.
pub fn power_inequality_holds(v: &TripleValues, beta: f64) -> bool {
    if !(beta > 0.0) {
        return false;
    }
    let q = v.q_one_to_group;
    if q == 0.0 {
        return true;
    }
    (v.q_ab / q).powf(beta) + (v.q_ac / q).powf(beta) >= 1.0 - ZERO_TOL
}

/// Unique root in `β` of `(a/q)^β + (b/q)^β = 1` where `q` is the largest
/// of the three values.
fn critical_exponent(q: f64, a: f64, b: f64) -> Result<CriticalPower> {
    if !(q > 0.0) {
        return contract("critical exponent needs a positive leading value");
    }
    let (lo, hi) = (a.min(b) / q, a.max(b) / q);
    if hi >= 1.0 - ZERO_TOL {
        return Ok(CriticalPower::Unbounded);
    }
    if lo <= ZERO_TOL {
        return Ok(CriticalPower::NonPolygamous);
    }
    // strictly decreasing in β
    let f = |beta: f64| lo.powf(beta) + hi.powf(beta) - 1.0;
    if f(BETA_MIN) <= 0.0 {
        return Err(Error::Numerical(format!(
            "no sign change: normalized sum is below 1 already at beta = {BETA_MIN}"
        )));
    }
    if f(BETA_CAP) > 0.0 {
        return Ok(CriticalPower::UnboundedAtCap);
    }
    let (mut left, mut right) = (BETA_MIN, BETA_CAP);
    // bisect to full double precision
    for _ in 0..200 {
        let mid = 0.5 * (left + right);
        if mid <= left || mid >= right {
            break;
        }
        if f(mid) > 0.0 {
            left = mid;
        } else {
            right = mid;
        }
    }
    Ok(CriticalPower::Finite(0.5 * (left + right)))
}

/// Largest `β` with `Q_{A|BC}^β ≤ Q_AB^β + Q_AC^β`.
pub fn critical_power(v: &TripleValues) -> Result<CriticalPower> {
    critical_exponent(v.q_one_to_group, v.q_ab, v.q_ac)
}

/// Largest `η` with `e1^η ≤ e2^η + e3^η` for the descending one-to-group
/// values.
pub fn eta_power_critical(v: &OneToGroupValues) -> Result<CriticalPower> {
    let [e1, e2, e3] = v.sorted()?;
    critical_exponent(e1, e2, e3)
}

/// `(1 + K^β)^{1/β} − K`, evaluated as `K·expm1(ln1p(K^{−β})/β)` so that
/// large `K^β` does not overflow.
pub fn gamma_from_k_beta(k: f64, beta: f64) -> f64 {
    k * ((k.powf(-beta)).ln_1p() / beta).exp_m1()
}

/// `β·γ^β ≤ 1` (with 1e-12 slack), for `0 < β ≤ 1`.
pub fn weight_power_feasible(beta: f64, gamma: f64) -> bool {
    beta * gamma.powf(beta) <= 1.0 + ZERO_TOL
}

/// `(1 + t)^x ≤ 1 + x·t^x` (with 1e-12 slack) on the unit square.
pub fn bernoulli_bound_holds(x: f64, t: f64) -> bool {
    (1.0 + t).powf(x) <= 1.0 + x * t.powf(x) + ZERO_TOL
}

/// Exponent `lo / (hi + 1)` that the existence argument for a polygamy
/// power plugs in; always admissible, usually far below the critical one.
pub fn proof_exponent(v: &TripleValues) -> f64 {
    let (lo, hi) = v.ordered_pairs();
    lo / (hi + 1.0)
}

/// Diagonal crossing `k = Q_{A|BC}/(1 + γ)` of the trade-off line
/// `γ·Q_AB + Q_AC = Q_{A|BC}`; `γ = 1` gives the midpoint.
pub fn tradeoff_diagonal(q_one_to_group: f64, gamma: f64) -> f64 {
    q_one_to_group / (1.0 + gamma)
}
