//! Sampling verification campaigns, one per claim.
//!
//! Every sample draws from its own `(seed, index)` stream and the tallies
//! are order-independent (counts and maxima), so a campaign gives the same
//! summary however rayon schedules it.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use polygamy_core::measures::{
    angle_concurrences_closed, assistance_closed_schmidt, assistance_oracle, concurrence_pure, entanglement_entropy,
    formation_oracle, tangle_pure, wootters_concurrence, Bipartition, MeasureKind, OracleConfig, SchmidtCut,
};
use polygamy_core::multipartite::{chain_weights, verify_theorem2, Verdict};
use polygamy_core::polygamy::{
    bernoulli_bound_holds, critical_power, delta_weight, gamma_from_k_beta, gamma_weight, power_inequality_holds,
    weight_power_feasible, CriticalPower, OneToGroupValues, TripleValues, Weight,
};
use polygamy_core::states::{
    haar_random_pure_with, reduce, schmidt_state, seeded_stream, AngleFamily, DensityMatrix, PureState,
    SchmidtFamily,
};
use polygamy_core::tensor::{SubsystemDims, C64};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{usage, CliError, CliResult};
use crate::sweeps::{sweep_fig3, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    GammaSupremum,
    WSaturationCa,
    TauAWeight,
    DeltaCExample,
    SeparableCounterexample,
    RemarkBijection,
    BernoulliGrid,
    OracleEquivalence,
    QianTriangle,
    Theorem2Telescoping,
    ThresholdProperty,
}

impl Claim {
    pub const ALL: [Claim; 11] = [
        Claim::GammaSupremum,
        Claim::WSaturationCa,
        Claim::TauAWeight,
        Claim::DeltaCExample,
        Claim::SeparableCounterexample,
        Claim::RemarkBijection,
        Claim::BernoulliGrid,
        Claim::OracleEquivalence,
        Claim::QianTriangle,
        Claim::Theorem2Telescoping,
        Claim::ThresholdProperty,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::GammaSupremum => "gamma-supremum",
            Claim::WSaturationCa => "w-saturation-ca",
            Claim::TauAWeight => "tau-a-weight",
            Claim::DeltaCExample => "delta-c-example",
            Claim::SeparableCounterexample => "separable-counterexample",
            Claim::RemarkBijection => "remark-bijection",
            Claim::BernoulliGrid => "bernoulli-grid",
            Claim::OracleEquivalence => "oracle-equivalence",
            Claim::QianTriangle => "qian-triangle",
            Claim::Theorem2Telescoping => "theorem2-telescoping",
            Claim::ThresholdProperty => "threshold-property",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Claim::ALL.into_iter().find(|c| c.id() == s).map_or_else(
            || {
                let known: Vec<_> = Claim::ALL.iter().map(|c| c.id()).collect();
                usage(format!("unknown claim {s:?}; known: {}", known.join(", ")))
            },
            Ok,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub claim: String,
    pub samples: usize,
    pub violations: usize,
    pub max_residual: f64,
    /// Largest value seen, for claims about a supremum.
    pub empirical_supremum: Option<f64>,
    pub notes: Vec<String>,
    /// Kept out of serialized output so reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Order-independent per-sample aggregate.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    samples: usize,
    violations: usize,
    max_residual: f64,
}

impl Tally {
    fn one(residual: f64, ok: bool) -> Self {
        Self {
            samples: 1,
            violations: usize::from(!ok || residual.is_nan()),
            max_residual: if residual.is_nan() { f64::INFINITY } else { residual },
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            samples: self.samples + o.samples,
            violations: self.violations + o.violations,
            max_residual: self.max_residual.max(o.max_residual),
        }
    }
}

fn tally(n: usize, f: impl Fn(usize) -> Tally + Sync + Send) -> Tally {
    (0..n).into_par_iter().map(f).reduce(Tally::default, Tally::merge)
}

/// Largest value of `f` over `0..n`, in parallel.
fn par_max(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    (0..n).into_par_iter().map(f).reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Random triple with `K = hi/lo > 1` and `hi < Q`.
pub fn random_triple<R: Rng>(rng: &mut R) -> TripleValues {
    let q = 0.05 + 0.95 * rng.random::<f64>();
    let hi = q * (1.0 - rng.random::<f64>());
    let lo = hi * (1.0 - rng.random::<f64>()).min(1.0 - 1e-9);
    TripleValues::new(q, lo, hi).expect("ordered by construction")
}

/// Random triple with a finite critical exponent, drawing until one is found.
fn random_finite_triple<R: Rng>(rng: &mut R) -> (TripleValues, f64) {
    loop {
        let v = random_triple(rng);
        if let Ok(CriticalPower::Finite(b)) = critical_power(&v) {
            return (v, b);
        }
    }
}

fn pair_cut() -> Bipartition {
    Bipartition::new(&[0], 2).expect("static cut")
}

pub fn run_claim(claim: Claim, cfg: &RunConfig) -> CliResult<VerificationSummary> {
    let start = Instant::now();
    let mut s = match claim {
        Claim::GammaSupremum => gamma_supremum(cfg)?,
        Claim::WSaturationCa => w_saturation(cfg),
        Claim::TauAWeight => tau_a_weight(cfg),
        Claim::DeltaCExample => delta_c_example(cfg)?,
        Claim::SeparableCounterexample => separable_counterexample(cfg)?,
        Claim::RemarkBijection => remark_bijection(cfg),
        Claim::BernoulliGrid => bernoulli_grid(cfg),
        Claim::OracleEquivalence => oracle_equivalence(cfg),
        Claim::QianTriangle => qian_triangle(cfg),
        Claim::Theorem2Telescoping => theorem2(cfg),
        Claim::ThresholdProperty => threshold_property(cfg),
    };
    s.claim = claim.id().to_string();
    s.wall_time = start.elapsed();
    Ok(s)
}

fn summary(t: Tally) -> VerificationSummary {
    VerificationSummary {
        claim: String::new(),
        samples: t.samples,
        violations: t.violations,
        max_residual: t.max_residual,
        empirical_supremum: None,
        notes: Vec::new(),
        wall_time: Duration::ZERO,
    }
}

fn gamma_supremum(cfg: &RunConfig) -> CliResult<VerificationSummary> {
    let steps = cfg
        .samples
        .map_or(1001, |n| ((n as f64).sqrt().ceil() as usize).max(2));
    let g = Grid::new(0.0, 1e3, steps)?;
    let sweep = sweep_fig3(&g, &g);
    let gap = (sweep.max - (SQRT_2 - 1.0)).abs();
    let mut s = summary(Tally {
        samples: steps * steps,
        violations: sweep.above_bound + usize::from(gap > cfg.tolerances.supremum),
        max_residual: gap,
    });
    s.empirical_supremum = Some(sweep.max);
    s.notes.push(format!("{steps}x{steps} grid over [0, 1000]^2"));
    s.notes.push(format!("cells above sqrt(2)-1+1e-12: {}", sweep.above_bound));
    Ok(s)
}

fn w_saturation(cfg: &RunConfig) -> VerificationSummary {
    let tol = &cfg.tolerances;
    let power_dev = |k: usize| {
        let p = SchmidtFamily::sample(&mut seeded_stream(cfg.seed, k as u64), true, false);
        let [q, a, b] = [SchmidtCut::OneToGroup, SchmidtCut::AB, SchmidtCut::AC].map(|c| assistance_closed_schmidt(&p, c));
        let residual = (q * q - a * a - b * b).abs();
        let dev = match TripleValues::new(q, a, b).map(|v| critical_power(&v)) {
            Ok(Ok(CriticalPower::Finite(beta))) => (beta - 2.0).abs(),
            _ => f64::INFINITY,
        };
        (residual, dev)
    };
    let n = cfg.samples_or(1000);
    let t = tally(n, |k| {
        let (r, d) = power_dev(k);
        Tally::one(r, r <= tol.residual && d <= tol.power)
    });
    let worst_power = par_max(n, |k| power_dev(k).1);
    let mut s = summary(t);
    s.notes.push(format!("max |beta* - 2| = {worst_power:e}"));
    s
}

fn tau_a_weight(cfg: &RunConfig) -> VerificationSummary {
    let oracle = OracleConfig::with_seed(cfg.seed);
    let n = cfg.samples_or(100);
    let results: Vec<(f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let p = SchmidtFamily::sample(&mut seeded_stream(cfg.seed, k as u64), false, true);
            let [_, _, l2, _, l4] = p.lambda;
            let want = l2 * l2 / (l2 * l2 + l4 * l4);
            let got = (|| -> polygamy_core::Result<f64> {
                let s = schmidt_state(&p)?;
                let q = tangle_pure(&s, &Bipartition::one_vs_rest(0, 3)?)?;
                let pair = |keep: [usize; 2]| -> polygamy_core::Result<f64> {
                    let rho = reduce(&s, &keep)?;
                    Ok(assistance_oracle(&rho, &pair_cut(), MeasureKind::TangleOfAssistance, &oracle)?.value)
                };
                let (ab, ac) = (pair([0, 1])?, pair([0, 2])?);
                Ok(gamma_weight(&TripleValues::new(q, ab, ac)?).weight.value())
            })()
            .unwrap_or(f64::NAN);
            ((got - want).abs(), got, want)
        })
        .collect();
    let t = results
        .iter()
        .map(|&(r, _, _)| Tally::one(r, r <= cfg.tolerances.tau_weight))
        .fold(Tally::default(), Tally::merge);
    let mean_got = results.iter().map(|r| r.1).sum::<f64>() / n as f64;
    let mean_want = results.iter().map(|r| r.2).sum::<f64>() / n as f64;
    let mut s = summary(t);
    s.notes.push(format!("mean oracle weight {mean_got:.6}, mean closed-form weight {mean_want:.6}"));
    s
}

fn delta_c_example(cfg: &RunConfig) -> CliResult<VerificationSummary> {
    let p = AngleFamily::new(FRAC_PI_4, FRAC_PI_4)?;
    let [a, b, c] = angle_concurrences_closed(&p);
    let r = delta_weight(&OneToGroupValues::new(a, b, c)?)?;
    let residual = (r.weight.value() - (2.0 / 3f64.sqrt() - 1.0)).abs();
    let mut s = summary(Tally::one(residual, residual <= cfg.tolerances.exact));
    s.notes.push(format!("delta = {}", r.weight.value()));
    Ok(s)
}

/// `(|000> + |110> + |111>)/√3`.
pub fn separable_example() -> PureState {
    let a = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut amps = vec![C64::default(); 8];
    for idx in [0b000, 0b110, 0b111] {
        amps[idx] = a;
    }
    PureState::new(SubsystemDims::qubits(3), amps).expect("normalized")
}

fn separable_counterexample(cfg: &RunConfig) -> CliResult<VerificationSummary> {
    let tol = &cfg.tolerances;
    let s = separable_example();
    let ca = concurrence_pure(&s, &Bipartition::one_vs_rest(0, 3)?)?;
    let cab = wootters_concurrence(&reduce(&s, &[0, 1])?)?;
    let cac = wootters_concurrence(&reduce(&s, &[0, 2])?)?;
    let w = gamma_weight(&TripleValues::new(ca, cab, cac)?);
    let devs = [(ca - 2.0 * SQRT_2 / 3.0).abs(), (cab - 0.667).abs(), cac];
    let ok = devs[0] <= tol.exact && devs[1] <= tol.quoted && cac <= tol.residual && w.weight == Weight::Infinite;
    let mut s = summary(Tally::one(devs.into_iter().fold(0.0, f64::max), ok));
    s.notes.push(format!("C_A|BC = {ca}, C_AB = {cab}, C_AC = {cac}, weight {:?}", w.weight));
    Ok(s)
}

fn remark_bijection(cfg: &RunConfig) -> VerificationSummary {
    let t = tally(cfg.samples_or(10_000), |k| {
        let (v, beta) = random_finite_triple(&mut seeded_stream(cfg.seed, k as u64));
        let r = gamma_weight(&v);
        let k_ratio = r.k_ratio.expect("lo > 0 by construction");
        let residual = (gamma_from_k_beta(k_ratio, beta) - r.weight.value()).abs();
        Tally::one(residual, residual <= cfg.tolerances.bijection)
    });
    summary(t)
}

fn bernoulli_grid(cfg: &RunConfig) -> VerificationSummary {
    const SIDE: usize = 1000;
    let at = |i: usize| i as f64 / (SIDE - 1) as f64;
    let grid = tally(SIDE * SIDE, |k| {
        let (x, t) = (at(k / SIDE), at(k % SIDE));
        let margin = (1.0 + t).powf(x) - 1.0 - x * t.powf(x);
        Tally::one(margin, bernoulli_bound_holds(x, t))
    });
    let mc_samples = cfg.samples_or(100_000);
    let feasible = std::sync::atomic::AtomicUsize::new(0);
    let mc = tally(mc_samples, |k| {
        let rng = &mut seeded_stream(cfg.seed, k as u64);
        let beta = 1.0 - rng.random::<f64>();
        let k_ratio = 1.0 + 9.0 * rng.random::<f64>();
        let gamma = k_ratio * rng.random::<f64>();
        let lo = 0.01 + 0.99 * rng.random::<f64>();
        let hi = k_ratio * lo;
        let v = TripleValues::new(gamma * lo + hi, lo, hi).expect("ordered by construction");
        if !weight_power_feasible(beta, gamma) {
            return Tally::one(f64::NEG_INFINITY, true);
        }
        feasible.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        let margin = v.q_one_to_group.powf(beta) - v.q_ab.powf(beta) - v.q_ac.powf(beta);
        Tally::one(margin, power_inequality_holds(&v, beta))
    });
    let mut s = summary(grid.merge(mc));
    s.notes.push(format!(
        "{SIDE}x{SIDE} Bernoulli grid: {} violations; {mc_samples} Monte-Carlo triples, {} feasible, {} violations",
        grid.violations,
        feasible.into_inner(),
        mc.violations
    ));
    s
}

fn random_rank_two(seed: u64, k: u64) -> DensityMatrix {
    let rng = &mut seeded_stream(seed, k);
    let dims = SubsystemDims::qubits(2);
    let (a, b) = (haar_random_pure_with(&dims, rng), haar_random_pure_with(&dims, rng));
    let p = 0.05 + 0.9 * rng.random::<f64>();
    DensityMatrix::mixture(&[(p, &a), (1.0 - p, &b)]).expect("valid mixture")
}

fn oracle_equivalence(cfg: &RunConfig) -> VerificationSummary {
    let oracle = OracleConfig::with_seed(cfg.seed);
    let n = cfg.samples_or(100);
    let tol = cfg.tolerances.oracle;
    let formation = tally(n, |k| {
        let rho = random_rank_two(cfg.seed, k as u64);
        let r = match (formation_oracle(&rho, &pair_cut(), &oracle), wootters_concurrence(&rho)) {
            (Ok(got), Ok(want)) => (got.value - want).abs(),
            _ => f64::NAN,
        };
        Tally::one(r, r <= tol)
    });
    let assistance = tally(n, |k| {
        let p = SchmidtFamily::sample(&mut seeded_stream(cfg.seed, (n + k) as u64), false, false);
        let (keep, cut) = if k % 2 == 0 { ([0, 1], SchmidtCut::AB) } else { ([0, 2], SchmidtCut::AC) };
        let got = schmidt_state(&p)
            .and_then(|s| reduce(&s, &keep))
            .and_then(|rho| assistance_oracle(&rho, &pair_cut(), MeasureKind::ConcurrenceOfAssistance, &oracle));
        let r = got.map_or(f64::NAN, |g| (g.value - assistance_closed_schmidt(&p, cut)).abs());
        Tally::one(r, r <= tol)
    });
    let mut s = summary(formation.merge(assistance));
    s.notes.push(format!(
        "formation vs Wootters: max |d| = {:e}; assistance vs closed form: max |d| = {:e}",
        formation.max_residual, assistance.max_residual
    ));
    s
}

fn qian_triangle(cfg: &RunConfig) -> VerificationSummary {
    let dims = SubsystemDims::qubits(3);
    let cuts: Vec<Bipartition> = (0..3).map(|k| Bipartition::one_vs_rest(k, 3).expect("static cut")).collect();
    let t = tally(cfg.samples_or(10_000), |k| {
        let s = haar_random_pure_with(&dims, &mut seeded_stream(cfg.seed, k as u64));
        let mut worst = f64::NEG_INFINITY;
        for f in [concurrence_pure, entanglement_entropy] {
            let e: Vec<f64> = cuts.iter().map(|c| f(&s, c).unwrap_or(f64::NAN)).collect();
            for i in 0..3 {
                worst = worst.max(e[i] - e[(i + 1) % 3] - e[(i + 2) % 3]);
            }
        }
        Tally::one(worst, worst <= cfg.tolerances.residual)
    });
    summary(t)
}

fn theorem2(cfg: &RunConfig) -> VerificationSummary {
    let oracle = OracleConfig::with_seed(cfg.seed);
    let dims = SubsystemDims::qubits(4);
    let n = cfg.samples_or(50);
    let outcomes: Vec<(Tally, Option<Verdict>)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let s = haar_random_pure_with(&dims, &mut seeded_stream(cfg.seed, k as u64));
            match chain_weights(&s, MeasureKind::ConcurrenceOfAssistance, &oracle) {
                Ok(r) => {
                    let verdict = verify_theorem2(&r).verdict;
                    let residual = r.expansion_residual.unwrap_or(f64::NAN);
                    let ok = residual <= cfg.tolerances.residual && verdict != Verdict::Fails;
                    (Tally::one(residual, ok), Some(verdict))
                }
                Err(_) => (Tally::one(f64::NAN, false), None),
            }
        })
        .collect();
    let t = outcomes.iter().map(|o| o.0).fold(Tally::default(), Tally::merge);
    let count = |v: Option<Verdict>| outcomes.iter().filter(|o| o.1 == v).count();
    let mut s = summary(t);
    s.notes.push(format!(
        "holds {}, not applicable {}, skipped {}, fails {}, chain errors {}",
        count(Some(Verdict::Holds)),
        count(Some(Verdict::NotApplicable)),
        count(Some(Verdict::Skipped)),
        count(Some(Verdict::Fails)),
        count(None)
    ));
    s
}

fn threshold_property(cfg: &RunConfig) -> VerificationSummary {
    let t = tally(cfg.samples_or(10_000), |k| {
        let (v, beta) = random_finite_triple(&mut seeded_stream(cfg.seed, k as u64));
        let below = power_inequality_holds(&v, 0.99 * beta);
        let above = power_inequality_holds(&v, 1.01 * beta + 1e-6);
        // how well the root solves the normalized equation
        let (lo, hi) = v.ordered_pairs();
        let q = v.q_one_to_group;
        let residual = ((lo / q).powf(beta) + (hi / q).powf(beta) - 1.0).abs();
        Tally::one(residual, below && !above)
    });
    summary(t)
}
