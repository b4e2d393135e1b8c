//! State-file commands: single measure values, weights and weight chains.

use std::path::Path;

use polygamy_core::measures::{mixed_value, pure_value, Bipartition, MeasureKind, MeasureValue, OracleConfig};
use polygamy_core::multipartite::{chain_weights, verify_theorem2, ChainReport, TheoremCheck};
use polygamy_core::polygamy::{delta_weight, gamma_weight, OneToGroupValues, TripleValues, WeightReport};
use polygamy_core::states::{reduce, state_from_json, PureState};
use polygamy_core::Flag;
use serde::Serialize;

use crate::error::{usage, CliError, CliResult};
use crate::table::{Cell, Table};

pub fn load_state(path: &Path) -> CliResult<PureState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read state file {}: {e}", path.display())))?;
    state_from_json(&text).map_err(|e| CliError::Usage(format!("invalid state file {}: {e}", path.display())))
}

pub fn parse_measure(name: &str) -> CliResult<MeasureKind> {
    Ok(match name {
        "concurrence" | "c" => MeasureKind::Concurrence,
        "tangle" | "tau" => MeasureKind::Tangle,
        "concurrence-of-assistance" | "ca" => MeasureKind::ConcurrenceOfAssistance,
        "tangle-of-assistance" | "tau-a" => MeasureKind::TangleOfAssistance,
        "entanglement-entropy" | "entropy" => MeasureKind::EntanglementEntropy,
        other => {
            return usage(format!(
                "unknown measure {other:?}; expected concurrence, tangle, concurrence-of-assistance, \
                 tangle-of-assistance or entanglement-entropy"
            ))
        }
    })
}

fn measure_name(kind: MeasureKind) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Parses `"A|BC"`-style cuts: subsystem `k` is the `k`-th capital letter.
/// Returns the two sides, each sorted.
pub fn parse_partition(text: &str, n: usize) -> CliResult<(Vec<usize>, Vec<usize>)> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some((a, b)) = compact.split_once('|') else {
        return usage(format!("partition {text:?} needs exactly one '|'"));
    };
    let side = |s: &str| -> CliResult<Vec<usize>> {
        let mut v = Vec::new();
        for ch in s.chars() {
            if !ch.is_ascii_uppercase() {
                return usage(format!("partition {text:?}: {ch:?} is not a subsystem letter"));
            }
            let k = (ch as u8 - b'A') as usize;
            if k >= n {
                return usage(format!("partition {text:?}: {ch} is beyond the {n} subsystems of the state"));
            }
            v.push(k);
        }
        v.sort_unstable();
        Ok(v)
    };
    let (a, b) = (side(a)?, side(b)?);
    if a.is_empty() || b.is_empty() {
        return usage(format!("partition {text:?} has an empty side"));
    }
    let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return usage(format!("partition {text:?} repeats a subsystem"));
    }
    Ok((a, b))
}

/// Value of `kind` across `a|b`. If the two sides leave subsystems out, the
/// state is reduced to their union first and a mixed-state method is used.
pub fn evaluate(s: &PureState, a: &[usize], b: &[usize], kind: MeasureKind, cfg: &OracleConfig) -> CliResult<MeasureValue> {
    let n = s.dims().len();
    if a.len() + b.len() == n {
        return Ok(pure_value(s, &Bipartition::new(a, n)?, kind)?);
    }
    let mut keep: Vec<usize> = a.iter().chain(b).copied().collect();
    keep.sort_unstable();
    let local: Vec<usize> = a.iter().map(|x| keep.binary_search(x).expect("kept")).collect();
    let rho = reduce(s, &keep)?;
    Ok(mixed_value(&rho, &Bipartition::new(&local, keep.len())?, kind, cfg)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureRecord {
    pub measure: String,
    pub partition: String,
    pub value: f64,
    pub flags: Vec<Flag>,
}

pub fn cmd_measure(s: &PureState, kind: MeasureKind, partition: &str, cfg: &OracleConfig) -> CliResult<MeasureRecord> {
    let (a, b) = parse_partition(partition, s.dims().len())?;
    let v = evaluate(s, &a, &b, kind, cfg)?;
    Ok(MeasureRecord {
        measure: measure_name(kind),
        partition: partition.chars().filter(|c| !c.is_whitespace()).collect(),
        value: v.value,
        flags: v.flags,
    })
}

impl MeasureRecord {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["measure", "partition", "value", "flags"]);
        t.rows.push(vec![
            Cell::Text(self.measure.clone()),
            Cell::Text(self.partition.clone()),
            Cell::Num(self.value),
            Cell::Text(flag_list(&self.flags)),
        ]);
        t
    }
}

fn flag_list(flags: &[Flag]) -> String {
    flags
        .iter()
        .filter_map(|f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(str::to_string)))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Gamma,
    Delta,
}

impl std::str::FromStr for WeightKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "gamma" => Ok(WeightKind::Gamma),
            "delta" => Ok(WeightKind::Delta),
            other => usage(format!("unknown weight kind {other:?}, expected gamma or delta")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightRecord {
    pub kind: WeightKind,
    pub measure: String,
    /// Labels of the three input values, in order.
    pub labels: [&'static str; 3],
    pub values: [f64; 3],
    /// Flags carried by the input values.
    pub input_flags: Vec<Flag>,
    pub report: WeightReport,
}

/// `gamma` uses `(A|BC, AB, AC)`; `delta` uses `(A|BC, B|AC, C|AB)`.
pub fn cmd_weight(s: &PureState, kind: MeasureKind, weight: WeightKind, cfg: &OracleConfig) -> CliResult<WeightRecord> {
    if s.dims().len() != 3 {
        return usage("weights are defined for three-party states");
    }
    let (labels, cuts): ([&'static str; 3], [(&[usize], &[usize]); 3]) = match weight {
        WeightKind::Gamma => (["A|BC", "A|B", "A|C"], [(&[0], &[1, 2]), (&[0], &[1]), (&[0], &[2])]),
        WeightKind::Delta => (["A|BC", "B|AC", "C|AB"], [(&[0], &[1, 2]), (&[1], &[0, 2]), (&[2], &[0, 1])]),
    };
    let mut values = [0.0; 3];
    let mut input_flags = Vec::new();
    for (slot, (a, b)) in values.iter_mut().zip(cuts) {
        let v = evaluate(s, a, b, kind, cfg)?;
        *slot = v.value;
        input_flags.extend(v.flags);
    }
    input_flags.sort();
    input_flags.dedup();
    let [x, y, z] = values;
    let report = match weight {
        WeightKind::Gamma => gamma_weight(&TripleValues::new(x, y, z)?),
        WeightKind::Delta => delta_weight(&OneToGroupValues::new(x, y, z)?)?,
    };
    Ok(WeightRecord {
        kind: weight,
        measure: measure_name(kind),
        labels,
        values,
        input_flags,
        report,
    })
}

impl WeightRecord {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "kind", "measure", "q1", "q2", "q3", "weight", "regime", "critical_power", "k_ratio", "flags",
        ]);
        let regime = serde_json::to_value(self.report.regime).unwrap_or_default();
        let power = self.report.critical_power.finite().unwrap_or(f64::INFINITY);
        let mut flags = self.input_flags.clone();
        flags.extend(&self.report.flags);
        flags.sort();
        flags.dedup();
        t.rows.push(vec![
            Cell::Text(format!("{:?}", self.kind).to_lowercase()),
            Cell::Text(self.measure.clone()),
            Cell::Num(self.values[0]),
            Cell::Num(self.values[1]),
            Cell::Num(self.values[2]),
            Cell::Num(self.report.weight.value()),
            Cell::Text(regime.as_str().unwrap_or_default().to_string()),
            Cell::Num(power),
            Cell::Num(self.report.k_ratio.unwrap_or(f64::INFINITY)),
            Cell::Text(flag_list(&flags)),
        ]);
        t.footer.push(format!("inputs: {}", self.labels.join(", ")));
        t.footer.push(format!("critical power: {:?}", self.report.critical_power));
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainRecord {
    pub report: ChainReport,
    pub theorem: TheoremCheck,
}

pub fn cmd_chain(s: &PureState, kind: MeasureKind, cfg: &OracleConfig) -> CliResult<ChainRecord> {
    let report = chain_weights(s, kind, cfg)?;
    let theorem = verify_theorem2(&report);
    Ok(ChainRecord { report, theorem })
}

impl ChainRecord {
    pub fn table(&self) -> Table {
        let r = &self.report;
        let mut t = Table::new(&["level", "pair", "group", "total", "pair_value", "group_value", "weight", "ordered", "cumulative"]);
        for (i, (l, g)) in r.levels.iter().zip(&r.cumulative).enumerate() {
            t.rows.push(vec![
                Cell::Int(i as u64 + 1),
                Cell::Text(l.pair_label.clone()),
                Cell::Text(l.group_label.clone()),
                Cell::Num(l.total),
                Cell::Num(l.pair),
                Cell::Num(l.group),
                Cell::Num(l.weight.value()),
                Cell::Bool(l.ordered),
                Cell::Num(*g),
            ]);
        }
        t.footer.push(format!(
            "expansion residual {}",
            r.expansion_residual.map_or("none".into(), crate::table::fmt_f64)
        ));
        t.footer.push(format!("split index {:?}", r.split_index));
        t.footer.push(format!("verdict {:?}", self.theorem.verdict));
        t.footer.push(format!("flags {}", flag_list(&r.flags)));
        t
    }
}
