use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => usage(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

/// Named tolerances used by the verification claims. Each can be overridden
/// with `--tol name=value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    /// Equality residuals that hold by construction.
    pub residual: f64,
    /// Closed-form values computed two ways.
    pub exact: f64,
    /// Distance of a grid supremum from its analytic limit.
    pub supremum: f64,
    /// Deviation of a critical exponent from its analytic value.
    pub power: f64,
    /// Weight recovered from `(K, β*)` against the direct weight.
    pub bijection: f64,
    /// Oracle values against exact references.
    pub oracle: f64,
    /// Oracle-based tangle-of-assistance weight against its closed form.
    pub tau_weight: f64,
    /// Two-qubit concurrence against a value quoted to three digits.
    pub quoted: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-9,
            exact: 1e-12,
            supremum: 1e-3,
            power: 1e-6,
            bijection: 1e-7,
            oracle: 5e-3,
            tau_weight: 1e-2,
            quoted: 2e-3,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 8] = [
        "residual",
        "exact",
        "supremum",
        "power",
        "bijection",
        "oracle",
        "tau-weight",
        "quoted",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "residual" => &mut self.residual,
            "exact" => &mut self.exact,
            "supremum" => &mut self.supremum,
            "power" => &mut self.power,
            "bijection" => &mut self.bijection,
            "oracle" => &mut self.oracle,
            "tau-weight" => &mut self.tau_weight,
            "quoted" => &mut self.quoted,
            _ => return None,
        })
    }

    /// Applies one `name=value` override.
    pub fn apply(&mut self, spec: &str) -> CliResult<()> {
        let Some((name, value)) = spec.split_once('=') else {
            return usage(format!("tolerance override {spec:?} is not name=value"));
        };
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("tolerance value {value:?} is not a number")))?;
        if !(value.is_finite() && value >= 0.0) {
            return usage(format!("tolerance {name} must be finite and nonnegative"));
        }
        match self.slot(name.trim()) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => usage(format!(
                "unknown tolerance {name:?}; known: {}",
                Self::NAMES.join(", ")
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub seed: u64,
    /// Overrides a claim's default sample count.
    pub samples: Option<usize>,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(
        seed: u64,
        samples: Option<usize>,
        overrides: &[String],
        out: Option<PathBuf>,
        format: Option<Format>,
    ) -> CliResult<Self> {
        if samples == Some(0) {
            return usage("--samples must be at least 1");
        }
        let mut tolerances = Tolerances::default();
        for o in overrides {
            tolerances.apply(o)?;
        }
        Ok(Self {
            seed,
            samples,
            tolerances,
            out,
            format,
        })
    }

    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut t = Tolerances::default();
        t.apply("oracle=1e-2").unwrap();
        assert_eq!(t.oracle, 1e-2);
        t.apply("tau-weight = 0.5").unwrap();
        assert_eq!(t.tau_weight, 0.5);
        assert!(t.apply("nope=1").is_err());
        assert!(t.apply("oracle").is_err());
        assert!(t.apply("oracle=abc").is_err());
        assert!(t.apply("oracle=-1").is_err());
    }

    #[test]
    fn run_config_validation() {
        assert!(RunConfig::new(0, Some(0), &[], None, None).is_err());
        let c = RunConfig::new(3, None, &["power=1e-3".into()], None, Some(Format::Json)).unwrap();
        assert_eq!(c.tolerances.power, 1e-3);
        assert_eq!(c.samples_or(7), 7);
        assert!("xml".parse::<Format>().is_err());
    }
}
