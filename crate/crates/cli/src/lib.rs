//! Front end for the `polygamy` binary: state-file commands, parameter
//! sweeps, verification campaigns and their CSV/JSON renderings.

pub mod commands;
pub mod config;
pub mod error;
pub mod sweeps;
pub mod table;
pub mod verify;

pub use config::{Format, RunConfig, Tolerances};
pub use error::{CliError, CliResult};
pub use verify::{run_claim, Claim, VerificationSummary};
