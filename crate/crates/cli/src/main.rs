use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polygamy_cli::commands::{cmd_chain, cmd_measure, cmd_weight, load_state, parse_measure, WeightKind};
use polygamy_cli::sweeps::{region_fig4, region_fig5, sweep_fig3, Grid};
use polygamy_cli::table::{pretty, Cell, Table};
use polygamy_cli::{run_claim, CliError, CliResult, Claim, Format, RunConfig, VerificationSummary};
use polygamy_core::measures::OracleConfig;

#[derive(Parser)]
#[command(name = "polygamy", version, about = "Polygamy weights, sweeps and verification campaigns")]
struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Overrides the sample count of a verification claim.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json; sweeps default to csv, everything else to json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Tolerance override, e.g. --tol oracle=1e-2. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure across a cut such as A|BC or A|B.
    Measure {
        state: PathBuf,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        partition: String,
    },
    /// Polygamy weight (gamma) or one-to-group weight (delta) of a three-qubit state.
    Weight {
        state: PathBuf,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value = "gamma")]
        kind: String,
    },
    /// Weight surface over x = l2/l4, y = l3/l4.
    SweepFig3 {
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long, default_value_t = 10.0)]
        x_max: f64,
        #[arg(long, default_value_t = 0.0)]
        y_min: f64,
        #[arg(long, default_value_t = 10.0)]
        y_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Ordering region of the angle family over [0, pi/2]^2.
    RegionFig4 {
        #[arg(long, default_value_t = 91)]
        steps: usize,
    },
    /// Feasible (beta, gamma) pairs of beta * gamma^beta <= 1.
    RegionFig5 {
        #[arg(long, default_value_t = 100)]
        beta_steps: usize,
        #[arg(long, default_value_t = 10.0)]
        gamma_max: f64,
        #[arg(long, default_value_t = 101)]
        gamma_steps: usize,
    },
    /// Run a verification claim, or `all`.
    Verify { claim: String },
    /// Weight chain of a four-qubit state and the multipartite bound.
    Chain {
        state: PathBuf,
        #[arg(long, default_value = "concurrence-of-assistance")]
        measure: String,
    },
}

fn emit(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn render_table(t: &Table, format: Format) -> String {
    t.render(format)
}

fn render_record<T: serde::Serialize>(record: &T, table: impl FnOnce() -> Table, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(record).map_err(|e| CliError::Usage(e.to_string()))?),
        Format::Csv => table().to_csv(),
    })
}

fn summaries_table(summaries: &[VerificationSummary]) -> Table {
    let mut t = Table::new(&["claim", "samples", "violations", "max_residual", "empirical_supremum"]);
    for s in summaries {
        t.rows.push(vec![
            Cell::Text(s.claim.clone()),
            Cell::Int(s.samples as u64),
            Cell::Int(s.violations as u64),
            Cell::Num(s.max_residual),
            Cell::Num(s.empirical_supremum.unwrap_or(f64::NAN)),
        ]);
        t.footer.extend(s.notes.iter().map(|n| format!("{}: {n}", s.claim)));
    }
    t
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let format = cli.format.as_deref().map(str::parse::<Format>).transpose()?;
    let cfg = RunConfig::new(cli.seed, cli.samples, &cli.tol, cli.out, format)?;
    let oracle = OracleConfig::with_seed(cfg.seed);
    let record_format = cfg.format.unwrap_or(Format::Json);
    let table_format = cfg.format.unwrap_or(Format::Csv);
    match cli.command {
        Command::Measure { state, measure, partition } => {
            let s = load_state(&state)?;
            let r = cmd_measure(&s, parse_measure(&measure)?, &partition, &oracle)?;
            eprintln!("{} {} = {}", r.measure, r.partition, r.value);
            emit(&cfg, &render_record(&r, || r.table(), record_format)?)?;
        }
        Command::Weight { state, measure, kind } => {
            let s = load_state(&state)?;
            let r = cmd_weight(&s, parse_measure(&measure)?, kind.parse::<WeightKind>()?, &oracle)?;
            emit(&cfg, &render_record(&r, || r.table(), record_format)?)?;
        }
        Command::SweepFig3 { x_min, x_max, y_min, y_max, steps } => {
            let sweep = sweep_fig3(&Grid::new(x_min, x_max, steps)?, &Grid::new(y_min, y_max, steps)?);
            emit(&cfg, &render_table(&sweep.table, table_format))?;
        }
        Command::RegionFig4 { steps } => emit(&cfg, &render_table(&region_fig4(steps)?, table_format))?,
        Command::RegionFig5 { beta_steps, gamma_max, gamma_steps } => {
            emit(&cfg, &render_table(&region_fig5(beta_steps, gamma_max, gamma_steps)?, table_format))?
        }
        Command::Verify { claim } => {
            let claims = if claim == "all" { Claim::ALL.to_vec() } else { vec![claim.parse::<Claim>()?] };
            let mut summaries = Vec::new();
            for c in claims {
                let s = run_claim(c, &cfg)?;
                eprintln!(
                    "{}: {} samples, {} violations, wall time {:.3} s",
                    s.claim,
                    s.samples,
                    s.violations,
                    s.wall_time.as_secs_f64()
                );
                summaries.push(s);
            }
            let text = match record_format {
                Format::Json if summaries.len() == 1 => render_record(&summaries[0], Table::default, Format::Json)?,
                Format::Json => render_record(&summaries, Table::default, Format::Json)?,
                Format::Csv => summaries_table(&summaries).to_csv(),
            };
            emit(&cfg, &text)?;
            if summaries.iter().any(|s| !s.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Chain { state, measure } => {
            let s = load_state(&state)?;
            let r = cmd_chain(&s, parse_measure(&measure)?, &oracle)?;
            emit(&cfg, &render_record(&r, || r.table(), record_format)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
