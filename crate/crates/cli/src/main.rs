use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mma_reduce_cli::config::{
    parse_size_list, Distribution, ExperimentConfig, Mode, OutputFormat, Policy,
};
use mma_reduce_cli::{check_report, emit_report, precision_sweep, run_experiment};

/// Simulated tile-reduction benchmarks: cost model validation and
/// precision sweeps against an exact oracle.
#[derive(Debug, Parser)]
#[command(name = "mma-reduce", version, about)]
struct Cli {
    /// Problem sizes: comma list and/or inclusive ranges `a..b:step`.
    #[arg(long, default_value = "65536")]
    n: String,

    /// Tile dimensions, comma separated.
    #[arg(long, default_value = "16")]
    m: String,

    /// Scalar regime to run in.
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,

    /// Rounding policy for the mixed regime.
    #[arg(long, value_enum, default_value = "fp32-acc")]
    policy: Policy,

    /// Input distribution.
    #[arg(long, value_enum, default_value = "uniform01")]
    dist: Distribution,

    /// RNG seed; fully determines the generated inputs.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Time units charged per non-coalesced access.
    #[arg(long, default_value_t = 32)]
    w: u64,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Run the precision sweep instead of the plain experiment grid.
    #[arg(long)]
    sweep: bool,

    /// Gate mode: exit 1 if any exact-mode row has nonzero error or any
    /// power-size row mismatches its closed-form prediction.
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let config = match build_config(&cli) {
        Ok(config) => config,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };

    let report = if cli.sweep {
        precision_sweep(&config)
    } else {
        run_experiment(&config)
    };
    let report = match report {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };

    let serialized = emit_report(&report, config.format);
    if let Some(path) = &config.out {
        if let Err(err) = std::fs::write(path, &serialized) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{serialized}");
    }

    if cli.check {
        let violations = check_report(&report);
        if !violations.is_empty() {
            for violation in &violations {
                eprintln!("violation: {violation}");
            }
            eprintln!("{} invariant violation(s)", violations.len());
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let n_list = parse_size_list(&cli.n).map_err(|e| e.to_string())?;
    let m_list = parse_size_list(&cli.m).map_err(|e| e.to_string())?;
    let config = ExperimentConfig {
        n_list,
        m_list,
        mode: cli.mode,
        policy: cli.policy,
        dist: cli.dist,
        seed: cli.seed,
        noncoalesced_penalty: cli.w,
        format: cli.format,
        out: cli.out.clone(),
    };
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}
