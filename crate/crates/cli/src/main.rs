//! `hvpade`: energy sweeps for the cubic-quartic perturbed oscillator.
//!
//! Exit codes: 0 success, 1 configuration or runtime error, 2 when any Padé
//! cell is flagged defective or pole-contaminated.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hvpade::report::{
    exact_series, parse_config, render, run_sweep, series_csv, OracleMode, OutputFormat, SweepConfig,
};
use hvpade::ArithmeticMode;

#[derive(Debug, Parser)]
#[command(name = "hvpade", version, about = "Hypervirial perturbation series with Padé summation")]
struct Args {
    /// Configuration document of `key = value` lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Oscillator frequency, decimal or `a/b`.
    #[arg(long, value_name = "R")]
    omega: Option<String>,

    #[arg(long, value_name = "LIST")]
    states: Option<String>,

    #[arg(long, value_name = "LIST")]
    lambdas: Option<String>,

    /// Highest order K of the energy series.
    #[arg(long, value_name = "K")]
    order: Option<String>,

    /// Padé orders as `N:M[,N:M...]`, N the denominator degree.
    #[arg(long, value_name = "N:M")]
    pade: Option<String>,

    #[arg(long, value_name = "on|off")]
    cubic: Option<String>,

    #[arg(long, value_name = "off|variational|rspt|both")]
    oracle: Option<String>,

    #[arg(long, value_name = "table|csv")]
    format: Option<String>,

    #[arg(long, value_name = "R")]
    pole_threshold: Option<String>,

    #[arg(long, value_name = "rational|float")]
    precision: Option<String>,

    /// Print the exact coefficients as `n,k,numerator,denominator` instead
    /// of running the sweep.
    #[arg(long)]
    export_series: bool,
}

impl Args {
    fn overrides(&self) -> [(&'static str, Option<&String>); 10] {
        [
            ("omega", self.omega.as_ref()),
            ("states", self.states.as_ref()),
            ("lambdas", self.lambdas.as_ref()),
            ("order", self.order.as_ref()),
            ("pade", self.pade.as_ref()),
            ("cubic", self.cubic.as_ref()),
            ("oracle", self.oracle.as_ref()),
            ("format", self.format.as_ref()),
            ("pole_threshold", self.pole_threshold.as_ref()),
            ("precision", self.precision.as_ref()),
        ]
    }
}

fn load_config(args: &Args) -> Result<SweepConfig, String> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => SweepConfig::default(),
    };
    for (key, value) in args.overrides() {
        if let Some(value) = value {
            config.set(key, value).map_err(|e| format!("--{}: {e}", key.replace('_', "-")))?;
        }
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn run(args: &Args) -> Result<ExitCode, String> {
    let config = load_config(args)?;

    if args.export_series {
        if config.precision != ArithmeticMode::ExactRational {
            return Err("--export-series needs rational precision".into());
        }
        let series = exact_series(&config).map_err(|e| e.to_string())?;
        print!("{}", series_csv(&series));
        return Ok(ExitCode::SUCCESS);
    }

    let rows = run_sweep(&config).map_err(|e| e.to_string())?;
    print!("{}", render(&rows, config.format));
    let variational = matches!(config.oracle, OracleMode::Variational | OracleMode::Both);
    if config.format == OutputFormat::Table && config.cubic && variational {
        println!("# oracle: truncated-basis plateau; the cubic term leaves the potential unbounded below");
    }
    Ok(if rows.iter().any(|r| r.is_anomalous()) { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("hvpade: {message}");
            ExitCode::FAILURE
        }
    }
}
