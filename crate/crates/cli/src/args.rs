use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sica_core::data::cape_verde_preset;
use sica_core::{DenominatorFn, State};

#[derive(Debug, Parser)]
#[command(name = "sica", version, about = "Discrete SICA HIV/AIDS model with an NSFD scheme")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the NSFD scheme and write the trajectory.
    Simulate(RunArgs),
    /// Disease-free and endemic equilibria with their residuals.
    Equilibria {
        #[command(flatten)]
        run: RunArgs,
        /// Relative residual tolerance for the equilibria.
        #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
        tol: f64,
    },
    /// Local stability report for the disease-free equilibrium.
    Stability(RunArgs),
    /// Lyapunov sequence along an NSFD trajectory.
    Lyapunov {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = LyapunovArg::Ee)]
        kind: LyapunovArg,
    },
    /// NSFD, explicit Euler and RK4 side by side.
    Compare(RunArgs),
    /// Cumulative cases against the observed Cape Verde series.
    Fit {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = SchemeArg::Nsfd)]
        scheme: SchemeArg,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Built-in parameter set.
    #[arg(long, value_enum, conflicts_with = "params")]
    pub preset: Option<PresetArg>,
    /// JSON file with the ten model parameters.
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    /// Initial condition: preset 1-4 or an explicit S,I,C,A.
    #[arg(long, value_parser = parse_init, default_value = "1")]
    pub init: State,
    /// Step size in years.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, default_value_t = 27)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = DenominatorArg::Mickens)]
    pub denominator: DenominatorArg,
    /// Override of the transmission rate.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    CapeVerde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DenominatorArg {
    Mickens,
    Identity,
}

impl From<DenominatorArg> for DenominatorFn {
    fn from(d: DenominatorArg) -> Self {
        match d {
            DenominatorArg::Mickens => DenominatorFn::MickensExponential,
            DenominatorArg::Identity => DenominatorFn::Identity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LyapunovArg {
    Dfe,
    Ee,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Nsfd,
    Euler,
    Rk4,
}

fn parse_init(s: &str) -> Result<State, String> {
    if let Ok(k) = s.trim().parse::<usize>() {
        return cape_verde_preset(k).ok_or_else(|| format!("preset must be 1-4, got {k}"));
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected a preset 1-4 or S,I,C,A, got `{s}`"));
    }
    let mut v = [0.0; 4];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|e| format!("`{part}`: {e}"))?;
    }
    let state = State::from_array(v);
    state.validate().map_err(|e| e.to_string())?;
    Ok(state)
}
