use std::fs;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use sica_core::data::{cumulative_cases, fit_to_observed, load_cape_verde};
use sica_core::model::{dfe, endemic_equilibrium, rhs, Equilibrium};
use sica_core::nsfd::{
    dfe_transient_mask, lyapunov_dfe, lyapunov_ee, LyapunovKind, DFE_TRANSIENT_EPS, LYAPUNOV_SLACK,
};
use sica_core::nsfd::{nsfd_step, psi, simulate};
use sica_core::reference::{reference_step, simulate_reference, ReferenceKind, ReferenceScheme};
use sica_core::stability::dfe_local_stability;
use sica_core::trajectory::fmt_f64;
use sica_core::{Error, ModelParams, State};

use crate::args::{Command, Format, LyapunovArg, RunArgs, SchemeArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_config_error() => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Simulate(run) => cmd_simulate(&run),
        Command::Equilibria { run, tol } => cmd_equilibria(&run, tol),
        Command::Stability(run) => cmd_stability(&run),
        Command::Lyapunov { run, kind } => cmd_lyapunov(&run, kind),
        Command::Compare(run) => cmd_compare(&run),
        Command::Fit { run, scheme } => cmd_fit(&run, scheme),
    }
}

fn load_params(run: &RunArgs) -> CliResult<ModelParams> {
    let mut p = match &run.params {
        Some(path) => ModelParams::from_json_file(path)?,
        None => ModelParams::cape_verde(),
    };
    if let Some(beta) = run.beta {
        p = p.with_beta(beta);
    }
    p.validate()?;
    Ok(p)
}

fn emit(run: &RunArgs, text: &str) -> CliResult<()> {
    match &run.out {
        Some(path) => fs::write(path, text).map_err(Error::from)?,
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}

fn json_text<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn cmd_simulate(run: &RunArgs) -> CliResult<()> {
    let p = load_params(run)?;
    let traj = simulate(&p, run.init, run.h, run.steps, run.denominator.into())?;
    let text = match run.format.unwrap_or(Format::Csv) {
        Format::Csv => traj.to_csv_string(),
        Format::Json => json_text(&traj)?,
    };
    emit(run, &text)
}

#[derive(Serialize)]
struct EquilibriumEntry {
    #[serde(flatten)]
    equilibrium: Equilibrium,
    /// `max |f(x*)| / max |x*|`.
    residual: f64,
    within_tolerance: bool,
}

#[derive(Serialize)]
struct EquilibriaOutput {
    r0: f64,
    tolerance: f64,
    equilibria: Vec<EquilibriumEntry>,
    note: Option<String>,
}

fn relative_residual(p: &ModelParams, x: &State) -> CliResult<f64> {
    Ok(rhs(p, x)?.max_abs() / x.max_abs())
}

fn cmd_equilibria(run: &RunArgs, tol: f64) -> CliResult<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    let p = load_params(run)?;
    let mut found = vec![dfe(&p)];
    let mut note = None;
    match endemic_equilibrium(&p) {
        Ok(ee) => found.push(ee),
        Err(e @ Error::NoEndemicEquilibrium { .. }) => note = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    let equilibria = found
        .into_iter()
        .map(|eq| {
            let residual = relative_residual(&p, &eq.state)?;
            Ok(EquilibriumEntry { equilibrium: eq, residual, within_tolerance: residual <= tol })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let out = EquilibriaOutput { r0: p.r0(), tolerance: tol, equilibria, note };

    let text = match run.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&out)?,
        Format::Csv => {
            let mut s = String::from("kind,S,I,C,A,lambda_star,residual,within_tolerance\n");
            for e in &out.equilibria {
                let kind = serde_json::to_value(e.equilibrium.kind)?;
                let x = e.equilibrium.state;
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    kind.as_str().unwrap_or_default(),
                    fmt_f64(x.s),
                    fmt_f64(x.i),
                    fmt_f64(x.c),
                    fmt_f64(x.a),
                    fmt_f64(e.equilibrium.lambda_star),
                    fmt_f64(e.residual),
                    e.within_tolerance
                ));
            }
            s
        }
    };
    emit(run, &text)?;
    if let Some(bad) = out.equilibria.iter().find(|e| !e.within_tolerance) {
        return Err(Error::NumericalFailure(format!(
            "equilibrium residual {} exceeds tolerance {tol}",
            bad.residual
        ))
        .into());
    }
    Ok(())
}

/// Flattens a JSON value into `key,value` rows with dotted keys.
fn flatten_json(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten_json(&join(k), child, rows);
            }
        }
        Value::Array(items) => {
            for (k, child) in items.iter().enumerate() {
                flatten_json(&join(&k.to_string()), child, rows);
            }
        }
        Value::Number(n) => rows.push((
            prefix.to_string(),
            n.as_f64().map(fmt_f64).unwrap_or_else(|| n.to_string()),
        )),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
    }
}

fn cmd_stability(run: &RunArgs) -> CliResult<()> {
    let p = load_params(run)?;
    let report = dfe_local_stability(&p);
    let text = match run.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&report)?,
        Format::Csv => {
            let mut rows = Vec::new();
            flatten_json("", &serde_json::to_value(&report)?, &mut rows);
            let mut s = String::from("key,value\n");
            for (k, v) in rows {
                s.push_str(&format!("{k},{v}\n"));
            }
            s
        }
    };
    emit(run, &text)
}

#[derive(Serialize)]
struct LyapunovOutput {
    kind: LyapunovKind,
    h: f64,
    steps: usize,
    slack: f64,
    /// Set for the DFE series: differences are checked only once
    /// `S_{n+1} < (1 + ε) Λ/μ`.
    transient_eps: Option<f64>,
    nonincreasing: bool,
    violations: Vec<usize>,
    values: Vec<f64>,
}

fn cmd_lyapunov(run: &RunArgs, kind: LyapunovArg) -> CliResult<()> {
    let p = load_params(run)?;
    let traj = simulate(&p, run.init, run.h, run.steps, run.denominator.into())?;
    let (series, checked) = match kind {
        LyapunovArg::Ee => {
            let series = lyapunov_ee(&p, &traj)?;
            let n = series.values.len().saturating_sub(1);
            (series, vec![true; n])
        }
        LyapunovArg::Dfe => (lyapunov_dfe(&p, &traj)?, dfe_transient_mask(&p, &traj, DFE_TRANSIENT_EPS)),
    };
    let violations = series.violations_where(LYAPUNOV_SLACK, |n| checked[n]);
    let out = LyapunovOutput {
        kind: series.kind,
        h: run.h,
        steps: run.steps,
        slack: LYAPUNOV_SLACK,
        transient_eps: matches!(kind, LyapunovArg::Dfe).then_some(DFE_TRANSIENT_EPS),
        nonincreasing: violations.is_empty(),
        violations,
        values: series.values,
    };
    let text = match run.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&out)?,
        Format::Csv => {
            let mut s = String::from("n,value,checked,violation\n");
            for (n, v) in out.values.iter().enumerate() {
                let checked = checked.get(n).copied().unwrap_or(false);
                let violation = out.violations.binary_search(&n).is_ok();
                s.push_str(&format!("{n},{},{checked},{violation}\n", fmt_f64(*v)));
            }
            s
        }
    };
    emit(run, &text)
}

#[derive(Serialize)]
struct SchemeRun {
    scheme: &'static str,
    /// Step index at which the scheme stopped, if it failed.
    failed_at: Option<usize>,
    error: Option<String>,
    states: Vec<State>,
}

#[derive(Serialize)]
struct CompareOutput {
    h: f64,
    steps: usize,
    runs: Vec<SchemeRun>,
}

/// Steps a scheme until `steps` or the first error, keeping what it produced.
fn run_until_failure(
    scheme: &'static str,
    s0: State,
    steps: usize,
    step: impl Fn(&State) -> sica_core::Result<State>,
) -> SchemeRun {
    let mut states = vec![s0];
    let mut current = s0;
    for n in 0..steps {
        match step(&current) {
            Ok(next) => {
                current = next;
                states.push(next);
            }
            Err(e) => {
                return SchemeRun { scheme, failed_at: Some(n), error: Some(e.to_string()), states };
            }
        }
    }
    SchemeRun { scheme, failed_at: None, error: None, states }
}

fn cmd_compare(run: &RunArgs) -> CliResult<()> {
    let p = load_params(run)?;
    run.init.validate()?;
    let psi = psi(run.denominator.into(), p.mu, run.h)?;
    let euler = ReferenceScheme::new(ReferenceKind::ExplicitEuler, run.h)?;
    let rk4 = ReferenceScheme::new(ReferenceKind::Rk4, run.h)?;
    let runs = vec![
        run_until_failure("nsfd", run.init, run.steps, |s| nsfd_step(&p, s, psi)),
        run_until_failure("euler", run.init, run.steps, |s| reference_step(euler, &p, s)),
        run_until_failure("rk4", run.init, run.steps, |s| reference_step(rk4, &p, s)),
    ];
    for r in &runs {
        if let Some(e) = &r.error {
            log::warn!("{} stopped at step {}: {e}", r.scheme, r.failed_at.unwrap_or_default());
        }
    }
    let out = CompareOutput { h: run.h, steps: run.steps, runs };
    let text = match run.format.unwrap_or(Format::Csv) {
        Format::Json => json_text(&out)?,
        Format::Csv => {
            let mut s = String::from("n,t");
            for r in &out.runs {
                for name in State::NAMES {
                    s.push_str(&format!(",{name}_{}", r.scheme));
                }
            }
            s.push('\n');
            for n in 0..=out.steps {
                s.push_str(&format!("{n},{}", fmt_f64(n as f64 * out.h)));
                for r in &out.runs {
                    let x = r.states.get(n).map(|x| x.to_array()).unwrap_or([f64::NAN; 4]);
                    for v in x {
                        s.push(',');
                        s.push_str(&fmt_f64(v));
                    }
                }
                s.push('\n');
            }
            s
        }
    };
    emit(run, &text)
}

fn cmd_fit(run: &RunArgs, scheme: SchemeArg) -> CliResult<()> {
    let p = load_params(run)?;
    let observed = load_cape_verde();
    let years = observed.len() - 1;
    if !(run.h.is_finite() && run.h > 0.0) {
        return Err(Error::NonpositiveStep(run.h).into());
    }
    let steps = (years as f64 / run.h).round() as usize;
    let traj = match scheme {
        SchemeArg::Nsfd => simulate(&p, run.init, run.h, steps, run.denominator.into())?,
        SchemeArg::Euler => {
            simulate_reference(ReferenceScheme::new(ReferenceKind::ExplicitEuler, run.h)?, &p, run.init, steps)?
        }
        SchemeArg::Rk4 => {
            simulate_reference(ReferenceScheme::new(ReferenceKind::Rk4, run.h)?, &p, run.init, steps)?
        }
    };
    let report = fit_to_observed(&cumulative_cases(&traj, years)?, &observed)?;
    let text = match run.format.unwrap_or(Format::Csv) {
        Format::Json => json_text(&report)?,
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf).map_err(Error::from)?;
            String::from_utf8(buf).expect("CSV output is ASCII")
        }
    };
    emit(run, &text)
}
