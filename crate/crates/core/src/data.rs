//! Cape Verde HIV/AIDS case study: observed series, preset initial
//! conditions, cumulative-case mapping and fit metrics.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{derived_constants, force_of_infection, ModelParams, State};
use crate::nsfd::{self, trajectory_psi};
use crate::trajectory::{fmt_f64, Integrator, Trajectory};

pub const FIRST_YEAR: u32 = 1987;

/// Cumulative HIV/AIDS cases and total population, 1987–2014.
const CAPE_VERDE: [(u32, u32, u32); 28] = [
    (1987, 61, 323972),
    (1988, 107, 328861),
    (1989, 160, 334473),
    (1990, 211, 341256),
    (1991, 244, 349326),
    (1992, 303, 358473),
    (1993, 337, 368423),
    (1994, 358, 378763),
    (1995, 395, 389156),
    (1996, 432, 399508),
    (1997, 471, 409805),
    (1998, 560, 419884),
    (1999, 660, 429576),
    (2000, 779, 438737),
    (2001, 913, 447357),
    (2002, 1064, 455396),
    (2003, 1233, 462675),
    (2004, 1493, 468985),
    (2005, 1716, 474224),
    (2006, 2015, 478265),
    (2007, 2334, 481278),
    (2008, 2610, 483824),
    (2009, 2929, 486673),
    (2010, 3340, 490379),
    (2011, 3739, 495159),
    (2012, 4090, 500870),
    (2013, 4537, 507258),
    (2014, 4946, 513906),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRecord {
    pub year: u32,
    pub cases: u32,
    pub population: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedSeries {
    pub records: Vec<YearRecord>,
}

impl ObservedSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn record(&self, year: u32) -> Option<&YearRecord> {
        self.records.iter().find(|r| r.year == year)
    }

    pub fn cases(&self) -> Vec<f64> {
        self.records.iter().map(|r| f64::from(r.cases)).collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("year,cases,population\n");
        for r in &self.records {
            out.push_str(&format!("{},{},{}\n", r.year, r.cases, r.population));
        }
        out
    }
}

pub fn load_cape_verde() -> ObservedSeries {
    ObservedSeries {
        records: CAPE_VERDE
            .iter()
            .map(|&(year, cases, population)| YearRecord { year, cases, population })
            .collect(),
    }
}

/// Initial state of the case study, year 1987.
pub fn cape_verde_initial_state() -> State {
    State::new(323911.0, 61.0, 0.0, 0.0)
}

/// The four initial conditions spread over the state space, numbered 1–4.
pub fn cape_verde_initial_conditions() -> [State; 4] {
    let State { s, i, c, a } = cape_verde_initial_state();
    [
        State::new(s, i, c, a),
        State::new(s / 2.0, i + s / 2.0, c + 1e4, a + 4e4),
        State::new(s / 3.0, i, c + 4e4, a + s / 3.0),
        State::new(3.0 * s / 2.0, i + s / 4.0, c + 5e5, a + s / 5.0),
    ]
}

pub fn cape_verde_preset(index: usize) -> Option<State> {
    index.checked_sub(1).and_then(|k| cape_verde_initial_conditions().get(k).copied())
}

/// Model cumulative cases sampled once per year, index 0 = first year.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YearlySeries {
    pub values: Vec<f64>,
}

/// Number of steps making up one year, if `h` divides a year.
fn steps_per_year(h: f64) -> Result<usize> {
    let k = (1.0 / h).round();
    if k < 1.0 || (k * h - 1.0).abs() > 1e-9 {
        return Err(Error::StepDoesNotDivideYear(h));
    }
    Ok(k as usize)
}

/// New infections between two consecutive states.
type Increment<'a> = dyn Fn(&State, &State) -> Result<f64> + 'a;

/// Accumulated new infections starting from the infected stock
/// `K_0 = I_0 + C_0 + A_0`.
///
/// NSFD trajectories accumulate the scheme's own inflow `ψ λ̃_n S_{n+1}`;
/// classical trajectories integrate `λ S` with the trapezoidal rule.
pub fn cumulative_cases(traj: &Trajectory, years: usize) -> Result<YearlySeries> {
    let per_year = steps_per_year(traj.h)?;
    let available = traj.len().saturating_sub(1) / per_year;
    if traj.is_empty() || available < years {
        return Err(Error::HorizonTooShort { requested: years, available });
    }
    let p = &traj.params;
    let first = traj.states[0];
    let mut total = first.i + first.c + first.a;
    let mut values = Vec::with_capacity(years + 1);
    values.push(total);

    let increments: Box<Increment> = match trajectory_psi(traj) {
        Some(psi) => Box::new(move |now: &State, next: &State| {
            Ok(psi * force_of_infection(p, now)? * next.s)
        }),
        None => {
            let h = traj.h;
            Box::new(move |now: &State, next: &State| {
                let a = force_of_infection(p, now)? * now.s;
                let b = force_of_infection(p, next)? * next.s;
                Ok(0.5 * h * (a + b))
            })
        }
    };

    for (n, w) in traj.states.windows(2).take(years * per_year).enumerate() {
        total += increments(&w[0], &w[1])?;
        if (n + 1) % per_year == 0 {
            values.push(total);
        }
    }
    Ok(YearlySeries { values })
}

/// Same accumulation as [`cumulative_cases`] for NSFD, but recomputed step
/// by step from the scheme so it does not depend on stored states.
pub fn nsfd_cumulative_cases_direct(
    p: &ModelParams,
    s0: State,
    h: f64,
    years: usize,
    kind: nsfd::DenominatorFn,
) -> Result<YearlySeries> {
    let per_year = steps_per_year(h)?;
    let psi = nsfd::psi(kind, p.mu, h)?;
    let dc = derived_constants(p);
    let mut s = s0;
    let mut total = s0.i + s0.c + s0.a;
    let mut values = vec![total];
    for n in 0..years * per_year {
        let (next, inflow) = nsfd::step_with(p, &dc, &s, psi)?;
        total += inflow;
        s = next;
        if (n + 1) % per_year == 0 {
            values.push(total);
        }
    }
    Ok(YearlySeries { values })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub years: Vec<u32>,
    pub model: Vec<f64>,
    pub observed: Vec<f64>,
    /// `model - observed`.
    pub residuals: Vec<f64>,
    pub rmse: f64,
    pub max_abs_error: f64,
}

pub fn fit_metrics(model: &[f64], observed: &[f64]) -> Result<FitReport> {
    if model.len() != observed.len() {
        return Err(Error::LengthMismatch { model: model.len(), observed: observed.len() });
    }
    let residuals: Vec<f64> = model.iter().zip(observed).map(|(m, o)| m - o).collect();
    let n = residuals.len().max(1) as f64;
    let rmse = (residuals.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    let max_abs_error = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    Ok(FitReport {
        years: (0..model.len() as u32).map(|k| FIRST_YEAR + k).collect(),
        model: model.to_vec(),
        observed: observed.to_vec(),
        residuals,
        rmse,
        max_abs_error,
    })
}

pub fn fit_to_observed(model: &YearlySeries, obs: &ObservedSeries) -> Result<FitReport> {
    let mut report = fit_metrics(&model.values, &obs.cases())?;
    report.years = obs.records.iter().map(|r| r.year).collect();
    Ok(report)
}

impl FitReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "year,observed,model,residual")?;
        for k in 0..self.model.len() {
            writeln!(
                w,
                "{},{},{},{}",
                self.years[k],
                fmt_f64(self.observed[k]),
                fmt_f64(self.model[k]),
                fmt_f64(self.residuals[k])
            )?;
        }
        Ok(())
    }
}

/// The integrator label used in exported files.
pub fn integrator_name(i: Integrator) -> &'static str {
    match i {
        Integrator::Nsfd(nsfd::DenominatorFn::MickensExponential) => "nsfd-mickens",
        Integrator::Nsfd(nsfd::DenominatorFn::Identity) => "nsfd-identity",
        Integrator::ExplicitEuler => "euler",
        Integrator::Rk4 => "rk4",
    }
}
