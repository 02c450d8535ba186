//! Time-indexed state sequences and their CSV/JSON export.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::model::{ModelParams, State};
use crate::nsfd::DenominatorFn;

/// Which scheme produced a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Nsfd(DenominatorFn),
    ExplicitEuler,
    Rk4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: ModelParams,
    /// Step size in years.
    pub h: f64,
    pub integrator: Integrator,
    pub states: Vec<State>,
}

pub const CSV_HEADER: &str = "n,t,S,I,C,A,N";

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.h
    }

    pub fn last(&self) -> Option<&State> {
        self.states.last()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.states.iter().all(State::is_nonnegative)
    }

    /// Stride through the trajectory, keeping every `every`-th state.
    pub fn sample_every(&self, every: usize) -> impl Iterator<Item = (usize, &State)> {
        self.states.iter().enumerate().step_by(every.max(1))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for (n, s) in self.states.iter().enumerate() {
            writeln!(
                w,
                "{n},{},{},{},{},{},{}",
                fmt_f64(self.time(n)),
                fmt_f64(s.s),
                fmt_f64(s.i),
                fmt_f64(s.c),
                fmt_f64(s.a),
                fmt_f64(s.total())
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Parses the `n,t,S,I,C,A,N` format back into states.
pub fn parse_csv_states(text: &str) -> Result<Vec<State>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|e| format!("{e}: {line}")))
                .collect::<Result<_, _>>()?;
            if fields.len() != 7 {
                return Err(format!("expected 7 fields: {line}"));
            }
            Ok(State::new(fields[2], fields[3], fields[4], fields[5]))
        })
        .collect()
}
