//! Classical fixed-step integrators of the continuous model, kept as
//! baselines for the NSFD scheme. Iterates are not clamped, so negative
//! compartments show up as they occur.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{rhs, ModelParams, State};
use crate::nsfd::{self, DenominatorFn};
use crate::trajectory::{Integrator, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    ExplicitEuler,
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceScheme {
    pub kind: ReferenceKind,
    pub h: f64,
}

impl ReferenceScheme {
    pub fn new(kind: ReferenceKind, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::NonpositiveStep(h));
        }
        Ok(Self { kind, h })
    }
}

/// Right-hand side that refuses a nonpositive population at a stage.
fn stage_rhs(p: &ModelParams, s: &State) -> Result<State> {
    if !(s.total() > 0.0) {
        return Err(Error::ZeroPopulation);
    }
    rhs(p, s)
}

pub fn reference_step(scheme: ReferenceScheme, p: &ModelParams, s: &State) -> Result<State> {
    let h = scheme.h;
    match scheme.kind {
        ReferenceKind::ExplicitEuler => Ok(s.axpy(h, &stage_rhs(p, s)?)),
        ReferenceKind::Rk4 => {
            let k1 = stage_rhs(p, s)?;
            let k2 = stage_rhs(p, &s.axpy(0.5 * h, &k1))?;
            let k3 = stage_rhs(p, &s.axpy(0.5 * h, &k2))?;
            let k4 = stage_rhs(p, &s.axpy(h, &k3))?;
            let incr = k1.axpy(2.0, &k2).axpy(2.0, &k3).axpy(1.0, &k4);
            Ok(s.axpy(h / 6.0, &incr))
        }
    }
}

pub fn simulate_reference(
    scheme: ReferenceScheme,
    p: &ModelParams,
    s0: State,
    n_steps: usize,
) -> Result<Trajectory> {
    p.validate()?;
    s0.validate()?;
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(s0);
    let mut current = s0;
    for _ in 0..n_steps {
        current = reference_step(scheme, p, &current)?;
        states.push(current);
    }
    Ok(Trajectory {
        params: *p,
        h: scheme.h,
        integrator: match scheme.kind {
            ReferenceKind::ExplicitEuler => Integrator::ExplicitEuler,
            ReferenceKind::Rk4 => Integrator::Rk4,
        },
        states,
    })
}

/// Scheme scanned by [`positivity_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanScheme {
    Nsfd(DenominatorFn),
    Reference(ReferenceKind),
}

pub const SCAN_STEPS: usize = 1000;

/// First step size in `h_grid` at which the scheme produces a negative
/// (or non-finite) compartment within [`SCAN_STEPS`] steps.
pub fn positivity_scan(
    p: &ModelParams,
    s0: State,
    scheme: ScanScheme,
    h_grid: &[f64],
) -> Result<Option<f64>> {
    p.validate()?;
    s0.validate()?;
    for &h in h_grid {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::NonpositiveStep(h));
        }
        if !stays_nonnegative(p, s0, scheme, h)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

fn stays_nonnegative(p: &ModelParams, s0: State, scheme: ScanScheme, h: f64) -> Result<bool> {
    let ok = |s: &State| s.is_nonnegative() && s.to_array().iter().all(|v| v.is_finite());
    let mut s = s0;
    match scheme {
        ScanScheme::Nsfd(kind) => {
            let psi = nsfd::psi(kind, p.mu, h)?;
            for _ in 0..SCAN_STEPS {
                s = match nsfd::nsfd_step(p, &s, psi) {
                    Ok(next) => next,
                    Err(Error::ZeroPopulation) => return Ok(false),
                    Err(e) => return Err(e),
                };
                if !ok(&s) {
                    return Ok(false);
                }
            }
        }
        ScanScheme::Reference(kind) => {
            let scheme = ReferenceScheme::new(kind, h)?;
            for _ in 0..SCAN_STEPS {
                s = match reference_step(scheme, p, &s) {
                    Ok(next) => next,
                    // a stage left the positive orthant
                    Err(Error::ZeroPopulation) => return Ok(false),
                    Err(e) => return Err(e),
                };
                if !ok(&s) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
