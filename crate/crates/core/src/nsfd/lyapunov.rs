//! Lyapunov sequences along NSFD trajectories.

use serde::{Deserialize, Serialize};

use super::{psi, trajectory_psi};
use crate::error::{Error, Result};
use crate::model::{derived_constants, endemic_equilibrium, force_of_infection, ModelParams, State};
use crate::trajectory::Trajectory;

/// Absolute slack allowed on each difference `V(n+1) - V(n)`.
pub const LYAPUNOV_SLACK: f64 = 1e-12;

/// Relative ε used to decide when the DFE series has left its transient:
/// only indices with `S_{n+1} < (1 + ε) Λ/μ` are checked.
pub const DFE_TRANSIENT_EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LyapunovKind {
    /// `V(n)` certifying the disease-free equilibrium.
    Dfe,
    /// `Ṽ(n)` certifying the endemic equilibrium.
    Endemic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSeries {
    pub kind: LyapunovKind,
    /// `+∞` is written as `null`.
    #[serde(with = "extended_reals")]
    pub values: Vec<f64>,
}

impl LyapunovSeries {
    pub fn differences(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Indices `n` with `V(n+1) - V(n) > slack`; two consecutive infinite
    /// values do not count.
    pub fn violations(&self, slack: f64) -> Vec<usize> {
        self.violations_where(slack, |_| true)
    }

    /// Like [`violations`](Self::violations), restricted to the indices
    /// accepted by `checked`.
    pub fn violations_where(&self, slack: f64, checked: impl Fn(usize) -> bool) -> Vec<usize> {
        self.differences()
            .iter()
            .enumerate()
            .filter(|(n, d)| checked(*n) && **d > slack)
            .map(|(n, _)| n)
            .collect()
    }

    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.violations(slack).is_empty()
    }
}

/// `g(x) = x - 1 - ln x`, nonnegative with its only zero at `x = 1`.
pub fn g(x: f64) -> f64 {
    x - 1.0 - x.ln()
}

/// `V(n) = I_n + (ω/C3) C_n + (α/C2) A_n + ψ λ̃_n S_{n+1}`.
///
/// Needs `S_{n+1}`, so the series is one shorter than the trajectory.
pub fn lyapunov_dfe(p: &ModelParams, traj: &Trajectory) -> Result<LyapunovSeries> {
    if traj.len() < 2 {
        return Err(Error::TrajectoryTooShort { len: traj.len(), needed: 2 });
    }
    let psi = psi_of(traj)?;
    let dc = derived_constants(p);
    let w_c = p.omega / dc.c3;
    let w_a = p.alpha / dc.c2;
    let values = traj
        .states
        .windows(2)
        .map(|w| {
            let (now, next) = (&w[0], &w[1]);
            let lam = force_of_infection(p, now)?;
            Ok(now.i + w_c * now.c + w_a * now.a + psi * lam * next.s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LyapunovSeries { kind: LyapunovKind::Dfe, values })
}

/// Per-difference mask for the DFE series: `true` where
/// `S_{n+1} < (1 + ε) Λ/μ`, i.e. past the transient in which susceptibles
/// overshoot the carrying population.
pub fn dfe_transient_mask(p: &ModelParams, traj: &Trajectory, eps: f64) -> Vec<bool> {
    let threshold = p.carrying_population() * (1.0 + eps);
    traj.states
        .iter()
        .skip(1)
        .take(traj.len().saturating_sub(2))
        .map(|s| s.s < threshold)
        .collect()
}

/// Volterra-type sequence
/// `Ṽ(n) = g(S/S*)/(ψI*) + g(I/I*)/(ψS*) + ωC* g(C/C*)/(ψC3S*I*) + αA* g(A/A*)/(ψC2S*I*)`.
///
/// States on the boundary of the orthant give `Ṽ(n) = +∞`, the limit of
/// `g` at zero.
pub fn lyapunov_ee(p: &ModelParams, traj: &Trajectory) -> Result<LyapunovSeries> {
    let star = endemic_equilibrium(p)?.state;
    if traj.is_empty() {
        return Err(Error::TrajectoryTooShort { len: 0, needed: 1 });
    }
    let psi = psi_of(traj)?;
    let dc = derived_constants(p);
    let w_s = 1.0 / (psi * star.i);
    let w_i = 1.0 / (psi * star.s);
    let w_c = p.omega * star.c / (psi * dc.c3 * star.s * star.i);
    let w_a = p.alpha * star.a / (psi * dc.c2 * star.s * star.i);
    let values = traj
        .states
        .iter()
        .enumerate()
        .map(|(n, s)| {
            check_nonnegative(s, n)?;
            if !s.is_strictly_positive() {
                return Ok(f64::INFINITY);
            }
            Ok(w_s * g(s.s / star.s)
                + w_i * g(s.i / star.i)
                + w_c * g(s.c / star.c)
                + w_a * g(s.a / star.a))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LyapunovSeries { kind: LyapunovKind::Endemic, values })
}

fn check_nonnegative(s: &State, index: usize) -> Result<()> {
    for (name, v) in State::NAMES.into_iter().zip(s.to_array()) {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::NegativeCompartment { name, index });
        }
    }
    Ok(())
}

/// `ψ` of an NSFD trajectory; classical trajectories use `h`.
fn psi_of(traj: &Trajectory) -> Result<f64> {
    match trajectory_psi(traj) {
        Some(psi) => Ok(psi),
        None => psi(super::DenominatorFn::Identity, traj.params.mu, traj.h),
    }
}

/// Serializes `+∞` as `null`, which JSON can represent.
mod extended_reals {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(values: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Option<f64>> = values.iter().map(|x| x.is_finite().then_some(*x)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let v: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.unwrap_or(f64::INFINITY)).collect())
    }
}
