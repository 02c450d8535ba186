//! Continuous-time SICA model: parameters, right-hand side, basic
//! reproduction number and the two equilibria.
//!
//! ```text
//! S' = Λ - λS - μS
//! I' = λS - (ρ + φ + μ)I + αA + ωC
//! C' = φI - (ω + μ)C
//! A' = ρI - (α + μ + d)A
//! λ  = β (I + η_C C + η_A A) / N,   N = S + I + C + A
//! ```
//!
//! All rates are per year.

use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ten epidemiological rates of the SICA model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Recruitment rate (individuals per year).
    #[serde(rename = "Lambda")]
    pub recruitment: f64,
    /// Natural death rate.
    pub mu: f64,
    /// HIV transmission rate.
    pub beta: f64,
    /// Treatment rate moving `I` into `C`.
    pub phi: f64,
    /// Progression rate from `I` to `A` (default of treatment).
    pub rho: f64,
    /// AIDS treatment rate, moving `A` back into `I`.
    pub alpha: f64,
    /// Default rate moving `C` back into `I`.
    pub omega: f64,
    /// AIDS-induced death rate.
    pub d: f64,
    /// Relative infectiousness of chronic individuals.
    #[serde(rename = "eta_C")]
    pub eta_c: f64,
    /// Relative infectiousness of AIDS individuals.
    #[serde(rename = "eta_A")]
    pub eta_a: f64,
}

/// Modeling assumption that is reported but not enforced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamWarning {
    /// `eta_C > 1`: chronic individuals more infectious than untreated ones.
    EtaCAboveOne,
    /// `eta_A < 1`: AIDS individuals less infectious than untreated ones.
    EtaABelowOne,
}

impl ModelParams {
    /// Cape Verde case study (rates per year, 0.33 bound to `alpha`).
    pub fn cape_verde() -> Self {
        Self {
            recruitment: 13045.0,
            mu: 1.0 / 69.54,
            beta: 0.695,
            phi: 1.0,
            rho: 0.1,
            alpha: 0.33,
            omega: 1.0 / 11.0,
            d: 1.0,
            eta_c: 0.04,
            eta_a: 1.35,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    fn named_fields(&self) -> [(&'static str, f64); 10] {
        [
            ("Lambda", self.recruitment),
            ("mu", self.mu),
            ("beta", self.beta),
            ("phi", self.phi),
            ("rho", self.rho),
            ("alpha", self.alpha),
            ("omega", self.omega),
            ("d", self.d),
            ("eta_C", self.eta_c),
            ("eta_A", self.eta_a),
        ]
    }

    /// Rejects nonpositive or non-finite rates and returns the soft
    /// warnings for `eta_C > 1` and `eta_A < 1`.
    pub fn validate(&self) -> Result<Vec<ParamWarning>> {
        for (name, value) in self.named_fields() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        let mut warnings = Vec::new();
        if self.eta_c > 1.0 {
            warn!("eta_C = {} exceeds 1", self.eta_c);
            warnings.push(ParamWarning::EtaCAboveOne);
        }
        if self.eta_a < 1.0 {
            warn!("eta_A = {} is below 1", self.eta_a);
            warnings.push(ParamWarning::EtaABelowOne);
        }
        Ok(warnings)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Disease-free population level `Λ/μ`.
    pub fn carrying_population(&self) -> f64 {
        self.recruitment / self.mu
    }

    pub fn derived(&self) -> DerivedConstants {
        derived_constants(self)
    }

    pub fn r0(&self) -> f64 {
        self.derived().r0()
    }
}

/// Aggregate rates used throughout the analysis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// `ρ + φ + μ`, total outflow rate of `I`.
    pub c1: f64,
    /// `α + μ + d`, total outflow rate of `A`.
    pub c2: f64,
    /// `ω + μ`, total outflow rate of `C`.
    pub c3: f64,
    /// Numerator of R0: `β (C2 C3 + C3 η_A ρ + C2 η_C φ)`.
    pub r0_numerator: f64,
    /// Denominator of R0: `C1 C2 C3 - C3 α ρ - C2 ω φ`.
    pub r0_denominator: f64,
}

impl DerivedConstants {
    pub fn r0(&self) -> f64 {
        self.r0_numerator / self.r0_denominator
    }
}

pub fn derived_constants(p: &ModelParams) -> DerivedConstants {
    let c1 = p.rho + p.phi + p.mu;
    let c2 = p.alpha + p.mu + p.d;
    let c3 = p.omega + p.mu;
    let r0_numerator = p.beta * (c2 * c3 + c3 * p.eta_a * p.rho + c2 * p.eta_c * p.phi);
    let r0_denominator = c1 * c2 * c3 - c3 * p.alpha * p.rho - c2 * p.omega * p.phi;
    DerivedConstants {
        c1,
        c2,
        c3,
        r0_numerator,
        r0_denominator,
    }
}

/// One compartment vector `(S, I, C, A)`.
///
/// The same layout carries time derivatives and the signed iterates of
/// the classical reference schemes, so nonnegativity is checked by
/// [`State::validate`] at entry points rather than on construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct State {
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

pub type StateDerivative = State;

impl State {
    pub const NAMES: [&'static str; 4] = ["S", "I", "C", "A"];

    pub fn new(s: f64, i: f64, c: f64, a: f64) -> Self {
        Self { s, i, c, a }
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.s, self.i, self.c, self.a]
    }

    pub fn total(&self) -> f64 {
        self.s + self.i + self.c + self.a
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in Self::NAMES.into_iter().zip(self.to_array()) {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidState { name, value });
            }
        }
        if self.total() <= 0.0 {
            return Err(Error::ZeroPopulation);
        }
        Ok(())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.to_array().iter().all(|v| *v >= 0.0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.to_array().iter().all(|v| *v > 0.0)
    }

    /// `self + k * other`, used by the explicit stage evaluations.
    pub fn axpy(&self, k: f64, other: &State) -> State {
        State::new(
            self.s + k * other.s,
            self.i + k * other.i,
            self.c + k * other.c,
            self.a + k * other.a,
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Weighted infectious load `I + η_C C + η_A A`.
pub(crate) fn infectious_load(p: &ModelParams, s: &State) -> f64 {
    s.i + p.eta_c * s.c + p.eta_a * s.a
}

/// `λ = β (I + η_C C + η_A A) / N`.
pub fn force_of_infection(p: &ModelParams, s: &State) -> Result<f64> {
    let n = s.total();
    if n == 0.0 {
        return Err(Error::ZeroPopulation);
    }
    Ok(p.beta * infectious_load(p, s) / n)
}

pub fn rhs(p: &ModelParams, s: &State) -> Result<StateDerivative> {
    let dc = derived_constants(p);
    let lambda = force_of_infection(p, s)?;
    let incidence = lambda * s.s;
    Ok(State {
        s: p.recruitment - incidence - p.mu * s.s,
        i: incidence - dc.c1 * s.i + p.alpha * s.a + p.omega * s.c,
        c: p.phi * s.i - dc.c3 * s.c,
        a: p.rho * s.i - dc.c2 * s.a,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    #[serde(rename = "DFE")]
    DiseaseFree,
    Endemic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub state: State,
    /// Force of infection at the equilibrium; zero for the DFE.
    pub lambda_star: f64,
}

pub fn dfe(p: &ModelParams) -> Equilibrium {
    Equilibrium {
        kind: EquilibriumKind::DiseaseFree,
        state: State::new(p.carrying_population(), 0.0, 0.0, 0.0),
        lambda_star: 0.0,
    }
}

/// Closed-form endemic equilibrium, defined only for `R0 > 1`.
pub fn endemic_equilibrium(p: &ModelParams) -> Result<Equilibrium> {
    let dc = derived_constants(p);
    let r0 = dc.r0();
    if !(r0 > 1.0) {
        return Err(Error::NoEndemicEquilibrium { r0 });
    }
    let (num, den) = (dc.r0_numerator, dc.r0_denominator);
    let lambda_star =
        den * (r0 - 1.0) / (dc.c2 * dc.c3 + p.phi * dc.c2 + p.rho * dc.c3);

    let rho_d_c3 = p.rho * p.d * dc.c3;
    let s = p.recruitment * (den - rho_d_c3) / (p.mu * (num - rho_d_c3));
    // common factor Λ (𝒟 - 𝒩) / (𝒟 (ρ d C3 - 𝒩))
    let k = p.recruitment * (den - num) / (den * (rho_d_c3 - num));
    let state = State::new(s, dc.c2 * dc.c3 * k, dc.c2 * p.phi * k, p.rho * dc.c3 * k);

    Ok(Equilibrium {
        kind: EquilibriumKind::Endemic,
        state,
        lambda_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn cape_verde_r0_near_reference() {
        let r0 = ModelParams::cape_verde().r0();
        assert!(rel(r0, 4.5304) < 0.01, "r0 = {r0}");
    }

    #[test]
    fn no_progression_collapses_to_beta_over_mu() {
        let mut p = ModelParams::cape_verde();
        p.rho = 0.0;
        p.phi = 0.0;
        let dc = derived_constants(&p);
        assert!(rel(dc.r0(), p.beta / p.mu) < 1e-14);
    }

    #[test]
    fn cape_verde_c3() {
        let dc = ModelParams::cape_verde().derived();
        assert!((dc.c3 - 0.105_289_303_736_240_75).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_nonpositive_and_warns_on_eta() {
        let mut p = ModelParams::cape_verde();
        assert!(p.validate().unwrap().is_empty());
        p.d = 0.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { name: "d", .. })
        ));
        let mut p = ModelParams::cape_verde();
        p.eta_c = 1.5;
        p.eta_a = 0.5;
        assert_eq!(
            p.validate().unwrap(),
            vec![ParamWarning::EtaCAboveOne, ParamWarning::EtaABelowOne]
        );
        p.mu = f64::NAN;
        assert!(p.validate().is_err());
    }

    #[test]
    fn json_uses_documented_keys() {
        let json = r#"{"Lambda":13045,"mu":0.01438021282714984,"beta":0.695,"phi":1,
            "rho":0.1,"alpha":0.33,"omega":0.09090909090909091,"d":1,"eta_C":0.04,"eta_A":1.35}"#;
        let p = ModelParams::from_json_str(json).unwrap();
        assert_eq!(p.recruitment, 13045.0);
        assert_eq!(p.eta_a, 1.35);
        let back = serde_json::to_value(p).unwrap();
        for key in ["Lambda", "mu", "beta", "phi", "rho", "alpha", "omega", "d", "eta_C", "eta_A"] {
            assert!(back.get(key).is_some(), "missing {key}");
        }
        assert!(ModelParams::from_json_str(r#"{"Lambda":1}"#).is_err());
    }

    #[test]
    fn force_of_infection_examples() {
        let p = ModelParams::cape_verde();
        assert_eq!(force_of_infection(&p, &State::new(10.0, 0.0, 0.0, 0.0)).unwrap(), 0.0);
        assert!(rel(force_of_infection(&p, &State::new(0.0, 7.0, 0.0, 0.0)).unwrap(), p.beta) < 1e-15);
        let lam = force_of_infection(&p, &State::new(323911.0, 61.0, 0.0, 0.0)).unwrap();
        assert!(rel(lam, 0.695 * 61.0 / 323972.0) < 1e-14);
        assert!((lam - 1.3086e-4).abs() < 1e-8);
        assert!(matches!(
            force_of_infection(&p, &State::default()),
            Err(Error::ZeroPopulation)
        ));
    }

    #[test]
    fn rhs_at_initial_condition() {
        let p = ModelParams::cape_verde();
        let s = State::new(323911.0, 61.0, 0.0, 0.0);
        let f = rhs(&p, &s).unwrap();
        let incidence = 0.695 * 61.0 / 323972.0 * 323911.0;
        let natural = 323911.0 / 69.54;
        assert!(rel(f.s, 13045.0 - incidence - natural) < 1e-12);
        assert!((incidence - 42.39).abs() < 0.01);
        assert!((natural - 4657.9).abs() < 0.1);
        assert!(matches!(rhs(&p, &State::default()), Err(Error::ZeroPopulation)));
    }

    #[test]
    fn dfe_examples() {
        let p = ModelParams::cape_verde();
        let e = dfe(&p);
        assert!((e.state.s - 907_149.3).abs() < 0.01);
        assert_eq!((e.state.i, e.state.c, e.state.a, e.lambda_star), (0.0, 0.0, 0.0, 0.0));
        let mut q = p;
        q.recruitment = q.mu;
        assert_eq!(dfe(&q).state.s, 1.0);
        let f = rhs(&p, &e.state).unwrap();
        assert!(f.max_abs() <= 1e-12 * p.recruitment);
    }

    #[test]
    fn endemic_matches_reference_point_and_ratios() {
        let p = ModelParams::cape_verde();
        let dc = p.derived();
        let e = endemic_equilibrium(&p).unwrap();
        let reference = [145276.0, 48136.4, 461146.0, 3580.57];
        for (x, y) in e.state.to_array().iter().zip(reference) {
            assert!(rel(*x, y) < 0.01, "{x} vs {y}");
        }
        assert!(rel(e.state.a / e.state.i, p.rho / dc.c2) < 1e-10);
        assert!(rel(e.state.c / e.state.i, p.phi / dc.c3) < 1e-10);
        assert!(rel(e.state.s, p.recruitment / (e.lambda_star + p.mu)) < 1e-10);
        let lam = force_of_infection(&p, &e.state).unwrap();
        assert!(rel(lam, e.lambda_star) < 1e-8);
        let f = rhs(&p, &e.state).unwrap();
        assert!(f.max_abs() < 1e-8 * e.state.max_abs());
    }

    #[test]
    fn endemic_rejected_at_threshold() {
        // bisection oracle for R0(beta) = 1; R0 is increasing in beta
        let base = ModelParams::cape_verde();
        let (mut lo, mut hi) = (1e-6, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if base.with_beta(mid).r0() <= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let at_threshold = base.with_beta(lo);
        assert!(at_threshold.r0() <= 1.0 && at_threshold.r0() > 1.0 - 1e-12);
        assert!(matches!(
            endemic_equilibrium(&at_threshold),
            Err(Error::NoEndemicEquilibrium { .. })
        ));
        // just above threshold the endemic point collapses onto the DFE
        let above = endemic_equilibrium(&base.with_beta(hi)).unwrap();
        assert!(above.state.i < 1e-6 * base.carrying_population());
        assert!(rel(above.state.s, base.carrying_population()) < 1e-6);
    }
}
