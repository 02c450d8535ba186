//! Mickens nonstandard finite-difference discretization of the SICA model.
//!
//! Each compartment's time derivative is replaced by
//! `(x_{n+1} - x_n) / ψ(h)`, linear terms are taken at `n + 1` and the force
//! of infection at `n`. The resulting system is linear in the unknowns and
//! is solved explicitly in the order `S → I → C → A`.

mod lyapunov;

pub use lyapunov::{
    dfe_transient_mask, g, lyapunov_dfe, lyapunov_ee, LyapunovKind, LyapunovSeries,
    DFE_TRANSIENT_EPS, LYAPUNOV_SLACK,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{derived_constants, force_of_infection, DerivedConstants, ModelParams, State};
use crate::trajectory::{Integrator, Trajectory};

/// Denominator function replacing the raw step `h`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenominatorFn {
    /// `ψ(h) = (e^{μh} - 1) / μ`.
    #[default]
    MickensExponential,
    /// `ψ(h) = h`.
    Identity,
}

impl DenominatorFn {
    pub fn eval(self, mu: f64, h: f64) -> Result<f64> {
        psi(self, mu, h)
    }
}

pub fn psi(kind: DenominatorFn, mu: f64, h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::NonpositiveStep(h));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter { name: "mu", value: mu });
    }
    Ok(match kind {
        DenominatorFn::MickensExponential => (mu * h).exp_m1() / mu,
        DenominatorFn::Identity => h,
    })
}

/// Denominator of the explicit `I` update in product form,
/// `(1+C1ψ)(1+C2ψ)(1+C3ψ) - αρψ²(1+C3ψ) - ωφψ²(1+C2ψ)`.
pub fn infected_update_denominator(p: &ModelParams, dc: &DerivedConstants, psi: f64) -> f64 {
    let (k1, k2, k3) = (1.0 + dc.c1 * psi, 1.0 + dc.c2 * psi, 1.0 + dc.c3 * psi);
    k1 * k2 * k3 - p.alpha * p.rho * psi * psi * k3 - p.omega * p.phi * psi * psi * k2
}

/// Same denominator expanded as a cubic in ψ with manifestly positive
/// coefficients. The cubic coefficient equals the R0 denominator.
pub fn infected_update_denominator_expanded(
    p: &ModelParams,
    dc: &DerivedConstants,
    psi: f64,
) -> f64 {
    let (c1, c2, c3, mu) = (dc.c1, dc.c2, dc.c3, p.mu);
    let a1 = c1 + c2 + c3;
    let a2 = c2 * (2.0 * mu + p.phi + p.omega) + c3 * (p.rho + mu) + mu * (p.phi + p.rho) + p.rho * p.d;
    let a3 = c3 * p.rho * (mu + p.d) + c2 * mu * (c3 + p.phi);
    1.0 + psi * (a1 + psi * (a2 + psi * a3))
}

/// One explicit NSFD step.
pub fn nsfd_step(p: &ModelParams, s: &State, psi: f64) -> Result<State> {
    let dc = derived_constants(p);
    step_with(p, &dc, s, psi).map(|(next, _)| next)
}

/// Returns the next state and the new-infection inflow `ψ λ̃_n S_{n+1}`.
pub(crate) fn step_with(
    p: &ModelParams,
    dc: &DerivedConstants,
    s: &State,
    psi: f64,
) -> Result<(State, f64)> {
    let lambda = force_of_infection(p, s)?;

    let s_next = (s.s + p.recruitment * psi) / (1.0 + p.mu * psi + psi * lambda);
    let inflow = psi * lambda * s_next;

    let k2 = 1.0 + dc.c2 * psi;
    let k3 = 1.0 + dc.c3 * psi;
    let numerator = (s.i + inflow) * k2 * k3 + p.alpha * psi * s.a * k3 + p.omega * psi * s.c * k2;
    let i_next = numerator / infected_update_denominator(p, dc, psi);

    let c_next = (p.phi * psi * i_next + s.c) / k3;
    let a_next = (p.rho * psi * i_next + s.a) / k2;

    Ok((State::new(s_next, i_next, c_next, a_next), inflow))
}

pub fn simulate(
    p: &ModelParams,
    s0: State,
    h: f64,
    n_steps: usize,
    denominator: DenominatorFn,
) -> Result<Trajectory> {
    p.validate()?;
    s0.validate()?;
    let psi = psi(denominator, p.mu, h)?;
    let dc = derived_constants(p);

    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(s0);
    let mut current = s0;
    for _ in 0..n_steps {
        current = step_with(p, &dc, &current, psi)?.0;
        states.push(current);
    }
    Ok(Trajectory {
        params: *p,
        h,
        integrator: Integrator::Nsfd(denominator),
        states,
    })
}

/// Discrete Gronwall envelope `Λ/μ + (N0 - Λ/μ) (1 + μψ)^{-n}`.
pub fn gronwall_bound(p: &ModelParams, n0: f64, psi: f64, n: usize) -> f64 {
    let cap = p.carrying_population();
    let decay = (1.0 + p.mu * psi).powi(-(n.min(i32::MAX as usize) as i32));
    cap + (n0 - cap) * decay
}

/// Recovers `ψ` for an NSFD trajectory.
pub fn trajectory_psi(traj: &Trajectory) -> Option<f64> {
    match traj.integrator {
        Integrator::Nsfd(kind) => psi(kind, traj.params.mu, traj.h).ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dfe, endemic_equilibrium};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn psi_examples() {
        let mu = 1.0 / 69.54;
        let v = psi(DenominatorFn::MickensExponential, mu, 1.0).unwrap();
        // Taylor series of (e^x - 1)/x at x = μ
        let taylor: f64 = (0..20).map(|k| mu.powi(k) / (1..=k + 1).map(f64::from).product::<f64>()).sum();
        assert!(rel(v, taylor) < 1e-14);
        assert!((v - 1.007_218).abs() < 1e-5, "{v}");
        assert_eq!(psi(DenominatorFn::Identity, mu, 0.5).unwrap(), 0.5);
        for h in [1e-3, 1e-5, 1e-8] {
            let v = psi(DenominatorFn::MickensExponential, mu, h).unwrap();
            assert!((v - h).abs() <= mu * h * h);
            assert!(rel(v / h, 1.0) < 1e-2);
        }
        assert!(matches!(
            psi(DenominatorFn::Identity, mu, 0.0),
            Err(Error::NonpositiveStep(_))
        ));
        assert!(psi(DenominatorFn::MickensExponential, mu, -1.0).is_err());
    }

    /// Line-by-line scalar evaluation with the one-step formulas written out
    /// independently of `step_with`.
    #[test]
    fn first_step_from_cape_verde_start() {
        let p = ModelParams::cape_verde();
        let psi = psi(DenominatorFn::MickensExponential, p.mu, 1.0).unwrap();
        let (s0, i0) = (323911.0_f64, 61.0_f64);
        let n0 = s0 + i0;
        let lam = 0.695 * i0 / n0;
        let mu = 1.0 / 69.54;
        let s1 = (s0 + 13045.0 * psi) / (1.0 + mu * psi + psi * lam);
        let c1 = 0.1 + 1.0 + mu;
        let c2 = 0.33 + mu + 1.0;
        let c3 = 1.0 / 11.0 + mu;
        // solve the 3x3 implicit system for (I1, C1, A1) by substitution
        // C1 = φψI1/(1+C3ψ), A1 = ρψI1/(1+C2ψ) with C0 = A0 = 0
        let gain = 1.0 + c1 * psi
            - 0.33 * psi * 0.1 * psi / (1.0 + c2 * psi)
            - (1.0 / 11.0) * psi * psi / (1.0 + c3 * psi);
        let i1 = (i0 + psi * lam * s1) / gain;
        let cc1 = psi * i1 / (1.0 + c3 * psi);
        let a1 = 0.1 * psi * i1 / (1.0 + c2 * psi);

        let next = nsfd_step(&p, &State::new(s0, i0, 0.0, 0.0), psi).unwrap();
        assert!(rel(next.s, s1) < 1e-13);
        assert!(rel(next.i, i1) < 1e-12);
        assert!(rel(next.c, cc1) < 1e-12);
        assert!(rel(next.a, a1) < 1e-12);
        assert!(next.is_strictly_positive());
        assert!(next.total() <= n0.max(p.carrying_population()));
    }

    #[test]
    fn equilibria_are_fixed_points() {
        let p = ModelParams::cape_verde();
        for psi in [1e-3, 0.5, 1.0, 10.0, 1e3] {
            let e0 = dfe(&p).state;
            let next = nsfd_step(&p, &e0, psi).unwrap();
            assert!(rel(next.s, e0.s) < 1e-14);
            assert_eq!((next.i, next.c, next.a), (0.0, 0.0, 0.0));

            let ee = endemic_equilibrium(&p).unwrap().state;
            let next = nsfd_step(&p, &ee, psi).unwrap();
            for (x, y) in next.to_array().iter().zip(ee.to_array()) {
                assert!(rel(*x, y) < 1e-8, "psi={psi}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn zero_steps_returns_initial_state() {
        let p = ModelParams::cape_verde();
        let s0 = State::new(323911.0, 61.0, 0.0, 0.0);
        let t = simulate(&p, s0, 1.0, 0, DenominatorFn::MickensExponential).unwrap();
        assert_eq!(t.states, vec![s0]);
    }

    #[test]
    fn simulate_rejects_bad_input() {
        let p = ModelParams::cape_verde();
        let s0 = State::new(323911.0, 61.0, 0.0, 0.0);
        assert!(simulate(&p, State::new(-1.0, 1.0, 0.0, 0.0), 1.0, 3, DenominatorFn::Identity).is_err());
        assert!(matches!(
            simulate(&p, State::default(), 1.0, 3, DenominatorFn::Identity),
            Err(Error::ZeroPopulation)
        ));
        assert!(simulate(&p, s0, -1.0, 3, DenominatorFn::Identity).is_err());
        assert!(matches!(
            nsfd_step(&p, &State::default(), 1.0),
            Err(Error::ZeroPopulation)
        ));
    }

    #[test]
    fn gronwall_examples() {
        let p = ModelParams::cape_verde();
        let cap = p.carrying_population();
        for n in [0, 1, 10, 1000] {
            assert!(rel(gronwall_bound(&p, cap, 1.0, n), cap) < 1e-15);
        }
        assert!(rel(gronwall_bound(&p, 10.0, 1.0, 100_000), cap) < 1e-12);
        let psi = psi(DenominatorFn::MickensExponential, p.mu, 1.0).unwrap();
        let expected = cap + (323972.0 - cap) * (1.0 / (1.0 + p.mu * psi)).powi(27);
        assert!(rel(gronwall_bound(&p, 323972.0, psi, 27), expected) < 1e-14);
    }

    fn arb_params() -> impl Strategy<Value = ModelParams> {
        (
            (1.0f64..1e5, 1e-3f64..0.5, 1e-2f64..5.0, 1e-2f64..3.0, 1e-2f64..3.0),
            (1e-2f64..3.0, 1e-2f64..3.0, 1e-2f64..3.0, 1e-2f64..1.0, 1.0f64..3.0),
        )
            .prop_map(|((l, mu, beta, phi, rho), (alpha, omega, d, ec, ea))| ModelParams {
                recruitment: l,
                mu,
                beta,
                phi,
                rho,
                alpha,
                omega,
                d,
                eta_c: ec,
                eta_a: ea,
            })
    }

    fn arb_state() -> impl Strategy<Value = State> {
        prop::array::uniform4(1e-3f64..1e6).prop_map(State::from_array)
    }

    proptest! {
        #[test]
        fn denominator_forms_agree_and_exceed_one(p in arb_params(), psi in 1e-4f64..1e3) {
            let dc = derived_constants(&p);
            let prod = infected_update_denominator(&p, &dc, psi);
            let expanded = infected_update_denominator_expanded(&p, &dc, psi);
            prop_assert!(rel(prod, expanded) < 1e-9);
            prop_assert!(expanded > 1.0);
        }

        #[test]
        fn step_preserves_positivity_and_satisfies_implicit_rows(
            p in arb_params(), s in arb_state(), psi in 1e-4f64..1e3,
        ) {
            let dc = derived_constants(&p);
            let next = nsfd_step(&p, &s, psi).unwrap();
            prop_assert!(next.is_strictly_positive());
            let c_row = (1.0 + dc.c3 * psi) * next.c - p.phi * psi * next.i - s.c;
            let a_row = (1.0 + dc.c2 * psi) * next.a - p.rho * psi * next.i - s.a;
            let c_scale = (1.0 + dc.c3 * psi) * next.c + p.phi * psi * next.i + s.c;
            let a_scale = (1.0 + dc.c2 * psi) * next.a + p.rho * psi * next.i + s.a;
            prop_assert!(c_row.abs() <= 1e-12 * c_scale);
            prop_assert!(a_row.abs() <= 1e-12 * a_scale);
            // the I row of the implicit scheme as well
            let lam = force_of_infection(&p, &s).unwrap();
            let i_row = (next.i - s.i) / psi
                - (lam * next.s - dc.c1 * next.i + p.alpha * next.a + p.omega * next.c);
            let i_scale = next.i / psi + s.i / psi + lam * next.s + dc.c1 * next.i
                + p.alpha * next.a + p.omega * next.c;
            prop_assert!(i_row.abs() <= 1e-10 * i_scale);
        }

        #[test]
        fn endemic_point_fixed_for_any_psi(p in arb_params(), psi in 1e-3f64..1e2) {
            if let Ok(ee) = endemic_equilibrium(&p) {
                prop_assume!(ee.state.is_strictly_positive());
                let next = nsfd_step(&p, &ee.state, psi).unwrap();
                for (x, y) in next.to_array().iter().zip(ee.state.to_array()) {
                    prop_assert!(rel(*x, y) < 1e-8);
                }
            }
        }

        #[test]
        fn population_stays_under_gronwall_envelope(
            p in arb_params(), s in arb_state(), h in 1e-2f64..20.0,
        ) {
            let t = simulate(&p, s, h, 200, DenominatorFn::MickensExponential).unwrap();
            let psi = trajectory_psi(&t).unwrap();
            let n0 = s.total();
            let cap = p.carrying_population();
            for (n, st) in t.states.iter().enumerate() {
                let bound = gronwall_bound(&p, n0, psi, n);
                prop_assert!(st.total() <= bound + 1e-9 * cap);
                prop_assert!(st.total() <= n0.max(cap) + 1e-9 * cap);
            }
        }
    }
}
