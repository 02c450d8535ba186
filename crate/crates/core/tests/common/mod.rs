#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use sica_core::{ModelParams, State};

/// `10^e` for `e` uniform in `lo..hi`.
fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo..hi))
}

pub fn random_params<R: Rng>(rng: &mut R) -> ModelParams {
    ModelParams {
        recruitment: log_uniform(rng, 1.0, 5.0),
        mu: log_uniform(rng, -3.0, -0.3),
        beta: log_uniform(rng, -2.0, 0.7),
        phi: log_uniform(rng, -2.0, 0.3),
        rho: log_uniform(rng, -2.0, 0.3),
        alpha: log_uniform(rng, -2.0, 0.3),
        omega: log_uniform(rng, -2.0, 0.3),
        d: log_uniform(rng, -2.0, 0.3),
        eta_c: rng.gen_range(0.01..1.5),
        eta_a: rng.gen_range(0.5..3.0),
    }
}

/// Nonnegative state with positive total, scaled to the carrying population.
pub fn random_state<R: Rng>(rng: &mut R, p: &ModelParams) -> State {
    let cap = p.carrying_population();
    State::new(
        rng.gen_range(0.01..2.0) * cap,
        rng.gen_range(0.0..1.0) * cap,
        rng.gen_range(0.0..1.0) * cap,
        rng.gen_range(0.0..1.0) * cap,
    )
}

fn exp10(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_map(|e| 10f64.powf(e))
}

pub fn params_strategy() -> impl Strategy<Value = ModelParams> {
    (
        exp10(1.0, 5.0),
        exp10(-3.0, -0.3),
        exp10(-2.0, 0.7),
        exp10(-2.0, 0.3),
        exp10(-2.0, 0.3),
        exp10(-2.0, 0.3),
        exp10(-2.0, 0.3),
        exp10(-2.0, 0.3),
        0.01..1.5f64,
        0.5..3.0f64,
    )
        .prop_map(|(recruitment, mu, beta, phi, rho, alpha, omega, d, eta_c, eta_a)| ModelParams {
            recruitment,
            mu,
            beta,
            phi,
            rho,
            alpha,
            omega,
            d,
            eta_c,
            eta_a,
        })
}

/// Small rates, so that `C2 < 1` and `C3 < 1` are common.
pub fn slow_params_strategy() -> impl Strategy<Value = ModelParams> {
    (
        exp10(1.0, 5.0),
        exp10(-3.0, -1.0),
        exp10(-3.0, -0.5),
        exp10(-2.0, -0.5),
        exp10(-2.0, -0.5),
        exp10(-2.0, -0.5),
        exp10(-2.0, -0.5),
        exp10(-2.0, -0.5),
        0.01..1.0f64,
        0.5..2.0f64,
    )
        .prop_map(|(recruitment, mu, beta, phi, rho, alpha, omega, d, eta_c, eta_a)| ModelParams {
            recruitment,
            mu,
            beta,
            phi,
            rho,
            alpha,
            omega,
            d,
            eta_c,
            eta_a,
        })
}

/// Fractions of the carrying population for each compartment.
pub fn state_fractions() -> impl Strategy<Value = [f64; 4]> {
    [0.01..2.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64]
}

pub fn scaled_state(p: &ModelParams, f: [f64; 4]) -> State {
    let cap = p.carrying_population();
    State::new(f[0] * cap, f[1] * cap, f[2] * cap, f[3] * cap)
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}
