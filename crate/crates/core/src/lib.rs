//! Discrete-time SICA (Susceptible–Infected–Chronic–AIDS) model built with a
//! Mickens nonstandard finite-difference scheme.
//!
//! - [`model`]: continuous model, R0 and equilibria
//! - [`nsfd`]: the discrete scheme, Gronwall envelope and Lyapunov sequences
//! - [`stability`]: Schur–Cohn test and local stability of the DFE
//! - [`reference`]: explicit Euler and RK4 baselines
//! - [`data`]: Cape Verde case study

pub mod data;
pub mod error;
pub mod model;
pub mod nsfd;
pub mod reference;
pub mod stability;
pub mod trajectory;

pub use error::{Error, Result};
pub use model::{ModelParams, State};
pub use nsfd::DenominatorFn;
pub use trajectory::Trajectory;
