//! Schur–Cohn criterion and local stability of the disease-free equilibrium.

mod dfe;
mod matrix;
pub mod oracle;
mod polynomial;
mod schur_cohn;

pub use dfe::{
    char_poly_dfe, characteristic_coefficients, dfe_local_stability, jacobian_dfe, CharPoly4,
    Condition, Conditions, StabilityReport, StabilityVerdict,
};
pub use matrix::{inners, is_positive_innerwise, SmallMatrix};
pub use oracle::roots_inside_unit_disk_oracle;
pub use polynomial::Polynomial;
pub use schur_cohn::{b_matrices, schur_cohn, DiskVerdict, SchurCohnDetails, BORDERLINE_TOL};
