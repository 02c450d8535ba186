//! Root-finding cross-check for the Schur–Cohn test: eigenvalues of the
//! companion matrix.

use nalgebra::DMatrix;
use nalgebra::Complex;

use super::polynomial::Polynomial;
use super::schur_cohn::DiskVerdict;
use crate::error::{Error, Result};

/// Moduli within this distance of 1 are reported as borderline.
pub const ORACLE_BORDER_TOL: f64 = 1e-9;

pub const MAX_ORACLE_DEGREE: usize = 8;

/// Frobenius companion matrix; its characteristic polynomial is `poly`.
pub fn companion_matrix(poly: &Polynomial) -> DMatrix<f64> {
    let k = poly.degree();
    DMatrix::from_fn(k, k, |i, j| {
        if i == 0 {
            -poly.coeff(j + 1)
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    })
}

pub fn roots(poly: &Polynomial) -> Result<Vec<Complex<f64>>> {
    if poly.degree() > MAX_ORACLE_DEGREE {
        return Err(Error::InvalidPolynomial(format!(
            "degree {} exceeds {MAX_ORACLE_DEGREE}",
            poly.degree()
        )));
    }
    let schur = companion_matrix(poly)
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

pub fn spectral_radius(poly: &Polynomial) -> Result<f64> {
    Ok(roots(poly)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Verdict from the largest root modulus.
pub fn roots_inside_unit_disk_oracle(poly: &Polynomial) -> Result<DiskVerdict> {
    let r = spectral_radius(poly)?;
    Ok(if r < 1.0 - ORACLE_BORDER_TOL {
        DiskVerdict::Inside
    } else if r > 1.0 + ORACLE_BORDER_TOL {
        DiskVerdict::NotInside
    } else {
        DiskVerdict::Borderline
    })
}

/// Distance from the unit circle of the root closest to it.
pub fn distance_to_unit_circle(poly: &Polynomial) -> Result<f64> {
    Ok(roots(poly)?.iter().map(|z| (z.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min))
}
