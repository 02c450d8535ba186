use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monic real polynomial `λ^k + p1 λ^{k-1} + … + p_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    /// `p1..p_k`; the leading coefficient 1 is implicit.
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn monic(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("degree must be at least 1".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial(format!("non-finite coefficient {c}")));
        }
        Ok(Self { coeffs })
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[f64]) -> Result<Self> {
        let mut full = vec![1.0];
        for r in roots {
            let mut next = vec![0.0; full.len() + 1];
            for (k, c) in full.iter().enumerate() {
                next[k] += c;
                next[k + 1] -= r * c;
            }
            full = next;
        }
        Self::monic(full[1..].to_vec())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `p_j` with `p_0 = 1` and zero outside `0..=k`.
    pub fn coeff(&self, j: usize) -> f64 {
        match j {
            0 => 1.0,
            j if j <= self.degree() => self.coeffs[j - 1],
            _ => 0.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(1.0, |acc, c| acc * x + c)
    }
}
