//! Schur–Cohn (Jury) test for all roots of a monic polynomial lying in the
//! open unit disk.
//!
//! For `p(λ) = λ^k + p1 λ^{k-1} + … + p_k` the roots are inside the disk iff
//!
//! 1. `p(1) > 0`,
//! 2. `(-1)^k p(-1) > 0`,
//! 3. the `(k-1)x(k-1)` matrices `B± = L ± U` are positive innerwise, where
//!    `L` is lower-triangular Toeplitz with first column `(1, p1, …, p_{k-2})`
//!    and `U` is upper-anti-triangular Hankel with last row
//!    `(p_k, p_{k-1}, …, p_2)`.

use serde::{Deserialize, Serialize};

use super::matrix::{inners, SmallMatrix};
use super::polynomial::Polynomial;

/// Quantities with magnitude at or below this are treated as zero, i.e. a
/// root is taken to sit on the unit circle.
pub const BORDERLINE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskVerdict {
    Inside,
    NotInside,
    /// Some root lies on (or numerically at) the unit circle.
    Borderline,
}

impl DiskVerdict {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            DiskVerdict::Inside => Some(true),
            DiskVerdict::NotInside => Some(false),
            DiskVerdict::Borderline => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurCohnDetails {
    pub verdict: DiskVerdict,
    /// `p(1)`.
    pub p_at_one: f64,
    /// `(-1)^k p(-1)`.
    pub signed_p_at_minus_one: f64,
    /// Determinants of the inners of `B+`, outermost first.
    pub inner_dets_plus: Vec<f64>,
    /// Determinants of the inners of `B-`, outermost first.
    pub inner_dets_minus: Vec<f64>,
}

impl SchurCohnDetails {
    pub fn inside_unit_disk(&self) -> bool {
        self.verdict == DiskVerdict::Inside
    }
}

/// The pair `(B+, B-)` of dimension `k - 1`; `None` for `k = 1`.
pub fn b_matrices(poly: &Polynomial) -> Option<(SmallMatrix, SmallMatrix)> {
    let k = poly.degree();
    if k < 2 {
        return None;
    }
    let m = k - 1;
    let lower = SmallMatrix::from_fn(m, |i, j| if i >= j { poly.coeff(i - j) } else { 0.0 });
    // row i, column j holds p_{2k-2-i-j} on and below the anti-diagonal
    let upper = SmallMatrix::from_fn(m, |i, j| {
        if i + j + 2 >= k {
            poly.coeff(2 * k - 2 - i - j)
        } else {
            0.0
        }
    });
    Some((lower.add(&upper), lower.sub(&upper)))
}

pub fn schur_cohn(poly: &Polynomial) -> SchurCohnDetails {
    let k = poly.degree();
    let p_at_one = poly.eval(1.0);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let signed_p_at_minus_one = sign * poly.eval(-1.0);

    let (inner_dets_plus, inner_dets_minus) = match b_matrices(poly) {
        Some((plus, minus)) => (
            inners(&plus).iter().map(SmallMatrix::det).collect(),
            inners(&minus).iter().map(SmallMatrix::det).collect(),
        ),
        None => (Vec::new(), Vec::new()),
    };

    let tested = [p_at_one, signed_p_at_minus_one]
        .into_iter()
        .chain(inner_dets_plus.iter().copied())
        .chain(inner_dets_minus.iter().copied());

    let mut verdict = DiskVerdict::Inside;
    for v in tested {
        if v.abs() <= BORDERLINE_TOL {
            if verdict == DiskVerdict::Inside {
                verdict = DiskVerdict::Borderline;
            }
        } else if v < 0.0 {
            verdict = DiskVerdict::NotInside;
        }
    }

    SchurCohnDetails {
        verdict,
        p_at_one,
        signed_p_at_minus_one,
        inner_dets_plus,
        inner_dets_minus,
    }
}
