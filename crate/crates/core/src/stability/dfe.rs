//! Local stability of the disease-free equilibrium: Jacobian, its
//! characteristic polynomial and the sufficient conditions that place the
//! polynomial's roots inside the unit disk.

use serde::{Deserialize, Serialize};

use super::matrix::SmallMatrix;
use super::polynomial::Polynomial;
use super::schur_cohn::{schur_cohn, DiskVerdict, SchurCohnDetails};
use crate::model::{derived_constants, DerivedConstants, ModelParams};

/// Denominators below this are treated as zero in the sandwich inequality.
const SANDWICH_DENOM_TOL: f64 = 1e-12;

/// Linearization at `(Λ/μ, 0, 0, 0)`.
pub fn jacobian_dfe(p: &ModelParams) -> SmallMatrix {
    let dc = derived_constants(p);
    let b = p.beta;
    SmallMatrix::from_rows(&[
        [-p.mu, -b, -b * p.eta_c, -b * p.eta_a],
        [0.0, b - dc.c1, b * p.eta_c + p.omega, b * p.eta_a + p.alpha],
        [0.0, p.phi, -dc.c3, 0.0],
        [0.0, p.rho, 0.0, -dc.c2],
    ])
}

/// Closed-form coefficients of `det(λI - J(E0)) = λ⁴ + p1 λ³ + p2 λ² + p3 λ + p4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharPoly4 {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub constants: DerivedConstants,
}

impl CharPoly4 {
    pub fn coeffs(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::monic(self.coeffs().to_vec()).expect("four finite coefficients")
    }
}

pub fn char_poly_dfe(p: &ModelParams) -> CharPoly4 {
    let dc = derived_constants(p);
    let (c1, c2, c3, mu, b) = (dc.c1, dc.c2, dc.c3, p.mu, p.beta);
    let gap = dc.r0_denominator * (1.0 - dc.r0());
    // sum of the principal 2x2 minors of the infective block
    let minors = (c1 - b) * (c2 + c3) + c2 * c3
        - (b * p.eta_a + p.alpha) * p.rho
        - (b * p.eta_c + p.omega) * p.phi;
    CharPoly4 {
        p1: c1 + c2 + c3 + mu - b,
        p2: mu * (c1 + c2 + c3 - b) + minors,
        p3: mu * minors + gap,
        p4: mu * gap,
        constants: dc,
    }
}

/// Coefficients `p1..pn` of `det(λI - m)` by the Faddeev–LeVerrier
/// recursion.
pub fn characteristic_coefficients(m: &SmallMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut coeffs = Vec::with_capacity(n);
    let mut aux = SmallMatrix::identity(n);
    for k in 1..=n {
        if k > 1 {
            aux = m.mul(&aux).add(&SmallMatrix::identity(n).scale(coeffs[k - 2]));
        }
        let c = -m.mul(&aux).trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}

/// One inequality `lhs < rhs` with its evaluated sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl Condition {
    fn less_than(lhs: f64, rhs: f64) -> Self {
        Self { holds: lhs < rhs, lhs, rhs }
    }

    fn positive(value: f64) -> Self {
        Self::less_than(0.0, value)
    }
}

/// Every checked inequality, each in the form `lhs < rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    /// `R0 < 1`.
    pub r0_below_one: Condition,
    /// `0 < p(1)`.
    pub p_at_one: Condition,
    /// `0 < (-1)^4 p(-1)`.
    pub p_at_minus_one: Condition,
    /// `0 <` smallest inner determinant of `B3+`.
    pub innerwise_plus: Condition,
    /// `0 <` smallest inner determinant of `B3-`.
    pub innerwise_minus: Condition,
    /// `C2 < 1`.
    pub c2_below_one: Condition,
    /// `C3 < 1`.
    pub c3_below_one: Condition,
    /// `β < C2 C3 / ((1 - C2)(1 - C3))`.
    pub beta_bound: Condition,
    /// `p2 < 1 + p4`.
    pub p2_bound: Condition,
    /// `μ < 1 / (𝒟 (1 - R0))`.
    pub mu_bound: Condition,
    /// `-(1 - p4²)(1 + p2 + p4)/(p1 + p3) < p4 p1 - p3`.
    pub sandwich_lower: Condition,
    /// `p4 p1 - p3 < (1 - p4)²(1 + p4 - p2)/(p1 - p3)`.
    pub sandwich_upper: Condition,
    /// `β < C1`, implied by `R0 < 1`.
    pub beta_below_c1: Condition,
}

impl Conditions {
    /// The sufficient conditions for local stability besides `R0 < 1`.
    pub fn sufficient_conditions(&self) -> [Condition; 7] {
        [
            self.c2_below_one,
            self.c3_below_one,
            self.beta_bound,
            self.p2_bound,
            self.mu_bound,
            self.sandwich_lower,
            self.sandwich_upper,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    LocallyStable,
    Unstable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub r0: f64,
    pub char_poly: CharPoly4,
    pub schur_cohn: SchurCohnDetails,
    pub conditions: Conditions,
    pub verdict: StabilityVerdict,
}

impl StabilityReport {
    pub fn to_json_pretty(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

/// `|B3+| > 0` in divided form, falling back to the determinant when
/// `p1 + p3` is not safely positive.
fn sandwich_lower(p1: f64, p2: f64, p3: f64, p4: f64) -> Condition {
    let middle = p4 * p1 - p3;
    let numer = (1.0 - p4 * p4) * (1.0 + p2 + p4);
    let denom = p1 + p3;
    if denom > SANDWICH_DENOM_TOL {
        Condition::less_than(-numer / denom, middle)
    } else {
        Condition::positive(numer + denom * middle)
    }
}

/// `|B3-| > 0` in divided form, falling back to the determinant when
/// `p1 - p3` is not safely positive.
fn sandwich_upper(p1: f64, p2: f64, p3: f64, p4: f64) -> Condition {
    let middle = p4 * p1 - p3;
    let numer = (1.0 - p4).powi(2) * (1.0 + p4 - p2);
    let denom = p1 - p3;
    if denom > SANDWICH_DENOM_TOL {
        Condition::less_than(middle, numer / denom)
    } else {
        Condition::positive(numer - denom * middle)
    }
}

pub fn dfe_local_stability(p: &ModelParams) -> StabilityReport {
    let cp = char_poly_dfe(p);
    let dc = cp.constants;
    let r0 = dc.r0();
    let (p1, p2, p3, p4) = (cp.p1, cp.p2, cp.p3, cp.p4);
    let sc = schur_cohn(&cp.polynomial());

    let min_det = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let mu_rhs = {
        let x = dc.r0_denominator * (1.0 - r0);
        if x == 0.0 {
            f64::MAX
        } else {
            1.0 / x
        }
    };
    let beta_rhs = dc.c2 * dc.c3 / ((1.0 - dc.c2) * (1.0 - dc.c3));

    let conditions = Conditions {
        r0_below_one: Condition::less_than(r0, 1.0),
        p_at_one: Condition::positive(sc.p_at_one),
        p_at_minus_one: Condition::positive(sc.signed_p_at_minus_one),
        innerwise_plus: Condition::positive(min_det(&sc.inner_dets_plus)),
        innerwise_minus: Condition::positive(min_det(&sc.inner_dets_minus)),
        c2_below_one: Condition::less_than(dc.c2, 1.0),
        c3_below_one: Condition::less_than(dc.c3, 1.0),
        beta_bound: Condition {
            // the bound is only meaningful once C2 < 1 and C3 < 1
            holds: dc.c2 < 1.0 && dc.c3 < 1.0 && p.beta < beta_rhs,
            lhs: p.beta,
            rhs: beta_rhs,
        },
        p2_bound: Condition::less_than(p2, 1.0 + p4),
        mu_bound: Condition::less_than(p.mu, mu_rhs),
        sandwich_lower: sandwich_lower(p1, p2, p3, p4),
        sandwich_upper: sandwich_upper(p1, p2, p3, p4),
        beta_below_c1: Condition::less_than(p.beta, dc.c1),
    };

    let verdict = if r0 > 1.0 || sc.verdict == DiskVerdict::NotInside {
        StabilityVerdict::Unstable
    } else if r0 < 1.0 && conditions.sufficient_conditions().iter().all(|c| c.holds) {
        StabilityVerdict::LocallyStable
    } else {
        StabilityVerdict::Inconclusive
    };

    StabilityReport {
        r0,
        char_poly: cp,
        schur_cohn: sc,
        conditions,
        verdict,
    }
}
