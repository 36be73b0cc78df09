//! The approximate-functional-equation weight
//!
//!   V(x) = (1/2πi) ∫_{(σ)} (2πx)^{−u} · Γ(k/2 + u)/Γ(k/2) · du/u,
//!
//! a smooth cutoff with V → 1 as x → 0⁺ and super-polynomial decay. Shifting
//! the contour right past the Γ poles identifies V(x) with the regularized
//! upper incomplete gamma Q(k/2, 2πx); for even k this is the finite sum
//! e^{−2πx} Σ_{j<k/2} (2πx)^j/j!. The closed form is the normative
//! implementation (fast inner loops); the contour quadrature is kept as an
//! independent oracle and the two are cross-checked in the test suite.

use num_complex::Complex64;

use crate::error::Error;
use crate::quadrature::integrate;
use crate::special::gamma::{gamma, regularized_upper_gamma_int};
use crate::tolerances::AFE_WEIGHT_CUTOFF;
use crate::Result;

/// Evaluation strategy for [`WeightFunctionV`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalMethod {
    /// Incomplete-gamma closed form (normative).
    ClosedForm,
    /// Vertical-line contour quadrature at Re(u) = sigma, |Im(u)| ≤ t_max.
    Quadrature { sigma: f64, t_max: f64 },
}

/// The AFE weight for a fixed even weight k.
#[derive(Debug, Clone, Copy)]
pub struct WeightFunctionV {
    pub k: u32,
    pub method: EvalMethod,
}

impl WeightFunctionV {
    /// Closed-form evaluator for even k ≥ 2.
    ///
    /// # Errors
    /// [`Error::DomainError`] for odd or zero k.
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 || !k.is_multiple_of(2) {
            return Err(Error::DomainError(format!(
                "weight must be an even integer ≥ 2, got {k}"
            )));
        }
        Ok(Self {
            k,
            method: EvalMethod::ClosedForm,
        })
    }

    /// Same weight, evaluated by contour quadrature (oracle).
    pub fn with_quadrature(mut self, sigma: f64, t_max: f64) -> Self {
        self.method = EvalMethod::Quadrature { sigma, t_max };
        self
    }

    /// V(x).
    ///
    /// # Errors
    /// [`Error::DomainError`] for x ≤ 0 (and for oracle contour parameters
    /// that cannot reach the tail tolerance).
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.method {
            EvalMethod::ClosedForm => weight_v(self.k, x),
            EvalMethod::Quadrature { sigma, t_max } => weight_v_oracle(self.k, x, sigma, t_max),
        }
    }

    /// Smallest x* with V(x) < eps for all x > x* (bisection; V is strictly
    /// decreasing). Used to pick AFE truncation lengths.
    pub fn truncation_point(&self, eps: f64) -> f64 {
        let v = |x: f64| weight_v(self.k, x).expect("x > 0 by construction");
        let mut lo = 1e-9;
        let mut hi = 1.0;
        while v(hi) >= eps {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if v(mid) >= eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Default truncation point at the crate-wide AFE cutoff.
    pub fn default_truncation_point(&self) -> f64 {
        self.truncation_point(AFE_WEIGHT_CUTOFF)
    }
}

/// V(x) by the incomplete-gamma closed form Q(k/2, 2πx).
///
/// # Errors
/// [`Error::DomainError`] for x ≤ 0 or invalid k.
pub fn weight_v(k: u32, x: f64) -> Result<f64> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::DomainError(format!(
            "weight must be an even integer ≥ 2, got {k}"
        )));
    }
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::DomainError(format!(
            "weight_v requires x > 0, got {x}"
        )));
    }
    Ok(regularized_upper_gamma_int(k / 2, 2.0 * std::f64::consts::PI * x))
}

/// V(x) by numerical quadrature of the defining vertical-line integral at
/// Re(u) = sigma, truncated at |Im(u)| = t_max. Independent of sigma by
/// contour shifting; this is the oracle the closed form is validated against.
///
/// # Errors
/// [`Error::DomainError`] when x ≤ 0, sigma ≤ 0, or t_max leaves a tail
/// above 1e−13 (the Γ factor decays like e^{−π|t|/2}, so t_max ≈ 40 is
/// already far more than enough for every use in this crate).
pub fn weight_v_oracle(k: u32, x: f64, sigma: f64, t_max: f64) -> Result<f64> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::DomainError(format!(
            "weight must be an even integer ≥ 2, got {k}"
        )));
    }
    if x <= 0.0 || sigma <= 0.0 {
        return Err(Error::DomainError(format!(
            "weight_v_oracle requires x > 0 and sigma > 0, got x = {x}, sigma = {sigma}"
        )));
    }
    let half_k = k as f64 / 2.0;
    let gamma_half_k = gamma(Complex64::new(half_k, 0.0));
    let two_pi_x = 2.0 * std::f64::consts::PI * x;

    let integrand = |t: f64| -> Complex64 {
        let u = Complex64::new(sigma, t);
        let power = (-u * two_pi_x.ln()).exp(); // (2πx)^{−u}
        power * gamma(Complex64::new(half_k, 0.0) + u) / (gamma_half_k * u)
    };

    // Tail check: the integrand magnitude at ±t_max must be negligible.
    let edge = integrand(t_max).norm().max(integrand(-t_max).norm());
    if edge > 1e-13 {
        return Err(Error::DomainError(format!(
            "contour truncation t_max = {t_max} leaves integrand magnitude {edge:.3e} > 1e-13"
        )));
    }

    // (1/2πi) ∫ F(u) du along the vertical line = (1/2π) ∫ F(σ+it) dt.
    let result = integrate(integrand, -t_max, t_max)?;
    Ok(result.value.re / (2.0 * std::f64::consts::PI))
}
