//! Oscillatory integrals against smooth compactly supported cutoffs, and
//! their stationary-phase approximation.
//!
//! Two families arise when a twisted sum is opened by Poisson summation and
//! the Bessel kernel is split into exponentials. With a bivariate cutoff
//! V(x, y) and scale parameters (N, c, q, p):
//!
//!   𝒱₁(m₁, y)  = ∫ V(x, y) · e(−x·m₁N/(cpq)) dx                (linear phase)
//!   𝒱₂^±(m₁, y) = ∫ V(x, y) · e(±2√(xy)·N/(cq) − x·m₁N/(cpq)) dx
//!
//! 𝒱₂^± has a stationary point x₀ = p²y/m₁² when sign(m₁) matches the ±
//! branch; the leading-order stationary-phase value has magnitude
//! proportional to (cq/N)^{1/2} and phase e(ypN/(cqm₁)). Both integrals are
//! negligible when the linear frequency m₁N/(cpq) dominates, which is what
//! confines m₁ to a short window in the application.

use num_complex::Complex64;

use crate::error::Error;
use crate::quadrature::integrate_with;
use crate::tolerances::QUADRATURE_MAX_PANELS;
use crate::Result;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// C^∞ bump supported on [lo, hi], normalized to peak value 1 at the
/// midpoint: exp(4/(hi−lo) − 1/(x−lo) − 1/(hi−x)).
#[derive(Debug, Clone, Copy)]
pub struct SmoothBump {
    lo: f64,
    hi: f64,
}

impl SmoothBump {
    /// # Errors
    /// [`Error::DomainError`] unless lo < hi.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::DomainError(format!(
                "bump support requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        (4.0 / (self.hi - self.lo) - 1.0 / (x - self.lo) - 1.0 / (self.hi - x)).exp()
    }
}

/// Product cutoff V(x, y) = b_x(x)·b_y(y).
#[derive(Debug, Clone, Copy)]
pub struct BivariateCutoff {
    pub x_bump: SmoothBump,
    pub y_bump: SmoothBump,
}

impl BivariateCutoff {
    /// The standard dyadic-window cutoff on [1/2, 5/2] in both variables.
    pub fn standard() -> Self {
        Self {
            x_bump: SmoothBump::new(0.5, 2.5).expect("static support is valid"),
            y_bump: SmoothBump::new(0.5, 2.5).expect("static support is valid"),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.x_bump.eval(x) * self.y_bump.eval(y)
    }
}

/// Which oscillatory family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillatoryKind {
    /// Linear phase only.
    V1,
    /// Linear phase plus the ±2√(xy)N/(cq) square-root phase. The branch is
    /// taken from [`OscillatorySpec::sign`].
    V2,
}

/// Parameters of one oscillatory integral.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorySpec {
    /// The dyadic scale N (length of the underlying n-sum).
    pub n_scale: f64,
    pub c: u64,
    pub q: u64,
    pub p: u64,
    /// Dual (Poisson) frequency; any nonzero integer, or 0 for pure mass.
    pub m1: i64,
    /// Second cutoff variable, inside the support of the y-bump.
    pub y: f64,
    /// Branch of the square-root phase in 𝒱₂^±.
    pub sign: i8,
}

impl OscillatorySpec {
    fn cq(&self) -> f64 {
        (self.c * self.q) as f64
    }

    fn cpq(&self) -> f64 {
        (self.c * self.p * self.q) as f64
    }

    /// # Errors
    /// [`Error::DomainError`] on non-prime q/p, zero c, non-positive scale
    /// parameters, or sign ∉ {−1, +1}.
    pub fn validate(&self) -> Result<()> {
        if !crate::arith::is_prime(self.q) || !crate::arith::is_prime(self.p) {
            return Err(Error::DomainError(format!(
                "q = {} and p = {} must be prime",
                self.q, self.p
            )));
        }
        if self.c == 0 || self.n_scale <= 0.0 || self.y <= 0.0 {
            return Err(Error::DomainError(
                "oscillatory spec requires c ≥ 1, N > 0, y > 0".into(),
            ));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::DomainError(format!(
                "sign must be ±1, got {}",
                self.sign
            )));
        }
        Ok(())
    }

    /// Does c sit in the deep-modulus window c ≤ N/(p^ε·q) where the
    /// square-root phase genuinely oscillates?
    pub fn in_c2_range(&self, eps: f64) -> bool {
        (self.c as f64) <= self.n_scale / ((self.p as f64).powf(eps) * self.q as f64)
    }

    /// Total phase h(x) in radians for the given family.
    pub fn phase(&self, kind: OscillatoryKind, x: f64) -> f64 {
        let linear = -x * self.m1 as f64 * self.n_scale / self.cpq();
        match kind {
            OscillatoryKind::V1 => TWO_PI * linear,
            OscillatoryKind::V2 => {
                let root = self.sign as f64 * 2.0 * (x * self.y).sqrt() * self.n_scale / self.cq();
                TWO_PI * (root + linear)
            }
        }
    }

    /// dh/dx in radians.
    pub fn phase_deriv(&self, kind: OscillatoryKind, x: f64) -> f64 {
        let linear = -self.m1 as f64 * self.n_scale / self.cpq();
        match kind {
            OscillatoryKind::V1 => TWO_PI * linear,
            OscillatoryKind::V2 => {
                let root = self.sign as f64 * (self.y / x).sqrt() * self.n_scale / self.cq();
                TWO_PI * (root + linear)
            }
        }
    }

    /// d²h/dx² for the 𝒱₂ phase.
    pub fn phase_second_deriv_v2(&self, x: f64) -> f64 {
        -self.sign as f64 * std::f64::consts::PI * self.y.sqrt() * self.n_scale
            / (self.cq() * x.powf(1.5))
    }

    /// Stationary point x₀ = p²y/m₁² of the 𝒱₂ phase, present exactly when
    /// the sign of m₁ matches the branch.
    pub fn stationary_point(&self) -> Option<f64> {
        if self.m1 == 0 || (self.sign as i64) * self.m1 < 0 {
            return None;
        }
        let m1 = self.m1.unsigned_abs() as f64;
        Some((self.p as f64).powi(2) * self.y / (m1 * m1))
    }
}

/// Evaluate 𝒱₁ or 𝒱₂^± by adaptive quadrature over the cutoff support.
///
/// # Errors
/// [`Error::QuadratureNonConvergence`] if the refinement budget is
/// exhausted; [`Error::DomainError`] for invalid spec parameters.
pub fn oscillatory_v_integral(
    kind: OscillatoryKind,
    spec: &OscillatorySpec,
    cutoff: &BivariateCutoff,
) -> Result<Complex64> {
    spec.validate()?;
    let (lo, hi) = cutoff.x_bump.support();
    let y = spec.y;
    let f = |x: f64| {
        let amp = cutoff.eval(x, y);
        if amp == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let h = spec.phase(kind, x);
        amp * Complex64::new(h.cos(), h.sin())
    };
    // Absolute target 1e−11 (the integrand scale is ≤ 1 by bump
    // normalization, so this is 1e−11 of scale with an order of headroom
    // over the 1e−10 contract).
    Ok(integrate_with(f, lo, hi, 1e-11, QUADRATURE_MAX_PANELS)?.value)
}

/// Outcome of comparing direct quadrature of 𝒱₂^± against the leading-order
/// stationary-phase prediction.
#[derive(Debug, Clone, Copy)]
pub struct StationaryPhaseComparison {
    pub quadrature: Complex64,
    pub prediction: Complex64,
    pub relative_error: f64,
    pub x0: f64,
}

/// Compare 𝒱₂^± with its stationary-phase approximation
///   V(x₀, y) · √(2π/|h''(x₀)|) · e^{i(h(x₀) + sgn(h'')·π/4)}.
///
/// # Errors
/// [`Error::StationaryPointOutsideSupport`] when the branch admits no
/// stationary point or x₀ falls outside the x-support of the cutoff.
pub fn stationary_phase_compare(
    spec: &OscillatorySpec,
    cutoff: &BivariateCutoff,
) -> Result<StationaryPhaseComparison> {
    spec.validate()?;
    let (lo, hi) = cutoff.x_bump.support();
    let x0 = match spec.stationary_point() {
        Some(x0) if x0 > lo && x0 < hi => x0,
        Some(x0) => {
            return Err(Error::StationaryPointOutsideSupport { x0, lo, hi });
        }
        None => {
            // Sign mismatch: the phase is monotone on (0, ∞).
            return Err(Error::StationaryPointOutsideSupport {
                x0: f64::NAN,
                lo,
                hi,
            });
        }
    };

    let h0 = spec.phase(OscillatoryKind::V2, x0);
    let hpp = spec.phase_second_deriv_v2(x0);
    let amp = cutoff.eval(x0, spec.y) * (TWO_PI / hpp.abs()).sqrt();
    let corrected = h0 + hpp.signum() * std::f64::consts::FRAC_PI_4;
    let prediction = amp * Complex64::new(corrected.cos(), corrected.sin());

    let quadrature = oscillatory_v_integral(OscillatoryKind::V2, spec, cutoff)?;
    let relative_error = (quadrature - prediction).norm() / prediction.norm();

    Ok(StationaryPhaseComparison {
        quadrature,
        prediction,
        relative_error,
        x0,
    })
}

/// Zero of the instantaneous frequency h'(x) on the cutoff support, located
/// by bisection (h' is strictly monotone for the 𝒱₂ phase). Returns None
/// when h' has constant sign on the support.
pub fn frequency_zero_numeric(spec: &OscillatorySpec, cutoff: &BivariateCutoff) -> Option<f64> {
    let (mut lo, mut hi) = cutoff.x_bump.support();
    let f_lo = spec.phase_deriv(OscillatoryKind::V2, lo);
    let f_hi = spec.phase_deriv(OscillatoryKind::V2, hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_lo * f_hi > 0.0 {
        return None;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if spec.phase_deriv(OscillatoryKind::V2, mid) * f_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_real;
    use approx::assert_abs_diff_eq;

    fn spec(n_over_cq: f64, m1: i64, y: f64, sign: i8) -> OscillatorySpec {
        // q = 7, p = 5, c = 1 throughout; N scales the oscillation depth.
        OscillatorySpec {
            n_scale: n_over_cq * 7.0,
            c: 1,
            q: 7,
            p: 5,
            m1,
            y,
            sign,
        }
    }

    #[test]
    fn bump_is_supported_and_normalized() {
        let b = SmoothBump::new(0.5, 2.5).unwrap();
        assert_eq!(b.eval(0.5), 0.0);
        assert_eq!(b.eval(2.5), 0.0);
        assert_eq!(b.eval(0.0), 0.0);
        assert_abs_diff_eq!(b.eval(1.5), 1.0, epsilon = 1e-15); // peak at midpoint
        assert!(b.eval(1.0) > 0.0 && b.eval(1.0) < 1.0);
        assert!(SmoothBump::new(2.0, 1.0).is_err());
    }

    #[test]
    fn v1_zero_frequency_is_cutoff_mass() {
        // m₁ = 0: the integral is just ∫ V(x, y) dx — order 1 and real.
        let cutoff = BivariateCutoff::standard();
        let s = spec(100.0, 0, 1.5, 1);
        let got = oscillatory_v_integral(OscillatoryKind::V1, &s, &cutoff).unwrap();
        let mass = integrate_real(|x| cutoff.eval(x, 1.5), 0.5, 2.5).unwrap();
        assert!(got.im.abs() < 1e-12);
        assert_abs_diff_eq!(got.re, mass, epsilon = 1e-10);
        assert!(mass > 0.3, "cutoff mass should be order 1, got {mass}");
    }

    #[test]
    fn v1_high_frequency_is_negligible() {
        // Once the linear frequency m₁N/(cpq) is ≫ 1 the smooth cutoff has
        // no Fourier mass left: |𝒱₁| < 1e−6 of the integrand scale.
        let cutoff = BivariateCutoff::standard();
        // m₁N/(cpq) = m₁(N/cq)/p = 60·5/5 = 60 cycles per unit.
        let s = spec(5.0, 60, 1.5, 1);
        let got = oscillatory_v_integral(OscillatoryKind::V1, &s, &cutoff).unwrap();
        assert!(
            got.norm() < 1e-6,
            "high-frequency 𝒱₁ should vanish, got {:.3e}",
            got.norm()
        );
    }

    #[test]
    fn v2_wrong_sign_window_is_negligible() {
        // sign = +1 with m₁ < 0: no stationary point, so the integral is
        // below 1e−6·(cq/N)^{1/2}.
        let cutoff = BivariateCutoff::standard();
        let s = spec(1000.0, -5, 1.0, 1);
        let got = oscillatory_v_integral(OscillatoryKind::V2, &s, &cutoff).unwrap();
        let budget = 1e-6 * (1.0f64 / 1000.0).sqrt();
        assert!(
            got.norm() < budget,
            "wrong-sign 𝒱₂ = {:.3e} exceeds {budget:.3e}",
            got.norm()
        );
    }

    #[test]
    fn v2_far_outside_window_is_negligible() {
        // m₁ = 100p puts x₀ = y/10⁴ far below the support; the integral is
        // pure non-stationary oscillation and collapses to quadrature noise.
        let cutoff = BivariateCutoff::standard();
        let s = spec(10.0, 500, 1.0, 1);
        let got = oscillatory_v_integral(OscillatoryKind::V2, &s, &cutoff).unwrap();
        assert!(
            got.norm() < 1e-8,
            "out-of-window 𝒱₂ = {:.3e} should be negligible",
            got.norm()
        );
    }

    #[test]
    fn v2_conjugate_symmetry() {
        // 𝒱₂^−(−m₁) = conj(𝒱₂^+(m₁)) for a real cutoff.
        let cutoff = BivariateCutoff::standard();
        let plus = oscillatory_v_integral(OscillatoryKind::V2, &spec(200.0, 5, 1.2, 1), &cutoff)
            .unwrap();
        let minus = oscillatory_v_integral(OscillatoryKind::V2, &spec(200.0, -5, 1.2, -1), &cutoff)
            .unwrap();
        assert!((plus - minus.conj()).norm() < 1e-10);
    }

    #[test]
    fn stationary_point_formula_matches_frequency_zero() {
        // x₀ = p²y/m₁² against a blind bisection for the zero of h'.
        let cutoff = BivariateCutoff::standard();
        let s = spec(1000.0, 5, 1.0, 1);
        let x0 = s.stationary_point().unwrap();
        assert_abs_diff_eq!(x0, 1.0, epsilon = 1e-15); // 25·1/25
        let numeric = frequency_zero_numeric(&s, &cutoff).unwrap();
        assert_abs_diff_eq!(x0, numeric, epsilon = 1e-6);
    }

    #[test]
    fn stationary_phase_deep_oscillation() {
        // N/(cq) = 10³, m₁ = p, y = 1: leading-order prediction within 10%.
        let cutoff = BivariateCutoff::standard();
        let cmp = stationary_phase_compare(&spec(1000.0, 5, 1.0, 1), &cutoff).unwrap();
        assert!(
            cmp.relative_error < 0.1,
            "relative error {} too large at N/(cq)=1e3",
            cmp.relative_error
        );
        // Magnitude scales like (cq/N)^{1/2}.
        let expected_scale = (1.0f64 / 1000.0).sqrt();
        assert!(cmp.prediction.norm() > 0.1 * expected_scale);
        assert!(cmp.prediction.norm() < 10.0 * expected_scale);
    }

    #[test]
    fn stationary_phase_moderate_oscillation() {
        let cutoff = BivariateCutoff::standard();
        let cmp = stationary_phase_compare(&spec(100.0, 5, 1.0, 1), &cutoff).unwrap();
        assert!(
            cmp.relative_error < 0.1,
            "relative error {} too large at N/(cq)=1e2",
            cmp.relative_error
        );
    }

    #[test]
    fn stationary_phase_prediction_phase_matches_closed_form() {
        // h(x₀) = 2π·ypN/(cqm₁): check the phase of the prediction equals
        // that closed form plus the −π/4 Airy correction (h'' < 0 here).
        let s = spec(1000.0, 5, 1.0, 1);
        let x0 = s.stationary_point().unwrap();
        let h0 = s.phase(OscillatoryKind::V2, x0);
        let closed = TWO_PI * s.y * s.p as f64 * s.n_scale
            / ((s.c * s.q) as f64 * s.m1 as f64);
        assert_abs_diff_eq!(h0, closed, epsilon = 1e-9 * closed.abs());
        let cutoff = BivariateCutoff::standard();
        let cmp = stationary_phase_compare(&s, &cutoff).unwrap();
        let predicted_arg = (closed - std::f64::consts::FRAC_PI_4).rem_euclid(TWO_PI);
        let got_arg = cmp.prediction.arg().rem_euclid(TWO_PI);
        assert_abs_diff_eq!(predicted_arg, got_arg, epsilon = 1e-9);
    }

    #[test]
    fn stationary_point_outside_support_errors() {
        let cutoff = BivariateCutoff::standard();
        // m₁ = 100p → x₀ = 1e−4, far below the support floor 0.5.
        let res = stationary_phase_compare(&spec(1000.0, 500, 1.0, 1), &cutoff);
        assert!(matches!(
            res,
            Err(Error::StationaryPointOutsideSupport { .. })
        ));
        // Sign mismatch: no stationary point at all.
        let res = stationary_phase_compare(&spec(1000.0, -5, 1.0, 1), &cutoff);
        assert!(matches!(
            res,
            Err(Error::StationaryPointOutsideSupport { .. })
        ));
    }

    #[test]
    fn mirrored_sign_comparison_conjugates() {
        // sign = −1 with m₁ < 0 mirrors sign = +1 with |m₁|.
        let cutoff = BivariateCutoff::standard();
        let plus = stationary_phase_compare(&spec(300.0, 5, 1.0, 1), &cutoff).unwrap();
        let minus = stationary_phase_compare(&spec(300.0, -5, 1.0, -1), &cutoff).unwrap();
        assert!((plus.quadrature - minus.quadrature.conj()).norm() < 1e-10);
        assert!((plus.prediction - minus.prediction.conj()).norm() < 1e-12);
        assert_abs_diff_eq!(plus.x0, minus.x0, epsilon = 0.0);
    }

    #[test]
    fn c2_range_predicate() {
        let s = spec(1000.0, 5, 1.0, 1); // c = 1, N = 7000, q = 7
        assert!(s.in_c2_range(0.1)); // 1 ≤ 7000/(5^0.1·7) ≈ 852
        let tight = OscillatorySpec { c: 2000, ..s };
        assert!(!tight.in_c2_range(0.1));
    }
}
