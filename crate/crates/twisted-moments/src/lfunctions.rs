//! Central values of twisted L-functions via the approximate functional
//! equation, with numerically determined root numbers.
//!
//! For a holomorphic newform f of prime level q and even weight k, and a
//! primitive character χ mod p with p ∤ q, the twist L(s, f×χ) has conductor
//! q p² and completed form Λ(s) = (p√q/(2π))^s Γ(s + (k−1)/2) L(s, f×χ)
//! satisfying Λ(s) = ε Λ̄(1 − s) for some |ε| = 1. Balancing the standard
//! contour-shift argument at a free parameter X > 0 gives, at the center,
//!
//!   L(1/2, f×χ) = Σ_n λ(n)χ(n) n^{−1/2} V(n/(X√q p))
//!               + ε Σ_n λ(n)χ̄(n) n^{−1/2} V(nX/(√q p)),
//!
//! an exact identity for every X, with V the incomplete-gamma weight of
//! [`WeightFunctionV`] — both sums decay fast beyond length ≈ √q·p. No
//! closed form for ε is assumed: evaluating the identity at two balance
//! parameters X₁ ≠ X₂ and eliminating L(1/2) determines ε as a ratio of
//! sum differences, and a third balance point over-determines the system as
//! a consistency check.

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::eigendata::NewformEigendata;
use crate::error::Error;
use crate::modsym::{build_space, genus_x0_prime};
use crate::petersson::{dual_moment_check, solve_harmonic_weights, DualMomentReport, HarmonicWeights};
use crate::special::weight_v::WeightFunctionV;
use crate::tolerances::{AFE_WEIGHT_CUTOFF, ROOT_NUMBER_UNIT_TOL};
use crate::Result;

/// Second balance parameter of the normative root-number solve (the first
/// is X = 1). Far enough from 1 that the dual-sum difference is of unit
/// scale, close enough that both sums stay at the same length scale.
pub const ROOT_NUMBER_X2: f64 = 1.25;

/// Central value of one twist, together with the solved root number and
/// truncation diagnostics.
#[derive(Debug, Clone)]
pub struct CentralValue {
    /// Level of the form.
    pub q: u64,
    /// Modulus of the twisting character.
    pub p: u64,
    pub k: u32,
    pub form_label: String,
    pub character_label: String,
    /// L(1/2, f×χ).
    pub value: Complex64,
    /// Root number ε solved from the two-balance-point system.
    pub root_number: Complex64,
    /// Length at which the AFE sums were truncated.
    pub afe_length: u64,
    /// Heuristic magnitude of the dropped tail (Deligne-bounded terms past
    /// the truncation); an estimate, not a certificate.
    pub error_estimate: f64,
}

/// How a moment over the newform basis is weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// Σ_f |L(1/2, f×χ)|².
    Natural,
    /// (1/N) Σ_f ω_f |Σ_n χ(n) λ_f(n) V(n/N)|² at the AFE length N = √q·p,
    /// with ω_f the harmonic weights of the Petersson formula.
    Harmonic,
}

impl std::fmt::Display for Weighting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Weighting::Natural => write!(f, "natural"),
            Weighting::Harmonic => write!(f, "harmonic"),
        }
    }
}

/// A second moment of central values over the newform basis of one level.
#[derive(Debug, Clone)]
pub struct MomentValue {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub character_label: String,
    pub moment: f64,
    pub weighting: Weighting,
    /// Number of newforms averaged over (the genus of X₀(q) at weight 2).
    pub dim: usize,
}

/// Everything level-wide that moment computations over many characters can
/// share: the eigenbasis and, when the space is nonempty, the harmonic
/// weights.
#[derive(Debug, Clone)]
pub struct LevelData {
    pub q: u64,
    pub k: u32,
    pub forms: Vec<NewformEigendata>,
    /// Absent exactly when the space is empty (genus 0).
    pub weights: Option<HarmonicWeights>,
}

impl LevelData {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }
}

/// Per-character cell summary used by grid scans: both moment weightings
/// plus the extremal central value.
#[derive(Debug, Clone)]
pub struct CellMoments {
    pub natural: f64,
    pub harmonic: f64,
    /// max_f |L(1/2, f×χ)|².
    pub max_central_sq: f64,
    /// Largest dropped-tail estimate among the central values in the cell.
    pub max_error_estimate: f64,
    pub dim: usize,
}

/// Eigendata length needed to evaluate [`central_value`] at this
/// configuration: the longer of the value sums (stretched by `multiplier`)
/// and the off-balance sums of the root-number solve.
///
/// # Errors
/// [`Error::DomainError`] for an unsupported weight or a multiplier < 1.
pub fn afe_required_length(q: u64, p: u64, k: u32, multiplier: f64) -> Result<u64> {
    if !(multiplier >= 1.0) {
        return Err(Error::DomainError(format!(
            "AFE length multiplier must be ≥ 1, got {multiplier}"
        )));
    }
    let weight_v = WeightFunctionV::new(k)?;
    let x_star = weight_v.truncation_point(AFE_WEIGHT_CUTOFF);
    let base = (q as f64).sqrt() * p as f64;
    Ok((x_star * base * multiplier.max(ROOT_NUMBER_X2)).ceil() as u64 + 1)
}

fn validate_twist(q: u64, chi: &DirichletCharacter) -> Result<u64> {
    let p = chi.modulus();
    if p == q {
        return Err(Error::DomainError(
            "twist modulus must be coprime to the level".into(),
        ));
    }
    if !chi.is_primitive() {
        return Err(Error::DomainError(
            "twists must be primitive (nontrivial) characters".into(),
        ));
    }
    Ok(p)
}

/// The two balanced AFE sums at parameter `x`, truncated where the weight
/// drops below [`AFE_WEIGHT_CUTOFF`] (times `multiplier` in length):
/// A = Σ λχ(n) n^{−1/2} V(n/(X√q p)) and B = Σ λχ̄(n) n^{−1/2} V(nX/(√q p)).
/// Returns (A, B, truncation length of A).
fn balanced_sums(
    form: &NewformEigendata,
    chi: &DirichletCharacter,
    x: f64,
    multiplier: f64,
) -> Result<(Complex64, Complex64, u64)> {
    let q = form.level();
    let p = validate_twist(q, chi)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::DomainError(format!(
            "balance parameter must be positive and finite, got {x}"
        )));
    }
    if !(multiplier >= 1.0) {
        return Err(Error::DomainError(format!(
            "AFE length multiplier must be ≥ 1, got {multiplier}"
        )));
    }
    let weight_v = WeightFunctionV::new(form.weight())?;
    let x_star = weight_v.truncation_point(AFE_WEIGHT_CUTOFF);
    let base = (q as f64).sqrt() * p as f64;
    let len_a = (x_star * base * x * multiplier).ceil() as u64;
    let len_b = (x_star * base / x * multiplier).ceil() as u64;
    let required = len_a.max(len_b).max(1);
    if form.n_max() < required {
        return Err(Error::EigendataTooShort {
            required,
            available: form.n_max(),
        });
    }
    let chi_bar = chi.conjugate();
    let mut a = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for n in 1..=len_a.max(len_b) {
        if n % p == 0 {
            continue;
        }
        let coeff = form.lambda(n)? / (n as f64).sqrt();
        if n <= len_a {
            a += chi.evaluate(n as i64) * coeff * weight_v.eval(n as f64 / (x * base))?;
        }
        if n <= len_b {
            b += chi_bar.evaluate(n as i64) * coeff * weight_v.eval(n as f64 * x / base)?;
        }
    }
    Ok((a, b, len_a))
}

/// Root number from two explicit balance parameters: eliminating L(1/2)
/// from the two balanced identities gives
/// ε = (A(X₁) − A(X₂)) / (B(X₂) − B(X₁)).
///
/// # Errors
/// [`Error::SystemSingular`] when the dual-sum difference is at rounding
/// scale; [`Error::NumericallyUnstable`] when the solved ε strays from the
/// unit circle by more than [`ROOT_NUMBER_UNIT_TOL`]; domain and eigendata
/// errors as in [`central_value`].
pub fn root_number_at(
    form: &NewformEigendata,
    chi: &DirichletCharacter,
    x1: f64,
    x2: f64,
) -> Result<Complex64> {
    let (a1, b1, _) = balanced_sums(form, chi, x1, 1.0)?;
    let (a2, b2, _) = balanced_sums(form, chi, x2, 1.0)?;
    let det = b2 - b1;
    if det.norm() < 1e-10 * (1.0 + b1.norm() + b2.norm()) {
        return Err(Error::SystemSingular {
            x1,
            x2,
            det: det.norm(),
        });
    }
    let epsilon = (a1 - a2) / det;
    let deviation = (epsilon.norm() - 1.0).abs();
    if deviation > ROOT_NUMBER_UNIT_TOL {
        return Err(Error::NumericallyUnstable {
            deviation,
            limit: ROOT_NUMBER_UNIT_TOL,
        });
    }
    Ok(epsilon)
}

/// Root number at the normative balance pair (1, [`ROOT_NUMBER_X2`]).
///
/// # Errors
/// As for [`root_number_at`].
pub fn root_number(form: &NewformEigendata, chi: &DirichletCharacter) -> Result<Complex64> {
    root_number_at(form, chi, 1.0, ROOT_NUMBER_X2)
}

/// L(1/2, f×χ) from the balanced AFE at X = 1, with the root number solved
/// numerically. `afe_length_multiplier` ≥ 1 stretches the truncation beyond
/// the weight-function cutoff; the value must be stable under doubling it.
///
/// # Errors
/// [`Error::DomainError`] for an imprimitive twist, p = q, or a multiplier
/// < 1; [`Error::EigendataTooShort`] (reporting the required length) when
/// λ(n) is not tabulated far enough; [`Error::SystemSingular`] and
/// [`Error::NumericallyUnstable`] from the root-number solve.
pub fn central_value(
    form: &NewformEigendata,
    chi: &DirichletCharacter,
    afe_length_multiplier: f64,
) -> Result<CentralValue> {
    // Report the full requirement (value sums and both balance points) up
    // front, rather than whichever partial sum happens to fail first.
    let p = validate_twist(form.level(), chi)?;
    let required = afe_required_length(form.level(), p, form.weight(), afe_length_multiplier)?;
    if form.n_max() < required {
        return Err(Error::EigendataTooShort {
            required,
            available: form.n_max(),
        });
    }
    let epsilon = root_number(form, chi)?;
    let (a, b, len_a) = balanced_sums(form, chi, 1.0, afe_length_multiplier)?;
    let value = a + epsilon * b;

    // Dropped-tail estimate: Deligne-bounded terms |λ(n)| ≤ d(n) past the
    // truncation, using the tabulated |λ| where available and the final
    // weight value as a floor. Heuristic scale, not a certificate.
    let q = form.level();
    let weight_v = WeightFunctionV::new(form.weight())?;
    let base = (q as f64).sqrt() * p as f64;
    let mut tail = 0.0f64;
    for n in (len_a + 1)..=form.n_max() {
        tail += form.lambda(n)?.abs() / (n as f64).sqrt() * weight_v.eval(n as f64 / base)?;
    }
    let floor = weight_v.eval(len_a.max(1) as f64 / base)?;
    let error_estimate = (1.0 + epsilon.norm()) * tail.max(floor);

    Ok(CentralValue {
        q,
        p,
        k: form.weight(),
        form_label: form.label(),
        character_label: chi.label(),
        value,
        root_number: epsilon,
        afe_length: len_a,
        error_estimate,
    })
}

/// Build the shared per-level inputs for moment computations: the newform
/// eigenbasis up to `n_max` and (for nonempty spaces) harmonic weights
/// calibrated at truncation `weight_c_max`. Genus-0 levels yield an empty
/// basis and no weights — their moments are exactly zero.
///
/// # Errors
/// [`Error::DomainError`] for a weight other than 2 (only weight-2
/// eigendata can be computed on demand from modular symbols), a composite
/// level, or `n_max` < 30; solver errors as in
/// [`solve_harmonic_weights`].
pub fn prepare_level(q: u64, k: u32, n_max: u64, weight_c_max: u64) -> Result<LevelData> {
    if k != 2 {
        return Err(Error::DomainError(format!(
            "only weight 2 is supported for on-demand eigendata, got k = {k}"
        )));
    }
    if genus_x0_prime(q)? == 0 {
        return Ok(LevelData {
            q,
            k,
            forms: Vec::new(),
            weights: None,
        });
    }
    let space = build_space(q)?;
    let forms = crate::eigendata::newform_eigendata(&space, n_max)?;
    let weights = solve_harmonic_weights(&forms, weight_c_max, None)?;
    Ok(LevelData {
        q,
        k,
        forms,
        weights: Some(weights),
    })
}

/// The harmonic-weighted moment of smoothed twisted sums at real length N:
/// (1/N) Σ_f ω_f |Σ_n χ(n) λ_f(n) V(n/N)|².
fn harmonic_spectral_moment(
    level: &LevelData,
    chi: &DirichletCharacter,
    n_len: f64,
) -> Result<f64> {
    let weights = level
        .weights
        .as_ref()
        .expect("caller guarantees a nonempty space");
    let p = chi.modulus();
    let weight_v = WeightFunctionV::new(level.k)?;
    let cut = (weight_v.truncation_point(AFE_WEIGHT_CUTOFF) * n_len).ceil() as u64;
    let available = level.forms.iter().map(NewformEigendata::n_max).min().unwrap_or(0);
    if available < cut {
        return Err(Error::EigendataTooShort {
            required: cut,
            available,
        });
    }
    let mut moment = 0.0f64;
    for (form, &w) in level.forms.iter().zip(&weights.weights) {
        let mut twisted = Complex64::new(0.0, 0.0);
        for n in 1..=cut {
            if n % p == 0 {
                continue;
            }
            twisted += chi.evaluate(n as i64) * form.lambda(n)? * weight_v.eval(n as f64 / n_len)?;
        }
        moment += w * twisted.norm_sqr();
    }
    Ok(moment / n_len)
}

/// Both moment weightings and the extremal central value for one (level,
/// character) cell. Empty spaces give all-zero cells.
///
/// # Errors
/// As for [`central_value`], plus [`Error::EigendataTooShort`] from the
/// harmonic smoothed sums.
pub fn cell_moments(level: &LevelData, chi: &DirichletCharacter) -> Result<CellMoments> {
    validate_twist(level.q, chi)?;
    if level.forms.is_empty() {
        return Ok(CellMoments {
            natural: 0.0,
            harmonic: 0.0,
            max_central_sq: 0.0,
            max_error_estimate: 0.0,
            dim: 0,
        });
    }
    let mut natural = 0.0f64;
    let mut max_central_sq = 0.0f64;
    let mut max_error_estimate = 0.0f64;
    for form in &level.forms {
        let cv = central_value(form, chi, 1.0)?;
        let sq = cv.value.norm_sqr();
        natural += sq;
        max_central_sq = max_central_sq.max(sq);
        max_error_estimate = max_error_estimate.max(cv.error_estimate);
    }
    let n_len = (level.q as f64).sqrt() * chi.modulus() as f64;
    let harmonic = harmonic_spectral_moment(level, chi, n_len)?;
    Ok(CellMoments {
        natural,
        harmonic,
        max_central_sq,
        max_error_estimate,
        dim: level.dim(),
    })
}

/// One weighting of the second moment Σ_f |L(1/2, f×χ)|² (natural) or its
/// harmonic smoothed-sum counterpart, packaged with the cell coordinates.
///
/// # Errors
/// As for [`cell_moments`].
pub fn twisted_moment(
    level: &LevelData,
    chi: &DirichletCharacter,
    weighting: Weighting,
) -> Result<MomentValue> {
    let cell = cell_moments(level, chi)?;
    let moment = match weighting {
        Weighting::Natural => cell.natural,
        Weighting::Harmonic => cell.harmonic,
    };
    Ok(MomentValue {
        q: level.q,
        p: chi.modulus(),
        k: level.k,
        character_label: chi.label(),
        moment,
        weighting,
        dim: cell.dim,
    })
}

/// Convenience wrapper wiring [`prepare_level`] into
/// [`dual_moment_check`]: builds the eigenbasis and harmonic weights for
/// level q at truncation `c_max`, then runs the spectral-vs-geometric
/// second-moment comparison with smoothing length `n_len`.
///
/// # Errors
/// As for [`prepare_level`] and [`dual_moment_check`]; genus-0 levels have
/// no spectrum to compare and yield [`Error::EmptySpace`].
pub fn dual_moment(
    q: u64,
    chi: &DirichletCharacter,
    n_len: u64,
    c_max: u64,
) -> Result<DualMomentReport> {
    let weight_v = WeightFunctionV::new(2)?;
    let cut = (weight_v.truncation_point(AFE_WEIGHT_CUTOFF) * n_len as f64).ceil() as u64 + 1;
    let level = prepare_level(q, 2, cut.max(30), c_max)?;
    if level.forms.is_empty() {
        return Err(Error::EmptySpace { q });
    }
    let weights = level.weights.as_ref().expect("nonempty space has weights");
    dual_moment_check(&level.forms, weights, chi, n_len, c_max)
}
