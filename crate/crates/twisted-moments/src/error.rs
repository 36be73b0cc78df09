//! Crate-wide error type.
//!
//! Variants are named for the contract they enforce; call sites attach the
//! offending values so a failure in a long batch run is diagnosable from the
//! message alone.

use thiserror::Error;

/// Everything that can go wrong across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A modular inverse was requested for non-coprime arguments.
    #[error("{a} is not invertible mod {m} (gcd = {g})")]
    NotCoprime { a: i64, m: u64, g: u64 },

    /// A brute-force identity check would exceed its operation budget.
    #[error("brute-force budget exceeded: {terms} terms > {budget}")]
    OverflowBudget { terms: u128, budget: u128 },

    /// A special function was evaluated outside its domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Adaptive quadrature exhausted its refinement budget.
    #[error("quadrature did not converge: {panels} panels used, error estimate {estimate:.3e} > {tolerance:.3e}")]
    QuadratureNonConvergence {
        panels: usize,
        estimate: f64,
        tolerance: f64,
    },

    /// The stationary point lies outside the cutoff support.
    #[error("stationary point x0 = {x0:.6} outside cutoff support [{lo}, {hi}]")]
    StationaryPointOutsideSupport { x0: f64, lo: f64, hi: f64 },

    /// A Poisson-summation check was asked to truncate before the terms decay.
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    /// The cuspidal modular-symbol space is zero-dimensional.
    #[error("no cusp forms at level {q} (genus 0)")]
    EmptySpace { q: u64 },

    /// Simultaneous diagonalization failed to separate eigensystems.
    #[error("eigenspace degenerate at level {q}: minimal eigenvalue gap {gap:.3e}")]
    EigenspaceDegenerate { q: u64, gap: f64 },

    /// An eigendata file violates the file format.
    #[error("eigendata format error: {0}")]
    FormatError(String),

    /// Ingested eigendata violates a structural invariant.
    #[error("eigendata invariant violation: {invariant} at n = {n} ({detail})")]
    InvariantViolation {
        invariant: &'static str,
        n: u64,
        detail: String,
    },

    /// Computed eigendata cannot be written in the exact-integer file format.
    #[error("eigendata for level {q}, form {form} is not integral (a({n}) ≈ {value:.6}); the file format stores exact integers only")]
    NonIntegralEigendata { q: u64, form: usize, n: u64, value: f64 },

    /// No admissible truncation satisfies the certified tail tolerance.
    #[error("tail budget exceeded: certified tail bound {bound:.3e} > {tolerance:.3e} at c_max = {c_max} (weight {k}); no c_max ≤ {cap} suffices")]
    TailBudgetExceeded {
        bound: f64,
        tolerance: f64,
        c_max: u64,
        k: u32,
        cap: u64,
    },

    /// The harmonic-weight linear system is too ill-conditioned to trust.
    #[error("harmonic-weight system ill-conditioned: condition number {cond:.3e} ≥ {limit:.3e}")]
    IllConditioned { cond: f64, limit: f64 },

    /// A solved harmonic weight came out non-positive (upstream bug signal).
    #[error("non-positive harmonic weight ω[{index}] = {value:.6e} at level {q}")]
    NonPositiveWeight { q: u64, index: usize, value: f64 },

    /// The two balance points of the root-number solve are too close.
    #[error("balanced-AFE system singular: balance points {x1} and {x2} give determinant {det:.3e}")]
    SystemSingular { x1: f64, x2: f64, det: f64 },

    /// The recovered root number is too far from the unit circle.
    #[error("root number numerically unstable: | |ε| − 1 | = {deviation:.3e} > {limit:.3e}")]
    NumericallyUnstable { deviation: f64, limit: f64 },

    /// Eigendata does not extend far enough for the requested AFE length.
    #[error("eigendata too short: need λ(n) up to n = {required}, have {available}")]
    EigendataTooShort { required: u64, available: u64 },

    /// Configuration (CLI or JSON) is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// A verification suite found residuals above budget.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// Underlying I/O failure (file read/write, CSV).
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code mandated for this error class: 2 for configuration
    /// problems, 1 for everything else (verification/computation failures).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}
