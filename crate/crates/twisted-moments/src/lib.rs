//! Numerical toolkit for moments of twisted modular L-functions.
//!
//! The crate builds, from first principles, every ingredient needed to
//! compute central values L(1/2, f ⊗ χ) for holomorphic newforms f of prime
//! level q and primitive Dirichlet characters χ of prime modulus p, and to
//! scan the resulting second moments across a (q, p) grid:
//!
//! * [`arith`] — modular arithmetic, primality, multiplicative functions;
//! * [`characters`] — Dirichlet characters mod p and Gauss sums;
//! * [`quadrature`] — adaptive Gauss–Legendre integration;
//! * [`special`] — Γ, the AFE weight V, Bessel J, oscillatory integrals,
//!   Poisson summation checks;
//! * [`exp_sums`] — Kloosterman sums and complete-sum rearrangement
//!   identities with brute-force oracles;
//! * [`modsym`] — weight-2 modular symbols: exact rational cuspidal spaces
//!   and Hecke eigensystems at prime level;
//! * [`eigendata`] — normalized Hecke eigenvalue series, their invariant
//!   battery, and the eigendata file format;
//! * [`petersson`] — the Petersson trace formula: geometric side, harmonic
//!   weights, and spectral-average cross-checks;
//! * [`lfunctions`] — approximate functional equation, numerically recovered
//!   root numbers, central values, and twisted moments;
//! * [`scan`] — the (q, p) grid scan with deterministic CSV output;
//! * [`verify`] — named verification suites used by the CLI.
//!
//! Every identity that admits an independent check is covered by one: exact
//! sums against brute force, closed forms against defining integrals,
//! eigenvalues against point counts, and the trace formula against both
//! sides of its own identity. Tolerances are centralized in [`tolerances`].

// Validation guards are written as `!(x >= 1.0)` / `!(x > 0.0)` on purpose:
// the negated comparison rejects NaN, while the un-negated form clippy
// suggests would silently accept it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod characters;
pub mod error;
pub mod eigendata;
pub mod exp_sums;
pub mod lfunctions;
pub mod modsym;
pub mod petersson;
pub mod quadrature;
pub mod scan;
pub mod special;
pub mod tolerances;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
