//! Special functions: complex Γ, the AFE weight V, Bessel J in both regimes,
//! oscillatory integrals with stationary-phase comparison, and a numerical
//! Poisson-summation check.

pub mod bessel;
pub mod gamma;
pub mod oscillatory;
pub mod poisson_check;
pub mod weight_v;

pub use bessel::bessel_j;
pub use gamma::{gamma, gamma_real, regularized_upper_gamma_int};
pub use oscillatory::{
    oscillatory_v_integral, stationary_phase_compare, BivariateCutoff, OscillatoryKind,
    OscillatorySpec, SmoothBump, StationaryPhaseComparison,
};
pub use poisson_check::{numeric_poisson_check, PoissonCheckResult};
pub use weight_v::{weight_v, weight_v_oracle, WeightFunctionV};
