//! Hypervirial perturbation theory and Padé summation for the anharmonic
//! oscillator `V(x) = ½ω²x² + ½λx² + λ²x³` (ħ = m = 1).
//!
//! The crate is organised in four layers:
//!
//! * [`series`] computes the Rayleigh–Schrödinger energy coefficients
//!   `E⁽ᵏ⁾` and moment coefficients `A_N⁽ᵏ⁾` exactly from the hypervirial
//!   and Hellmann–Feynman relations.
//! * [`pade`] builds `[N,M]` Padé approximants to the energy series and
//!   diagnoses denominator poles.
//! * [`oracle`] is an independent check: truncated-basis diagonalization and
//!   matrix Rayleigh–Schrödinger recursion, with no hypervirial machinery.
//! * [`report`] runs parameter sweeps and renders tables / CSV.

pub mod model;
pub mod oracle;
pub mod pade;
pub mod report;
pub mod scalar;
pub mod series;

mod error;

pub use error::{Error, Result};
pub use model::{ArithmeticMode, ModelSpec, Omega};
pub use pade::{build_pade, evaluate_pade, real_poles_in, taylor_residuals, PadeApproximant, PadeOrder};
pub use scalar::{Extended, Rational, Scalar, SeriesScalar};
pub use series::{compute_series, eq13_reference, growth_ratios, partial_sum, CoefficientTable, EnergySeries};
