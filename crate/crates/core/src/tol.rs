//! Acceptance thresholds used across the physics layer (`f64` instantiation).
//!
//! Dimensions stay below a few thousand and all inputs are exact small
//! integers or square roots thereof, so double precision leaves generous
//! headroom above these bounds.

/// Gate on `max |M - M^dagger|` before a matrix is accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-12;

/// Eigendecomposition residual `max |V L V^dagger - M|`, relative to `max |M|`.
pub const RECONSTRUCTION: f64 = 1e-10;

/// Unitarity residual `max |U^dagger U - I|` for propagators and bases.
pub const UNITARITY: f64 = 1e-10;

/// Default bound when an analytic value is checked against an independent oracle.
pub const ORACLE: f64 = 1e-9;

/// Kernel-residual bound for switching solutions, `|J_minus psi|`.
pub const SWITCH_RESIDUAL: f64 = 1e-10;

/// Entrywise bound for the dephasing closed form against `exp(H t)`.
pub const DEPHASING_CLOSED_FORM: f64 = 1e-8;

/// Probabilities in the decay tree are exact rationals; they are reproduced
/// numerically to this bound.
pub const EXACT_RATIONAL: f64 = 1e-12;
