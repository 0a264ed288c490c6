//! Simulation library for a register of identical qubits resonantly coupled to a
//! single bosonic mode.
//!
//! The register decomposes into independent pseudospin-`j` multiplets, each of
//! which interacts with the mode as a higher-spin Jaynes-Cummings system.  This
//! crate builds that decomposition explicitly, evaluates closed-form and
//! numerical block propagators, synthesizes the conditional-phase circuits that
//! switch between multiplets, and models single-qubit decay recovery and qubit
//! dephasing.  Every analytic expression is cross-checked against brute-force
//! matrix-exponential oracles in the test suite.

pub mod basis;
pub mod blocks;
pub mod collective;
pub mod decay;
pub mod dephasing;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod halfint;
pub mod linalg;
pub mod multiplet;
pub mod propagator;
pub mod scalar;
pub mod tol;

pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use scalar::Scalar;

/// Complex scalar used by the physics layer.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix over `f64`, the concrete type used by the physics layer.
pub type CMatrix = linalg::ComplexMatrix<f64>;
/// `f32` variant, available for callers that trade precision for footprint.
pub type CMatrix32 = linalg::ComplexMatrix<f32>;
/// Eigendecomposition of a Hermitian [`CMatrix`].
pub type Eigen = linalg::EigenDecomposition<f64>;
