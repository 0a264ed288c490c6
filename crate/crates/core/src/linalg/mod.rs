//! Dense complex linear algebra shared by all modules: Hermitian
//! eigendecomposition, matrix exponentials, Kronecker products, norms.
//!
//! Everything here is generic over the real [`Scalar`](crate::scalar::Scalar) type; the physics layer
//! uses the `f64` aliases exported from the crate root.

mod eig;
mod expm;
mod matrix;
pub mod vectors;

pub use eig::{eig_hermitian, EigenDecomposition};
pub use expm::{expm, expm_i};
pub use matrix::ComplexMatrix;
