//! Real scalar abstraction for the dense linear algebra kernels.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Floating-point types the linear algebra layer is generic over.
///
/// The associated constants are the per-type acceptance thresholds; they scale
/// with the unit roundoff so `f32` instantiations stay usable.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssignOps + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Gate on `max |M - M^dagger|` before a matrix is accepted as Hermitian.
    const HERMITICITY_TOL: Self;
    /// Bound on `max |V L V^dagger - M|` relative to `max |M|` after eigendecomposition.
    const RECONSTRUCTION_TOL: Self;
    /// Off-diagonal target (relative to the matrix scale) for the Jacobi sweep.
    const JACOBI_TOL: Self;
    /// Two eigenvalues closer than this (relative to the spectral scale) are
    /// treated as one degenerate cluster.
    const CLUSTER_TOL: Self;

    /// Lift an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable in Scalar")
    }
}

impl Scalar for f64 {
    const HERMITICITY_TOL: f64 = 1e-12;
    const RECONSTRUCTION_TOL: f64 = 1e-10;
    const JACOBI_TOL: f64 = 1e-15;
    const CLUSTER_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const HERMITICITY_TOL: f32 = 1e-5;
    const RECONSTRUCTION_TOL: f32 = 1e-4;
    const JACOBI_TOL: f32 = 1e-7;
    const CLUSTER_TOL: f32 = 1e-4;
}
