use num_complex::Complex;
use num_traits::Zero;

use crate::error::Result;
use crate::linalg::{eig_hermitian, ComplexMatrix};
use crate::scalar::Scalar;

/// `exp(i t M)` for Hermitian `M`, via the spectral decomposition.
///
/// All generators in this crate are Hermitian (or Hermitian plus a real
/// shift), so the spectral route applies and yields the transition
/// frequencies as a by-product.  The result is unitary.
pub fn expm_i<S: Scalar>(m: &ComplexMatrix<S>, t: S) -> Result<ComplexMatrix<S>> {
    let e = eig_hermitian(m)?;
    let n = e.eigenvalues.len();
    let v = &e.eigenvectors;
    let mut scaled = v.clone();
    for j in 0..n {
        let phase = Complex::new(S::zero(), e.eigenvalues[j] * t).exp();
        for i in 0..n {
            scaled[(i, j)] = v[(i, j)] * phase;
        }
    }
    scaled.mul(&v.dagger())
}

/// `exp(A)` for a general (possibly non-Hermitian) square matrix, by scaling
/// and squaring with a truncated Taylor series.
///
/// Used as the oracle route for non-unitary generators (dephasing), where the
/// blocks are a few dimensions wide.
pub fn expm<S: Scalar>(a: &ComplexMatrix<S>) -> Result<ComplexMatrix<S>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(crate::error::Error::Shape(format!(
            "expm needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }

    let norm = one_norm(a);
    let half = S::lit(0.5);
    let mut squarings = 0u32;
    let mut scale = S::one();
    let mut scaled_norm = norm;
    while scaled_norm > half && squarings < 64 {
        scaled_norm *= half;
        scale *= half;
        squarings += 1;
    }
    let b = a.scale(Complex::new(scale, S::zero()));

    // Taylor to machine precision; ||B|| <= 1/2 so 30 terms is generous.
    let mut result = ComplexMatrix::<S>::identity(n);
    let mut term = ComplexMatrix::<S>::identity(n);
    let floor = S::lit(1e-300);
    for k in 1..=30 {
        term = term.mul(&b)?;
        let inv = Complex::new(S::one() / S::lit(k as f64), S::zero());
        term = term.scale(inv);
        result = result.add(&term)?;
        let t = term.max_abs();
        if t < S::epsilon() * result.max_abs().max(S::one()) || t < floor {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.mul(&result)?;
    }
    Ok(result)
}

fn one_norm<S: Scalar>(a: &ComplexMatrix<S>) -> S {
    let mut worst = S::zero();
    for j in 0..a.cols() {
        let mut col = S::zero();
        for i in 0..a.rows() {
            col += a[(i, j)].norm();
        }
        if col > worst {
            worst = col;
        }
    }
    worst
}

#[allow(unused)]
fn zero<S: Scalar>() -> Complex<S> {
    Complex::zero()
}
