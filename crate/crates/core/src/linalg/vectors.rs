//! Helpers for complex state vectors stored as `Vec<Complex<S>>`.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Scalar;

/// Conjugate-linear inner product `<a|b>`.
pub fn dot<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> Complex<S> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Complex::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * *y;
    }
    acc
}

pub fn norm<S: Scalar>(a: &[Complex<S>]) -> S {
    a.iter()
        .map(|x| x.norm_sqr())
        .fold(S::zero(), |acc, x| acc + x)
        .sqrt()
}

pub fn normalize<S: Scalar>(a: &mut [Complex<S>]) {
    let n = norm(a);
    if n > S::zero() {
        let inv = Complex::new(S::one() / n, S::zero());
        for x in a.iter_mut() {
            *x *= inv;
        }
    }
}

pub fn scaled<S: Scalar>(a: &[Complex<S>], c: Complex<S>) -> Vec<Complex<S>> {
    a.iter().map(|&x| x * c).collect()
}

pub fn add<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> Vec<Complex<S>> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> Vec<Complex<S>> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn max_abs_diff<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> S {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).norm())
        .fold(S::zero(), |m, d| if d > m { d } else { m })
}

/// Basis vector `|index>` in an `n`-dimensional space.
pub fn basis<S: Scalar>(n: usize, index: usize) -> Vec<Complex<S>> {
    let mut v = vec![Complex::zero(); n];
    v[index] = Complex::new(S::one(), S::zero());
    v
}
