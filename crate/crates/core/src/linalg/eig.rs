use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;

/// Spectral decomposition of a Hermitian matrix: `M = V diag(lambda) V^dagger`.
///
/// Eigenvalues are sorted ascending.  Within each degenerate cluster the
/// eigenvectors are re-orthonormalized by Gram-Schmidt seeded in index order,
/// and every column's phase is fixed so its first significant component is
/// real positive, which makes the decomposition reproducible across runs.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<S: Scalar> {
    pub eigenvalues: Vec<S>,
    pub eigenvectors: ComplexMatrix<S>,
}

impl<S: Scalar> EigenDecomposition<S> {
    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix<S> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] = v[(i, j)] * Complex::new(self.eigenvalues[j], S::zero());
            }
        }
        scaled.mul(&v.dagger()).expect("square")
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Dimensions in this crate stay small (at most a few thousand), where Jacobi
/// is simple, accurate to machine precision and fully deterministic.
pub fn eig_hermitian<S: Scalar>(m: &ComplexMatrix<S>) -> Result<EigenDecomposition<S>> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.hermiticity_defect();
    if defect >= S::HERMITICITY_TOL {
        return Err(Error::Shape(format!(
            "matrix is not Hermitian: max |M - M^dagger| = {defect}"
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }

    // Work on the exactly Hermitian part; the defect is below tolerance.
    let half = S::lit(0.5);
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()).scale(half));
    let mut v = ComplexMatrix::<S>::identity(n);

    let scale = {
        let s = a.max_abs();
        if s > S::zero() {
            s
        } else {
            S::one()
        }
    };
    let target = S::JACOBI_TOL * scale;

    let max_sweeps = 100;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut off = S::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag > off {
                    off = mag;
                }
                if mag <= target {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, mag);
            }
        }
        if off <= target {
            converged = true;
            break;
        }
    }
    if !converged {
        // A second pass over the final off-diagonal decides; Jacobi converges
        // quadratically so this is unreachable in practice.
        let mut off = S::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                let mag = a[(p, q)].norm();
                if mag > off {
                    off = mag;
                }
            }
        }
        if off > target * S::lit(1e3) {
            return Err(Error::Domain(format!(
                "jacobi failed to converge: off-diagonal residual {off}"
            )));
        }
    }

    let mut eigenvalues: Vec<S> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());
    eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    canonicalize_clusters(&eigenvalues, &mut vectors);
    for j in 0..n {
        fix_phase(&mut vectors, j);
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// One complex Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate<S: Scalar>(
    a: &mut ComplexMatrix<S>,
    v: &mut ComplexMatrix<S>,
    p: usize,
    q: usize,
    apq: Complex<S>,
    mag: S,
) {
    let n = a.rows();
    // Phase beta turns the (p,q) block real symmetric, then a real rotation
    // annihilates the off-diagonal entry.
    let beta = apq.conj() / Complex::new(mag, S::zero());
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let two = S::lit(2.0);
    let tau = (app - aqq) / (two * mag);
    let t = if tau.is_zero() {
        S::one()
    } else {
        let s = if tau >= S::zero() { S::one() } else { -S::one() };
        s / (tau.abs() + (S::one() + tau * tau).sqrt())
    };
    let c = S::one() / (S::one() + t * t).sqrt();
    let s = t * c;

    // U = [[c, -s],[beta s, beta c]] acting on columns (p, q).
    let upp = Complex::new(c, S::zero());
    let upq = Complex::new(-s, S::zero());
    let uqp = beta * Complex::new(s, S::zero());
    let uqq = beta * Complex::new(c, S::zero());

    // A <- U^dagger A U
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * upp + aiq * uqp;
        a[(i, q)] = aip * upq + aiq * uqq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = upp.conj() * apj + uqp.conj() * aqj;
        a[(q, j)] = upq.conj() * apj + uqq.conj() * aqj;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, S::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, S::zero());

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * upp + viq * uqp;
        v[(i, q)] = vip * upq + viq * uqq;
    }
}

/// Re-orthonormalize each degenerate cluster by Gram-Schmidt over the cluster
/// projector applied to the standard basis in index order.
fn canonicalize_clusters<S: Scalar>(eigenvalues: &[S], vectors: &mut ComplexMatrix<S>) {
    let n = eigenvalues.len();
    let spectral_scale = eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(S::zero(), |a, b| if b > a { b } else { a });
    let gap_tol = S::CLUSTER_TOL * spectral_scale;

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[end - 1]).abs() <= gap_tol {
            end += 1;
        }
        if end - start > 1 {
            canonicalize_one_cluster(vectors, start, end);
        }
        start = end;
    }
}

fn canonicalize_one_cluster<S: Scalar>(vectors: &mut ComplexMatrix<S>, start: usize, end: usize) {
    let n = vectors.rows();
    let size = end - start;
    let cols: Vec<Vec<Complex<S>>> = (start..end).map(|j| vectors.column(j)).collect();

    let accept = S::lit(1e-6);
    let mut chosen: Vec<Vec<Complex<S>>> = Vec::with_capacity(size);
    for k in 0..n {
        if chosen.len() == size {
            break;
        }
        // Projection of e_k onto the cluster span.
        let mut w = vec![Complex::<S>::zero(); n];
        for col in &cols {
            let coeff = col[k].conj();
            for i in 0..n {
                w[i] += col[i] * coeff;
            }
        }
        for prev in &chosen {
            let overlap = dot(prev, &w);
            for i in 0..n {
                w[i] -= prev[i] * overlap;
            }
        }
        let norm = norm(&w);
        if norm > accept {
            let inv = Complex::new(S::one() / norm, S::zero());
            for x in &mut w {
                *x *= inv;
            }
            chosen.push(w);
        }
    }
    // The standard basis spans everything, so the cluster fills up.
    debug_assert_eq!(chosen.len(), size);
    for (offset, w) in chosen.iter().enumerate() {
        vectors.set_column(start + offset, w);
    }
}

fn fix_phase<S: Scalar>(vectors: &mut ComplexMatrix<S>, j: usize) {
    let n = vectors.rows();
    let mut colmax = S::zero();
    for i in 0..n {
        let m = vectors[(i, j)].norm();
        if m > colmax {
            colmax = m;
        }
    }
    if colmax.is_zero() {
        return;
    }
    let threshold = S::lit(1e-8) * colmax;
    for i in 0..n {
        let x = vectors[(i, j)];
        if x.norm() > threshold {
            let phase = x.conj() / Complex::new(x.norm(), S::zero());
            for r in 0..n {
                let y = vectors[(r, j)] * phase;
                vectors[(r, j)] = y;
            }
            return;
        }
    }
}

fn dot<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> Complex<S> {
    let mut acc = Complex::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * *y;
    }
    acc
}

fn norm<S: Scalar>(a: &[Complex<S>]) -> S {
    a.iter()
        .map(|x| x.norm_sqr())
        .fold(S::zero(), |acc, x| acc + x)
        .sqrt()
}

#[allow(unused)]
fn one<S: Scalar>() -> Complex<S> {
    Complex::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;
    use num_complex::Complex64;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scalar_matrix() {
        let m = M::from_real(1, 1, &[5.0]).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![5.0]);
        assert!((e.eigenvectors[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = M::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let m = M::zeros(2, 3);
        assert!(matches!(eig_hermitian(&m), Err(Error::Shape(_))));
        let m = M::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::Shape(_))));
    }

    #[test]
    fn reconstruction_and_unitarity() {
        // A dense Hermitian matrix with complex entries.
        let n = 8;
        let mut m = M::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let re = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                let im = if i == j { 0.0 } else { ((i * 5 + j) % 7) as f64 - 3.0 };
                if j >= i {
                    m[(i, j)] = c(re, im);
                    m[(j, i)] = c(re, -im);
                }
            }
        }
        let e = eig_hermitian(&m).unwrap();
        let defect = e.reconstruct().max_abs_diff(&m);
        assert!(defect < tol::RECONSTRUCTION * m.max_abs(), "defect={defect}");
        assert!(e.eigenvectors.unitarity_defect() < tol::RECONSTRUCTION);
        for w in e.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn degenerate_cluster_is_deterministic() {
        // 3-fold degenerate eigenvalue 2 plus a separated eigenvalue.
        let mut m = M::zeros(4, 4);
        for i in 0..3 {
            m[(i, i)] = c(2.0, 0.0);
        }
        m[(3, 3)] = c(7.0, 0.0);
        let e1 = eig_hermitian(&m).unwrap();
        let e2 = eig_hermitian(&m).unwrap();
        assert_eq!(e1.eigenvectors, e2.eigenvectors);
        // Index-seeded Gram-Schmidt on a diagonal matrix returns the standard basis.
        for j in 0..3 {
            assert!((e1.eigenvectors[(j, j)] - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let m = ComplexMatrix::<f32>::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-6);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-6);
        let defect = e.reconstruct().max_abs_diff(&m);
        assert!(defect < f32::RECONSTRUCTION_TOL);
    }

    #[test]
    fn first_significant_component_is_real_positive() {
        let m = M::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)],
        )
        .unwrap();
        let e = eig_hermitian(&m).unwrap();
        for j in 0..2 {
            let col = e.eigenvectors.column(j);
            let first = col.iter().find(|x| x.norm() > 1e-8).unwrap();
            assert!(first.im.abs() < 1e-12 && first.re > 0.0);
        }
    }
}
