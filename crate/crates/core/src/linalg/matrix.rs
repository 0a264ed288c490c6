use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> ComplexMatrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<S>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "entry count {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<S>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[S]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "entry count {} does not match {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(Self {
            rows,
            cols,
            data: entries.iter().map(|&x| Complex::new(x, S::zero())).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<S>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex<S>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex<S>]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex<S> {
        let mut t = Complex::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)];
        }
        t
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("add: shape mismatch".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("sub: shape mismatch".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "mul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let row = k * other.cols;
                let orow = i * other.cols;
                for j in 0..other.cols {
                    out.data[orow + j] += a * other.data[row + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<S>]) -> Result<Vec<Complex<S>>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "apply: {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex::zero(); self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            let row = i * self.cols;
            let mut acc = Complex::zero();
            for (j, x) in v.iter().enumerate() {
                acc += self.data[row + j] * *x;
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Kronecker product: `(A kron B)[(i*rB+k), (j*cB+l)] = A[i,j] * B[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> S {
        self.data
            .iter()
            .map(|c| c.norm())
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    /// `max |M - M^dagger|` over all entries.
    pub fn hermiticity_defect(&self) -> S {
        let mut worst = S::zero();
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: S) -> bool {
        self.is_square() && self.hermiticity_defect() < tol
    }

    /// `max |A - B|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    /// `max |U^dagger U - I|`; zero for a unitary matrix.
    pub fn unitarity_defect(&self) -> S {
        let p = self.dagger().mul(self).expect("square");
        p.sub(&Self::identity(self.cols)).expect("shape").max_abs()
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for ComplexMatrix<S> {
    type Output = Complex<S>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<S> {
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<S> {
        &mut self.data[i * self.cols + j]
    }
}
