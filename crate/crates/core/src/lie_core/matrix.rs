use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Shorthand for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{i phi}`.
#[inline]
pub fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

/// Dense square complex matrix.
///
/// Thin wrapper over `nalgebra::DMatrix` that enforces squareness and gives
/// the Lie-algebra operations used throughout the crate a single carrier.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Builds a matrix from row-major rows. All rows must have the same
    /// length as the number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape(format!("row of length {} in a {n}-row matrix", bad.len())));
        }
        Ok(Self {
            inner: DMatrix::from_fn(n, n, |i, j| rows[i][j]),
        })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            inner: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    /// Real diagonal times a complex scale, e.g. `diag(1, 3) * i/4`.
    pub fn real_diagonal(diag: &[f64], scale: Complex64) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| scale * x).collect();
        Self::from_diagonal(&d)
    }

    /// Matrix with the given `(row, col, value)` entries and zeros elsewhere.
    pub fn sparse(dim: usize, entries: &[(usize, usize, Complex64)]) -> Self {
        let mut m = Self::zeros(dim);
        for &(i, j, v) in entries {
            m[(i, j)] += v;
        }
        m
    }

    pub(crate) fn from_inner(inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.is_square());
        Self { inner }
    }

    pub(crate) fn inner(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { inner: &self.inner * s }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.dim())
            .map(|j| self.inner.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `||M + M^dagger||_F`; zero for anti-Hermitian matrices.
    pub fn anti_hermitian_defect(&self) -> f64 {
        (self + &self.adjoint()).frobenius_norm()
    }

    /// `||M^dagger M - Id||_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.dim())).frobenius_norm()
    }

    /// Real inner product `Re tr(A^dagger B)`.
    pub fn real_inner(&self, other: &Self) -> f64 {
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// Cosine similarity under the real inner product.
    pub fn cosine(&self, other: &Self) -> f64 {
        let denom = self.frobenius_norm() * other.frobenius_norm();
        if denom == 0.0 {
            0.0
        } else {
            self.real_inner(other) / denom
        }
    }

    /// Kronecker product `self ⊗ other`; `self` is the left (slow) factor.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.kronecker(&other.inner),
        }
    }

    /// Flattens into `2 n^2` real coordinates: real parts row-major, then
    /// imaginary parts row-major.
    pub fn to_real_vec(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)].re);
            }
        }
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)].im);
            }
        }
        out
    }

    pub fn from_real_vec(dim: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), 2 * dim * dim);
        let nn = dim * dim;
        Self::from_fn(dim, |i, j| c(v[i * dim + j], v[nn + i * dim + j]))
    }

    /// Extracts the sub-matrix on the given (ordered) index list.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.inner[(idx[i], idx[j])])
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| (0..n).map(|j| self.inner[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.inner[(i, j)]).collect())
            .collect()
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            Err(Error::DimensionMismatch(self.dim(), other.dim()))
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({0}x{0}) [", self.dim())?;
        for i in 0..self.dim() {
            write!(f, "  ")?;
            for j in 0..self.dim() {
                let z = self.inner[(i, j)];
                write!(f, "{:>10.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.inner[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.inner[idx]
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a ComplexMatrix> for &'a ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.dim(), rhs.dim(), "matrix dimension mismatch");
                ComplexMatrix { inner: &self.inner $op &rhs.inner }
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self) $op (&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim(), rhs.dim(), "matrix dimension mismatch");
        self.inner += &rhs.inner;
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { inner: -&self.inner }
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_places_left_factor_slow() {
        let m = ComplexMatrix::real_diagonal(&[0.0, 1.0], c(0.0, 4.0));
        let k = m.kron(&ComplexMatrix::identity(2));
        let expected = ComplexMatrix::real_diagonal(&[0.0, 0.0, 1.0, 1.0], c(0.0, 4.0));
        assert_eq!(k, expected);
    }

    #[test]
    fn real_vec_round_trip() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(i as f64 - 0.5 * j as f64, (i * j) as f64));
        let v = m.to_real_vec();
        assert_eq!(v.len(), 18);
        assert_eq!(ComplexMatrix::from_real_vec(3, &v), m);
        let ip = m.real_inner(&m);
        assert!((ip - m.frobenius_norm().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0)]];
        assert!(ComplexMatrix::from_rows(&rows).is_err());
    }
}
