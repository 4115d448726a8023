//! Dense square complex matrices.
//!
//! [`ComplexMatrix`] is a thin newtype over `nalgebra::DMatrix<Complex64>` that
//! keeps the matrix square and adds the handful of operations the rest of the
//! crate needs: Kronecker products, (anti)commutators, hermiticity predicates
//! and a stable JSON form (row-major rows of `[re, im]` pairs).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, |i, j| f(i, j)))
    }

    /// Builds a matrix from rows. Panics if the rows do not form a square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { ZERO })
    }

    /// Wraps an nalgebra matrix. Panics if it is not square.
    pub fn from_inner(inner: DMatrix<Complex64>) -> Self {
        assert_eq!(inner.nrows(), inner.ncols(), "matrix must be square");
        Self(inner)
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.0[(i, j)] = value;
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    /// `[A, B]₋ = AB − BA`
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// `[A, B]₊ = AB + BA`
    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == ZERO)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self - &self.adjoint()).max_abs() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        (self + &self.adjoint()).max_abs() <= tol
    }

    /// Entry-by-entry distance from `λ·1` for the best-fitting `λ = tr(A)/n`.
    /// Returns `(λ, residual)`.
    pub fn scalar_part(&self) -> (Complex64, f64) {
        let lambda = self.trace() / self.dim() as f64;
        let residual = (self - &Self::identity(self.dim()).scale(lambda)).max_abs();
        (lambda, residual)
    }

    /// Row-major flattening.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.0[(i, j)]).collect()
    }

    pub fn from_row_major(dim: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self::from_fn(dim, |i, j| data[i * dim + j])
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:+.3}{:+.3}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 + rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 - rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0 * rhs.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("matrix must be square and non-empty"));
        }
        Ok(Self::from_fn(n, |i, j| c64(rows[i][j][0], rows[i][j][1])))
    }
}

/// Pauli matrices σ₀ = 1, σ₁, σ₂, σ₃.
pub fn pauli(index: usize) -> ComplexMatrix {
    let rows = match index {
        0 => vec![vec![ONE, ZERO], vec![ZERO, ONE]],
        1 => vec![vec![ZERO, ONE], vec![ONE, ZERO]],
        2 => vec![vec![ZERO, -I], vec![I, ZERO]],
        3 => vec![vec![ONE, ZERO], vec![ZERO, -ONE]],
        _ => panic!("pauli index out of range: {index}"),
    };
    ComplexMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (s1, s2, s3) = (pauli(1), pauli(2), pauli(3));
        assert_eq!(&s1 * &s2, s3.scale(I));
        assert!(s1.anticommutator(&s2).is_zero());
        for k in 1..=3 {
            assert_eq!(&pauli(k) * &pauli(k), ComplexMatrix::identity(2));
            assert!(pauli(k).is_hermitian(0.0));
        }
    }

    #[test]
    fn kron_dims_and_mixed_product() {
        let a = pauli(1).kron(&pauli(2));
        let b = pauli(3).kron(&pauli(1));
        assert_eq!(a.dim(), 4);
        assert_eq!(&a * &b, (&pauli(1) * &pauli(3)).kron(&(&pauli(2) * &pauli(1))));
    }

    #[test]
    fn scalar_part_detects_multiples_of_identity() {
        let m = ComplexMatrix::identity(3).scale(c64(0.0, -2.0));
        let (lambda, res) = m.scalar_part();
        assert_eq!(lambda, c64(0.0, -2.0));
        assert_eq!(res, 0.0);
        let (_, res) = pauli(3).scalar_part();
        assert!(res > 0.5);
    }

    #[test]
    #[should_panic]
    fn non_square_rows_rejected() {
        ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ONE]]);
    }
}
