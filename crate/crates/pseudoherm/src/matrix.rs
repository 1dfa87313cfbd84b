//! Dense complex matrices and vectors: products, adjoints, solves, norms.
//!
//! Storage is row-major over `num_complex::Complex64`. Constructors that
//! accept entry data reject non-finite values; all operations are pure
//! functions of their inputs, so values can be shared freely across threads.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::Error;

/// Relative pivot threshold: a pivot below `SINGULARITY_THRESHOLD * ||A||_F`
/// makes elimination report the matrix as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Dense column vector of complex entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(data: Vec<Complex64>) -> Result<Self, Error> {
        if data.is_empty() {
            return Err(Error::InvalidInput("vector dimension must be >= 1".into()));
        }
        if !data.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Standard basis vector `e_k` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> Result<Self, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: (self.dim(), 1),
                right: (other.dim(), 1),
            });
        }
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self {
            data: self.data.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Unit-norm copy. Zero vectors are returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0 / n, 0.0))
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}

/// Dense square-or-rectangular complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(
                "matrix dimensions must be >= 1".into(),
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "entry count {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if !data.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows, rejecting ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, Error> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("matrix must have >= 1 row".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate_entrywise(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn multiply(&self, other: &ComplexMatrix) -> Result<Self, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &ComplexVector) -> Result<ComplexVector, Error> {
        if self.cols != x.dim() {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (x.dim(), 1),
            });
        }
        let mut out = ComplexVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<Self, Error> {
        self.zip_entries(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<Self, Error> {
        self.zip_entries(other, |a, b| a - b)
    }

    fn zip_entries(
        &self,
        other: &ComplexMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    /// Square root of the sum of squared entry moduli.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian part `(M + M^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + adj[(i, j)]) * 0.5
        })
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        let mut v = ComplexVector::zeros(self.rows);
        for i in 0..self.rows {
            v[i] = self[(i, j)];
        }
        v
    }

    pub fn set_column(&mut self, j: usize, v: &ComplexVector) {
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    /// Solves `self * X = b` by LU elimination with partial pivoting.
    ///
    /// A pivot of magnitude below `SINGULARITY_THRESHOLD * ||self||_F` is
    /// reported as `SingularMatrix`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (self.rows, self.rows),
            });
        }
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (b.rows, b.cols),
            });
        }
        let n = self.rows;
        let pivot_floor = SINGULARITY_THRESHOLD * self.frobenius_norm();
        let mut lu = self.clone();
        let mut x = b.clone();

        for k in 0..n {
            // Partial pivoting on column k.
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in (k + 1)..n {
                let mag = lu[(i, k)].norm();
                if mag > best {
                    best = mag;
                    p = i;
                }
            }
            if best <= pivot_floor {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                for j in 0..x.cols {
                    let tmp = x[(k, j)];
                    x[(k, j)] = x[(p, j)];
                    x[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] -= sub;
                }
                for j in 0..x.cols {
                    let sub = factor * x[(k, j)];
                    x[(i, j)] -= sub;
                }
            }
        }

        // Back substitution.
        for j in 0..x.cols {
            for i in (0..n).rev() {
                let mut acc = x[(i, j)];
                for k in (i + 1)..n {
                    acc -= lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = acc / lu[(i, i)];
            }
        }
        Ok(x)
    }

    /// Inverse via `solve(I)`.
    pub fn inverse(&self) -> Result<Self, Error> {
        self.solve(&Self::identity(self.rows))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_matches_definition() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let a = m.adjoint();
        assert_eq!(a[(0, 0)], c(1.0, 0.0));
        assert_eq!(a[(0, 1)], c(0.0, 0.0));
        assert_eq!(a[(1, 0)], c(0.0, -1.0));
        assert_eq!(a[(1, 1)], c(2.0, 0.0));
    }

    #[test]
    fn adjoint_of_identity_is_identity() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(id.adjoint(), id);
    }

    #[test]
    fn adjoint_of_gain_loss_dimer() {
        // [[i g, J], [J, -i g]] with g = 0.5, J = 1 flips the sign of the
        // imaginary diagonal.
        let g = 0.5;
        let j = 1.0;
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, g), c(j, 0.0)],
            vec![c(j, 0.0), c(0.0, -g)],
        ])
        .unwrap();
        let a = m.adjoint();
        assert_eq!(a[(0, 0)], c(0.0, -g));
        assert_eq!(a[(0, 1)], c(j, 0.0));
        assert_eq!(a[(1, 0)], c(j, 0.0));
        assert_eq!(a[(1, 1)], c(0.0, g));
    }

    #[test]
    fn adjoint_is_involutive() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(-0.5, 0.25)],
            vec![c(0.0, -3.0), c(4.0, 4.0)],
        ])
        .unwrap();
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn multiply_identity_is_noop() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -1.0), c(3.0, 0.5)],
        ])
        .unwrap();
        let id = ComplexMatrix::identity(2);
        assert_eq!(id.multiply(&m).unwrap(), m);
        assert_eq!(m.multiply(&id).unwrap(), m);
    }

    #[test]
    fn exchange_permutation_squares_to_identity() {
        let p = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(p.multiply(&p).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn multiply_matches_triple_loop_oracle() {
        // Deterministic pseudo-random 4x4 inputs; compare one entry against
        // the naive sum-of-products.
        let a = ComplexMatrix::from_fn(4, 4, |i, j| {
            c((i * 4 + j) as f64 * 0.37 - 2.0, (i as f64 - j as f64) * 0.61)
        });
        let b = ComplexMatrix::from_fn(4, 4, |i, j| {
            c((j * 4 + i) as f64 * -0.23 + 1.0, (i * j) as f64 * 0.11)
        });
        let prod = a.multiply(&b).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = c(0.0, 0.0);
                for k in 0..4 {
                    acc += a[(i, k)] * b[(k, j)];
                }
                let denom = acc.norm().max(1.0);
                assert!((prod[(i, j)] - acc).norm() / denom < 1e-14);
            }
        }
    }

    #[test]
    fn multiply_rejects_mismatched_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            a.multiply(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.0, 0.0)],
            vec![c(3.0, 0.0), c(-1.0, 1.0)],
            vec![c(0.5, 0.5), c(2.0, -2.0)],
        ])
        .unwrap();
        let x = ComplexMatrix::identity(3).solve(&b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_diagonal_inverts_entries() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let x = a.solve(&ComplexMatrix::identity(2)).unwrap();
        assert!((x[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((x[(1, 1)] - c(0.25, 0.0)).norm() < 1e-15);
        assert!(x[(0, 1)].norm() < 1e-15);
        assert!(x[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn solve_rejects_nilpotent() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(
            a.solve(&ComplexMatrix::identity(2)),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn frobenius_norm_cases() {
        assert_eq!(ComplexMatrix::zeros(2, 2).frobenius_norm(), 0.0);
        assert!((ComplexMatrix::identity(4).frobenius_norm() - 2.0).abs() < 1e-15);
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 3.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        assert!((m.frobenius_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn conjugate_entrywise_cases() {
        let real = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(-2.0, 0.0)]]).unwrap();
        assert_eq!(real.conjugate_entrywise(), real);

        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0)]]).unwrap();
        assert_eq!(m.conjugate_entrywise()[(0, 0)], c(0.0, -1.0));

        let mixed = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(-0.5, 0.1)],
            vec![c(0.0, -7.0), c(3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(mixed.conjugate_entrywise().conjugate_entrywise(), mixed);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(Error::InvalidInput(_))
        ));
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFiniteEntry)
        );
        assert_eq!(
            ComplexVector::new(vec![c(0.0, f64::INFINITY)]),
            Err(Error::NonFiniteEntry)
        );
        assert!(matches!(
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![]]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn solve_residual_is_small_for_well_conditioned_input() {
        let a = ComplexMatrix::from_fn(8, 8, |i, j| {
            if i == j {
                c(4.0 + i as f64, 0.0)
            } else {
                c(0.3 * ((i + 2 * j) as f64).sin(), 0.2 * ((i * j) as f64).cos())
            }
        });
        let b = ComplexMatrix::from_fn(8, 3, |i, j| c(i as f64 - j as f64, 0.5 * j as f64));
        let x = a.solve(&b).unwrap();
        let resid = a.multiply(&x).unwrap().sub(&b).unwrap().frobenius_norm();
        assert!(resid <= 1e-10 * a.frobenius_norm() * b.frobenius_norm());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_slot() {
        let x = ComplexVector::new(vec![c(1.0, 1.0), c(0.0, 2.0)]).unwrap();
        let y = ComplexVector::new(vec![c(2.0, 0.0), c(1.0, -1.0)]).unwrap();
        let lhs = x.scale(c(0.0, 1.0)).inner(&y).unwrap();
        let rhs = c(0.0, -1.0) * x.inner(&y).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }
}
