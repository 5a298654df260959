//! Vectors and linear maps of `R^{2n}`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{format_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    n: usize,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(n: usize, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "vector for n = {n} needs {} coordinates, got {}",
                2 * n,
                coords.len()
            )));
        }
        Ok(Vector { n, coords })
    }

    pub fn zero(n: usize) -> Self {
        Vector {
            n,
            coords: vec![Scalar::zero(); 2 * n],
        }
    }

    /// The coordinate vector `∂/∂z_index`, with `index` in `1..=2n`.
    pub fn basis(n: usize, index: usize) -> Self {
        assert!((1..=2 * n).contains(&index), "basis index {index} out of range");
        let mut v = Vector::zero(n);
        v.coords[index - 1] = Scalar::one();
        v
    }

    /// `e_i = ∂/∂x_i`.
    pub fn e(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        Vector::basis(n, i)
    }

    /// `e_i' = ∂/∂y_i`.
    pub fn e_prime(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        Vector::basis(n, n + i)
    }

    /// `(e_1, e_1', ..., e_m, e_m')`.
    pub fn interleaved_frame(n: usize, planes: impl IntoIterator<Item = usize>) -> Vec<Vector> {
        planes
            .into_iter()
            .flat_map(|i| [Vector::e(n, i), Vector::e_prime(n, i)])
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Coordinate at 1-based `index`.
    pub fn coord(&self, index: usize) -> &Scalar {
        &self.coords[index - 1]
    }
}

/// A linear endomorphism of `R^{2n}`; entry `(r, c)` is coordinate `r` of the
/// image of basis vector `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    n: usize,
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(n: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if rows.len() != 2 * n || rows.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::InvalidArgument(format!(
                "linear map for n = {n} must be {0}x{0}",
                2 * n
            )));
        }
        Ok(LinearMap {
            n,
            matrix: Matrix::from_rows(rows),
        })
    }

    pub fn from_matrix(n: usize, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != 2 * n || matrix.cols() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "linear map for n = {n} must be {0}x{0}",
                2 * n
            )));
        }
        Ok(LinearMap { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            n,
            matrix: Matrix::identity(2 * n),
        }
    }

    pub fn diagonal(n: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "diagonal for n = {n} needs {} entries",
                2 * n
            )));
        }
        let mut matrix = Matrix::zeros(2 * n, 2 * n);
        for (i, e) in entries.into_iter().enumerate() {
            matrix.set(i, i, e);
        }
        Ok(LinearMap { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        self.matrix.get(row - 1, col - 1)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: v.n,
            });
        }
        Ok(Vector {
            n: self.n,
            coords: self.matrix.mul_vec(&v.coords),
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(LinearMap {
            n: self.n,
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    pub fn pow(&self, k: usize) -> LinearMap {
        (0..k).fold(LinearMap::identity(self.n), |acc, _| {
            acc.compose(self).expect("same dimension")
        })
    }

    pub fn transpose(&self) -> LinearMap {
        LinearMap {
            n: self.n,
            matrix: self.matrix.transpose(),
        }
    }

    pub fn neg(&self) -> LinearMap {
        LinearMap {
            n: self.n,
            matrix: self.matrix.scale(&-Scalar::one()),
        }
    }

    pub fn determinant(&self) -> Scalar {
        self.matrix.determinant()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(2 * self.n)
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.matrix.rows() {
            let row: Vec<String> = (0..self.matrix.cols())
                .map(|c| format_scalar(self.matrix.get(r, c)))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
