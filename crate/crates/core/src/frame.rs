//! Orthonormal frames.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{CurvError, Result};
use crate::matrix::{orthonormalize_columns, Matrix};
use crate::scalar::Real;

/// Allowed deviation of `FᵀF` from the identity.
pub fn frame_tolerance<T: Real>() -> T {
    T::tol_floor(1e-12, 64.0)
}

/// `max |FᵀF - I|`.
pub fn orthonormality_deviation<T: Real>(f: &Matrix<T>) -> T {
    f.transpose().matmul(f).sub(&Matrix::identity(f.cols())).max_abs()
}

/// Four orthonormal vectors in `ℝⁿ`, stored as the columns of an `n×4` block.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame4<T> {
    cols: Matrix<T>,
}

impl<T: Real> Frame4<T> {
    pub fn new(cols: Matrix<T>) -> Result<Self> {
        if cols.cols() != 4 || cols.rows() < 4 {
            return Err(CurvError::DimensionTooSmall { dim: cols.rows().min(cols.cols()), min: 4 });
        }
        let dev = orthonormality_deviation(&cols);
        if !(dev <= frame_tolerance::<T>()) {
            return Err(CurvError::FrameNotOrthonormal { deviation: dev.as_f64() });
        }
        Ok(Self { cols })
    }

    pub(crate) fn new_unchecked(cols: Matrix<T>) -> Self {
        Self { cols }
    }

    /// `(e_1, e_2, e_3, e_4)`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new(Matrix::from_fn(n, 4, |i, j| if i == j { T::one() } else { T::zero() }))
    }

    /// Gram–Schmidt applied to the given columns.
    pub fn orthonormalized(mut cols: Matrix<T>) -> Result<Self> {
        if cols.cols() != 4 || cols.rows() < 4 {
            return Err(CurvError::DimensionTooSmall { dim: cols.rows(), min: 4 });
        }
        if !orthonormalize_columns(&mut cols, T::epsilon().sqrt()) {
            return Err(CurvError::FrameNotOrthonormal { deviation: f64::INFINITY });
        }
        Ok(Self { cols })
    }

    /// Gaussian `n×4` block, orthonormalized.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self>
    where
        StandardNormal: Distribution<T>,
    {
        loop {
            let m = Matrix::from_fn(n, 4, |_, _| StandardNormal.sample(rng));
            match Self::orthonormalized(m) {
                Ok(f) => return Ok(f),
                Err(CurvError::FrameNotOrthonormal { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.cols.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.cols
    }

    pub fn vector(&self, a: usize) -> Vec<T> {
        self.cols.column(a)
    }

    pub fn vectors(&self) -> [Vec<T>; 4] {
        [self.vector(0), self.vector(1), self.vector(2), self.vector(3)]
    }

    /// Reorders (and optionally negates) the frame vectors.
    pub fn permuted(&self, order: [usize; 4], signs: [bool; 4]) -> Self {
        let n = self.dim();
        let cols = Matrix::from_fn(n, 4, |i, j| {
            let v = self.cols[(i, order[j])];
            if signs[j] {
                -v
            } else {
                v
            }
        });
        Self { cols }
    }
}

/// Random orthogonal `n×n` matrix (Gram–Schmidt of a Gaussian block).
pub fn random_orthogonal<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<T>
where
    StandardNormal: Distribution<T>,
{
    loop {
        let mut m = Matrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
        if orthonormalize_columns(&mut m, T::epsilon().sqrt()) {
            return m;
        }
    }
}

/// Checks that `frame` is a full orthonormal `n×n` frame.
pub fn check_full_frame<T: Real>(frame: &Matrix<T>, n: usize) -> Result<()> {
    if frame.rows() != n || frame.cols() != n {
        return Err(CurvError::DimensionMismatch { left: n, right: frame.rows() });
    }
    let dev = orthonormality_deviation(frame);
    if !(dev <= frame_tolerance::<T>()) {
        return Err(CurvError::FrameNotOrthonormal { deviation: dev.as_f64() });
    }
    Ok(())
}
