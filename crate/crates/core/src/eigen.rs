//! Cyclic Jacobi diagonalization of dense symmetric matrices.

use crate::error::{CurvError, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

pub const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues with orthonormal eigenvectors (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
    /// `max_j ‖M v_j - λ_j v_j‖`.
    pub residual: T,
    pub sweeps: usize,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `λ_1 + … + λ_k`.
    pub fn partial_sum(&self, k: usize) -> T {
        self.eigenvalues[..k].iter().copied().sum()
    }

    pub fn min(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }

    /// `‖M - VΛVᵀ‖_F`.
    pub fn reconstruction_error(&self, m: &Matrix<T>) -> T {
        let v = &self.eigenvectors;
        let lambda = Matrix::diagonal(&self.eigenvalues);
        m.sub(&v.matmul(&lambda).matmul(&v.transpose())).frobenius_norm()
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_error(&self) -> T {
        let v = &self.eigenvectors;
        v.transpose().matmul(v).sub(&Matrix::identity(v.cols())).max_abs()
    }
}

/// Diagonalizes a symmetric matrix. Stops once the off-diagonal Frobenius
/// norm drops below `tol · ‖M‖_F`.
pub fn eigen_sym<T: Real>(m: &Matrix<T>, tol: T) -> Result<Spectrum<T>> {
    if !m.is_square() {
        return Err(CurvError::DimensionMismatch { left: m.rows(), right: m.cols() });
    }
    let n = m.rows();
    let norm = m.frobenius_norm();
    let asym = m.asymmetry();
    if asym > T::tol_floor(1e-10, 64.0) * norm {
        return Err(CurvError::NotSymmetric { asymmetry: asym.as_f64() });
    }
    // Work on the symmetrized copy.
    let mut a = Matrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)]) * T::lit(0.5));
    let mut v = Matrix::identity(n);
    let target = tol * norm;
    let mut sweeps = 0;

    loop {
        let off = off_diagonal_norm(&a);
        if !(off > target) {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(CurvError::NoConvergence { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Negligible against both diagonal entries: drop it.
                let tiny = T::epsilon() * T::lit(0.5);
                if apq.abs() <= tiny * app.abs() && apq.abs() <= tiny * aqq.abs() {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = if theta.is_infinite() {
                    T::one() / (T::lit(2.0) * theta)
                } else {
                    let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();

                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = c * vrp - s * vrq;
                    v[(r, q)] = s * vrp + c * vrq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues: Vec<T> = order.iter().map(|&i| a[(i, i)]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);

    let mut residual = T::zero();
    for (c, &lambda) in eigenvalues.iter().enumerate() {
        let col = eigenvectors.column(c);
        let mv = m.mul_vec(&col);
        let r: T = mv.iter().zip(&col).map(|(&x, &y)| (x - lambda * y).powi(2)).sum();
        residual = residual.max(r.sqrt());
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residual,
        sweeps,
    })
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[(i, j)] * a[(i, j)];
        }
    }
    (s + s).sqrt()
}
