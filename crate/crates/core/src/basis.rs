//! Orthonormal bases of two-forms and of traceless symmetric two-tensors.
//!
//! Inner products: `⟨A,B⟩ = tr(AᵀB)` on symmetric tensors and
//! `⟨A,B⟩ = ½ tr(AᵀB)` on two-forms, with `u⊙v = u⊗v + v⊗u` and
//! `u∧v = u⊗v - v⊗u`.

use crate::error::{CurvError, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// `e_i ∧ e_j` for `i < j`, lexicographic; each has unit norm under `½tr(AᵀB)`.
pub fn lambda2_basis<T: Real>(n: usize) -> Vec<Matrix<T>> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = Matrix::zeros(n, n);
            m[(i, j)] = T::one();
            m[(j, i)] = -T::one();
            out.push(m);
        }
    }
    out
}

/// `N = (n-1)(n+2)/2`.
pub fn s20_dim(n: usize) -> usize {
    (n.saturating_sub(1)) * (n + 2) / 2
}

/// Ordered orthonormal basis of `S²₀(V)`.
///
/// Canonical ordering: the `n(n-1)/2` off-diagonal tensors `(1/√2) e_k⊙e_l`
/// (`k<l`, lexicographic), followed by the diagonal family
/// `ξ_j = (Σ_{p≤j} e_p⊙e_p - j e_{j+1}⊙e_{j+1}) / (2√(j(j+1)))`, `j = 1..n-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensorBasis<T> {
    dim: usize,
    elements: Vec<Matrix<T>>,
}

impl<T: Real> SymTensorBasis<T> {
    pub fn canonical(n: usize) -> Self {
        s20_basis(n)
    }

    /// Wraps arbitrary elements after checking they form an orthonormal
    /// basis of traceless symmetric tensors.
    pub fn from_elements(dim: usize, elements: Vec<Matrix<T>>, tol: T) -> Result<Self> {
        if elements.len() != s20_dim(dim) {
            return Err(CurvError::DimensionMismatch { left: s20_dim(dim), right: elements.len() });
        }
        for e in &elements {
            if e.rows() != dim || e.cols() != dim {
                return Err(CurvError::DimensionMismatch { left: dim, right: e.rows() });
            }
            if e.asymmetry() > tol {
                return Err(CurvError::NotSymmetric { asymmetry: e.asymmetry().as_f64() });
            }
            if e.trace().abs() > tol {
                return Err(CurvError::ParameterOutOfRange(format!("basis element has trace {}", e.trace())));
            }
        }
        let basis = Self { dim, elements };
        let dev = basis.gram().sub(&Matrix::identity(basis.len())).max_abs();
        if dev > tol {
            return Err(CurvError::ParameterOutOfRange(format!("basis Gram deviates from identity by {dev}")));
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Matrix<T>] {
        &self.elements
    }

    pub fn gram(&self) -> Matrix<T> {
        let n = self.len();
        Matrix::from_fn(n, n, |a, b| self.elements[a].frobenius_dot(&self.elements[b]))
    }

    /// Basis `{ g φ_a gᵀ }` for an orthogonal `g`.
    pub fn conjugated(&self, g: &Matrix<T>) -> Self {
        let gt = g.transpose();
        Self {
            dim: self.dim,
            elements: self.elements.iter().map(|e| g.matmul(e).matmul(&gt)).collect(),
        }
    }

    /// Basis `ψ_a = Σ_b q_ab φ_b` for an orthogonal `N×N` matrix `q`.
    pub fn mixed(&self, q: &Matrix<T>) -> Self {
        let n = self.len();
        assert_eq!((q.rows(), q.cols()), (n, n));
        let elements = (0..n)
            .map(|a| {
                let mut acc = Matrix::zeros(self.dim, self.dim);
                for b in 0..n {
                    acc = acc.add(&self.elements[b].scale(q[(a, b)]));
                }
                acc
            })
            .collect();
        Self { dim: self.dim, elements }
    }
}

pub fn s20_basis<T: Real>(n: usize) -> SymTensorBasis<T> {
    let mut elements = Vec::with_capacity(s20_dim(n));
    let inv_sqrt2 = T::one() / T::lit(2.0).sqrt();
    for k in 0..n {
        for l in (k + 1)..n {
            let mut m = Matrix::zeros(n, n);
            m[(k, l)] = inv_sqrt2;
            m[(l, k)] = inv_sqrt2;
            elements.push(m);
        }
    }
    for j in 1..n {
        let jj = T::from_usize(j);
        let norm = T::lit(2.0) * (jj * (jj + T::one())).sqrt();
        let mut m = Matrix::zeros(n, n);
        // e_p ⊙ e_p has a 2 on the diagonal.
        for p in 0..j {
            m[(p, p)] = T::lit(2.0) / norm;
        }
        m[(j, j)] = -T::lit(2.0) * jj / norm;
        elements.push(m);
    }
    SymTensorBasis { dim: n, elements }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda_gram(b: &[Matrix<f64>]) -> Matrix<f64> {
        Matrix::from_fn(b.len(), b.len(), |i, j| 0.5 * b[i].frobenius_dot(&b[j]))
    }

    #[test]
    fn lambda2_sizes_and_orthonormality() {
        let b2 = lambda2_basis::<f64>(2);
        assert_eq!(b2.len(), 1);
        assert_eq!(lambda_gram(&b2)[(0, 0)], 1.0);

        let b4 = lambda2_basis::<f64>(4);
        assert_eq!(b4.len(), 6);
        assert!(lambda_gram(&b4).sub(&Matrix::identity(6)).max_abs() <= 1e-15);

        let b5 = lambda2_basis::<f64>(5);
        assert_eq!(b5.len(), 10);
        for e in &b5 {
            let nz: Vec<f64> = e.as_slice().iter().copied().filter(|&x| x != 0.0).collect();
            assert_eq!(nz.len(), 2);
            assert!(nz.iter().all(|x| x.abs() == 1.0));
        }
    }

    #[test]
    fn s20_counts() {
        for (n, expected) in [(2, 2), (3, 5), (4, 9), (5, 14), (6, 20)] {
            assert_eq!(s20_dim(n), expected);
            assert_eq!(s20_basis::<f64>(n).len(), expected);
        }
    }

    #[test]
    fn s20_gram_is_identity() {
        for n in 2..=8 {
            let b = s20_basis::<f64>(n);
            // Direct Gram computation, not via SymTensorBasis::gram.
            let mut worst = 0.0f64;
            for (a, x) in b.elements().iter().enumerate() {
                for (c, y) in b.elements().iter().enumerate() {
                    let mut s = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            s += x[(i, j)] * y[(i, j)];
                        }
                    }
                    let target = if a == c { 1.0 } else { 0.0 };
                    worst = worst.max((s - target).abs());
                }
            }
            assert!(worst <= 1e-14, "n={n}: {worst}");
        }
    }

    #[test]
    fn diagonal_family_is_exactly_traceless() {
        for n in 2..=9 {
            let b = s20_basis::<f64>(n);
            for e in b.elements() {
                assert!(e.trace().abs() <= 1e-15);
                assert_eq!(e.asymmetry(), 0.0);
            }
        }
    }

    #[test]
    fn from_elements_rejects_non_orthonormal() {
        let mut els = s20_basis::<f64>(3).elements().to_vec();
        els[0] = els[0].scale(2.0);
        assert!(SymTensorBasis::from_elements(3, els, 1e-12).is_err());
        let ok = s20_basis::<f64>(3).elements().to_vec();
        assert!(SymTensorBasis::from_elements(3, ok, 1e-12).is_ok());
    }
}
