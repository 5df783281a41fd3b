//! Curvature operators of the first and second kind.

use crate::basis::SymTensorBasis;
use crate::eigen::{eigen_sym, Spectrum};
use crate::error::{CurvError, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::tensor::{CurvatureTensor, ToleranceConfig};

/// Dense view of a tensor for repeated contractions.
pub struct DenseTensor<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseTensor<T> {
    pub fn new(t: &CurvatureTensor<T>) -> Self {
        Self {
            n: t.dim(),
            data: t.to_dense(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        let n = self.n;
        self.data[((i * n + j) * n + k) * n + l]
    }

    /// `R̊(A)_pq = Σ_kl R_pklq A_kl`; symmetric whenever `A` is.
    pub fn second_kind_apply(&self, a: &Matrix<T>) -> Matrix<T> {
        let n = self.n;
        let mut out = Matrix::zeros(n, n);
        for p in 0..n {
            for q in p..n {
                let mut s = T::zero();
                for k in 0..n {
                    for l in 0..n {
                        let akl = a[(k, l)];
                        if akl != T::zero() {
                            s += self.at(p, k, l, q) * akl;
                        }
                    }
                }
                out[(p, q)] = s;
                out[(q, p)] = s;
            }
        }
        out
    }

    /// `R̊(A, B) = Σ R_iklj A_ij B_kl`.
    pub fn second_kind_form(&self, a: &Matrix<T>, b: &Matrix<T>) -> T {
        self.second_kind_apply(a).frobenius_dot(b)
    }
}

/// `R̊(A, B)` for symmetric `n×n` tensors.
pub fn second_kind_form<T: Real>(t: &CurvatureTensor<T>, a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    check_shape(t, a)?;
    check_shape(t, b)?;
    Ok(DenseTensor::new(t).second_kind_form(a, b))
}

fn check_shape<T: Real>(t: &CurvatureTensor<T>, a: &Matrix<T>) -> Result<()> {
    if a.rows() != t.dim() || a.cols() != t.dim() {
        return Err(CurvError::DimensionMismatch { left: t.dim(), right: a.rows() });
    }
    Ok(())
}

/// Matrix `M_ab = R̊(φ_a, φ_b)` of the second-kind operator in `basis`.
pub fn second_kind_matrix<T: Real>(t: &CurvatureTensor<T>, basis: &SymTensorBasis<T>) -> Result<Matrix<T>> {
    if basis.dim() != t.dim() {
        return Err(CurvError::DimensionMismatch { left: t.dim(), right: basis.dim() });
    }
    let dense = DenseTensor::new(t);
    let images: Vec<Matrix<T>> = basis.elements().iter().map(|e| dense.second_kind_apply(e)).collect();
    let n = basis.len();
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = images[a].frobenius_dot(&basis.elements()[b]);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    Ok(m)
}

/// Matrix of `R̂(e_i∧e_j) = ½ Σ R_ijkl e_k∧e_l` in lexicographic two-form order.
pub fn first_kind_matrix<T: Real>(t: &CurvatureTensor<T>) -> Matrix<T> {
    t.pair_matrix()
}

/// Second-kind spectrum in the canonical basis.
pub fn second_kind_spectrum<T: Real>(t: &CurvatureTensor<T>, tol: &ToleranceConfig<T>) -> Result<Spectrum<T>> {
    let basis = SymTensorBasis::canonical(t.dim());
    eigen_sym(&second_kind_matrix(t, &basis)?, tol.tol_eigen)
}

pub fn first_kind_spectrum<T: Real>(t: &CurvatureTensor<T>, tol: &ToleranceConfig<T>) -> Result<Spectrum<T>> {
    eigen_sym(&first_kind_matrix(t), tol.tol_eigen)
}

pub fn ricci_spectrum<T: Real>(t: &CurvatureTensor<T>, tol: &ToleranceConfig<T>) -> Result<Spectrum<T>> {
    eigen_sym(&t.ricci(), tol.tol_eigen)
}
