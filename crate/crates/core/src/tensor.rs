//! Algebraic curvature tensors: canonical storage, validation and the basic
//! contractions (Ricci, scalar, sectional).
//!
//! Components are stored once per canonical quadruple `(i,j,k,l)` with
//! `i<j`, `k<l` and `(i,j) <= (k,l)` lexicographically; every read goes
//! through a sign-tracking canonicalizer, so the antisymmetries
//! `R_ijkl = -R_jikl = -R_ijlk` and pair symmetry `R_ijkl = R_klij` hold
//! exactly. The sign convention is `R_1212 = sec(e1, e2)`: the unit round
//! sphere has `R_ijkl = δ_ik δ_jl - δ_il δ_jk`.

use crate::error::{CurvError, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Tolerances used across validation, diagonalization and identity checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig<T> {
    /// Bianchi residual bound, relative to the largest component.
    pub tol_bianchi: T,
    /// Jacobi stop: off-diagonal Frobenius norm relative to `‖M‖_F`.
    pub tol_eigen: T,
    /// Bound for identity residuals and strict-positivity decisions.
    pub tol_identity: T,
}

impl<T: Real> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self {
            tol_bianchi: T::tol_floor(1e-10, 256.0),
            tol_eigen: T::tol_floor(1e-12, 16.0),
            tol_identity: T::tol_floor(1e-8, 1024.0),
        }
    }
}

impl<T: Real> ToleranceConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("tol_bianchi", self.tol_bianchi),
            ("tol_eigen", self.tol_eigen),
            ("tol_identity", self.tol_identity),
        ];
        for (name, v) in checks {
            if !(v > T::zero()) {
                return Err(CurvError::InvalidTolerance { name });
            }
        }
        Ok(())
    }
}

/// A single component assignment with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry<T> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub v: T,
}

impl<T> Entry<T> {
    pub fn new(i: usize, j: usize, k: usize, l: usize, v: T) -> Self {
        Self { i, j, k, l, v }
    }
}

/// Number of two-forms `n(n-1)/2`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `e_i ∧ e_j` (`i < j`, 0-based) in lexicographic order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// Sign-tracked canonical location of `(i,j,k,l)`: `(sign, pair_a, pair_b)`
/// with `pair_a <= pair_b`, or `None` when antisymmetry forces zero.
#[inline]
pub fn canonicalize(n: usize, i: usize, j: usize, k: usize, l: usize) -> Option<(i8, usize, usize)> {
    if i == j || k == l {
        return None;
    }
    let mut sign = 1i8;
    let (i, j) = if i < j { (i, j) } else { sign = -sign; (j, i) };
    let (k, l) = if k < l { (k, l) } else { sign = -sign; (l, k) };
    let a = pair_index(n, i, j);
    let b = pair_index(n, k, l);
    Some(if a <= b { (sign, a, b) } else { (sign, b, a) })
}

#[inline]
fn packed_index(m: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < m);
    a * m - a * a.saturating_sub(1) / 2 + (b - a)
}

/// Dimension-`n` algebraic curvature operator. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<T> {
    dim: usize,
    pairs: usize,
    data: Vec<T>,
}

impl<T: Real> CurvatureTensor<T> {
    /// The flat tensor. Dimension 1 is allowed as a product factor (a line).
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let m = pair_count(dim);
        Self {
            dim,
            pairs: m,
            data: vec![T::zero(); m * (m + 1) / 2],
        }
    }

    /// Builds a tensor from a value function evaluated only on canonical
    /// quadruples (0-based). No validation.
    pub(crate) fn from_canonical_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let mut t = Self::zero(dim);
        let pairs = pair_list(dim);
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate().skip(a) {
                let idx = packed_index(t.pairs, a, b);
                t.data[idx] = f(i, j, k, l);
            }
        }
        t
    }

    /// Like `from_canonical_fn`, then validated against `tol`.
    pub fn from_fn(
        dim: usize,
        f: impl FnMut(usize, usize, usize, usize) -> T,
        tol: &ToleranceConfig<T>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(CurvError::DimensionTooSmall { dim, min: 2 });
        }
        let t = Self::from_canonical_fn(dim, f);
        t.validate(tol)?;
        Ok(t)
    }

    /// Builds from a symmetric `m×m` matrix over the two-form basis. No Bianchi check.
    pub(crate) fn from_pair_matrix_unchecked(dim: usize, m: &Matrix<T>) -> Self {
        let p = pair_count(dim);
        assert_eq!((m.rows(), m.cols()), (p, p));
        let mut t = Self::zero(dim);
        for a in 0..p {
            for b in a..p {
                t.data[packed_index(p, a, b)] = (m[(a, b)] + m[(b, a)]) * T::lit(0.5);
            }
        }
        t
    }

    /// Assembles a tensor from component entries given in any index order.
    pub fn new_from_components(n: usize, entries: &[Entry<T>]) -> Result<Self> {
        Self::new_from_components_with(n, entries, &ToleranceConfig::default())
    }

    pub fn new_from_components_with(n: usize, entries: &[Entry<T>], tol: &ToleranceConfig<T>) -> Result<Self> {
        tol.validate()?;
        if n < 2 {
            return Err(CurvError::DimensionTooSmall { dim: n, min: 2 });
        }
        let mut t = Self::zero(n);
        let mut set = vec![false; t.data.len()];
        for e in entries {
            let idx = [e.i, e.j, e.k, e.l];
            if idx.iter().any(|&x| x == 0 || x > n) {
                return Err(CurvError::IndexOutOfRange { i: e.i, j: e.j, k: e.k, l: e.l, dim: n });
            }
            let conflict = |existing: T| CurvError::SymmetryConflict {
                i: e.i,
                j: e.j,
                k: e.k,
                l: e.l,
                existing: existing.as_f64(),
                requested: e.v.as_f64(),
            };
            match canonicalize(n, e.i - 1, e.j - 1, e.k - 1, e.l - 1) {
                None => {
                    if e.v != T::zero() {
                        return Err(conflict(T::zero()));
                    }
                }
                Some((sign, a, b)) => {
                    let value = if sign > 0 { e.v } else { -e.v };
                    let p = packed_index(t.pairs, a, b);
                    if set[p] && t.data[p] != value {
                        let existing = if sign > 0 { t.data[p] } else { -t.data[p] };
                        return Err(conflict(existing));
                    }
                    t.data[p] = value;
                    set[p] = true;
                }
            }
        }
        t.validate(tol)?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pair_count(&self) -> usize {
        self.pairs
    }

    /// Component `R_ijkl`, 0-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        match canonicalize(self.dim, i, j, k, l) {
            None => T::zero(),
            Some((sign, a, b)) => {
                let v = self.data[packed_index(self.pairs, a, b)];
                if sign > 0 {
                    v
                } else {
                    -v
                }
            }
        }
    }

    /// Component at two-form positions `(a, b)`.
    #[inline]
    pub fn pair_component(&self, a: usize, b: usize) -> T {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.data[packed_index(self.pairs, a, b)]
    }

    /// Symmetric `m×m` matrix `R_{(ij),(kl)}`; equals the matrix of the
    /// first-kind operator in the `e_i ∧ e_j` basis.
    pub fn pair_matrix(&self) -> Matrix<T> {
        Matrix::from_fn(self.pairs, self.pairs, |a, b| self.pair_component(a, b))
    }

    /// All `n⁴` components, index `((i·n + j)·n + k)·n + l`.
    pub fn to_dense(&self) -> Vec<T> {
        let n = self.dim;
        let mut out = vec![T::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        out[((i * n + j) * n + k) * n + l] = self.get(i, j, k, l);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Largest absolute cyclic sum `R_ijkl + R_iklj + R_iljk`. The sum is
    /// totally antisymmetric for tensors with the pair symmetries, so only
    /// `i<j<k<l` needs checking.
    pub fn bianchi_residual(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for l in (k + 1)..n {
                        let s = self.get(i, j, k, l) + self.get(i, k, l, j) + self.get(i, l, j, k);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn relative_bianchi_residual(&self) -> T {
        let scale = self.max_abs();
        let r = self.bianchi_residual();
        if scale > T::zero() {
            r / scale
        } else {
            r
        }
    }

    pub fn validate(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        let r = self.relative_bianchi_residual();
        if !(r <= tol.tol_bianchi) {
            return Err(CurvError::BianchiViolation {
                residual: r.as_f64(),
                tol: tol.tol_bianchi.as_f64(),
            });
        }
        Ok(())
    }

    /// Nonzero components in canonical order, 1-based.
    pub fn canonical_entries(&self) -> Vec<Entry<T>> {
        let pairs = pair_list(self.dim);
        let mut out = Vec::new();
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate().skip(a) {
                let v = self.data[packed_index(self.pairs, a, b)];
                if v != T::zero() {
                    out.push(Entry::new(i + 1, j + 1, k + 1, l + 1, v));
                }
            }
        }
        out
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            pairs: self.pairs,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.dim != other.dim {
            return Err(CurvError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(Self {
            dim: self.dim,
            pairs: self.pairs,
            data: self.data.iter().zip(&other.data).map(|(&x, &y)| a * x + b * y).collect(),
        })
    }

    /// `R(a, b, c, d) = Σ a_i b_j c_k d_l R_ijkl`.
    pub fn eval(&self, a: &[T], b: &[T], c: &[T], d: &[T]) -> T {
        let ab = wedge(a, b);
        let cd = wedge(c, d);
        let mut s = T::zero();
        for p in 0..self.pairs {
            if ab[p] == T::zero() {
                continue;
            }
            let mut row = T::zero();
            for q in 0..self.pairs {
                row += self.pair_component(p, q) * cd[q];
            }
            s += ab[p] * row;
        }
        s
    }

    /// Pulls the tensor back through the columns of `frame` (`n×p`):
    /// `R'_abcd = R(f_a, f_b, f_c, f_d)`.
    pub fn pullback(&self, frame: &Matrix<T>) -> Result<Self> {
        if frame.rows() != self.dim {
            return Err(CurvError::DimensionMismatch { left: self.dim, right: frame.rows() });
        }
        let p = frame.cols();
        let sub_pairs = pair_list(p);
        // W maps the sub-two-form basis into the ambient one.
        let mut w = Matrix::zeros(self.pairs, sub_pairs.len());
        for (col, &(a, b)) in sub_pairs.iter().enumerate() {
            let fa = frame.column(a);
            let fb = frame.column(b);
            let ab = wedge(&fa, &fb);
            for (row, v) in ab.into_iter().enumerate() {
                w[(row, col)] = v;
            }
        }
        let m = w.transpose().matmul(&self.pair_matrix()).matmul(&w);
        Ok(Self::from_pair_matrix_unchecked(p, &m))
    }

    /// `Ric_ij = Σ_k R_ikjk`.
    pub fn ricci(&self) -> Matrix<T> {
        let n = self.dim;
        let mut ric = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: T = (0..n).map(|k| self.get(i, k, j, k)).sum();
                ric[(i, j)] = s;
                ric[(j, i)] = s;
            }
        }
        ric
    }

    pub fn scalar(&self) -> T {
        self.ricci().trace()
    }

    /// Sectional curvature of `span(u, v)`.
    pub fn sectional(&self, u: &[T], v: &[T]) -> Result<T> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(CurvError::DimensionMismatch { left: self.dim, right: u.len().max(v.len()) });
        }
        let uu = crate::matrix::dot(u, u);
        let vv = crate::matrix::dot(v, v);
        let uv = crate::matrix::dot(u, v);
        let gram = uu * vv - uv * uv;
        let threshold = T::tol_floor(1e-12, 16.0) * uu * vv;
        if !(gram > threshold) {
            return Err(CurvError::DegeneratePlane { gram: gram.as_f64() });
        }
        Ok(self.eval(u, v, u, v) / gram)
    }
}

/// Coordinates of `a ∧ b` in the orthonormal `e_i ∧ e_j` basis.
pub fn wedge<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len();
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(a[i] * b[j] - a[j] * b[i]);
        }
    }
    out
}

/// A symmetric bilinear form on two-forms that need not satisfy Bianchi.
#[derive(Clone, Debug, PartialEq)]
pub struct PairForm<T> {
    dim: usize,
    matrix: Matrix<T>,
}

impl<T: Real> PairForm<T> {
    pub fn new(dim: usize, matrix: Matrix<T>) -> Result<Self> {
        let m = pair_count(dim);
        if matrix.rows() != m || matrix.cols() != m {
            return Err(CurvError::DimensionMismatch { left: m, right: matrix.rows() });
        }
        let asym = matrix.asymmetry();
        if asym > T::zero() {
            return Err(CurvError::NotSymmetric { asymmetry: asym.as_f64() });
        }
        Ok(Self { dim, matrix })
    }

    /// Form whose `(i<j, k<l)` entries are `f(i,j,k,l)`; lower triangle mirrored.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let pairs = pair_list(dim);
        let m = pairs.len();
        let mut matrix = Matrix::zeros(m, m);
        for a in 0..m {
            for b in a..m {
                let (i, j) = pairs[a];
                let (k, l) = pairs[b];
                let v = f(i, j, k, l);
                matrix[(a, b)] = v;
                matrix[(b, a)] = v;
            }
        }
        Self { dim, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    fn get(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        match canonicalize(self.dim, i, j, k, l) {
            None => T::zero(),
            Some((sign, a, b)) => {
                let v = self.matrix[(a, b)];
                if sign > 0 {
                    v
                } else {
                    -v
                }
            }
        }
    }
}

impl<T: Real> From<&CurvatureTensor<T>> for PairForm<T> {
    fn from(t: &CurvatureTensor<T>) -> Self {
        Self {
            dim: t.dim,
            matrix: t.pair_matrix(),
        }
    }
}

/// Removes the four-form part: `R' = R - b(R)` with
/// `b(R)_ijkl = (R_ijkl + R_iklj + R_iljk)/3`.
pub fn bianchi_project<T: Real>(raw: &PairForm<T>) -> CurvatureTensor<T> {
    let third = T::one() / T::lit(3.0);
    CurvatureTensor::from_canonical_fn(raw.dim, |i, j, k, l| {
        let r = raw.get(i, j, k, l);
        let cyc = r + raw.get(i, k, l, j) + raw.get(i, l, j, k);
        r - cyc * third
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(n: usize) -> CurvatureTensor<f64> {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        CurvatureTensor::from_canonical_fn(n, |i, j, k, l| d(i, k) * d(j, l) - d(i, l) * d(j, k))
    }

    #[test]
    fn packed_layout_is_dense_and_injective() {
        for n in 2..7 {
            let m = pair_count(n);
            let mut seen = vec![false; m * (m + 1) / 2];
            for a in 0..m {
                for b in a..m {
                    let p = packed_index(m, a, b);
                    assert!(!seen[p]);
                    seen[p] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn pair_index_matches_list() {
        let n = 6;
        for (idx, &(i, j)) in pair_list(n).iter().enumerate() {
            assert_eq!(pair_index(n, i, j), idx);
        }
    }

    #[test]
    fn canonical_round_trip_exhaustive() {
        // Write each symmetric image of a quadruple, read every image back.
        for n in 2..=5 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            if i == j || k == l {
                                continue;
                            }
                            let t = CurvatureTensor::<f64>::new_from_components_with(
                                n,
                                &[Entry::new(i + 1, j + 1, k + 1, l + 1, 1.0)],
                                &ToleranceConfig { tol_bianchi: 1e300, ..Default::default() },
                            )
                            .unwrap();
                            assert_eq!(t.get(i, j, k, l), 1.0);
                            assert_eq!(t.get(j, i, k, l), -1.0);
                            assert_eq!(t.get(i, j, l, k), -1.0);
                            assert_eq!(t.get(j, i, l, k), 1.0);
                            assert_eq!(t.get(k, l, i, j), 1.0);
                            assert_eq!(t.get(l, k, i, j), -1.0);
                            assert_eq!(t.get(k, l, j, i), -1.0);
                            assert_eq!(t.get(l, k, j, i), 1.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn empty_entries_give_flat_tensor() {
        let t = CurvatureTensor::<f64>::new_from_components(3, &[]).unwrap();
        assert_eq!(t.max_abs(), 0.0);
        assert_eq!(t.bianchi_residual(), 0.0);
        assert_eq!(t.scalar(), 0.0);
        assert_eq!(t.ricci().max_abs(), 0.0);
    }

    #[test]
    fn antisymmetry_forcing_is_a_conflict() {
        let e = [Entry::new(1, 2, 1, 2, 1.0), Entry::new(2, 1, 1, 2, 1.0)];
        let err = CurvatureTensor::<f64>::new_from_components(4, &e).unwrap_err();
        assert!(matches!(err, CurvError::SymmetryConflict { .. }));
        // Consistent duplicates are fine.
        let ok = [Entry::new(1, 2, 1, 2, 1.0), Entry::new(2, 1, 1, 2, -1.0), Entry::new(1, 2, 2, 1, -1.0)];
        assert!(CurvatureTensor::<f64>::new_from_components(4, &ok).is_ok());
    }

    #[test]
    fn repeated_index_with_nonzero_value_is_a_conflict() {
        let e = [Entry::new(1, 1, 2, 3, 2.0)];
        assert!(matches!(
            CurvatureTensor::<f64>::new_from_components(3, &e),
            Err(CurvError::SymmetryConflict { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            CurvatureTensor::<f64>::new_from_components(1, &[]),
            Err(CurvError::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            CurvatureTensor::<f64>::new_from_components(3, &[Entry::new(1, 2, 1, 4, 1.0)]),
            Err(CurvError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            CurvatureTensor::<f64>::new_from_components(3, &[Entry::new(0, 2, 1, 2, 1.0)]),
            Err(CurvError::IndexOutOfRange { .. })
        ));
        // A lone R_1234 breaks the cyclic identity.
        assert!(matches!(
            CurvatureTensor::<f64>::new_from_components(4, &[Entry::new(1, 2, 3, 4, 1.0)]),
            Err(CurvError::BianchiViolation { .. })
        ));
    }

    #[test]
    fn literal_cp2_remark_table_is_rejected() {
        // R_1234 = R_1423 = 1, R_1342 = -1 has cyclic sum 1.
        let e = [
            Entry::new(1, 2, 1, 2, 4.0),
            Entry::new(3, 4, 3, 4, 4.0),
            Entry::new(1, 3, 1, 3, 1.0),
            Entry::new(2, 4, 2, 4, 1.0),
            Entry::new(1, 4, 1, 4, 1.0),
            Entry::new(2, 3, 2, 3, 1.0),
            Entry::new(1, 2, 3, 4, 1.0),
            Entry::new(1, 4, 2, 3, 1.0),
            Entry::new(1, 3, 4, 2, -1.0),
        ];
        match CurvatureTensor::<f64>::new_from_components(4, &e) {
            Err(CurvError::BianchiViolation { residual, .. }) => assert!((residual - 0.25).abs() < 1e-15),
            other => panic!("expected Bianchi violation, got {other:?}"),
        }
    }

    #[test]
    fn sphere_contractions() {
        for n in 2..7 {
            let s = sphere(n);
            let ric = s.ricci();
            assert!(ric.sub(&Matrix::identity(n).scale((n - 1) as f64)).max_abs() < 1e-15);
            assert_eq!(s.scalar(), (n * (n - 1)) as f64);
        }
    }

    #[test]
    fn sectional_of_sphere_and_degenerate_plane() {
        let s = sphere(4);
        let u = [1.0, 2.0, 0.0, -1.0];
        let v = [0.5, 0.0, 3.0, 1.0];
        assert!((s.sectional(&u, &v).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(s.sectional(&u, &u), Err(CurvError::DegeneratePlane { .. })));
        let w = [2.0, 4.0, 0.0, -2.0];
        assert!(matches!(s.sectional(&u, &w), Err(CurvError::DegeneratePlane { .. })));
    }

    #[test]
    fn projector_fixes_valid_tensors() {
        let s = sphere(5);
        let p = bianchi_project(&PairForm::from(&s));
        for (a, b) in s.data.iter().zip(&p.data) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn projector_kills_four_forms() {
        // Sign of the permutation taking (i,j,k,l) to sorted order.
        fn perm_sign(v: [usize; 4]) -> f64 {
            let mut s = 1.0;
            for a in 0..4 {
                for b in (a + 1)..4 {
                    if v[a] == v[b] {
                        return 0.0;
                    }
                    if v[a] > v[b] {
                        s = -s;
                    }
                }
            }
            s
        }
        let w = PairForm::from_fn(4, |i, j, k, l| perm_sign([i, j, k, l]));
        // Oracle: the cyclic sum of a four-form is three times itself.
        for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
            let cyc = w.get(i, j, k, l) + w.get(i, k, l, j) + w.get(i, l, j, k);
            assert_eq!(cyc, 3.0 * w.get(i, j, k, l));
        }
        let p = bianchi_project(&w);
        assert_eq!(p.max_abs(), 0.0);
    }

    #[test]
    fn pullback_matches_eval() {
        let s = sphere(4).scaled(2.0);
        let f = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.6], &[0.0, 0.8], &[0.0, 0.0]]);
        let p = s.pullback(&f).unwrap();
        assert_eq!(p.dim(), 2);
        let a = f.column(0);
        let b = f.column(1);
        assert!((p.get(0, 1, 0, 1) - s.eval(&a, &b, &a, &b)).abs() < 1e-15);
        assert!((p.get(0, 1, 0, 1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn tolerance_validation() {
        let mut tol = ToleranceConfig::<f64>::default();
        assert!(tol.validate().is_ok());
        tol.tol_eigen = 0.0;
        assert!(matches!(tol.validate(), Err(CurvError::InvalidTolerance { name: "tol_eigen" })));
    }
}
