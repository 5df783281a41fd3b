//! Component identities for the second-kind form on adapted frames.
//!
//! Two families are checked. The nine four-frame tensors `φ_1..φ_9` give
//! closed forms for `R̊(φ_a, φ_a)` in terms of frame components, and their
//! weighted sum collapses to `27(R_1313+R_1414+R_2323+R_2424) - 54 R_1234`.
//! The full-frame family with `e_1` distinguished expresses the diagonal
//! sums through `Ric(e_1, e_1)` and the scalar curvature.

use serde::Serialize;

use crate::error::{CurvError, Result};
use crate::frame::{check_full_frame, Frame4};
use crate::matrix::Matrix;
use crate::operators::DenseTensor;
use crate::scalar::Real;
use crate::tensor::CurvatureTensor;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck<T> {
    pub name: String,
    pub lhs: T,
    pub rhs: T,
    /// `|lhs - rhs| / max(|rhs|, max|R|)`, or the absolute gap for the flat tensor.
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport<T> {
    /// Diagonal values `R̊(φ_a, φ_a)` in family order.
    pub values: Vec<T>,
    pub checks: Vec<IdentityCheck<T>>,
    pub max_residual: T,
}

impl<T: Real> ResidualReport<T> {
    fn build(values: Vec<T>, raw: Vec<(String, T, T)>, scale: T) -> Self {
        let checks: Vec<IdentityCheck<T>> = raw
            .into_iter()
            .map(|(name, lhs, rhs)| {
                let denom = rhs.abs().max(scale);
                let gap = (lhs - rhs).abs();
                let residual = if denom > T::zero() { gap / denom } else { gap };
                IdentityCheck { name, lhs, rhs, residual }
            })
            .collect();
        let max_residual = checks.iter().map(|c| c.residual).fold(T::zero(), T::max);
        Self {
            values,
            checks,
            max_residual,
        }
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck<T>> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passes(&self, tol: T) -> bool {
        self.max_residual < tol
    }
}

/// The nine tensors `φ_1..φ_9` built from a four-frame, each of squared norm 4.
pub fn phi_family<T: Real>(f: &Frame4<T>) -> Vec<Matrix<T>> {
    let [e1, e2, e3, e4] = f.vectors();
    let s = |a: &[T], b: &[T]| Matrix::sym_product(a, b);
    let half = T::lit(0.5);
    let (d1, d2, d3, d4) = (s(&e1, &e1), s(&e2, &e2), s(&e3, &e3), s(&e4, &e4));
    vec![
        d1.add(&d2).sub(&d3).sub(&d4).scale(half),
        d1.sub(&d2).add(&d3).sub(&d4).scale(half),
        d1.sub(&d2).sub(&d3).add(&d4).scale(half),
        s(&e1, &e4).add(&s(&e2, &e3)),
        s(&e1, &e4).sub(&s(&e2, &e3)),
        s(&e1, &e3).add(&s(&e2, &e4)),
        s(&e1, &e3).sub(&s(&e2, &e4)),
        s(&e1, &e2).add(&s(&e3, &e4)),
        s(&e1, &e2).sub(&s(&e3, &e4)),
    ]
}

/// Checks the nine closed forms, the grouped sums and the weighted total.
pub fn verify_pic_identities<T: Real>(t: &CurvatureTensor<T>, f: &Frame4<T>) -> Result<ResidualReport<T>> {
    let n = t.dim();
    if n < 4 {
        return Err(CurvError::DimensionTooSmall { dim: n, min: 4 });
    }
    if f.dim() != n {
        return Err(CurvError::DimensionMismatch { left: n, right: f.dim() });
    }
    let dense = DenseTensor::new(t);
    let v: Vec<T> = phi_family(f).iter().map(|p| dense.second_kind_form(p, p)).collect();

    let e = f.vectors();
    let r = |a: usize, b: usize, c: usize, d: usize| t.eval(&e[a - 1], &e[b - 1], &e[c - 1], &e[d - 1]);
    let (r1212, r3434) = (r(1, 2, 1, 2), r(3, 4, 3, 4));
    let (r1313, r2424) = (r(1, 3, 1, 3), r(2, 4, 2, 4));
    let (r1414, r2323) = (r(1, 4, 1, 4), r(2, 3, 2, 3));
    let (r1234, r1342, r1423) = (r(1, 2, 3, 4), r(1, 3, 4, 2), r(1, 4, 2, 3));
    let two = T::lit(2.0);
    let four = T::lit(4.0);

    let closed = [
        two * (-r1212 - r3434 + r1313 + r2424 + r1414 + r2323),
        two * (-r1313 - r2424 + r1212 + r3434 + r1414 + r2323),
        two * (-r1414 - r2323 + r1212 + r3434 + r1313 + r2424),
        two * (r1414 + r2323 + two * r1234 - two * r1342),
        two * (r1414 + r2323 - two * r1234 + two * r1342),
        two * (r1313 + r2424 - two * r1234 + two * r1423),
        two * (r1313 + r2424 + two * r1234 - two * r1423),
        two * (r1212 + r3434 + two * r1342 - two * r1423),
        two * (r1212 + r3434 - two * r1342 + two * r1423),
    ];
    let mut raw: Vec<(String, T, T)> = closed
        .iter()
        .enumerate()
        .map(|(a, &c)| (format!("phi{}", a + 1), v[a], c))
        .collect();

    let iso4 = r1313 + r1414 + r2323 + r2424;
    let pair = r1212 + r3434;
    let g156 = v[0] + v[4] + v[5];
    raw.push(("phi1+phi5+phi6".into(), g156, four * iso4 - two * pair - T::lit(12.0) * r1234));
    raw.push(("phi2+phi3".into(), v[1] + v[2], four * pair));
    raw.push(("phi8+phi9".into(), v[7] + v[8], four * pair));
    raw.push(("phi4+phi7".into(), v[3] + v[6], two * iso4 + T::lit(12.0) * r1234));
    let rest = v[1] + v[2] + v[3] + v[6] + v[7] + v[8];
    raw.push((
        "combined".into(),
        T::lit(6.0) * g156 + T::lit(1.5) * rest,
        T::lit(27.0) * iso4 - T::lit(54.0) * r1234,
    ));
    Ok(ResidualReport::build(v, raw, t.max_abs()))
}

/// Orthonormal basis of traceless symmetric tensors adapted to `e_1`:
/// `φ_1`, then `φ_i` for `i = 2..n`, `ψ_kl` for `2 ≤ k < l ≤ n` and `ξ_j`
/// for `j = 2..n-1`, all expressed in ambient coordinates.
pub fn ric_family<T: Real>(frame: &Matrix<T>) -> Result<Vec<Matrix<T>>> {
    let n = frame.rows();
    if n < 3 {
        return Err(CurvError::DimensionTooSmall { dim: n, min: 3 });
    }
    check_full_frame(frame, n)?;
    let e: Vec<Vec<T>> = (0..n).map(|i| frame.column(i)).collect();
    let s = |a: usize, b: usize| Matrix::sym_product(&e[a], &e[b]);
    let nf = T::from_usize(n);
    let inv_sqrt2 = T::one() / T::lit(2.0).sqrt();

    let mut out = Vec::with_capacity((n - 1) * (n + 2) / 2);
    let mut lead = s(0, 0).scale(nf - T::one());
    for p in 1..n {
        lead = lead.sub(&s(p, p));
    }
    out.push(lead.scale(T::one() / (T::lit(2.0) * (nf * (nf - T::one())).sqrt())));
    for i in 1..n {
        out.push(s(0, i).scale(inv_sqrt2));
    }
    for k in 1..n {
        for l in (k + 1)..n {
            out.push(s(k, l).scale(inv_sqrt2));
        }
    }
    // ξ_j with 1-based j = 2..n-1: indices p = 2..j, then e_{j+1}.
    for j in 2..n {
        let jf = T::from_usize(j);
        let mut x = Matrix::zeros(n, n);
        for p in 1..j {
            x = x.add(&s(p, p));
        }
        x = x.sub(&s(j, j).scale(jf - T::one()));
        out.push(x.scale(T::one() / (T::lit(2.0) * (jf * (jf - T::one())).sqrt())));
    }
    Ok(out)
}

/// Checks the four diagonal-sum identities and their weighted combination
/// `((n-2)(n+1)(n+2)/(2n)) Ric(e_1, e_1)`.
pub fn verify_ric_identities<T: Real>(t: &CurvatureTensor<T>, frame: &Matrix<T>) -> Result<ResidualReport<T>> {
    let n = t.dim();
    if n < 3 {
        return Err(CurvError::DimensionTooSmall { dim: n, min: 3 });
    }
    if frame.rows() != n {
        return Err(CurvError::DimensionMismatch { left: n, right: frame.rows() });
    }
    let family = ric_family(frame)?;
    let dense = DenseTensor::new(t);
    let v: Vec<T> = family.iter().map(|p| dense.second_kind_form(p, p)).collect();

    let e1 = frame.column(0);
    let r11: T = crate::matrix::dot(&e1, &t.ricci().mul_vec(&e1));
    let s = t.scalar();
    let nf = T::from_usize(n);
    let one = T::one();
    let two = T::lit(2.0);

    let psi_count = (n - 1) * (n - 2) / 2;
    let eq1 = v[0];
    let eq2: T = v[1..n].iter().copied().sum();
    let eq3: T = v[n..n + psi_count].iter().copied().sum();
    let eq4: T = v[n + psi_count..].iter().copied().sum();

    let rhs1 = two / (nf - one) * r11 - s / (nf * (nf - one));
    let rhs2 = r11;
    let rhs3 = s / two - r11;
    let rhs4 = (s - two * r11) / (nf - one);
    let w1 = (nf - two) * (nf + one) / two;
    let w2 = (nf - two) / nf;
    let lhs = w1 * (eq1 + eq2) + w2 * (eq3 + eq4);
    let rhs = (nf - two) * (nf + one) * (nf + two) / (two * nf) * r11;

    let raw = vec![
        ("eq1".to_string(), eq1, rhs1),
        ("eq2".to_string(), eq2, rhs2),
        ("eq3".to_string(), eq3, rhs3),
        ("eq4".to_string(), eq4, rhs4),
        ("combined".to_string(), lhs, rhs),
    ];
    Ok(ResidualReport::build(v, raw, t.max_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::SymTensorBasis;
    use crate::frame::random_orthogonal;
    use crate::isotropic::trial_rng;
    use crate::tensor::{bianchi_project, PairForm};
    use rand_distr::{Distribution, StandardNormal};

    fn sphere(n: usize) -> CurvatureTensor<f64> {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        CurvatureTensor::from_canonical_fn(n, |i, j, k, l| d(i, k) * d(j, l) - d(i, l) * d(j, k))
    }

    fn random_tensor(n: usize, seed: u64) -> CurvatureTensor<f64> {
        let mut rng = trial_rng(seed, 0);
        let m = crate::tensor::pair_count(n);
        let mut a = Matrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let x: f64 = StandardNormal.sample(&mut rng);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        bianchi_project(&PairForm::new(n, a).unwrap())
    }

    #[test]
    fn phi_family_is_orthogonal_with_norm_two() {
        for n in [4, 6] {
            let f = Frame4::<f64>::standard(n).unwrap();
            let phis = phi_family(&f);
            for (a, x) in phis.iter().enumerate() {
                assert_eq!(x.trace(), 0.0);
                for (b, y) in phis.iter().enumerate() {
                    let expect = if a == b { 4.0 } else { 0.0 };
                    assert_eq!(x.frobenius_dot(y), expect);
                }
            }
        }
    }

    #[test]
    fn pic_identities_on_random_tensors() {
        for seed in 0..20 {
            let n = 4 + (seed as usize % 3);
            let t = random_tensor(n, seed);
            let mut rng = trial_rng(seed, 1);
            let f = Frame4::<f64>::random(n, &mut rng).unwrap();
            let rep = verify_pic_identities(&t, &f).unwrap();
            assert!(rep.passes(1e-12), "seed {seed}: {:?}", rep.checks);
        }
    }

    #[test]
    fn pic_identities_flat_and_small() {
        let rep = verify_pic_identities(&CurvatureTensor::<f64>::zero(4), &Frame4::standard(4).unwrap()).unwrap();
        assert!(rep.values.iter().all(|&v| v == 0.0));
        assert_eq!(rep.max_residual, 0.0);
        let f = Frame4::standard(4).unwrap();
        assert!(matches!(verify_pic_identities(&sphere(3), &f), Err(CurvError::DimensionTooSmall { .. })));
    }

    #[test]
    fn ric_family_is_orthonormal() {
        for n in 3..=6 {
            let mut rng = trial_rng(n as u64, 2);
            let q: Matrix<f64> = random_orthogonal(n, &mut rng);
            let fam = ric_family(&q).unwrap();
            assert!(SymTensorBasis::from_elements(n, fam, 1e-12).is_ok());
        }
    }

    #[test]
    fn ric_identities_on_random_tensors() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 4);
            let t = random_tensor(n, seed + 100);
            let mut rng = trial_rng(seed, 3);
            let q: Matrix<f64> = random_orthogonal(n, &mut rng);
            let rep = verify_ric_identities(&t, &q).unwrap();
            assert!(rep.passes(1e-12), "seed {seed}: {:?}", rep.checks);
        }
    }

    #[test]
    fn sphere_eq1_is_one() {
        let rep = verify_ric_identities(&sphere(5), &Matrix::identity(5)).unwrap();
        assert!((rep.check("eq1").unwrap().lhs - 1.0).abs() < 1e-14);
    }
}
