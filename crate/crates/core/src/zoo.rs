//! Named curvature models and the `--model` string grammar.
//!
//! ```text
//! sphere:n=4,k=1        constant curvature k (k defaults to 1)
//! flat:n=3
//! product:(A)x(B)
//! cp2                   Fubini–Study CP² in a frame adapted to J
//! csf:m=3,c=4           complex space form of holomorphic curvature c
//! random:n=5,seed=7,scale=1
//! interp:(A),(B),t=0.5  (1-t)A + tB
//! ```

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{CurvError, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::tensor::{bianchi_project, pair_count, CurvatureTensor, Entry, PairForm};

/// `R_ijkl = κ(δ_ik δ_jl - δ_il δ_jk)`. Dimension 1 gives the (flat) line.
pub fn constant_curvature<T: Real>(n: usize, kappa: T) -> Result<CurvatureTensor<T>> {
    if n < 1 {
        return Err(CurvError::DimensionTooSmall { dim: n, min: 1 });
    }
    let d = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    Ok(CurvatureTensor::from_canonical_fn(n, |i, j, k, l| {
        kappa * (d(i, k) * d(j, l) - d(i, l) * d(j, k))
    }))
}

/// Riemannian product: each factor in its own diagonal block, mixed components zero.
pub fn product<T: Real>(a: &CurvatureTensor<T>, b: &CurvatureTensor<T>) -> CurvatureTensor<T> {
    let (na, nb) = (a.dim(), b.dim());
    CurvatureTensor::from_canonical_fn(na + nb, |i, j, k, l| {
        if i < na && j < na && k < na && l < na {
            a.get(i, j, k, l)
        } else if i >= na && j >= na && k >= na && l >= na {
            b.get(i - na, j - na, k - na, l - na)
        } else {
            T::zero()
        }
    })
}

/// `⟨e_k, J e_i⟩` for `J e_{2a} = e_{2a+1}`, `J e_{2a+1} = -e_{2a}` (0-based).
fn complex_structure<T: Real>(m: usize) -> Matrix<T> {
    let mut j = Matrix::zeros(2 * m, 2 * m);
    for a in 0..m {
        j[(2 * a + 1, 2 * a)] = T::one();
        j[(2 * a, 2 * a + 1)] = -T::one();
    }
    j
}

/// Kähler tensor of constant holomorphic sectional curvature `c` on `ℝ^{2m}`.
pub fn complex_space_form<T: Real>(m: usize, c: T) -> Result<CurvatureTensor<T>> {
    if m < 1 {
        return Err(CurvError::DimensionTooSmall { dim: 2 * m, min: 2 });
    }
    let jm = complex_structure::<T>(m);
    let d = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    // ⟨J e_x, e_y⟩
    let jx = |x: usize, y: usize| jm[(y, x)];
    let q = c / T::lit(4.0);
    Ok(CurvatureTensor::from_canonical_fn(2 * m, |x, y, z, w| {
        q * (d(x, z) * d(y, w) - d(x, w) * d(y, z) + jx(x, z) * jx(y, w) - jx(x, w) * jx(y, z)
            + T::lit(2.0) * jx(x, y) * jx(z, w))
    }))
}

/// CP² with holomorphic curvature 4 in the frame `(e1, Je1 = e2, e3, Je3 = e4)`.
pub fn cp2_explicit<T: Real>() -> CurvatureTensor<T> {
    let e = |i, j, k, l, v: f64| Entry::new(i, j, k, l, T::lit(v));
    let entries = [
        e(1, 2, 1, 2, 4.0),
        e(3, 4, 3, 4, 4.0),
        e(1, 3, 1, 3, 1.0),
        e(2, 4, 2, 4, 1.0),
        e(1, 4, 1, 4, 1.0),
        e(2, 3, 2, 3, 1.0),
        e(1, 2, 3, 4, 2.0),
        e(1, 3, 4, 2, -1.0),
        e(1, 4, 2, 3, -1.0),
    ];
    CurvatureTensor::new_from_components(4, &entries).expect("fixture satisfies Bianchi")
}

/// Gaussian symmetric form on two-forms, scaled, then projected onto the
/// Bianchi-satisfying subspace. Deterministic in `seed`.
pub fn random_curvature<T: Real>(n: usize, seed: u64, scale: T) -> Result<CurvatureTensor<T>>
where
    StandardNormal: Distribution<T>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_curvature_from(n, &mut rng, scale)
}

pub fn random_curvature_from<T: Real, R: rand::Rng + ?Sized>(n: usize, rng: &mut R, scale: T) -> Result<CurvatureTensor<T>>
where
    StandardNormal: Distribution<T>,
{
    if n < 2 {
        return Err(CurvError::DimensionTooSmall { dim: n, min: 2 });
    }
    if !(scale > T::zero() && scale.is_finite()) {
        return Err(CurvError::ParameterOutOfRange(format!("scale = {scale} must be positive")));
    }
    let m = pair_count(n);
    let mut a = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let x: T = StandardNormal.sample(rng);
            a[(i, j)] = x * scale;
            a[(j, i)] = x * scale;
        }
    }
    Ok(bianchi_project(&PairForm::new(n, a)?))
}

/// `(1-t) a + t b`.
pub fn interpolate<T: Real>(a: &CurvatureTensor<T>, b: &CurvatureTensor<T>, t: T) -> Result<CurvatureTensor<T>> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(CurvError::ParameterOutOfRange(format!("t = {t} outside [0, 1]")));
    }
    a.linear_combination(T::one() - t, b, t)
}

/// Parsed `--model` specification.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    ConstantCurvature { n: usize, kappa: f64 },
    Product(Box<ModelSpec>, Box<ModelSpec>),
    ComplexSpaceForm { m: usize, c: f64 },
    Cp2Explicit,
    Random { n: usize, seed: u64, scale: f64 },
    Interpolation { a: Box<ModelSpec>, b: Box<ModelSpec>, t: f64 },
}

impl ModelSpec {
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::ConstantCurvature { n, .. } | ModelSpec::Random { n, .. } => *n,
            ModelSpec::Product(a, b) => a.dim() + b.dim(),
            ModelSpec::ComplexSpaceForm { m, .. } => 2 * m,
            ModelSpec::Cp2Explicit => 4,
            ModelSpec::Interpolation { a, .. } => a.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CurvError::ParameterOutOfRange(msg));
        match self {
            ModelSpec::ConstantCurvature { n, kappa } => {
                if *n < 1 {
                    return bad("n must be at least 1".into());
                }
                if !kappa.is_finite() {
                    return bad(format!("k = {kappa} is not finite"));
                }
            }
            ModelSpec::Product(a, b) => {
                a.validate()?;
                b.validate()?;
            }
            ModelSpec::ComplexSpaceForm { m, c } => {
                if *m < 1 {
                    return bad("m must be at least 1".into());
                }
                if !c.is_finite() {
                    return bad(format!("c = {c} is not finite"));
                }
            }
            ModelSpec::Cp2Explicit => {}
            ModelSpec::Random { n, scale, .. } => {
                if *n < 2 {
                    return bad("n must be at least 2".into());
                }
                if !(*scale > 0.0 && scale.is_finite()) {
                    return bad(format!("scale = {scale} must be positive"));
                }
            }
            ModelSpec::Interpolation { a, b, t } => {
                a.validate()?;
                b.validate()?;
                if !(0.0..=1.0).contains(t) {
                    return bad(format!("t = {t} outside [0, 1]"));
                }
                if a.dim() != b.dim() {
                    return Err(CurvError::DimensionMismatch { left: a.dim(), right: b.dim() });
                }
            }
        }
        Ok(())
    }

    pub fn build<T: Real>(&self) -> Result<CurvatureTensor<T>>
    where
        StandardNormal: Distribution<T>,
    {
        self.validate()?;
        Ok(match self {
            ModelSpec::ConstantCurvature { n, kappa } => constant_curvature(*n, T::lit(*kappa))?,
            ModelSpec::Product(a, b) => product(&a.build()?, &b.build()?),
            ModelSpec::ComplexSpaceForm { m, c } => complex_space_form(*m, T::lit(*c))?,
            ModelSpec::Cp2Explicit => cp2_explicit(),
            ModelSpec::Random { n, seed, scale } => random_curvature(*n, *seed, T::lit(*scale))?,
            ModelSpec::Interpolation { a, b, t } => interpolate(&a.build()?, &b.build()?, T::lit(*t))?,
        })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::ConstantCurvature { n, kappa } if *kappa == 0.0 => write!(f, "flat:n={n}"),
            ModelSpec::ConstantCurvature { n, kappa } => write!(f, "sphere:n={n},k={kappa}"),
            ModelSpec::Product(a, b) => write!(f, "product:({a})x({b})"),
            ModelSpec::ComplexSpaceForm { m, c } => write!(f, "csf:m={m},c={c}"),
            ModelSpec::Cp2Explicit => write!(f, "cp2"),
            ModelSpec::Random { n, seed, scale } => write!(f, "random:n={n},seed={seed},scale={scale}"),
            ModelSpec::Interpolation { a, b, t } => write!(f, "interp:({a}),({b}),t={t}"),
        }
    }
}

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(CurvError::Parse(msg.into()))
}

/// Splits `(…)` off the front of `s`, returning the inside and the remainder.
fn take_group(s: &str) -> Result<(&str, &str)> {
    if !s.starts_with('(') {
        return parse_err(format!("expected '(' at {s:?}"));
    }
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok((&s[1..i], &s[i + 1..]));
                }
            }
            _ => {}
        }
    }
    parse_err(format!("unbalanced parentheses in {s:?}"))
}

struct Params<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(s: &'a str, allowed: &[&str]) -> Result<Self> {
        let mut pairs = Vec::new();
        if s.is_empty() {
            return Ok(Self { pairs });
        }
        for part in s.split(',') {
            let Some((k, v)) = part.split_once('=') else {
                return parse_err(format!("expected key=value, got {part:?}"));
            };
            let (k, v) = (k.trim(), v.trim());
            if !allowed.contains(&k) {
                return parse_err(format!("unknown parameter {k:?}"));
            }
            if pairs.iter().any(|(p, _)| *p == k) {
                return parse_err(format!("duplicate parameter {k:?}"));
            }
            pairs.push((k, v));
        }
        Ok(Self { pairs })
    }

    fn get<V: FromStr>(&self, key: &str) -> Result<Option<V>> {
        match self.pairs.iter().find(|(k, _)| *k == key) {
            None => Ok(None),
            Some((_, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| CurvError::Parse(format!("bad value {v:?} for {key}"))),
        }
    }

    fn need<V: FromStr>(&self, key: &str) -> Result<V> {
        self.get(key)?
            .ok_or_else(|| CurvError::Parse(format!("missing parameter {key:?}")))
    }
}

impl FromStr for ModelSpec {
    type Err = CurvError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let spec = match name {
            "sphere" => {
                let p = Params::parse(rest, &["n", "k"])?;
                ModelSpec::ConstantCurvature {
                    n: p.need("n")?,
                    kappa: p.get("k")?.unwrap_or(1.0),
                }
            }
            "flat" => {
                let p = Params::parse(rest, &["n"])?;
                ModelSpec::ConstantCurvature { n: p.need("n")?, kappa: 0.0 }
            }
            "cp2" => {
                if !rest.is_empty() {
                    return parse_err("cp2 takes no parameters");
                }
                ModelSpec::Cp2Explicit
            }
            "csf" => {
                let p = Params::parse(rest, &["m", "c"])?;
                ModelSpec::ComplexSpaceForm {
                    m: p.need("m")?,
                    c: p.get("c")?.unwrap_or(4.0),
                }
            }
            "random" => {
                let p = Params::parse(rest, &["n", "seed", "scale"])?;
                ModelSpec::Random {
                    n: p.need("n")?,
                    seed: p.get("seed")?.unwrap_or(0),
                    scale: p.get("scale")?.unwrap_or(1.0),
                }
            }
            "product" => {
                let (a, tail) = take_group(rest)?;
                let Some(tail) = tail.strip_prefix('x') else {
                    return parse_err(format!("expected 'x' between factors in {s:?}"));
                };
                let (b, tail) = take_group(tail)?;
                if !tail.is_empty() {
                    return parse_err(format!("trailing input {tail:?}"));
                }
                ModelSpec::Product(Box::new(a.parse()?), Box::new(b.parse()?))
            }
            "interp" => {
                let (a, tail) = take_group(rest)?;
                let tail = tail.strip_prefix(',').ok_or_else(|| CurvError::Parse("expected ','".into()))?;
                let (b, tail) = take_group(tail)?;
                let tail = tail.strip_prefix(',').ok_or_else(|| CurvError::Parse("expected ',t='".into()))?;
                let p = Params::parse(tail, &["t"])?;
                ModelSpec::Interpolation {
                    a: Box::new(a.parse()?),
                    b: Box::new(b.parse()?),
                    t: p.need("t")?,
                }
            }
            other => return parse_err(format!("unknown model {other:?}")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{first_kind_spectrum, second_kind_spectrum};
    use crate::tensor::ToleranceConfig;

    #[test]
    fn constant_curvature_sectionals() {
        let t = constant_curvature(4, -1.0).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut u = vec![0.0; 4];
                let mut v = vec![0.0; 4];
                u[i] = 1.0;
                v[j] = 1.0;
                assert_eq!(t.sectional(&u, &v).unwrap(), -1.0);
            }
        }
        assert_eq!(constant_curvature(3, 0.0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn product_blocks() {
        let t = product(&constant_curvature(2, 3.0).unwrap(), &constant_curvature(2, 5.0).unwrap());
        assert_eq!(t.dim(), 4);
        assert_eq!(t.get(0, 1, 0, 1), 3.0);
        assert_eq!(t.get(2, 3, 2, 3), 5.0);
        assert_eq!(t.get(0, 2, 0, 2), 0.0);
        assert!(t.validate(&ToleranceConfig::default()).is_ok());
    }

    #[test]
    fn csf_matches_cp2_table() {
        let a = complex_space_form(2, 4.0).unwrap();
        let b = cp2_explicit::<f64>();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        assert_eq!(a.get(i, j, k, l), b.get(i, j, k, l));
                    }
                }
            }
        }
    }

    #[test]
    fn csf_m1_is_round_sphere() {
        let t = complex_space_form(1, 4.0).unwrap();
        assert_eq!(t.sectional(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 4.0);
    }

    #[test]
    fn csf_is_einstein() {
        for m in 1..=3 {
            let t = complex_space_form(m, 4.0).unwrap();
            let ric = t.ricci();
            let expect = 2.0 * (m as f64 + 1.0);
            assert!(ric.sub(&Matrix::identity(2 * m).scale(expect)).max_abs() < 1e-13);
            assert!(t.relative_bianchi_residual() < 1e-15);
        }
        let tol = ToleranceConfig::default();
        let a = second_kind_spectrum(&complex_space_form(2, 4.0).unwrap(), &tol).unwrap();
        let b = first_kind_spectrum(&complex_space_form(2, 4.0).unwrap(), &tol).unwrap();
        assert_eq!(a.len(), 9);
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn random_is_deterministic_and_linear() {
        let a = random_curvature::<f64>(5, 7, 1.0).unwrap();
        let b = random_curvature::<f64>(5, 7, 1.0).unwrap();
        assert_eq!(a, b);
        let c = random_curvature::<f64>(5, 7, 2.0).unwrap();
        assert_eq!(c, a.scaled(2.0));
        assert!(random_curvature::<f64>(5, 7, 0.0).is_err());
        assert!(random_curvature::<f64>(1, 7, 1.0).is_err());
    }

    #[test]
    fn interpolate_endpoints() {
        let a = cp2_explicit::<f64>();
        let b = constant_curvature(4, 1.0).unwrap();
        assert_eq!(interpolate(&a, &b, 0.0).unwrap(), a);
        assert_eq!(interpolate(&a, &b, 1.0).unwrap(), b);
        assert!(interpolate(&a, &b, 1.5).is_err());
        assert!(matches!(
            interpolate(&a, &constant_curvature(3, 1.0).unwrap(), 0.5),
            Err(CurvError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn grammar_round_trip() {
        for s in [
            "sphere:n=4,k=1",
            "flat:n=3",
            "cp2",
            "csf:m=3,c=4",
            "random:n=5,seed=7,scale=1",
            "product:(sphere:n=3,k=1)x(flat:n=1)",
            "interp:(cp2),(sphere:n=4,k=1),t=0.5",
            "product:(product:(flat:n=1)x(flat:n=1))x(sphere:n=2,k=2)",
        ] {
            let spec: ModelSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let spec: ModelSpec = "sphere:n=5".parse().unwrap();
        assert_eq!(spec, ModelSpec::ConstantCurvature { n: 5, kappa: 1.0 });
    }

    #[test]
    fn grammar_errors() {
        for s in [
            "",
            "torus:n=3",
            "sphere",
            "sphere:n=four",
            "sphere:n=3,n=4",
            "sphere:n=3,q=1",
            "cp2:n=4",
            "product:(flat:n=1)(flat:n=2)",
            "product:(flat:n=1x(flat:n=2)",
            "interp:(cp2),(flat:n=4)",
            "random:n=3,scale=-1",
        ] {
            assert!(s.parse::<ModelSpec>().is_err(), "{s:?} parsed");
        }
        assert!(matches!(
            "interp:(cp2),(flat:n=3),t=0.5".parse::<ModelSpec>(),
            Err(CurvError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            "interp:(cp2),(flat:n=4),t=2".parse::<ModelSpec>(),
            Err(CurvError::ParameterOutOfRange(_))
        ));
    }
}
