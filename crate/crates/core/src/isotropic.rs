//! Isotropic curvature over orthonormal four-frames and its sampled minimum.
//!
//! For a frame `(e1, e2, e3, e4)` the isotropic curvature is
//! `R_1313 + R_1414 + R_2323 + R_2424 - 2 R_1234`. The minimum over frames
//! is searched by multistart projected descent on the Stiefel manifold of
//! orthonormal `n×4` blocks, with Gram–Schmidt as the retraction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CurvError, Result};
use crate::frame::Frame4;
use crate::matrix::{orthonormalize_columns, Matrix};
use crate::operators::ricci_spectrum;
use crate::scalar::Real;
use crate::tensor::{pair_count, CurvatureTensor, ToleranceConfig};

/// Frame-pulled-back isotropic expression with its Euclidean gradient.
pub struct IsotropicObjective<T> {
    n: usize,
    m: usize,
    pairs: Vec<T>,
    scale: T,
}

impl<T: Real> IsotropicObjective<T> {
    pub fn new(t: &CurvatureTensor<T>) -> Result<Self> {
        if t.dim() < 4 {
            return Err(CurvError::DimensionTooSmall { dim: t.dim(), min: 4 });
        }
        let pm = t.pair_matrix();
        Ok(Self {
            n: t.dim(),
            m: pair_count(t.dim()),
            pairs: pm.as_slice().to_vec(),
            scale: t.max_abs(),
        })
    }

    fn wedge_into(&self, a: &[T], b: &[T], out: &mut [T]) {
        let n = self.n;
        let mut p = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                out[p] = a[i] * b[j] - a[j] * b[i];
                p += 1;
            }
        }
    }

    fn apply(&self, w: &[T], out: &mut [T]) {
        let m = self.m;
        for (p, o) in out.iter_mut().enumerate() {
            let row = &self.pairs[p * m..(p + 1) * m];
            *o = row.iter().zip(w).map(|(&x, &y)| x * y).sum();
        }
    }

    fn columns(&self, f: &Matrix<T>) -> [Vec<T>; 4] {
        [f.column(0), f.column(1), f.column(2), f.column(3)]
    }

    pub fn value(&self, f: &Matrix<T>) -> T {
        let [a, b, c, d] = self.columns(f);
        let mut w = vec![T::zero(); self.m];
        let mut mw = vec![T::zero(); self.m];
        let mut quad = |x: &[T], y: &[T]| {
            self.wedge_into(x, y, &mut w);
            self.apply(&w, &mut mw);
            w.iter().zip(&mw).map(|(&p, &q)| p * q).sum::<T>()
        };
        let s = quad(&a, &c) + quad(&a, &d) + quad(&b, &c) + quad(&b, &d);
        let mut wab = vec![T::zero(); self.m];
        let mut wcd = vec![T::zero(); self.m];
        self.wedge_into(&a, &b, &mut wab);
        self.wedge_into(&c, &d, &mut wcd);
        self.apply(&wcd, &mut mw);
        let cross: T = wab.iter().zip(&mw).map(|(&p, &q)| p * q).sum();
        s - T::lit(2.0) * cross
    }

    /// Value and gradient with respect to the four columns (`n×4`).
    pub fn value_and_gradient(&self, f: &Matrix<T>) -> (T, Matrix<T>) {
        let n = self.n;
        let cols = self.columns(f);
        let mut grad = Matrix::zeros(n, 4);
        let mut w = vec![T::zero(); self.m];
        let mut g = vec![T::zero(); self.m];
        let mut value = T::zero();

        // d/dx and d/dy of a form evaluated on x∧y with upstream g = ∂/∂w.
        let back = |x: usize, y: usize, g: &[T], grad: &mut Matrix<T>| {
            // grad_x = G y, grad_y = -G x, with G the antisymmetric lift of g.
            let mut p = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    let gp = g[p];
                    p += 1;
                    if gp == T::zero() {
                        continue;
                    }
                    grad[(i, x)] += gp * cols[y][j];
                    grad[(j, x)] -= gp * cols[y][i];
                    grad[(j, y)] += gp * cols[x][i];
                    grad[(i, y)] -= gp * cols[x][j];
                }
            }
        };

        for (x, y) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            self.wedge_into(&cols[x], &cols[y], &mut w);
            self.apply(&w, &mut g);
            value += w.iter().zip(&g).map(|(&p, &q)| p * q).sum::<T>();
            for v in g.iter_mut() {
                *v *= T::lit(2.0);
            }
            back(x, y, &g, &mut grad);
        }

        let mut wab = vec![T::zero(); self.m];
        let mut wcd = vec![T::zero(); self.m];
        self.wedge_into(&cols[0], &cols[1], &mut wab);
        self.wedge_into(&cols[2], &cols[3], &mut wcd);
        let mut mab = vec![T::zero(); self.m];
        let mut mcd = vec![T::zero(); self.m];
        self.apply(&wab, &mut mab);
        self.apply(&wcd, &mut mcd);
        let cross: T = wab.iter().zip(&mcd).map(|(&p, &q)| p * q).sum();
        value -= T::lit(2.0) * cross;
        let minus_two = -T::lit(2.0);
        let g_ab: Vec<T> = mcd.iter().map(|&v| minus_two * v).collect();
        let g_cd: Vec<T> = mab.iter().map(|&v| minus_two * v).collect();
        back(0, 1, &g_ab, &mut grad);
        back(2, 3, &g_cd, &mut grad);
        (value, grad)
    }
}

/// Isotropic curvature of `t` on the frame `f`.
pub fn isotropic_value<T: Real>(t: &CurvatureTensor<T>, f: &Frame4<T>) -> Result<T> {
    if t.dim() < 4 {
        return Err(CurvError::DimensionTooSmall { dim: t.dim(), min: 4 });
    }
    if f.dim() != t.dim() {
        return Err(CurvError::DimensionMismatch { left: t.dim(), right: f.dim() });
    }
    // Validate orthonormality again in case the frame came from elsewhere.
    let f = Frame4::new(f.matrix().clone())?;
    Ok(IsotropicObjective::new(t)?.value(f.matrix()))
}

/// Knobs for the frame search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameSearchConfig {
    pub max_iterations: usize,
    /// Stop once a trial displacement `s·‖ξ‖` falls below this.
    pub min_step: f64,
    /// Stop once `‖ξ‖ ≤ grad_tol · max|R|`.
    pub grad_tol: f64,
    /// Include the `4!·2⁴` signed coordinate frames as seeds.
    pub coordinate_seeds: bool,
}

impl Default for FrameSearchConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            min_step: 1e-10,
            grad_tol: 1e-12,
            coordinate_seeds: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameSearchResult<T> {
    pub best_value: T,
    pub best_frame: Frame4<T>,
    pub samples_used: usize,
    pub refinement_steps: usize,
    /// Whether the descent from the winning start met a stopping criterion
    /// before the iteration cap.
    pub converged: bool,
}

struct Descent<T> {
    value: T,
    frame: Matrix<T>,
    steps: usize,
    converged: bool,
}

fn tangent_projection<T: Real>(f: &Matrix<T>, g: &Matrix<T>) -> Matrix<T> {
    // ξ = G - F sym(FᵀG)
    let ftg = f.transpose().matmul(g);
    let sym = Matrix::from_fn(4, 4, |i, j| (ftg[(i, j)] + ftg[(j, i)]) * T::lit(0.5));
    g.sub(&f.matmul(&sym))
}

fn retract<T: Real>(m: Matrix<T>) -> Option<Matrix<T>> {
    let mut m = m;
    if orthonormalize_columns(&mut m, T::epsilon().sqrt()) {
        Some(m)
    } else {
        None
    }
}

fn descend<T: Real>(obj: &IsotropicObjective<T>, start: Matrix<T>, cfg: &FrameSearchConfig) -> Descent<T> {
    let mut frame = start;
    let (mut value, grad) = obj.value_and_gradient(&frame);
    let mut xi = tangent_projection(&frame, &grad);
    let grad_floor = T::lit(cfg.grad_tol) * obj.scale;
    let min_step = T::lit(cfg.min_step);
    let mut gnorm = xi.frobenius_norm();
    let mut step = if gnorm > T::zero() { T::lit(0.1) / gnorm } else { T::zero() };
    let mut steps = 0;
    let mut converged = false;

    while steps < cfg.max_iterations {
        if gnorm <= grad_floor || step * gnorm < min_step {
            converged = true;
            break;
        }
        steps += 1;
        let candidate = retract(frame.sub(&xi.scale(step)));
        let accepted = match candidate {
            Some(c) => {
                let v = obj.value(&c);
                if v < value {
                    frame = c;
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if accepted {
            let (v, g) = obj.value_and_gradient(&frame);
            value = v;
            xi = tangent_projection(&frame, &g);
            gnorm = xi.frobenius_norm();
            step *= T::lit(2.0);
        } else {
            step *= T::lit(0.5);
        }
    }
    Descent {
        value,
        frame,
        steps,
        converged,
    }
}

/// The `4!·2⁴` signed orderings of `e1..e4` placed in the first four coordinates.
pub fn coordinate_frames<T: Real>(n: usize) -> Vec<Matrix<T>> {
    let mut out = Vec::with_capacity(384);
    let mut perms = Vec::new();
    permutations(&mut [0, 1, 2, 3], 0, &mut perms);
    for p in perms {
        for mask in 0..16u8 {
            out.push(Matrix::from_fn(n, 4, |i, j| {
                if i == p[j] {
                    if mask & (1 << j) != 0 {
                        -T::one()
                    } else {
                        T::one()
                    }
                } else {
                    T::zero()
                }
            }));
        }
    }
    out
}

fn permutations(v: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == v.len() {
        out.push(*v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Random start `trial` for base `seed`: its own ChaCha stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Multistart minimization of the isotropic curvature over four-frames.
pub fn min_isotropic<T: Real>(t: &CurvatureTensor<T>, trials: usize, seed: u64) -> Result<FrameSearchResult<T>>
where
    rand_distr::StandardNormal: rand_distr::Distribution<T>,
{
    min_isotropic_with(t, trials, seed, &FrameSearchConfig::default())
}

pub fn min_isotropic_with<T: Real>(
    t: &CurvatureTensor<T>,
    trials: usize,
    seed: u64,
    cfg: &FrameSearchConfig,
) -> Result<FrameSearchResult<T>>
where
    rand_distr::StandardNormal: rand_distr::Distribution<T>,
{
    let obj = IsotropicObjective::new(t)?;
    let n = t.dim();
    if trials == 0 {
        return Err(CurvError::ParameterOutOfRange("trials must be at least 1".into()));
    }

    let mut runs: Vec<Descent<T>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let start = Frame4::<T>::random(n, &mut rng).expect("n >= 4");
            descend(&obj, start.matrix().clone(), cfg)
        })
        .collect();
    let mut samples = trials;

    if cfg.coordinate_seeds {
        let seeds = coordinate_frames::<T>(n);
        samples += seeds.len();
        let mut best: Option<(T, Matrix<T>)> = None;
        for s in seeds {
            let v = obj.value(&s);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, s));
            }
        }
        if let Some((_, f)) = best {
            runs.push(descend(&obj, f, cfg));
        }
    }

    let steps = runs.iter().map(|r| r.steps).sum();
    let winner = runs
        .into_iter()
        .reduce(|best, r| if r.value < best.value { r } else { best })
        .expect("at least one start");
    let best_frame = Frame4::new_unchecked(winner.frame);
    // Report the value recomputed on the returned frame.
    let best_value = obj.value(best_frame.matrix());
    Ok(FrameSearchResult {
        best_value,
        best_frame,
        samples_used: samples,
        refinement_steps: steps,
        converged: winner.converged,
    })
}

/// Smallest Ricci eigenvalue.
pub fn ricci_min<T: Real>(t: &CurvatureTensor<T>) -> Result<T> {
    Ok(ricci_spectrum(t, &ToleranceConfig::default())?.min())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(n: usize) -> CurvatureTensor<f64> {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        CurvatureTensor::from_canonical_fn(n, |i, j, k, l| d(i, k) * d(j, l) - d(i, l) * d(j, k))
    }

    fn direct_value(t: &CurvatureTensor<f64>, f: &Frame4<f64>) -> f64 {
        let [a, b, c, d] = f.vectors();
        t.eval(&a, &c, &a, &c) + t.eval(&a, &d, &a, &d) + t.eval(&b, &c, &b, &c) + t.eval(&b, &d, &b, &d)
            - 2.0 * t.eval(&a, &b, &c, &d)
    }

    #[test]
    fn sphere_standard_frame() {
        let f = Frame4::standard(4).unwrap();
        assert!((isotropic_value(&sphere(4), &f).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn small_dimension_rejected() {
        let t = sphere(3);
        let f = Frame4::standard(4).unwrap();
        assert!(matches!(isotropic_value(&t, &f), Err(CurvError::DimensionTooSmall { .. })));
        assert!(matches!(min_isotropic(&t, 1, 0), Err(CurvError::DimensionTooSmall { .. })));
    }

    #[test]
    fn objective_matches_direct_contraction() {
        let t = sphere(5).scaled(0.7);
        let mut rng = trial_rng(9, 0);
        let f = Frame4::<f64>::random(5, &mut rng).unwrap();
        let obj = IsotropicObjective::new(&t).unwrap();
        assert!((obj.value(f.matrix()) - direct_value(&t, &f)).abs() < 1e-13);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // Non-symmetric-looking tensor: sphere plus a perturbation on a few pairs.
        let base = sphere(5);
        let t = CurvatureTensor::from_canonical_fn(5, |i, j, k, l| {
            let bump = if (i, j, k, l) == (0, 1, 0, 1) { 0.3 } else if (i, j, k, l) == (0, 2, 1, 3) { 0.2 } else { 0.0 };
            base.get(i, j, k, l) + bump
        });
        let obj = IsotropicObjective::new(&t).unwrap();
        let mut rng = trial_rng(4, 1);
        let f = Frame4::<f64>::random(5, &mut rng).unwrap().matrix().clone();
        let (_, g) = obj.value_and_gradient(&f);
        let h = 1e-6;
        for i in 0..5 {
            for j in 0..4 {
                let mut plus = f.clone();
                let mut minus = f.clone();
                plus[(i, j)] += h;
                minus[(i, j)] -= h;
                let fd = (obj.value(&plus) - obj.value(&minus)) / (2.0 * h);
                assert!((fd - g[(i, j)]).abs() < 1e-8, "({i},{j}): {fd} vs {}", g[(i, j)]);
            }
        }
    }

    #[test]
    fn flat_minimum_is_exactly_zero() {
        let r = min_isotropic(&CurvatureTensor::<f64>::zero(5), 3, 1).unwrap();
        assert_eq!(r.best_value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn sphere_minimum_is_frame_constant() {
        let r = min_isotropic(&sphere(4), 20, 5).unwrap();
        assert!((r.best_value - 4.0).abs() < 1e-8);
        assert_eq!(r.samples_used, 20 + 384);
    }

    #[test]
    fn coordinate_frame_count() {
        let frames = coordinate_frames::<f64>(5);
        assert_eq!(frames.len(), 384);
        for f in &frames {
            assert!(Frame4::new(f.clone()).is_ok());
        }
    }

    #[test]
    fn ricci_min_of_spheres() {
        assert!((ricci_min(&sphere(5)).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(ricci_min(&CurvatureTensor::<f64>::zero(3)).unwrap(), 0.0);
    }
}
