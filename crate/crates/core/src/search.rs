//! Randomized implication testing and sharpness probes.
//!
//! An implication trial draws random tensors, optionally shifts each one
//! toward the round sphere until a `(k+α)` hypothesis holds, and then
//! evaluates the conclusion. Every trial owns the ChaCha stream
//! `(seed, trial)`, so results do not depend on scheduling.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::io::write_tensor;
use crate::isotropic::{min_isotropic_with, ricci_min, trial_rng, FrameSearchConfig};
use crate::operators::second_kind_spectrum;
use crate::positivity::{k_alpha_value, positivity_profile, AlphaStar};
use crate::tensor::ToleranceConfig;
use crate::zoo::{constant_curvature, random_curvature_from, ModelSpec};
use crate::CurvatureTensor64;

pub const DEFAULT_PIC_TRIALS: usize = 32;

/// A named curvature condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "camelCase")]
pub enum Predicate {
    KAlphaPositive { k: usize, alpha: f64, strict: bool },
    PicPositive { trials: usize, seed: u64 },
    RicPositive,
}

/// Outcome of a predicate: whether it holds and the deciding quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub holds: bool,
    pub value: f64,
}

impl Predicate {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Predicate::KAlphaPositive { k, alpha, .. } => {
                let big_n = crate::basis::s20_dim(n);
                if k < 1 || k > big_n {
                    return Err(CurvError::ParameterOutOfRange(format!("k = {k} outside 1..={big_n}")));
                }
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(CurvError::ParameterOutOfRange(format!("alpha = {alpha} outside [0, 1]")));
                }
                if k == big_n && alpha > 0.0 {
                    return Err(CurvError::ParameterOutOfRange(format!(
                        "k + alpha = {k} + {alpha} exceeds N = {big_n}"
                    )));
                }
            }
            Predicate::PicPositive { trials, .. } => {
                if n < 4 {
                    return Err(CurvError::DimensionTooSmall { dim: n, min: 4 });
                }
                if trials == 0 {
                    return Err(CurvError::ParameterOutOfRange("pic trials must be at least 1".into()));
                }
            }
            Predicate::RicPositive => {}
        }
        Ok(())
    }

    /// `λ_1 + … + λ_k + αλ_{k+1}` and exact comparison; sampled isotropic
    /// minimum against `tol_identity`; smallest Ricci eigenvalue against 0.
    pub fn evaluate(&self, t: &CurvatureTensor64, tol: &ToleranceConfig<f64>) -> Result<Evaluation> {
        match *self {
            Predicate::KAlphaPositive { k, alpha, strict } => {
                let spec = second_kind_spectrum(t, tol)?;
                let value = k_alpha_value(&spec, k, alpha)?;
                let holds = if strict { value > 0.0 } else { value >= 0.0 };
                Ok(Evaluation { holds, value })
            }
            Predicate::PicPositive { trials, seed } => {
                let r = min_isotropic_with(t, trials, seed, &FrameSearchConfig::default())?;
                Ok(Evaluation {
                    holds: r.best_value > tol.tol_identity,
                    value: r.best_value,
                })
            }
            Predicate::RicPositive => {
                let value = ricci_min(t)?;
                Ok(Evaluation { holds: value > 0.0, value })
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Predicate::KAlphaPositive { k, alpha, strict } => {
                write!(f, "k{k}a{alpha}{}", if strict { "strict" } else { "" })
            }
            Predicate::PicPositive { trials, seed } => write!(f, "pic:trials={trials},seed={seed}"),
            Predicate::RicPositive => write!(f, "ric"),
        }
    }
}

impl FromStr for Predicate {
    type Err = CurvError;

    /// `k<k>a<alpha>[strict]`, `pic[:trials=..,seed=..]` or `ric`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || CurvError::Parse(format!("bad predicate {s:?}"));
        if s == "ric" {
            return Ok(Predicate::RicPositive);
        }
        if let Some(rest) = s.strip_prefix("pic") {
            let mut trials = DEFAULT_PIC_TRIALS;
            let mut seed = 0;
            if let Some(params) = rest.strip_prefix(':') {
                for part in params.split(',') {
                    let (k, v) = part.split_once('=').ok_or_else(bad)?;
                    match k {
                        "trials" => trials = v.parse().map_err(|_| bad())?,
                        "seed" => seed = v.parse().map_err(|_| bad())?,
                        _ => return Err(bad()),
                    }
                }
            } else if !rest.is_empty() {
                return Err(bad());
            }
            return Ok(Predicate::PicPositive { trials, seed });
        }
        let body = s.strip_prefix('k').ok_or_else(bad)?;
        let (body, strict) = match body.strip_suffix("strict") {
            Some(b) => (b, true),
            None => (body, false),
        };
        let (k, alpha) = body.split_once('a').ok_or_else(bad)?;
        Ok(Predicate::KAlphaPositive {
            k: k.parse().map_err(|_| bad())?,
            alpha: alpha.parse().map_err(|_| bad())?,
            strict,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    /// Shift hypothesis failures toward the round sphere.
    pub boost: bool,
    /// Directory for counterexample tensor files.
    pub tensor_dir: Option<PathBuf>,
    pub tol: ToleranceConfig<f64>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            boost: true,
            tensor_dir: None,
            tol: ToleranceConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub trial: u64,
    pub seed: u64,
    pub shift: f64,
    pub tensor_file: Option<String>,
    pub hypothesis_value: f64,
    pub conclusion_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialReport {
    pub dim: usize,
    pub hypothesis: Predicate,
    pub conclusion: Predicate,
    pub trials_attempted: usize,
    pub trials_passing_hypothesis: usize,
    pub counterexamples: Vec<Counterexample>,
    pub rng_seed: u64,
    pub boost: bool,
    /// Smallest conclusion value among hypothesis-passing samples.
    pub min_conclusion_value: Option<f64>,
    pub verdict: String,
}

impl TrialReport {
    pub fn consistent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// A regenerated trial sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub tensor: CurvatureTensor64,
    pub shift: f64,
    pub hypothesis: Evaluation,
}

const MAX_BOOST_DOUBLINGS: usize = 60;

/// Rebuilds the sample of `trial`: the raw Gaussian tensor, plus the shift
/// `t · sphere(n, 1)` when boosting a `(k+α)` hypothesis. The sphere acts as
/// the identity on traceless symmetric tensors, so the shift raises the
/// hypothesis value by exactly `t(k+α)`; a random slack keeps samples at
/// varying depth inside the condition.
pub fn trial_sample(n: usize, hyp: &Predicate, seed: u64, trial: u64, cfg: &TrialConfig) -> Result<Sample> {
    let mut rng = trial_rng(seed, trial);
    let raw = random_curvature_from(n, &mut rng, 1.0)?;
    let eval = hyp.evaluate(&raw, &cfg.tol)?;
    let Predicate::KAlphaPositive { k, alpha, .. } = *hyp else {
        return Ok(Sample { tensor: raw, shift: 0.0, hypothesis: eval });
    };
    if !cfg.boost || eval.holds {
        return Ok(Sample { tensor: raw, shift: 0.0, hypothesis: eval });
    }
    let spread = {
        let s = second_kind_spectrum(&raw, &cfg.tol)?;
        (s.max() - s.min()).max(1e-3)
    };
    let weight = k as f64 + alpha;
    let base = (-eval.value / weight).max(0.0);
    let u: f64 = rng.random();
    let mut slack = spread * 10f64.powf(-1.0 - 5.0 * u);
    let sphere = constant_curvature::<f64>(n, 1.0)?;
    let mut last = Sample { tensor: raw.clone(), shift: 0.0, hypothesis: eval };
    for _ in 0..MAX_BOOST_DOUBLINGS {
        let shift = base + slack;
        let tensor = raw.linear_combination(1.0, &sphere, shift)?;
        let hypothesis = hyp.evaluate(&tensor, &cfg.tol)?;
        last = Sample { tensor, shift, hypothesis };
        if hypothesis.holds {
            break;
        }
        slack *= 2.0;
    }
    Ok(last)
}

/// Tests `hyp ⇒ concl` on `trials` random samples.
pub fn implication_trial(
    n: usize,
    hyp: &Predicate,
    concl: &Predicate,
    trials: usize,
    seed: u64,
    cfg: &TrialConfig,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(CurvError::ParameterOutOfRange("trials must be at least 1".into()));
    }
    if n < 2 {
        return Err(CurvError::DimensionTooSmall { dim: n, min: 2 });
    }
    hyp.validate(n)?;
    concl.validate(n)?;

    let outcomes: Vec<Result<Option<(Sample, Evaluation)>>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let sample = trial_sample(n, hyp, seed, trial, cfg)?;
            if !sample.hypothesis.holds {
                return Ok(None);
            }
            let c = concl.evaluate(&sample.tensor, &cfg.tol)?;
            Ok(Some((sample, c)))
        })
        .collect();

    let mut passing = 0;
    let mut min_value: Option<f64> = None;
    let mut counterexamples = Vec::new();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        let Some((sample, c)) = outcome? else { continue };
        passing += 1;
        min_value = Some(min_value.map_or(c.value, |m| m.min(c.value)));
        if c.holds {
            continue;
        }
        let tensor_file = match &cfg.tensor_dir {
            Some(dir) => {
                let path = tensor_path(dir, seed, trial as u64);
                write_tensor(&path, &sample.tensor)?;
                Some(path.to_string_lossy().into_owned())
            }
            None => None,
        };
        counterexamples.push(Counterexample {
            trial: trial as u64,
            seed,
            shift: sample.shift,
            tensor_file,
            hypothesis_value: sample.hypothesis.value,
            conclusion_value: c.value,
        });
    }
    let verdict = if counterexamples.is_empty() {
        "no counterexample found"
    } else {
        "counterexample found"
    };
    Ok(TrialReport {
        dim: n,
        hypothesis: *hyp,
        conclusion: *concl,
        trials_attempted: trials,
        trials_passing_hypothesis: passing,
        counterexamples,
        rng_seed: seed,
        boost: cfg.boost,
        min_conclusion_value: min_value,
        verdict: verdict.to_string(),
    })
}

/// Re-evaluates a logged counterexample from its seed and trial index.
pub fn replay(
    n: usize,
    hyp: &Predicate,
    concl: &Predicate,
    c: &Counterexample,
    cfg: &TrialConfig,
) -> Result<(Sample, Evaluation)> {
    let sample = trial_sample(n, hyp, c.seed, c.trial, cfg)?;
    let e = concl.evaluate(&sample.tensor, &cfg.tol)?;
    Ok((sample, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbePoint {
    pub t: f64,
    /// Threshold at `k = 4` (absent when `N < 5`).
    pub alpha_star4: Option<AlphaStar<f64>>,
    /// Threshold at `k = n`.
    pub alpha_star_n: Option<AlphaStar<f64>>,
    pub min_isotropic: Option<f64>,
    pub ricci_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub base: String,
    pub direction: String,
    pub dim: usize,
    pub steps: usize,
    pub points: Vec<ProbePoint>,
    pub boundary_checks: Vec<BoundaryCheck>,
}

impl ProbeReport {
    pub fn boundary_ok(&self) -> bool {
        self.boundary_checks.iter().all(|c| c.holds)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConfig {
    pub pic_trials: usize,
    pub seed: u64,
    pub tol: ToleranceConfig<f64>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            pic_trials: DEFAULT_PIC_TRIALS,
            seed: 0,
            tol: ToleranceConfig::default(),
        }
    }
}

enum Boundary {
    /// `α*(4) = 1/2` with zero isotropic minimum.
    Kahler,
    /// `α*(n) = (n-2)/n` with zero Ricci minimum.
    SphereTimesLine,
}

fn advertised_boundary(spec: &ModelSpec) -> Option<Boundary> {
    match spec {
        ModelSpec::Cp2Explicit => Some(Boundary::Kahler),
        ModelSpec::ComplexSpaceForm { m: 2, c } if *c > 0.0 => Some(Boundary::Kahler),
        ModelSpec::Product(a, b) => match (a.as_ref(), b.as_ref()) {
            (ModelSpec::ConstantCurvature { n, kappa }, ModelSpec::ConstantCurvature { n: 1, .. })
                if *kappa > 0.0 && *n >= 2 =>
            {
                Some(Boundary::SphereTimesLine)
            }
            _ => None,
        },
        _ => None,
    }
}

fn probe_point(t_param: f64, tensor: &CurvatureTensor64, cfg: &ProbeConfig) -> Result<ProbePoint> {
    let n = tensor.dim();
    let spec = second_kind_spectrum(tensor, &cfg.tol)?;
    let profile = positivity_profile(&spec);
    let min_iso = if n >= 4 {
        Some(min_isotropic_with(tensor, cfg.pic_trials, cfg.seed, &FrameSearchConfig::default())?.best_value)
    } else {
        None
    };
    Ok(ProbePoint {
        t: t_param,
        alpha_star4: profile.alpha_star(4),
        alpha_star_n: profile.alpha_star(n),
        min_isotropic: min_iso,
        ricci_min: ricci_min(tensor)?,
    })
}

/// Walks `interpolate(base, direction, t)` for `t = 0, 1/steps, …, 1`.
pub fn sharpness_probe(base: &ModelSpec, direction: &ModelSpec, steps: usize, cfg: &ProbeConfig) -> Result<ProbeReport> {
    if base.dim() != direction.dim() {
        return Err(CurvError::DimensionMismatch { left: base.dim(), right: direction.dim() });
    }
    if steps == 0 {
        return Err(CurvError::ParameterOutOfRange("steps must be at least 1".into()));
    }
    let a: CurvatureTensor64 = base.build()?;
    let b: CurvatureTensor64 = direction.build()?;
    let n = a.dim();
    let points = (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            probe_point(t, &crate::zoo::interpolate(&a, &b, t)?, cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut checks = Vec::new();
    let start = &points[0];
    let scale = a.max_abs().max(1.0);
    let threshold_of = |s: Option<AlphaStar<f64>>| s.and_then(|x| x.threshold()).unwrap_or(f64::NAN);
    match advertised_boundary(base) {
        Some(Boundary::Kahler) => {
            let actual = threshold_of(start.alpha_star4);
            checks.push(check("alphaStar(4)", 0.5, actual, 1e-9));
            let iso = start.min_isotropic.unwrap_or(f64::NAN);
            checks.push(BoundaryCheck {
                name: "min isotropic".into(),
                expected: 0.0,
                actual: iso,
                tolerance: 1e-6 * scale,
                holds: iso >= -1e-9 * scale && iso <= 1e-6 * scale,
            });
        }
        Some(Boundary::SphereTimesLine) => {
            let nf = n as f64;
            let actual = threshold_of(start.alpha_star_n);
            checks.push(check(&format!("alphaStar({n})"), (nf - 2.0) / nf, actual, 1e-9));
            checks.push(check("ricci min", 0.0, start.ricci_min, 1e-9 * scale));
        }
        None => {}
    }
    Ok(ProbeReport {
        base: base.to_string(),
        direction: direction.to_string(),
        dim: n,
        steps,
        points,
        boundary_checks: checks,
    })
}

fn check(name: &str, expected: f64, actual: f64, tolerance: f64) -> BoundaryCheck {
    BoundaryCheck {
        name: name.to_string(),
        expected,
        actual,
        tolerance,
        holds: (actual - expected).abs() <= tolerance,
    }
}

/// File name used for the counterexample of `(seed, trial)`.
pub fn tensor_path(dir: &Path, seed: u64, trial: u64) -> PathBuf {
    dir.join(format!("counterexample-seed{seed}-trial{trial}.json"))
}
