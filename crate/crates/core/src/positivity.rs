//! `(k+α)`-positivity of the second-kind operator and per-`k` thresholds.
//!
//! With ascending eigenvalues `λ_1 ≤ … ≤ λ_N`, the operator is
//! `(k+α)`-nonnegative when `λ_1 + … + λ_k + α λ_{k+1} ≥ 0` and
//! `(k+α)`-positive when the inequality is strict.

use crate::eigen::Spectrum;
use crate::error::{CurvError, Result};
use crate::scalar::Real;

fn check_params<T: Real>(len: usize, k: usize, alpha: T) -> Result<()> {
    if k < 1 || k > len {
        return Err(CurvError::ParameterOutOfRange(format!("k = {k} outside 1..={len}")));
    }
    if !(alpha >= T::zero() && alpha <= T::one()) {
        return Err(CurvError::ParameterOutOfRange(format!("alpha = {alpha} outside [0, 1]")));
    }
    if k == len && alpha > T::zero() {
        return Err(CurvError::ParameterOutOfRange(format!("k + alpha = {k} + {alpha} exceeds N = {len}")));
    }
    Ok(())
}

/// `λ_1 + … + λ_k + α λ_{k+1}`.
pub fn k_alpha_value<T: Real>(spec: &Spectrum<T>, k: usize, alpha: T) -> Result<T> {
    check_params(spec.len(), k, alpha)?;
    let next = if k < spec.len() { alpha * spec.eigenvalues[k] } else { T::zero() };
    Ok(spec.partial_sum(k) + next)
}

/// Exact comparison on the computed eigenvalues; use
/// [`PositivityProfile::verdict`] for tolerance-aware decisions.
pub fn k_alpha_positive<T: Real>(spec: &Spectrum<T>, k: usize, alpha: T, strict: bool) -> Result<bool> {
    let v = k_alpha_value(spec, k, alpha)?;
    Ok(if strict { v > T::zero() } else { v >= T::zero() })
}

/// Sharp `α` threshold for a fixed `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaStar<T> {
    /// `σ_k > 0`: positive for every `α ∈ [0, 1]`.
    Always,
    /// `λ_{k+1} > 0` and `a = -σ_k/λ_{k+1} ∈ [0, 1]`: nonnegative iff
    /// `α ≥ a`, positive iff `α > a`. `σ_k = 0` gives `a = 0`.
    Threshold(T),
    /// `σ_k = λ_{k+1} = 0` (so `λ_1 = … = λ_{k+1} = 0`): nonnegative for
    /// every `α`, positive for none.
    Boundary,
    /// No `α ∈ [0, 1]` achieves nonnegativity.
    Unattainable,
}

impl<T: Real> AlphaStar<T> {
    pub fn classify(sigma: T, next: T) -> Self {
        if sigma > T::zero() {
            AlphaStar::Always
        } else if next > T::zero() {
            let a = if sigma == T::zero() { T::zero() } else { -sigma / next };
            if a <= T::one() {
                AlphaStar::Threshold(a)
            } else {
                AlphaStar::Unattainable
            }
        } else if sigma == T::zero() && next == T::zero() {
            AlphaStar::Boundary
        } else {
            AlphaStar::Unattainable
        }
    }

    /// Decision implied by the threshold for a given `α`.
    pub fn decides(&self, alpha: T, strict: bool) -> bool {
        match *self {
            AlphaStar::Always => true,
            AlphaStar::Threshold(a) => {
                if strict {
                    alpha > a
                } else {
                    alpha >= a
                }
            }
            AlphaStar::Boundary => !strict,
            AlphaStar::Unattainable => false,
        }
    }

    pub fn threshold(&self) -> Option<T> {
        match *self {
            AlphaStar::Threshold(a) => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow<T> {
    pub k: usize,
    pub sigma: T,
    pub next: T,
    pub alpha_star: AlphaStar<T>,
}

/// A named `(k+α)` condition and its decision.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct NamedVerdict<T> {
    pub name: String,
    pub k: usize,
    pub alpha: T,
    pub strict: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityProfile<T> {
    pub rows: Vec<ProfileRow<T>>,
    pub eigenvalues: Vec<T>,
}

impl<T: Real> PositivityProfile<T> {
    /// Row for `k` (1-based, `k ≤ N-1`).
    pub fn row(&self, k: usize) -> Option<&ProfileRow<T>> {
        k.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    pub fn alpha_star(&self, k: usize) -> Option<AlphaStar<T>> {
        self.row(k).map(|r| r.alpha_star)
    }

    /// Tolerance-aware decision of `(k+α)`-positivity: the value must clear
    /// `tol · max|λ|` (strict) or stay above `-tol · max|λ|` (nonnegative).
    pub fn verdict(&self, k: usize, alpha: T, strict: bool, tol: T) -> Result<bool> {
        let len = self.eigenvalues.len();
        check_params(len, k, alpha)?;
        let sigma: T = self.eigenvalues[..k].iter().copied().sum();
        let next = if k < len { alpha * self.eigenvalues[k] } else { T::zero() };
        let value = sigma + next;
        let scale = self.eigenvalues.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let slack = tol * scale;
        Ok(if strict { value > slack } else { value >= -slack })
    }

    /// Verdicts for `4½` and `n + (n-2)/n`, where applicable.
    pub fn named_verdicts(&self, n: usize, tol: T) -> Vec<NamedVerdict<T>> {
        let mut out = Vec::new();
        let len = self.eigenvalues.len();
        let mut push = |name: &str, k: usize, alpha: T| {
            for strict in [true, false] {
                if let Ok(holds) = self.verdict(k, alpha, strict, tol) {
                    let kind = if strict { "positive" } else { "nonnegative" };
                    out.push(NamedVerdict {
                        name: format!("{name}-{kind}"),
                        k,
                        alpha,
                        strict,
                        holds,
                    });
                }
            }
        };
        if len > 4 {
            push("4.5", 4, T::lit(0.5));
        }
        if n >= 2 && n <= len {
            let alpha = T::from_usize(n - 2) / T::from_usize(n);
            push("(n+(n-2)/n)", n, alpha);
        }
        out
    }
}

pub fn positivity_profile<T: Real>(spec: &Spectrum<T>) -> PositivityProfile<T> {
    let lam = &spec.eigenvalues;
    let mut rows = Vec::with_capacity(lam.len().saturating_sub(1));
    let mut sigma = T::zero();
    for k in 1..lam.len() {
        sigma += lam[k - 1];
        let next = lam[k];
        rows.push(ProfileRow {
            k,
            sigma,
            next,
            alpha_star: AlphaStar::classify(sigma, next),
        });
    }
    PositivityProfile {
        rows,
        eigenvalues: lam.clone(),
    }
}
