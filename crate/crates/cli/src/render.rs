//! Text rendering. Numbers are rounded to 12 significant digits for display
//! only; every decision is made on the unrounded values.

use std::fmt::Write;

use curvop::io::SpectrumRecord;
use curvop::search::{ProbeReport, TrialReport};
use curvop::{AlphaStar, CurvatureTensor64};

use crate::{AnalyzeResults, VerifyResults};

/// `x` to 12 significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("round trip of formatted float");
    let mag = rounded.abs();
    if (1e-4..1e12).contains(&mag) {
        rounded.to_string()
    } else {
        let s = format!("{rounded:.11e}");
        let (mant, exp) = s.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{exp}")
    }
}

pub fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

fn alpha(a: &AlphaStar<f64>) -> String {
    match a {
        AlphaStar::Always => "always".into(),
        AlphaStar::Threshold(t) => num(*t),
        AlphaStar::Boundary => "boundary".into(),
        AlphaStar::Unattainable => "unattainable".into(),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn tensor(t: &CurvatureTensor64) -> String {
    let mut out = String::new();
    let entries = t.canonical_entries();
    let _ = writeln!(out, "dimension: {}", t.dim());
    let _ = writeln!(out, "nonzero canonical components: {}", entries.len());
    for e in entries {
        let _ = writeln!(out, "  R_{}{}{}{} = {}", e.i, e.j, e.k, e.l, num(e.v));
    }
    out
}

fn profile(out: &mut String, rec: &SpectrumRecord) {
    let _ = writeln!(out, "positivity profile:");
    for row in &rec.profile {
        let _ = writeln!(out, "  k={:<3} sigma={:<16} alpha*={}", row.k, num(row.sigma), alpha(&row.alpha_star));
    }
}

pub fn analyze(r: &AnalyzeResults) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dimension: {}", r.dim);
    let _ = writeln!(out, "second-kind eigenvalues: {}", list(&r.second_kind.eigenvalues));
    let _ = writeln!(out, "first-kind eigenvalues: {}", list(&r.first_kind));
    let _ = writeln!(out, "ricci eigenvalues: {}", list(&r.ricci));
    let _ = writeln!(out, "scalar curvature: {}", num(r.scalar));
    profile(&mut out, &r.second_kind);
    let _ = writeln!(out, "verdicts:");
    for v in &r.named_verdicts {
        let _ = writeln!(out, "  {}: {}", v.name, yes(v.holds));
    }
    match &r.isotropic {
        Some(iso) => {
            let _ = writeln!(
                out,
                "isotropic min ({} starts, seed {}): {} ({})",
                iso.trials,
                iso.seed,
                num(iso.best_value),
                iso.classification
            );
        }
        None => {
            let _ = writeln!(out, "isotropic min: not defined below dimension 4");
        }
    }
    let _ = writeln!(out, "ricci min: {}", num(r.ricci_min));
    out
}

pub fn verify(r: &VerifyResults) -> String {
    let mut out = String::new();
    for d in &r.dims {
        let pic = d.pic_max_residual.map_or("skipped (n < 4)".to_string(), num);
        let _ = writeln!(
            out,
            "n={}: {} cases, four-frame max residual {}, full-frame max residual {}",
            d.dim,
            d.trials,
            pic,
            num(d.ric_max_residual)
        );
    }
    let _ = writeln!(out, "max residual: {} (tolerance {})", num(r.max_residual), num(r.tolerance));
    if let Some(f) = &r.first_failure {
        let _ = writeln!(
            out,
            "first failure: n={} case={} check={} residual={}",
            f.dim,
            f.case,
            f.check,
            num(f.residual)
        );
    }
    let _ = writeln!(out, "result: {}", if r.passed { "pass" } else { "fail" });
    out
}

pub fn search(r: &TrialReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dimension: {}", r.dim);
    let _ = writeln!(out, "hypothesis: {}", r.hypothesis);
    let _ = writeln!(out, "conclusion: {}", r.conclusion);
    let _ = writeln!(out, "seed: {}", r.rng_seed);
    let _ = writeln!(
        out,
        "trials: {} attempted, {} passing hypothesis",
        r.trials_attempted, r.trials_passing_hypothesis
    );
    if let Some(m) = r.min_conclusion_value {
        let _ = writeln!(out, "smallest conclusion value: {}", num(m));
    }
    let _ = writeln!(out, "counterexamples: {}", r.counterexamples.len());
    for c in &r.counterexamples {
        let _ = writeln!(
            out,
            "  trial {} shift {} hypothesis {} conclusion {}{}",
            c.trial,
            num(c.shift),
            num(c.hypothesis_value),
            num(c.conclusion_value),
            c.tensor_file.as_ref().map(|f| format!(" file {f}")).unwrap_or_default()
        );
    }
    let _ = writeln!(out, "verdict: {}", r.verdict);
    out
}

pub fn probe(r: &ProbeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "base: {}", r.base);
    let _ = writeln!(out, "direction: {}", r.direction);
    let _ = writeln!(out, "{:<16} {:<16} {:<16} {:<20} ricci min", "t", "alpha*(4)", format!("alpha*({})", r.dim), "isotropic min");
    for p in &r.points {
        let _ = writeln!(
            out,
            "{:<16} {:<16} {:<16} {:<20} {}",
            num(p.t),
            p.alpha_star4.as_ref().map_or("-".into(), alpha),
            p.alpha_star_n.as_ref().map_or("-".into(), alpha),
            p.min_isotropic.map_or("-".into(), num),
            num(p.ricci_min)
        );
    }
    if r.boundary_checks.is_empty() {
        let _ = writeln!(out, "no advertised boundary for this base");
    }
    for c in &r.boundary_checks {
        let _ = writeln!(
            out,
            "boundary {}: expected {} got {} (tolerance {}): {}",
            c.name,
            num(c.expected),
            num(c.actual),
            num(c.tolerance),
            if c.holds { "ok" } else { "FAILED" }
        );
    }
    out
}
