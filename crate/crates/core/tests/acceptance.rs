//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use curvop::isotropic::trial_rng;
use curvop::search::{implication_trial, Predicate, TrialConfig};
use curvop::*;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn tol() -> Tolerances64 {
    ToleranceConfig::default()
}

fn spectrum_of(t: &CurvatureTensor64) -> Vec<f64> {
    second_kind_spectrum(t, &tol()).unwrap().eigenvalues
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `Σ R_iklj A_ij A_kl` straight from component reads.
fn brute_form(t: &CurvatureTensor64, a: &Matrix64) -> f64 {
    let n = t.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if a[(i, j)] == 0.0 {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    s += t.get(i, k, l, j) * a[(i, j)] * a[(k, l)];
                }
            }
        }
    }
    s
}

fn cp2_spectrum() -> Outcome {
    let got = spectrum_of(&cp2_explicit());
    let want = [-2.0, -2.0, -2.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0];
    let gap = max_gap(&got, &want);
    outcome(gap <= 1e-9, format!("max deviation {gap:.2e}"))
}

fn sphere_line_spectrum() -> Outcome {
    let t = product(&constant_curvature(3, 1.0).unwrap(), &constant_curvature(1, 0.0).unwrap());
    let got = spectrum_of(&t);
    let want = [-0.5, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
    let gap = max_gap(&got, &want);
    outcome(gap <= 1e-9, format!("max deviation {gap:.2e}"))
}

fn sharpness_thresholds() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let p = positivity_profile(&second_kind_spectrum(&cp2_explicit(), &tol()).unwrap());
    let a = p.alpha_star(4).and_then(|a| a.threshold());
    let cp2_ok = a.is_some_and(|a| (a - 0.5).abs() <= 1e-9);
    ok &= cp2_ok;
    parts.push(format!("cp2 alpha*(4) = {a:?}"));
    for n in 4..=8 {
        let t = product(&constant_curvature(n - 1, 1.0).unwrap(), &constant_curvature(1, 0.0).unwrap());
        let p = positivity_profile(&second_kind_spectrum(&t, &tol()).unwrap());
        let a = p.alpha_star(n).and_then(|a| a.threshold());
        let want = (n as f64 - 2.0) / n as f64;
        let good = a.is_some_and(|a| (a - want).abs() <= 1e-9);
        ok &= good;
        if !good {
            parts.push(format!("n={n}: alpha*(n) = {a:?}, want {want}"));
        }
    }
    if ok {
        parts.push("sphere x line alpha*(n) = (n-2)/n for n=4..8".into());
    }
    outcome(ok, parts.join("; "))
}

fn four_frame_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_brute: f64 = 0.0;
    for case in 0..1000u64 {
        let n = 4 + (case % 3) as usize;
        let t = random_curvature(n, 10_000 + case, 1.0).unwrap();
        let mut rng = trial_rng(20_000 + case, 0);
        let f = Frame4::random(n, &mut rng).unwrap();
        let rep = verify_pic_identities(&t, &f).unwrap();
        worst = worst.max(rep.max_residual);
        if case % 10 == 0 {
            // Independent contraction for a tenth of the cases.
            for (phi, v) in phi_family(&f).iter().zip(&rep.values) {
                let b = brute_form(&t, phi);
                worst_brute = worst_brute.max((b - v).abs() / t.max_abs().max(b.abs()));
            }
        }
    }
    outcome(
        worst < 1e-10 && worst_brute < 1e-10,
        format!("max relative residual {worst:.2e}, brute-force agreement {worst_brute:.2e}, 1000 cases"),
    )
}

fn full_frame_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in 0..1000u64 {
        let n = 3 + (case % 4) as usize;
        let t = random_curvature(n, 30_000 + case, 1.0).unwrap();
        let mut rng = trial_rng(40_000 + case, 0);
        let q: Matrix64 = random_orthogonal(n, &mut rng);
        let rep = verify_ric_identities(&t, &q).unwrap();
        worst = worst.max(rep.max_residual);
    }
    outcome(worst < 1e-10, format!("max relative residual {worst:.2e}, 1000 cases"))
}

fn cp2_fixture_values() -> Outcome {
    let t: CurvatureTensor64 = cp2_explicit();
    let f = Frame4::standard(4).unwrap();
    let phis = phi_family(&f);
    let mut gap: f64 = 0.0;
    for (a, phi) in phis.iter().enumerate() {
        let want = if [0, 4, 5].contains(&a) { -8.0 } else { 16.0 };
        gap = gap.max((second_kind_form(&t, phi, phi).unwrap() - want).abs());
        gap = gap.max((brute_form(&t, phi) - want).abs());
    }
    outcome(gap <= 1e-12, format!("max deviation {gap:.2e}"))
}

fn pic_consistency() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let hyp = Predicate::KAlphaPositive { k: 4, alpha: 0.5, strict: true };
    let concl = Predicate::PicPositive { trials: 64, seed: 5 };
    for n in 4..=6 {
        let r = implication_trial(n, &hyp, &concl, 500, 1500 + n as u64, &TrialConfig::default()).unwrap();
        let good = r.trials_passing_hypothesis >= 500 && r.consistent();
        ok &= good;
        parts.push(format!(
            "n={n}: {} passing, {} counterexamples, min {:.3e}",
            r.trials_passing_hypothesis,
            r.counterexamples.len(),
            r.min_conclusion_value.unwrap_or(f64::NAN)
        ));
    }
    outcome(ok, parts.join("; "))
}

fn ricci_consistency() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 3..=6 {
        let hyp = Predicate::KAlphaPositive {
            k: n,
            alpha: (n as f64 - 2.0) / n as f64,
            strict: true,
        };
        let r = implication_trial(n, &hyp, &Predicate::RicPositive, 500, 1600 + n as u64, &TrialConfig::default())
            .unwrap();
        let good = r.trials_passing_hypothesis >= 500 && r.consistent();
        ok &= good;
        parts.push(format!(
            "n={n}: {} passing, {} counterexamples, min {:.3e}",
            r.trials_passing_hypothesis,
            r.counterexamples.len(),
            r.min_conclusion_value.unwrap_or(f64::NAN)
        ));
    }
    outcome(ok, parts.join("; "))
}

fn cp2_isotropic_boundary() -> Outcome {
    let t: CurvatureTensor64 = cp2_explicit();
    let r = min_isotropic(&t, 500, 9).unwrap();
    // Zero is attained exactly; allow round-off below it at the size of max|R|·ε.
    let floor = -64.0 * f64::EPSILON * t.max_abs();
    let min_ok = (floor..=1e-6).contains(&r.best_value);
    let standard = isotropic_value(&t, &Frame4::standard(4).unwrap()).unwrap();
    let standard_ok = standard == 2.0;
    outcome(
        min_ok && standard_ok,
        format!(
            "min over 500 trials {:.3e} (in [0, 1e-6]: {}); standard frame value {standard} (want 2: {})",
            r.best_value,
            if min_ok { "yes" } else { "no" },
            if standard_ok { "yes" } else { "no" }
        ),
    )
}

fn eigensolver_quality() -> Outcome {
    let mut worst_rec: f64 = 0.0;
    let mut worst_basis: f64 = 0.0;
    for case in 0..100u64 {
        let n = 3 + (case % 4) as usize;
        let t = random_curvature(n, 50_000 + case, 1.0).unwrap();
        let canonical = SymTensorBasis::canonical(n);
        let m = second_kind_matrix(&t, &canonical).unwrap();
        let s = eigen_sym(&m, tol().tol_eigen).unwrap();
        worst_rec = worst_rec.max(s.reconstruction_error(&m) / m.frobenius_norm());
        let mut rng = trial_rng(60_000 + case, 0);
        let q: Matrix64 = random_orthogonal(canonical.len(), &mut rng);
        let g: Matrix64 = random_orthogonal(n, &mut rng);
        let other = canonical.mixed(&q).conjugated(&g);
        let s2 = eigen_sym(&second_kind_matrix(&t, &other).unwrap(), tol().tol_eigen).unwrap();
        worst_basis = worst_basis.max(max_gap(&s.eigenvalues, &s2.eigenvalues));
    }
    outcome(
        worst_rec <= 1e-10 && worst_basis <= 1e-9,
        format!("relative reconstruction {worst_rec:.2e}, basis independence {worst_basis:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("CP2 second-kind spectrum", Duration::from_secs(1), cp2_spectrum),
        ("S3 x line second-kind spectrum", Duration::from_secs(1), sphere_line_spectrum),
        ("sharpness thresholds", Duration::from_secs(5), sharpness_thresholds),
        ("four-frame identity suite", Duration::from_secs(30), four_frame_identities),
        ("full-frame identity suite", Duration::from_secs(30), full_frame_identities),
        ("CP2 fixture values", Duration::from_secs(1), cp2_fixture_values),
        ("4.5-positive implies PIC (sampled)", Duration::from_secs(120), pic_consistency),
        ("(n+(n-2)/n)-positive implies Ric > 0", Duration::from_secs(60), ricci_consistency),
        ("CP2 isotropic boundary", Duration::from_secs(30), cp2_isotropic_boundary),
        ("eigensolver quality", Duration::from_secs(10), eigensolver_quality),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let ok = o.ok && in_time;
        if !ok {
            failed += 1;
        }
        let time_note = if in_time { "" } else { " OVER BUDGET" };
        println!(
            "{} {name}: {} [{:.2}s / {}s{time_note}]",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
