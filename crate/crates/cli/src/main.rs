//! `curvop`: build curvature models, analyze their operators, verify the
//! frame identities and run implication searches.
//!
//! Exit codes: 0 success, 1 a negative result where the command expects a
//! pass, 2 invalid input.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use curvop::io::{self, Report, SpectrumRecord};
use curvop::isotropic::{min_isotropic_with, trial_rng, FrameSearchConfig};
use curvop::positivity::NamedVerdict;
use curvop::search::{implication_trial, sharpness_probe, Predicate, ProbeConfig, TrialConfig};
use curvop::{
    first_kind_spectrum, positivity_profile, random_curvature, random_orthogonal, ricci_min, ricci_spectrum,
    second_kind_spectrum, verify_pic_identities, verify_ric_identities, CurvError, CurvatureTensor64, Frame4,
    Matrix64, ModelSpec, Tolerances64,
};

#[derive(Parser, Debug)]
#[command(name = "curvop", version, about = "Curvature operators of the first and second kind")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base seed for every random draw.
    #[arg(long, global = true, env = "CURV_SEED")]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format (default: json with --output, text otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Relative Bianchi residual accepted when reading tensors.
    #[arg(long, global = true)]
    tol_bianchi: Option<f64>,

    /// Off-diagonal target for the eigensolver.
    #[arg(long, global = true)]
    tol_eigen: Option<f64>,

    /// Relative residual bound for identity checks and zero tests.
    #[arg(long, global = true)]
    tol_identity: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a named model and write it as a tensor file.
    Model {
        #[arg(long)]
        model: String,
    },
    /// Spectra, positivity profile, verdicts, isotropic and Ricci minima.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Random starts for the isotropic search.
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// Check the frame identities on random tensors and frames.
    Verify {
        /// Dimensions to test (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "4")]
        dim: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Use this tensor instead of random ones.
        #[command(flatten)]
        source: OptionalSource,
    },
    /// Randomized test of hypothesis implies conclusion.
    Search {
        #[arg(long)]
        dim: usize,
        /// `k<k>a<alpha>[strict]`, `pic[:trials=..,seed=..]` or `ric`.
        #[arg(long)]
        hyp: String,
        /// Same grammar as --hyp.
        #[arg(long)]
        concl: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Directory for counterexample tensor files (default: next to --output).
        #[arg(long)]
        tensor_dir: Option<PathBuf>,
        /// Sample raw tensors without shifting toward the sphere.
        #[arg(long)]
        no_boost: bool,
    },
    /// Walk from a boundary model toward another model.
    Probe {
        #[arg(long)]
        base: String,
        #[arg(long)]
        direction: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Random starts for each isotropic search.
        #[arg(long, default_value_t = 32)]
        trials: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Model specification, e.g. `sphere:n=4,k=1`.
    #[arg(long)]
    model: Option<String>,
    /// Tensor file.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct OptionalSource {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
}

enum Failure {
    Negative,
    Input(CurvError),
}

impl From<CurvError> for Failure {
    fn from(e: CurvError) -> Self {
        Failure::Input(e)
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IsotropicSummary {
    pub best_value: f64,
    pub trials: usize,
    pub seed: u64,
    pub samples_used: usize,
    pub converged: bool,
    pub classification: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyzeResults {
    pub dim: usize,
    pub scalar: f64,
    pub second_kind: SpectrumRecord,
    pub first_kind: Vec<f64>,
    pub ricci: Vec<f64>,
    pub named_verdicts: Vec<NamedVerdict<f64>>,
    pub isotropic: Option<IsotropicSummary>,
    pub ricci_min: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DimResult {
    pub dim: usize,
    pub trials: usize,
    pub pic_max_residual: Option<f64>,
    pub ric_max_residual: f64,
}

#[derive(Serialize, Clone)]
#[serde(rename_all = "camelCase")]
pub struct FailureCase {
    pub dim: usize,
    pub case: u64,
    pub check: String,
    pub residual: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyResults {
    pub dims: Vec<DimResult>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub first_failure: Option<FailureCase>,
}

struct Ctx {
    seed: u64,
    format: Format,
    output: Option<PathBuf>,
    tol: Tolerances64,
}

impl Ctx {
    fn emit<R: Serialize>(&self, config: serde_json::Value, results: &R, text: String) -> Result<(), CurvError> {
        let body = match self.format {
            Format::Json => io::report_to_json(&Report::new(Some(self.seed), config, results))?,
            Format::Text => text,
        };
        match &self.output {
            Some(path) => io::write_atomic(path, body.as_bytes()),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn load(model: Option<&str>, input: Option<&Path>, tol: &Tolerances64) -> Result<CurvatureTensor64, CurvError> {
    match (model, input) {
        (Some(m), _) => m.parse::<ModelSpec>()?.build(),
        (None, Some(p)) => io::read_tensor(p, tol),
        (None, None) => Err(CurvError::Parse("either --model or --input is required".into())),
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances64, CurvError> {
    let mut tol = Tolerances64::default();
    if let Some(v) = cli.tol_bianchi {
        tol.tol_bianchi = v;
    }
    if let Some(v) = cli.tol_eigen {
        tol.tol_eigen = v;
    }
    if let Some(v) = cli.tol_identity {
        tol.tol_identity = v;
    }
    tol.validate()?;
    Ok(tol)
}

fn cmd_model(ctx: &Ctx, spec: &str) -> CmdResult {
    let t: CurvatureTensor64 = spec.parse::<ModelSpec>()?.build()?;
    let body = match ctx.format {
        Format::Json => io::tensor_to_json(&t),
        Format::Text => render::tensor(&t),
    };
    match &ctx.output {
        Some(path) => io::write_atomic(path, body.as_bytes())?,
        None => print!("{body}"),
    }
    Ok(())
}

fn classify_isotropic(best: f64, t: &CurvatureTensor64, tol: &Tolerances64) -> String {
    let band = tol.tol_identity * t.max_abs().max(1.0);
    if best > band {
        "positive".into()
    } else if best >= -band {
        "nonnegative, zero attained within tolerance".into()
    } else {
        "negative".into()
    }
}

fn cmd_analyze(ctx: &Ctx, source: &Source, trials: usize) -> CmdResult {
    let t = load(source.model.as_deref(), source.input.as_deref(), &ctx.tol)?;
    let n = t.dim();
    let second = second_kind_spectrum(&t, &ctx.tol)?;
    let profile = positivity_profile(&second);
    let isotropic = if n >= 4 {
        let r = min_isotropic_with(&t, trials.max(1), ctx.seed, &FrameSearchConfig::default())?;
        Some(IsotropicSummary {
            best_value: r.best_value,
            trials: trials.max(1),
            seed: ctx.seed,
            samples_used: r.samples_used,
            converged: r.converged,
            classification: classify_isotropic(r.best_value, &t, &ctx.tol),
        })
    } else {
        None
    };
    let results = AnalyzeResults {
        dim: n,
        scalar: t.scalar(),
        second_kind: SpectrumRecord::from_profile(&profile),
        first_kind: first_kind_spectrum(&t, &ctx.tol)?.eigenvalues,
        ricci: ricci_spectrum(&t, &ctx.tol)?.eigenvalues,
        named_verdicts: profile.named_verdicts(n, ctx.tol.tol_eigen.max(ctx.tol.tol_identity)),
        isotropic,
        ricci_min: ricci_min(&t)?,
    };
    let config = serde_json::json!({
        "command": "analyze",
        "model": source.model,
        "input": source.input,
        "trials": trials,
    });
    ctx.emit(config, &results, render::analyze(&results))?;
    Ok(())
}

struct CaseResult {
    case: u64,
    pic: Option<(f64, String)>,
    ric: (f64, String),
}

fn worst_check(rep: &curvop::ResidualReport<f64>) -> (f64, String) {
    rep.checks
        .iter()
        .fold((0.0, String::new()), |acc, c| if c.residual > acc.0 { (c.residual, c.name.clone()) } else { acc })
}

fn cmd_verify(ctx: &Ctx, dims: &[usize], trials: usize, source: &OptionalSource) -> CmdResult {
    if trials == 0 {
        return Err(CurvError::ParameterOutOfRange("trials must be at least 1".into()).into());
    }
    let fixed = match (&source.model, &source.input) {
        (None, None) => None,
        (m, i) => Some(load(m.as_deref(), i.as_deref(), &ctx.tol)?),
    };
    let dims: Vec<usize> = match &fixed {
        Some(t) => vec![t.dim()],
        None => dims.to_vec(),
    };
    let mut out = Vec::new();
    let mut first_failure: Option<FailureCase> = None;
    let mut max_residual: f64 = 0.0;
    for &n in &dims {
        if n < 3 {
            return Err(CurvError::DimensionTooSmall { dim: n, min: 3 }.into());
        }
        let cases: Vec<Result<CaseResult, CurvError>> = (0..trials as u64)
            .into_par_iter()
            .map(|case| {
                let mut rng = trial_rng(ctx.seed, case);
                let t = match &fixed {
                    Some(t) => t.clone(),
                    None => random_curvature(n, ctx.seed ^ (case << 16) ^ (n as u64), 1.0)?,
                };
                let q: Matrix64 = random_orthogonal(n, &mut rng);
                let ric = worst_check(&verify_ric_identities(&t, &q)?);
                let pic = if n >= 4 {
                    let f = Frame4::random(n, &mut rng)?;
                    Some(worst_check(&verify_pic_identities(&t, &f)?))
                } else {
                    None
                };
                Ok(CaseResult { case, pic, ric })
            })
            .collect();
        let mut pic_max: Option<f64> = None;
        let mut ric_max: f64 = 0.0;
        for c in cases {
            let c = c?;
            ric_max = ric_max.max(c.ric.0);
            let mut candidates = vec![c.ric.clone()];
            if let Some(p) = &c.pic {
                pic_max = Some(pic_max.unwrap_or(0.0).max(p.0));
                candidates.push(p.clone());
            }
            for (r, name) in candidates {
                if !(r < ctx.tol.tol_identity) && first_failure.is_none() {
                    first_failure = Some(FailureCase { dim: n, case: c.case, check: name, residual: r });
                }
            }
        }
        max_residual = max_residual.max(ric_max).max(pic_max.unwrap_or(0.0));
        out.push(DimResult { dim: n, trials, pic_max_residual: pic_max, ric_max_residual: ric_max });
    }
    let results = VerifyResults {
        dims: out,
        max_residual,
        tolerance: ctx.tol.tol_identity,
        passed: first_failure.is_none(),
        first_failure,
    };
    let config = serde_json::json!({
        "command": "verify",
        "dims": dims,
        "trials": trials,
        "model": source.model,
        "input": source.input,
    });
    ctx.emit(config, &results, render::verify(&results))?;
    if results.passed {
        Ok(())
    } else {
        if let Some(f) = &results.first_failure {
            eprintln!(
                "identity check {} failed at n={} case={} (seed {}): residual {:e}",
                f.check, f.dim, f.case, ctx.seed, f.residual
            );
        }
        Err(Failure::Negative)
    }
}

fn cmd_search(
    ctx: &Ctx,
    n: usize,
    hyp: &str,
    concl: &str,
    trials: usize,
    tensor_dir: Option<&Path>,
    no_boost: bool,
) -> CmdResult {
    let hyp: Predicate = hyp.parse()?;
    let concl: Predicate = concl.parse()?;
    let dir = tensor_dir.map(Path::to_path_buf).or_else(|| {
        ctx.output
            .as_ref()
            .map(|p| p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new(".")).to_path_buf())
    });
    if let Some(d) = &dir {
        std::fs::create_dir_all(d).map_err(CurvError::from)?;
    }
    let cfg = TrialConfig {
        boost: !no_boost,
        tensor_dir: dir,
        tol: ctx.tol.clone(),
    };
    let r = implication_trial(n, &hyp, &concl, trials, ctx.seed, &cfg)?;
    let config = serde_json::json!({
        "command": "search",
        "dim": n,
        "hyp": hyp.to_string(),
        "concl": concl.to_string(),
        "trials": trials,
        "boost": !no_boost,
    });
    ctx.emit(config, &r, render::search(&r))?;
    if r.consistent() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn cmd_probe(ctx: &Ctx, base: &str, direction: &str, steps: usize, trials: usize) -> CmdResult {
    let base: ModelSpec = base.parse()?;
    let direction: ModelSpec = direction.parse()?;
    let cfg = ProbeConfig {
        pic_trials: trials.max(1),
        seed: ctx.seed,
        tol: ctx.tol.clone(),
    };
    let r = sharpness_probe(&base, &direction, steps, &cfg)?;
    let config = serde_json::json!({
        "command": "probe",
        "base": base.to_string(),
        "direction": direction.to_string(),
        "steps": steps,
        "trials": trials,
    });
    ctx.emit(config, &r, render::probe(&r))?;
    if r.boundary_ok() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()
            .map_err(|e| CurvError::ParameterOutOfRange(format!("thread pool: {e}")))?;
    }
    let tol = tolerances(&cli)?;
    let format = cli.format.unwrap_or(if cli.output.is_some() { Format::Json } else { Format::Text });
    let ctx = Ctx {
        seed: cli.seed.unwrap_or(0),
        format,
        output: cli.output.clone(),
        tol,
    };
    match &cli.command {
        Command::Model { model } => cmd_model(&ctx, model),
        Command::Analyze { source, trials } => cmd_analyze(&ctx, source, *trials),
        Command::Verify { dim, trials, source } => cmd_verify(&ctx, dim, *trials, source),
        Command::Search {
            dim,
            hyp,
            concl,
            trials,
            tensor_dir,
            no_boost,
        } => cmd_search(&ctx, *dim, hyp, concl, *trials, tensor_dir.as_deref(), *no_boost),
        Command::Probe {
            base,
            direction,
            steps,
            trials,
        } => cmd_probe(&ctx, base, direction, *steps, *trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
