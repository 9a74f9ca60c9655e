use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use framekit::framefile::{load_frame, FrameFile};
use framekit::gen::{self, ComponentSpec, FrameRng, GenError, GenSpec};
use framekit::index::IndexSubset;
use framekit::linops::{Field, LinTol, Scalar, Vector};
use framekit::report;
use framekit::verify::{
    run_on_frame, run_suite, summarize, verdict, CheckId, LoadedFrame, RunReport, SuitePlan,
    Tolerances, VerifyError, REPORT_FORMAT_VERSION, SUBSET_STREAM, VECTOR_STREAM,
};

/// Usage or configuration error.
const EXIT_CONFIG: u8 = 2;
/// A check or construction failed.
const EXIT_FAIL: u8 = 1;

#[derive(Parser)]
#[command(name = "framekit", version, about = "Construct g-frames and g-fusion frames and check their identities numerically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the check catalog over seeded random frames or over a frame file.
    Verify(VerifyArgs),
    /// Generate a random frame and write it as a frame file.
    Gen(GenArgs),
    /// Reconstruct a vector through a frame and through its canonical dual.
    DemoReconstruct(DemoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldChoice {
    Real,
    Complex,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gframe,
    Gfusion,
}

#[derive(Args)]
struct VerifyArgs {
    /// Hilbert space dimensions.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 5, 8])]
    dims: Vec<usize>,
    #[arg(long, value_enum, default_value_t = FieldChoice::Both)]
    field: FieldChoice,
    /// Seeds per (dimension, field).
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// First seed; instances use base-seed .. base-seed + seeds.
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    /// Components per frame.
    #[arg(long, default_value_t = 4)]
    components: usize,
    /// Sample vectors per instance.
    #[arg(long, default_value_t = 8)]
    vectors: usize,
    /// Check ids separated by commas, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    checks: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    tol_residual: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tol_margin: Option<f64>,
    /// Write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Check this frame file instead of random instances.
    #[arg(long)]
    frame: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SpecArgs {
    #[arg(long)]
    dim: Option<usize>,
    /// Components as subspace_dim:codomain_dim:weight triples.
    #[arg(long, num_args = 1.., value_parser = parse_component)]
    components: Vec<ComponentSpec>,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    field: FieldArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Conjugate by S^{-1/2} to obtain a Parseval frame.
    #[arg(long)]
    parseval: bool,
    #[arg(long, value_enum, default_value_t = Kind::Gfusion)]
    kind: Kind,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Output path; the frame file goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Frame file to use; otherwise a random frame from the spec flags.
    #[arg(long, conflicts_with_all = ["dim", "components"])]
    frame: Option<PathBuf>,
    #[command(flatten)]
    spec: SpecArgs,
    /// Real coordinates of f, separated by commas.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "random_vector")]
    vector: Option<Vec<f64>>,
    /// Draw f at random (the default when --vector is absent).
    #[arg(long)]
    random_vector: bool,
    #[arg(long, default_value_t = 0)]
    vector_seed: u64,
    /// Largest accepted relative reconstruction error.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

fn parse_component(s: &str) -> Result<ComponentSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [sub, codim, weight] = parts[..] else {
        return Err(format!("`{s}` is not a subspace_dim:codomain_dim:weight triple"));
    };
    let sub = sub.parse().map_err(|_| format!("bad subspace dimension in `{s}`"))?;
    let codim = codim.parse().map_err(|_| format!("bad codomain dimension in `{s}`"))?;
    let weight = weight.parse().map_err(|_| format!("bad weight in `{s}`"))?;
    Ok(ComponentSpec::new(sub, codim, weight))
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Config(String),
    Failed(String),
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Gen(g @ GenError::GenerationFailed { .. }) => Failure::Failed(g.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::DemoReconstruct(a) => cmd_demo(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn tolerances(a: &VerifyArgs) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::from_env().map_err(config)?;
    if let Some(r) = a.tol_residual {
        tol.tol_residual = r;
    }
    if let Some(m) = a.tol_margin {
        tol.tol_margin = m;
    }
    tol.validate().map_err(config)?;
    Ok(tol)
}

fn selected_checks(names: &[String]) -> Result<(Vec<CheckId>, bool), Failure> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok((CheckId::ALL.to_vec(), true));
    }
    let mut ids = names
        .iter()
        .map(|n| n.trim().parse::<CheckId>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(config)?;
    ids.sort();
    ids.dedup();
    Ok((ids, false))
}

fn cmd_verify(a: VerifyArgs) -> Result<bool, Failure> {
    let tolerances = tolerances(&a)?;
    let (checks, all) = selected_checks(&a.checks)?;
    let fields = match a.field {
        FieldChoice::Real => vec![Field::Real],
        FieldChoice::Complex => vec![Field::Complex],
        FieldChoice::Both => vec![Field::Real, Field::Complex],
    };
    let mut plan = SuitePlan {
        dims: a.dims.clone(),
        fields,
        seeds: a.seeds,
        base_seed: a.base_seed,
        components: a.components,
        vectors: a.vectors,
        checks,
        tolerances,
        ..SuitePlan::default()
    };
    let report = match &a.frame {
        None => run_suite(&plan)?,
        Some(path) => verify_frame_file(path, &mut plan, all)?,
    };
    print_summary(&report);
    if let Some(path) = &a.report {
        let text = match a.format {
            Format::Json => report::to_json(&report),
            Format::Csv => report::to_csv(&report),
        };
        std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report.pass)
}

fn verify_frame_file(path: &Path, plan: &mut SuitePlan, all: bool) -> Result<RunReport, Failure> {
    let start = Instant::now();
    plan.validate()?;
    let frame = load_frame(path, &plan.tolerances.lin).map_err(config)?;
    plan.dims = vec![frame.dim_h()];
    plan.fields = vec![frame.field()];
    plan.seeds = 1;
    plan.components = frame.len();
    let mut vrng = FrameRng::new(plan.base_seed, VECTOR_STREAM);
    let fs: Vec<Vector> = (0..plan.vectors)
        .map(|_| vrng.gaussian_vector(frame.field(), frame.dim_h()))
        .collect();
    let mut srng = FrameRng::new(plan.base_seed, SUBSET_STREAM);
    let subsets = IndexSubset::enumerate(frame.len(), plan.max_exhaustive, plan.subset_sample, srng.rng());
    let results = run_on_frame(&frame, &plan.checks, &subsets, &fs, &plan.tolerances, all)?;
    plan.checks = results.iter().map(|r| r.id).collect();
    let ordered: Vec<_> = results.into_iter().map(|r| (plan.base_seed, r)).collect();
    let checks = summarize(&plan.checks, &ordered);
    Ok(RunReport {
        format_version: REPORT_FORMAT_VERSION,
        plan: plan.clone(),
        frame: Some(path.display().to_string()),
        pass: verdict(&checks),
        checks,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn show(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

fn print_summary(report: &RunReport) {
    for c in &report.checks {
        let status = match (c.probe, c.pass) {
            (true, true) => "PROBE-NONE",
            (true, false) => "PROBE-HIT",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        let mut line = format!(
            "{status:<10} {:<18} instances={:<4} max_residual={:<10} min_margin={:<10} witnesses={}",
            c.id.as_str(),
            c.instances,
            show(c.max_residual),
            show(c.min_margin),
            c.witness_count
        );
        if let Some(r) = c.max_observed {
            line.push_str(&format!(" max_spectral_radius={r:.6}"));
        }
        println!("{line}");
    }
    println!(
        "overall: {} ({:.2}s)",
        if report.pass { "PASS" } else { "FAIL" },
        report.wall_time_s
    );
}

fn gen_spec(s: &SpecArgs) -> Result<GenSpec, Failure> {
    let dim = s.dim.ok_or_else(|| Failure::Config("--dim is required".into()))?;
    let field = Field::from(s.field);
    let spec = if s.components.is_empty() {
        GenSpec::standard(dim, 4, field, s.seed)
    } else {
        GenSpec {
            dim_h: dim,
            components: s.components.clone(),
            field,
            seed: s.seed,
        }
    };
    spec.validate().map_err(config)?;
    Ok(spec)
}

fn generate(s: &SpecArgs) -> Result<LoadedFrame, Failure> {
    let spec = gen_spec(s)?;
    let tol = LinTol::default();
    let built = match (s.kind, s.parseval) {
        (Kind::Gfusion, false) => gen::random_gfusion(&spec, &tol).map(LoadedFrame::GFusion),
        (Kind::Gfusion, true) => gen::random_parseval_gfusion(&spec, &tol).map(LoadedFrame::GFusion),
        (Kind::Gframe, false) => gen::random_gframe(&spec, &tol).map(LoadedFrame::GFrame),
        (Kind::Gframe, true) => gen::random_parseval_gframe(&spec, &tol).map(LoadedFrame::GFrame),
    };
    built.map_err(|e| VerifyError::from(e).into())
}

fn cmd_gen(a: GenArgs) -> Result<bool, Failure> {
    let frame = generate(&a.spec)?;
    let file = FrameFile::from_frame(&frame);
    match &a.out {
        Some(path) => file.save(path).map_err(config)?,
        None => print!("{}", file.to_json()),
    }
    Ok(true)
}

fn format_vector(v: &Vector, field: Field) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|z| match field {
            Field::Real => format!("{:.12}", z.re),
            Field::Complex => format!("{:.12}{:+.12}i", z.re, z.im),
        })
        .collect();
    format!("[{}]", items.join(", "))
}

fn cmd_demo(a: DemoArgs) -> Result<bool, Failure> {
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(Failure::Config(format!("tolerance {} must be finite and >= 0", a.tol)));
    }
    let frame = match &a.frame {
        Some(path) => load_frame(path, &LinTol::default()).map_err(config)?,
        None => generate(&a.spec)?,
    };
    let frame = frame.as_gfusion()?;
    if !frame.is_frame() {
        return Err(Failure::Config(format!(
            "not a frame: smallest frame operator eigenvalue {:e}",
            frame.bounds().0
        )));
    }
    let field = frame.field();
    let f = match &a.vector {
        Some(coords) => {
            if coords.len() != frame.dim_h() {
                return Err(Failure::Config(format!(
                    "vector has {} coordinates, frame dimension is {}",
                    coords.len(),
                    frame.dim_h()
                )));
            }
            Vector::from_iterator(coords.len(), coords.iter().map(|&x| Scalar::new(x, 0.0)))
        }
        None => FrameRng::new(a.vector_seed, 0).gaussian_vector(field, frame.dim_h()),
    };
    let dual = frame.canonical_dual().map_err(config)?;
    let [primal, _] = frame.reconstruct(&f).map_err(config)?;
    let [via_dual, _] = frame.dual_reconstruct(&dual, &f).map_err(config)?;
    let rel = |g: &Vector| (g - &f).norm() / f.norm().max(f64::MIN_POSITIVE);
    let (e1, e2) = (rel(&primal), rel(&via_dual));
    println!("f                       = {}", format_vector(&f, field));
    println!("frame-operator recon    = {}", format_vector(&primal, field));
    println!("dual-frame recon        = {}", format_vector(&via_dual, field));
    println!("relative error (frame)  = {e1:.3e}");
    println!("relative error (dual)   = {e2:.3e}");
    Ok(e1 <= a.tol && e2 <= a.tol)
}
