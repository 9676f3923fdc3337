use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use norden::classify::{classify, ClassificationResult, Recovered, Tolerances, Verdict};
use norden::decompose::{h_proper_decomposition, HSymmetricOp};
use norden::hypersurface::{default_step, shape_operator_fd, HSphere, HolomorphicHyperplane, Hypersurface, SurfaceSample};
use norden::io::{read_matrix, to_json_string, PointCloudFile};
use norden::space::{complex_scale, quadratic, NordenSpace, RealVector, DEFAULT_TOL};
use norden::verify::{run_suite, Suite, VerifyParams};
use norden::{classify::SampleSet, Error};
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_REJECTED: u8 = 4;
const EXIT_DIMENSION: u8 = 5;

#[derive(Parser)]
#[command(name = "norden", version, about = "Holomorphic hypersurfaces of flat Kähler spaces with Norden metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// h-sphere utilities
    Sphere {
        #[command(subcommand)]
        command: SphereCommand,
    },
    /// Sample points (and optionally frames and shape operators) of an h-sphere or a holomorphic hyperplane
    Sample(SampleArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Classify a sample file
    Classify(ClassifyArgs),
    /// h-proper decomposition of an h-symmetric matrix
    Decompose(DecomposeArgs),
}

#[derive(Subcommand)]
enum SphereCommand {
    /// Curvatures, (lambda, mu) and mean curvature lengths of an h-sphere
    Info {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    a: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    b: f64,
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// JSON array with the 2m center coordinates (default: origin)
    #[arg(long)]
    center: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write frames, tangent bases and shape operators
    #[arg(long)]
    with_frames: bool,
    /// Use finite-difference shape operators (with --with-frames)
    #[arg(long)]
    fd: bool,
    /// Finite-difference step (default 1e-5 (1 + |p - z0|))
    #[arg(long)]
    h: Option<f64>,
    /// Sample a holomorphic hyperplane with a seeded unit normal instead
    #[arg(long)]
    hyperplane: bool,
    /// Hyperplane offset g(xi, Z)
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    d: f64,
    /// Hyperplane offset g~(xi, Z)
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    dt: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// identities, curvature, frame, gauss, ricci, codazzi, witnesses, mean-curvature, decompose or all
    suite: Suite,
    #[arg(long, allow_negative_numbers = true, default_value_t = 3.0)]
    a: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 4.0)]
    b: f64,
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 50)]
    planes: usize,
    /// Finite-difference step
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Overrides the constancy, umbilicity, containment and normal tolerances
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// JSON array of matrix rows
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

/// A failed command: exit code plus diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sphere {
            command: SphereCommand::Info { a, b, m },
        } => sphere_info(a, b, m),
        Command::Sample(args) => sample(&args),
        Command::Verify(args) => verify(&args),
        Command::Classify(args) => classify_cmd(&args),
        Command::Decompose(args) => decompose(&args),
    };
    match outcome {
        Ok((report, code)) => match to_json_string(&report) {
            Ok(text) => {
                // a closed stdout (e.g. a pipe into `head`) is not an error of the command
                let _ = writeln!(std::io::stdout().lock(), "{text}");
                ExitCode::from(code)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_IO)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn vector(v: &RealVector) -> Value {
    json!(v.iter().copied().collect::<Vec<f64>>())
}

fn sphere_info(a: f64, b: f64, m: usize) -> Outcome {
    let space = NordenSpace::new(m).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let sphere = HSphere::new(space.zero(), a, b).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let nu = sphere.theoretical_curvatures();
    let (lambda, mu) = sphere.lambda_mu();
    let report = json!({
        "command": "sphere info",
        "a": a,
        "b": b,
        "m": m,
        "nu": nu.nu,
        "nu_t": nu.nu_t,
        "lambda": lambda,
        "mu": mu,
        "g_hh": lambda * lambda - mu * mu,
        "gt_hh": -2.0 * lambda * mu,
    });
    Ok((report, 0))
}

fn read_center(path: &Path, space: NordenSpace) -> Result<RealVector, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    let values: Vec<f64> =
        serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    if values.len() != space.dim() {
        return Err(Failure::new(
            EXIT_INVALID,
            format!("center has {} coordinates, expected {}", values.len(), space.dim()),
        ));
    }
    Ok(RealVector::from_vec(values))
}

/// A unit normal (`q(xi) = 1`) drawn from `seed`.
fn seeded_normal(space: NordenSpace, seed: u64) -> Result<RealVector, Failure> {
    let sphere = HSphere::new(space.zero(), 1.0, 0.0).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let w = sphere
        .sample(1, seed)
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?
        .remove(0);
    Ok(complex_scale(quadratic(&w).sqrt().inv(), &w))
}

fn sample(args: &SampleArgs) -> Outcome {
    let invalid = |e: Error| Failure::new(EXIT_INVALID, e.to_string());
    let space = NordenSpace::new(args.m).map_err(invalid)?;
    let (surface, provenance): (Box<dyn Hypersurface>, String) = if args.hyperplane {
        let xi = seeded_normal(space, args.seed)?;
        let plane = HolomorphicHyperplane::new(xi, args.d, args.dt, 1e-12).map_err(invalid)?;
        (Box::new(plane), format!("holomorphic hyperplane d={} dt={} seed={}", args.d, args.dt, args.seed))
    } else {
        let center = match &args.center {
            Some(path) => read_center(path, space)?,
            None => space.zero(),
        };
        let sphere = HSphere::new(center, args.a, args.b).map_err(invalid)?;
        (Box::new(sphere), format!("h-sphere a={} b={} seed={}", args.a, args.b, args.seed))
    };
    let points = surface.sample(args.count, args.seed).map_err(invalid)?;
    let worst = points
        .iter()
        .map(|p| surface.containment_residual(p))
        .fold(0.0, f64::max);

    let file = if args.with_frames {
        let mut samples = Vec::with_capacity(points.len());
        for p in &points {
            let mut s = surface.surface_sample(p, 1e-9).map_err(invalid)?;
            if args.fd {
                let h = args.h.unwrap_or_else(|| default_step(surface.as_ref(), p));
                let a = shape_operator_fd(surface.as_ref(), &s, Some(h)).map_err(invalid)?;
                s = SurfaceSample::new(p.clone(), s.frame().clone(), s.tangent_basis().to_vec(), a, 1e-6)
                    .map_err(invalid)?;
            }
            samples.push(s);
        }
        let set = SampleSet::new(space, samples, provenance).map_err(invalid)?;
        PointCloudFile::from_sample_set(&set)
    } else {
        PointCloudFile::from_points(space, &points, Some(provenance))
    };
    file.write(&args.out).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let report = json!({
        "command": "sample",
        "out": args.out.display().to_string(),
        "count": args.count,
        "seed": args.seed,
        "kind": if args.with_frames { "samples" } else { "points" },
        "fd": args.fd,
        "max_containment_residual": worst,
    });
    Ok((report, 0))
}

fn verify(args: &VerifyArgs) -> Outcome {
    let params = VerifyParams {
        a: args.a,
        b: args.b,
        m: args.m,
        seed: args.seed,
        points: args.points,
        planes: args.planes,
        step: args.h,
    };
    let reports = run_suite(args.suite, &params).map_err(|e| Failure::new(EXIT_FAIL, format!("{}: {e}", args.suite)))?;
    let pass = reports.iter().all(|r| r.pass);
    if let Some((suite, check)) = reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| (&r.suite, c)))
    {
        eprintln!(
            "first failing invariant: {suite}: {} (value {:e}, threshold {:e})",
            check.name, check.value, check.threshold
        );
    }
    let report = json!({
        "command": "verify",
        "suite": args.suite.name(),
        "seed": args.seed,
        "params": params,
        "pass": pass,
        "suites": reports,
    });
    Ok((report, if pass { 0 } else { EXIT_FAIL }))
}

fn classification_report(result: &ClassificationResult) -> Value {
    let recovered = match &result.recovered {
        Some(Recovered::Sphere(s)) => json!({
            "kind": "h-sphere",
            "center": vector(s.center()),
            "a": s.a(),
            "b": s.b(),
        }),
        Some(Recovered::Hyperplane(p)) => json!({
            "kind": "holomorphic hyperplane",
            "xi": vector(p.xi()),
            "d": p.d(),
            "d_t": p.d_t(),
        }),
        None => Value::Null,
    };
    json!({
        "verdict": result.verdict,
        "recovered": recovered,
        "mean": result.mean,
        "per_sample": result.per_sample,
        "residuals": result.residuals,
        "failing_sample": result.failing_sample,
        "corollaries": result.corollaries,
    })
}

fn classify_cmd(args: &ClassifyArgs) -> Outcome {
    let mut tol = Tolerances::default();
    if let Some(t) = args.tol {
        tol.constancy = t;
        tol.umbilicity = t;
        tol.containment = t;
        tol.normal = t;
    }
    let malformed = |e: Error| Failure::new(EXIT_IO, e.to_string());
    let file = PointCloudFile::read(&args.input).map_err(malformed)?;
    let set = file.to_sample_set(1e-6).map_err(malformed)?;
    let result = classify(&set, &tol).map_err(malformed)?;
    let code = match result.verdict {
        Verdict::HSphere | Verdict::HolomorphicHyperplane => 0,
        Verdict::DimensionTooSmall => EXIT_DIMENSION,
        Verdict::NotHUmbilical
        | Verdict::NonConstantInvariants
        | Verdict::ContainmentFailure
        | Verdict::NonConstantNormal => EXIT_REJECTED,
    };
    let mut report = classification_report(&result);
    report["command"] = json!("classify");
    report["input"] = json!(args.input.display().to_string());
    report["samples"] = json!(set.len());
    report["tolerances"] = json!(tol);
    Ok((report, code))
}

fn decompose(args: &DecomposeArgs) -> Outcome {
    let matrix = read_matrix(&args.input).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let op = HSymmetricOp::new(matrix, args.tol).map_err(|e| match e {
        Error::NotHSymmetric { .. } | Error::DimensionMismatch { .. } | Error::AmbientTooSmall(_) => {
            Failure::new(EXIT_INVALID, e.to_string())
        }
        other => Failure::new(EXIT_IO, other.to_string()),
    })?;
    let d = h_proper_decomposition(&op, args.tol).map_err(|e| Failure::new(EXIT_REJECTED, e.to_string()))?;
    let pairs: Vec<Value> = d
        .pairs
        .iter()
        .map(|(l, mu)| json!({ "lambda": l, "mu": mu }))
        .collect();
    let report = json!({
        "command": "decompose",
        "input": args.input.display().to_string(),
        "m": op.m(),
        "pairs": pairs,
        "basis": d.basis.iter().map(vector).collect::<Vec<_>>(),
        "reconstruction_error": (d.reconstruct() - op.matrix()).amax(),
    });
    Ok((report, 0))
}
