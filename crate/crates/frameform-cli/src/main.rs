//! Command-line front end: geodesic computation, curvature scans, curve
//! geodesics, distance bounds, and submersion verification, with seeded
//! reproducibility and file IO.
//!
//! Exit codes: 0 ok, 1 usage/verification failure, 2 rank or SPD failure,
//! 3 domain (blow-up), 4 shooting did not converge. Errors are reported as
//! one JSON object on stderr.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use frameform_core::curvature::curvature_scan;
use frameform_core::error::Error;
use frameform_core::forms::{curve_geodesic_solve, distance_bounds, DiscreteCurve};
use frameform_core::frame::{FrameMatrix, TangentMatrix};
use frameform_core::geodesic::{integrate_numeric, solve_ivp, IntegrateError};
use frameform_core::matrix::Seed;
use frameform_core::submersion::verify_submersion;

use io::{
    curve_csv, fmt_f64, form_from_nodes, histogram_csv, parse_curve_csv, path_csv, write_atomic,
    CheckJson, DistanceInput, DistanceReport, GeodesicInput, ScanSummary, SubmersionReportJson,
};

#[derive(Parser)]
#[command(
    name = "frameform",
    about = "Geodesics, curvature and distances of full-rank frames and discretized one-forms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form geodesic for an initial value problem.
    Geodesic(GeodesicArgs),
    /// Monte-Carlo scan of sectional-curvature signs at (m, n).
    CurvatureScan(ScanArgs),
    /// Closed-form geodesic of the Younes metric on open curves.
    CurveGeodesic(CurveArgs),
    /// Distance bounds between two one-forms on matching grids.
    Distance(DistanceArgs),
    /// Run the Riemannian-submersion invariant suite on seeded random data.
    SubmersionVerify(VerifyArgs),
}

#[derive(Args)]
struct GeodesicArgs {
    /// JSON file with {"a0": matrix, "u0": matrix}.
    #[arg(long)]
    input: PathBuf,
    /// Output CSV path (columns: t, row-major entries of a(t)).
    #[arg(long)]
    output: PathBuf,
    /// Time grid: "start:end:count" or comma-separated times.
    #[arg(long = "t-grid", default_value = "0:1:11")]
    t_grid: String,
    /// Also run the RK4 cross-check and print the max deviation.
    #[arg(long)]
    verify: bool,
    /// Steps for the RK4 cross-check.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 200)]
    bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path for the histogram (bin_left, bin_right, count).
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct CurveArgs {
    /// Curve CSV (theta, x1..xn).
    #[arg(long)]
    input: PathBuf,
    /// Velocity field CSV on the same grid (theta, v1..vn).
    #[arg(long)]
    velocity: PathBuf,
    /// Time grid: "start:end:count" or comma-separated times.
    #[arg(long = "t-grid", default_value = "0:1:5")]
    t_grid: String,
    /// Output prefix; one CSV per time sample is written to
    /// "{prefix}_{index}.csv".
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct DistanceArgs {
    /// JSON file with {"alpha": [nodes...], "beta": [nodes...]}.
    #[arg(long)]
    input: PathBuf,
    /// Output JSON path for the bounds report (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random trials.
    #[arg(long, default_value_t = 24)]
    samples: usize,
    /// Output JSON path for the report (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure carrying the exit code contract and a machine-readable payload.
struct Failure {
    exit: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            exit: 1,
            kind: "usage".into(),
            message: message.into(),
        }
    }

    fn from_core(err: &Error) -> Self {
        let (exit, kind) = match err {
            Error::RankDeficient | Error::NotSpd => (2, "rank"),
            Error::BeyondBlowup { .. } | Error::OutOfDomain { .. } => (3, "domain"),
            Error::AtNode { source, .. } => return Failure::from_core(source),
            _ => (1, "usage"),
        };
        Failure {
            exit,
            kind: kind.into(),
            message: err.to_string(),
        }
    }
}

fn parse_t_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parse =
        |s: &str| -> Result<f64, Failure> { s.trim().parse().map_err(|e| Failure::usage(format!("bad time value '{s}': {e}"))) };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Failure::usage("t-grid must be start:end:count"));
        }
        let start = parse(parts[0])?;
        let end = parse(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|e| Failure::usage(format!("bad count: {e}")))?;
        if count < 1 || end < start {
            return Err(Failure::usage("t-grid needs count >= 1 and end >= start"));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        Ok((0..count)
            .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
            .collect())
    } else {
        spec.split(',').map(parse).collect()
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    write_atomic(path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_geodesic(args: &GeodesicArgs) -> Result<(), Failure> {
    let input: GeodesicInput = serde_json::from_str(&read_to_string(&args.input)?)
        .map_err(|e| Failure::usage(format!("bad input JSON: {e}")))?;
    let a0 = FrameMatrix::new(input.a0.to_matrix().map_err(Failure::usage)?)
        .map_err(|e| Failure::from_core(&e))?;
    let u0 = TangentMatrix::new(input.u0.to_matrix().map_err(Failure::usage)?);
    let times = parse_t_grid(&args.t_grid)?;
    let sol = solve_ivp(&a0, &u0).map_err(|e| Failure::from_core(&e))?;
    if let Some(t) = sol.blowup() {
        println!("blowup {}", fmt_f64(t));
    }
    let mut rows = Vec::with_capacity(times.len());
    let mut mats = Vec::with_capacity(times.len());
    for &t in &times {
        let (frame, _) = sol.eval(t).map_err(|e| Failure::from_core(&e))?;
        mats.push(frame.mat().clone());
    }
    for (t, m) in times.iter().zip(mats.iter()) {
        rows.push((*t, m));
    }
    write_output(&args.output, &path_csv(&rows))?;

    if args.verify {
        let t_end = times.iter().copied().fold(0.0_f64, f64::max).max(1e-9);
        match integrate_numeric(&a0, &u0, t_end, args.steps.max(1)) {
            Ok(path) => {
                let mut worst: f64 = 0.0;
                for (t, frame) in path.times().iter().zip(path.frames()) {
                    let (exact, _) = sol.eval(*t).map_err(|e| Failure::from_core(&e))?;
                    worst = worst.max(frame.mat().max_abs_diff(exact.mat()));
                }
                println!("verify max deviation {}", fmt_f64(worst));
            }
            Err(IntegrateError::RankLoss { t, .. }) => {
                println!("verify rank loss at {}", fmt_f64(t));
            }
            Err(IntegrateError::Invalid(e)) => return Err(Failure::from_core(&e)),
        }
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs) -> Result<(), Failure> {
    let hist = curvature_scan(args.m, args.n, args.samples, args.bins, Seed(args.seed))
        .map_err(|e| Failure::from_core(&e))?;
    write_output(&args.output, &histogram_csv(&hist))?;
    let summary = ScanSummary {
        m: args.m,
        n: args.n,
        samples: hist.samples(),
        positive_fraction: hist.positive_fraction(),
        seed: args.seed,
    };
    println!(
        "{}",
        serde_json::to_string(&summary).expect("summary serializes")
    );
    Ok(())
}

fn cmd_curve(args: &CurveArgs) -> Result<(), Failure> {
    let (nodes, points) = parse_curve_csv(&read_to_string(&args.input)?).map_err(Failure::usage)?;
    let (vnodes, vels) =
        parse_curve_csv(&read_to_string(&args.velocity)?).map_err(Failure::usage)?;
    if vnodes.len() != nodes.len()
        || nodes
            .iter()
            .zip(vnodes.iter())
            .any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Failure::usage("velocity grid does not match the curve grid"));
    }
    let curve = DiscreteCurve::new(nodes, points).map_err(|e| Failure::from_core(&e))?;
    let sol = curve_geodesic_solve(&curve, &vels).map_err(|e| Failure::from_core(&e))?;
    if let Some((node, t)) = sol.blowup() {
        println!("blowup {} at node {node}", fmt_f64(t));
    }
    let times = parse_t_grid(&args.t_grid)?;
    for (i, &t) in times.iter().enumerate() {
        let ct = sol.eval(t).map_err(|e| Failure::from_core(&e))?;
        let path = PathBuf::from(format!("{}_{i}.csv", args.output.display()));
        write_output(&path, &curve_csv(&ct))?;
        println!("wrote {} t={}", path.display(), fmt_f64(t));
    }
    Ok(())
}

fn cmd_distance(args: &DistanceArgs) -> Result<(), Failure> {
    let input: DistanceInput = serde_json::from_str(&read_to_string(&args.input)?)
        .map_err(|e| Failure::usage(format!("bad input JSON: {e}")))?;
    let alpha = form_from_nodes(&input.alpha).map_err(Failure::usage)?;
    let beta = form_from_nodes(&input.beta).map_err(Failure::usage)?;
    let bounds = distance_bounds(&alpha, &beta).map_err(|e| Failure::from_core(&e))?;
    if bounds.partial {
        return Err(Failure {
            exit: 4,
            kind: "no-convergence".into(),
            message: format!(
                "shooting failed at {} node(s); partial lower bound {}",
                bounds.node_lengths.iter().filter(|l| l.is_none()).count(),
                fmt_f64(bounds.lower)
            ),
        });
    }
    let report = DistanceReport {
        lower: bounds.lower,
        upper: bounds.upper,
        partial: bounds.partial,
        node_lengths: bounds.node_lengths,
    };
    let json = serde_json::to_string(&report).expect("report serializes");
    match &args.output {
        Some(path) => write_output(path, &json)?,
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let report = verify_submersion(Seed(args.seed), args.samples.max(1));
    let json = SubmersionReportJson {
        seed: report.seed,
        trials: report.trials,
        all_pass: report.all_pass(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.to_string(),
                max_err: c.max_err,
                threshold: c.threshold,
                pass: c.pass,
            })
            .collect(),
    };
    let serialized = serde_json::to_string_pretty(&json).expect("report serializes");
    match &args.output {
        Some(path) => write_output(path, &serialized)?,
        None => println!("{serialized}"),
    }
    if json.all_pass {
        Ok(())
    } else {
        Err(Failure {
            exit: 1,
            kind: "verification".into(),
            message: "submersion invariant checks failed".into(),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Geodesic(args) => cmd_geodesic(args),
        Command::CurvatureScan(args) => cmd_scan(args),
        Command::CurveGeodesic(args) => cmd_curve(args),
        Command::Distance(args) => cmd_distance(args),
        Command::SubmersionVerify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!(
                "{}",
                serde_json::json!({
                    "error": f.message,
                    "kind": f.kind,
                    "exit": f.exit,
                })
            );
            ExitCode::from(f.exit)
        }
    }
}
