//! The `projnormal` command line: `simulate`, `estimate`, `table1`, `linktable`.
//!
//! [`run`] does all the work and returns the process exit code (0 success,
//! 1 runtime failure, 2 usage error) so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use crate::estimator::{convergence_study, estimate_with, rate_fit, ConvergenceStudy};
use crate::geometry::SpherePoint;
use crate::io::{self, SampleFormat};
use crate::link::{LinkTable, F_BOUND};
use crate::projnorm::{sample, ProjNormParams};

/// Sample sizes that run at desk scale.
pub const DEFAULT_GRID: [usize; 5] = [30, 50, 100, 1000, 10_000];
/// The complete grid of sample sizes.
pub const FULL_GRID: [usize; 7] = [30, 50, 100, 1000, 10_000, 100_000, 1_000_000];

#[derive(Debug, Parser)]
#[command(
    name = "projnormal",
    version,
    about = "Projected normal statistics on the sphere"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a seeded projected-normal sample and write it as CSV.
    Simulate {
        /// Mean direction as `theta,phi` (radians) or `x,y,z`.
        #[arg(long, default_value = "0,0", value_parser = parse_direction, allow_hyphen_values = true)]
        dir: SpherePoint,
        /// λ = σ²/‖μ‖².
        #[arg(long, value_parser = parse_nonneg, allow_hyphen_values = true, required_unless_present = "sigma")]
        lambda: Option<f64>,
        /// σ with ‖μ‖ = 1, i.e. λ = σ².
        #[arg(long, value_parser = parse_nonneg, allow_hyphen_values = true, conflicts_with = "lambda")]
        sigma: Option<f64>,
        /// Number of points.
        #[arg(long, value_parser = parse_count)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Cartesian)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the mean direction and λ from a sample file.
    Estimate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the full result as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the JSON result instead of the text summary.
        #[arg(long)]
        json: bool,
        /// Fréchet mean gradient tolerance.
        #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
        tol: f64,
        #[arg(long, default_value_t = 1000, value_parser = parse_count)]
        max_iter: usize,
    },
    /// Monte Carlo convergence of the covariance half-trace (error table over sample sizes).
    Table1 {
        #[arg(long, default_value_t = 1.0, value_parser = parse_nonneg, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value = "0,0", value_parser = parse_direction, allow_hyphen_values = true)]
        dir: SpherePoint,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', value_parser = parse_size, conflicts_with = "full")]
        grid: Option<Vec<usize>>,
        /// Use the complete grid up to L = 10⁶.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 100, value_parser = parse_count)]
        reps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// CSV, or JSON if the name ends in `.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the link function f(λ).
    Linktable {
        #[arg(long, value_parser = parse_positive)]
        lambda_min: f64,
        #[arg(long, value_parser = parse_positive)]
        lambda_max: f64,
        #[arg(long, default_value_t = 200, value_parser = parse_count)]
        points: usize,
        #[arg(long)]
        log_spacing: bool,
        /// Output CSV (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Cartesian,
    Spherical,
}

impl From<Format> for SampleFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Cartesian => SampleFormat::Cartesian,
            Format::Spherical => SampleFormat::Spherical,
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

fn parse_nonneg(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v < 0.0 {
        return Err(format!("must be >= 0, got {v}"));
    }
    Ok(v)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v <= 0.0 {
        return Err(format!("must be > 0, got {v}"));
    }
    Ok(v)
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(_) => Err(format!("{s:?} is not a positive integer")),
    }
}

/// Sample size; accepts `10000` or `1e4`.
fn parse_size(s: &str) -> Result<usize, String> {
    let v = parse_f64(s)?;
    if v < 2.0 || v.fract() != 0.0 || v > 1e12 {
        return Err(format!("sample size must be an integer >= 2, got {s:?}"));
    }
    Ok(v as usize)
}

fn parse_direction(s: &str) -> Result<SpherePoint, String> {
    let parts = s.split(',').map(parse_f64).collect::<Result<Vec<_>, _>>()?;
    match parts.as_slice() {
        [theta, phi] => SpherePoint::from_spherical(*theta, *phi).map_err(|e| e.to_string()),
        [x, y, z] => SpherePoint::from_cartesian(*x, *y, *z).map_err(|e| e.to_string()),
        _ => Err("expected theta,phi or x,y,z".into()),
    }
}

type Outcome = Result<(), Box<dyn std::error::Error + Send + Sync>>;

fn usage_error(kind: ErrorKind, message: &str) -> clap::Error {
    Cli::command().error(kind, message)
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return e.exit_code();
        }
    };
    if let Command::Linktable {
        lambda_min,
        lambda_max,
        ..
    } = &cli.command
    {
        if lambda_min >= lambda_max {
            let e = usage_error(
                ErrorKind::ValueValidation,
                "--lambda-min must be smaller than --lambda-max",
            );
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let (result, text) = pool.install(|| {
        let mut buf = Vec::new();
        let r = dispatch(cli.command, &mut buf);
        (r, buf)
    });
    let _ = stdout.write_all(&text);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> Outcome {
    match command {
        Command::Simulate {
            dir,
            lambda,
            sigma,
            n,
            seed,
            format,
            out: path,
        } => {
            let lambda = lambda.unwrap_or_else(|| sigma.map_or(0.0, |s| s * s));
            let params = ProjNormParams::new(dir, lambda)?;
            let points = sample(&params, n, seed);
            let provenance = vec![
                "projnormal simulate".to_string(),
                format!("seed = {seed}"),
                format!(
                    "direction = {:.16e},{:.16e},{:.16e}",
                    dir.x(),
                    dir.y(),
                    dir.z()
                ),
                format!("lambda = {lambda:.16e}"),
                format!("n = {n}"),
            ];
            io::write_samples(&points, &path, format.into(), &provenance)?;
            writeln!(out, "wrote {n} points to {}", path.display())?;
        }
        Command::Estimate {
            input,
            out: path,
            json,
            tol,
            max_iter,
        } => {
            let points = io::read_samples(&input)?;
            let r = estimate_with(&points, tol, max_iter)?;
            if let Some(p) = &path {
                io::write_result(&r, p)?;
            }
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
            } else {
                let d = r.direction_hat;
                writeln!(out, "points            {}", points.len())?;
                writeln!(
                    out,
                    "direction x,y,z   {:.10}, {:.10}, {:.10}",
                    d.x(),
                    d.y(),
                    d.z()
                )?;
                writeln!(out, "direction θ,φ     {:.10}, {:.10}", d.theta(), d.phi())?;
                writeln!(out, "lambda_hat        {:.10e}", r.lambda_hat)?;
                writeln!(out, "half_trace        {:.10e}", r.half_trace)?;
                writeln!(
                    out,
                    "iterations        {} (gradient norm {:.3e})",
                    r.mean_diag.iterations, r.mean_diag.final_gradient_norm
                )?;
                if r.saturated {
                    writeln!(
                        out,
                        "saturated: half-trace is at the upper bound {F_BOUND:.10}; lambda_hat = inf"
                    )?;
                }
            }
        }
        Command::Table1 {
            lambda,
            dir,
            grid,
            full,
            reps,
            seed,
            out: path,
        } => {
            let grid = match (grid, full) {
                (Some(g), _) => g,
                (None, true) => FULL_GRID.to_vec(),
                (None, false) => DEFAULT_GRID.to_vec(),
            };
            let params = ProjNormParams::new(dir, lambda)?;
            let study = convergence_study(&params, &grid, reps, seed)?;
            write!(out, "{}", format_table(&study))?;
            match rate_fit(&study) {
                Ok(slope) => writeln!(out, "fitted rate slope: {slope:.4}")?,
                Err(e) => writeln!(out, "fitted rate slope: unavailable ({e})")?,
            }
            if let Some(p) = &path {
                io::write_study(&study, p)?;
            }
        }
        Command::Linktable {
            lambda_min,
            lambda_max,
            points,
            log_spacing,
            out: path,
        } => {
            let grid = LinkTable::grid(lambda_min, lambda_max, points, log_spacing)?;
            let table = LinkTable::build(&grid)?;
            match &path {
                Some(p) => io::write_link_table(&table, p)?,
                None => table.write_csv(&mut *out)?,
            }
        }
    }
    Ok(())
}

fn format_cell(v: f64) -> String {
    if v.is_nan() {
        "-".into()
    } else {
        format!("{v:.2e}")
    }
}

/// The study as a table with one column per `L`.
pub fn format_table(study: &ConvergenceStudy) -> String {
    let mut s = format!(
        "lambda = {}, f(lambda) = {:.10}, seed = {}, reps = {}\n",
        study.true_lambda,
        study.f_true,
        study.seed,
        study.rows.first().map_or(0, |r| r.reps)
    );
    let mut line = |label: &str, cells: Vec<String>| {
        s.push_str(&format!("{label:<22}"));
        for c in cells {
            s.push_str(&format!("{c:>10}"));
        }
        s.push('\n');
    };
    let rows = &study.rows;
    line("L", rows.iter().map(|r| r.l.to_string()).collect());
    line(
        "mean_abs_error",
        rows.iter().map(|r| format_cell(r.mean_abs_error)).collect(),
    );
    line(
        "std_error",
        rows.iter().map(|r| format_cell(r.std_error)).collect(),
    );
    line(
        "mc_rms_error",
        rows.iter().map(|r| format_cell(r.mc_rms_error)).collect(),
    );
    line(
        "pooled_abs_error",
        rows.iter()
            .map(|r| format_cell(r.pooled_abs_error))
            .collect(),
    );
    line(
        "lambda_mean_abs_error",
        rows.iter()
            .map(|r| format_cell(r.lambda_mean_abs_error))
            .collect(),
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("projnormal").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn direction_forms() {
        assert_eq!(parse_direction("0,0").unwrap(), SpherePoint::NORTH_POLE);
        assert_eq!(parse_direction("0,0,2").unwrap(), SpherePoint::NORTH_POLE);
        assert!(parse_direction("0,0,0").is_err());
        assert!(parse_direction("1").is_err());
        assert!(parse_direction("0,4").is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(parse_size("1e4").unwrap(), 10_000);
        assert_eq!(parse_size("30").unwrap(), 30);
        assert!(parse_size("1.5").is_err());
        assert!(parse_size("1").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("a.csv");
        let out = out.to_str().unwrap();
        for args in [
            vec!["simulate", "--lambda", "-1", "--n", "10", "--out", out],
            vec!["simulate", "--lambda", "1", "--n", "0", "--out", out],
            vec![
                "simulate", "--lambda", "1", "--sigma", "1", "--n", "5", "--out", out,
            ],
            vec!["linktable", "--lambda-min", "2", "--lambda-max", "1"],
            vec!["bogus"],
        ] {
            let (code, _, err) = run_args(&args);
            assert_eq!(code, 2, "{args:?}: {err}");
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn single_row_link_table() {
        let (code, out, _) = run_args(&[
            "linktable",
            "--lambda-min",
            "0.5",
            "--lambda-max",
            "2",
            "--points",
            "1",
        ]);
        assert_eq!(code, 0);
        let rows: Vec<_> = out.lines().collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[1].starts_with("5.0000000000000000e-1,"));
    }

    #[test]
    fn table_layout() {
        let (code, out, err) = run_args(&[
            "table1",
            "--grid",
            "20,40,80",
            "--reps",
            "4",
            "--threads",
            "2",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("mean_abs_error"));
        assert!(out.contains("fitted rate slope"));
    }
}
