//! Plain-text file formats: sample CSVs, estimation results as JSON, study
//! tables, and link tables.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which is
//! enough for an exact `f64` round trip.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::Serialize;

use crate::estimator::{ConvergenceStudy, EstimationResult};
use crate::geometry::SpherePoint;
use crate::link::LinkTable;

/// Accepted deviation of a Cartesian row's norm from 1 before renormalizing.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: no sample rows", path.display())]
    Empty { path: PathBuf },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    /// Header `x,y,z`.
    Cartesian,
    /// Header `theta,phi`: azimuth and polar angle in radians.
    Spherical,
}

impl SampleFormat {
    fn header(self) -> &'static str {
        match self {
            SampleFormat::Cartesian => "x,y,z",
            SampleFormat::Spherical => "theta,phi",
        }
    }
}

fn parse_row(fields: &[&str], format: SampleFormat) -> Result<SpherePoint, String> {
    let want = match format {
        SampleFormat::Cartesian => 3,
        SampleFormat::Spherical => 2,
    };
    if fields.len() != want {
        return Err(format!("expected {want} fields, found {}", fields.len()));
    }
    let nums = fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .map_err(|_| format!("cannot parse {f:?} as a number"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        SampleFormat::Cartesian => {
            let v = Vector3::new(nums[0], nums[1], nums[2]);
            let norm = v.norm();
            if !((1.0 - NORM_TOLERANCE)..=(1.0 + NORM_TOLERANCE)).contains(&norm) {
                return Err(format!("norm {norm} is not within {NORM_TOLERANCE} of 1"));
            }
            SpherePoint::from_nearly_unit(v).map_err(|e| e.to_string())
        }
        SampleFormat::Spherical => {
            SpherePoint::from_spherical(nums[0], nums[1]).map_err(|e| e.to_string())
        }
    }
}

/// Parses sample CSV text. `origin` only labels errors.
pub fn parse_samples(text: &str, origin: &Path) -> Result<Vec<SpherePoint>, IoError> {
    let parse_err = |line: usize, message: String| IoError::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut format = None;
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match format {
            None => {
                format = Some(match fields.as_slice() {
                    ["x", "y", "z"] => SampleFormat::Cartesian,
                    ["theta", "phi"] => SampleFormat::Spherical,
                    _ => {
                        return Err(parse_err(
                            i + 1,
                            format!("expected header x,y,z or theta,phi, found {line:?}"),
                        ))
                    }
                })
            }
            Some(f) => points.push(parse_row(&fields, f).map_err(|m| parse_err(i + 1, m))?),
        }
    }
    if points.is_empty() {
        return Err(IoError::Empty {
            path: origin.to_path_buf(),
        });
    }
    Ok(points)
}

pub fn read_samples(path: impl AsRef<Path>) -> Result<Vec<SpherePoint>, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_samples(&text, path)
}

/// Sample CSV text. Each provenance line becomes a `# ` comment above the header.
pub fn format_samples(
    points: &[SpherePoint],
    format: SampleFormat,
    provenance: &[String],
) -> String {
    let mut out = String::new();
    for p in provenance {
        let _ = writeln!(out, "# {p}");
    }
    let _ = writeln!(out, "{}", format.header());
    for p in points {
        let _ = match format {
            SampleFormat::Cartesian => {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", p.x(), p.y(), p.z())
            }
            SampleFormat::Spherical => writeln!(out, "{:.16e},{:.16e}", p.theta(), p.phi()),
        };
    }
    out
}

pub fn write_samples(
    points: &[SpherePoint],
    path: impl AsRef<Path>,
    format: SampleFormat,
    provenance: &[String],
) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::write(path, format_samples(points, format, provenance)).map_err(io_err(path))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), IoError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))
}

/// [`EstimationResult`] as pretty-printed JSON.
pub fn write_result(result: &EstimationResult, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_json(result, path.as_ref())
}

pub fn read_result(path: impl AsRef<Path>) -> Result<EstimationResult, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Header of [`format_study_csv`]. The first four columns are the table
/// proper; the rest are the extra summaries of [`crate::estimator::StudyRow`].
pub const STUDY_HEADER: &str = "L,mean_abs_error,std_error,reps,mc_rms_error,pooled_abs_error,lambda_mean_abs_error,median_direction_error";

/// Study rows as CSV. A NaN standard error (single repetition) is written as `NaN`.
pub fn format_study_csv(study: &ConvergenceStudy) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# seed = {}, true_lambda = {:.16e}, f(true_lambda) = {:.16e}",
        study.seed, study.true_lambda, study.f_true
    );
    let _ = writeln!(out, "{STUDY_HEADER}");
    for r in &study.rows {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.l,
            r.mean_abs_error,
            r.std_error,
            r.reps,
            r.mc_rms_error,
            r.pooled_abs_error,
            r.lambda_mean_abs_error,
            r.median_direction_error
        );
    }
    out
}

/// Writes the study as CSV, or as JSON (with parameters and seed) when the
/// path ends in `.json`.
pub fn write_study(study: &ConvergenceStudy, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "json") {
        write_json(study, path)
    } else {
        fs::write(path, format_study_csv(study)).map_err(io_err(path))
    }
}

pub fn write_link_table(table: &LinkTable, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    table
        .write_csv(&mut w)
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn parse(text: &str) -> Result<Vec<SpherePoint>, IoError> {
        parse_samples(text, Path::new("mem.csv"))
    }

    #[test]
    fn cartesian_row() {
        let pts = parse("# made by hand\nx,y,z\n0,0,1\n").unwrap();
        assert_eq!(pts, vec![SpherePoint::NORTH_POLE]);
    }

    #[test]
    fn spherical_row() {
        let pts = parse("theta,phi\n3.14159265358979,1.5707963267949\n").unwrap();
        assert_abs_diff_eq!(pts[0].x(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].y(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].z(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_with_line_numbers() {
        let e = parse("x,y,z\n0,0,1\n\n0,0,0\n").unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 4, .. }), "{e}");
        assert!(e.to_string().contains("mem.csv:4"));
        let e = parse("x,y,z\n0,0,1.1\n").unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 2, .. }));
        let e = parse("x,y,z\n0,1\n").unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 2, .. }));
        let e = parse("x,y,z\n0,zero,1\n").unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 2, .. }));
        let e = parse("theta,phi\n0,4\n").unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 2, .. }));
        let e = parse("a,b\n").unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 1, .. }));
        assert!(matches!(parse("# only\n"), Err(IoError::Empty { .. })));
        assert!(matches!(parse("x,y,z\n"), Err(IoError::Empty { .. })));
    }

    #[test]
    fn small_norm_error_is_renormalized() {
        let pts = parse("x,y,z\n0,0,1.0000005\n").unwrap();
        assert_eq!(pts[0], SpherePoint::NORTH_POLE);
    }

    #[test]
    fn provenance_header() {
        let text = format_samples(
            &[SpherePoint::NORTH_POLE],
            SampleFormat::Cartesian,
            &["seed = 7".into()],
        );
        assert!(text.starts_with("# seed = 7\nx,y,z\n"));
        assert_eq!(parse(&text).unwrap(), vec![SpherePoint::NORTH_POLE]);
    }

    #[test]
    fn missing_file_names_path() {
        let e = read_samples("/nonexistent/dir/s.csv").unwrap_err();
        assert!(e.to_string().contains("/nonexistent/dir/s.csv"));
    }
}
