//! From projected observations to `(μ/‖μ‖, λ)`, and the Monte Carlo study of
//! how fast the covariance half-trace converges.
//!
//! The estimator is `λ̂ = f⁻¹(trace(V̂)/2)` with `V̂` the intrinsic sample
//! covariance at the Fréchet mean.

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frechet::{
    empirical_covariance, frechet_mean, CovMatrix2, MeanResult, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::geometry::{geodesic_distance, SpherePoint};
use crate::link::{f_of_lambda, invert_f, F_BOUND, SATURATION_MARGIN};
use crate::projnorm::{sample, ProjNormParams};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub direction_hat: SpherePoint,
    /// `+∞` when `saturated`; serialized as the string `"inf"`.
    #[serde(serialize_with = "ser_lambda", deserialize_with = "de_lambda")]
    pub lambda_hat: f64,
    pub v_hat: CovMatrix2,
    pub half_trace: f64,
    pub mean_diag: MeanResult,
    pub saturated: bool,
}

fn ser_lambda<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_lambda<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Lambda {
        Num(f64),
        Text(String),
    }
    match Lambda::deserialize(d)? {
        Lambda::Num(v) => Ok(v),
        Lambda::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Lambda::Text(t) => Err(serde::de::Error::custom(format!("bad lambda_hat {t:?}"))),
    }
}

/// [`estimate_with`] at the default Fréchet tolerance and iteration cap.
pub fn estimate(points: &[SpherePoint]) -> Result<EstimationResult> {
    estimate_with(points, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Fréchet mean, intrinsic covariance at the mean, then `λ̂ = f⁻¹(trace/2)`.
///
/// A half-trace within `1e-9` of `(π²−4)/4` is flagged `saturated` and gets
/// `λ̂ = +∞` rather than an error.
pub fn estimate_with(
    points: &[SpherePoint],
    tol: f64,
    max_iter: usize,
) -> Result<EstimationResult> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let mean_diag = frechet_mean(points, tol, max_iter)?;
    if !mean_diag.converged {
        return Err(Error::NotConverged {
            iterations: mean_diag.iterations,
            gradient_norm: mean_diag.final_gradient_norm,
        });
    }
    let v_hat = empirical_covariance(points, &mean_diag.mean)?;
    let half_trace = v_hat.trace() / 2.0;
    let (lambda_hat, saturated) = if half_trace >= F_BOUND - SATURATION_MARGIN {
        (f64::INFINITY, true)
    } else {
        (invert_f(half_trace)?, false)
    };
    Ok(EstimationResult {
        direction_hat: mean_diag.mean,
        lambda_hat,
        v_hat,
        half_trace,
        mean_diag,
        saturated,
    })
}

/// One row of a [`ConvergenceStudy`].
///
/// The first four fields are the table proper. The remaining ones summarize
/// the same runs differently:
///
/// * `mc_rms_error`: `sqrt(mean_r (h_r − f)² / reps)`, the root-mean-square
///   error of the Monte Carlo average of the half-traces `h_r`;
/// * `pooled_abs_error`: `|mean_r h_r − f|`;
/// * `lambda_mean_abs_error`: `mean_r |λ̂_r − λ|` (infinite if any run saturated);
/// * `median_direction_error`: median geodesic distance of `μ̂_r` to the truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    #[serde(rename = "L")]
    pub l: usize,
    pub mean_abs_error: f64,
    /// Standard error of `mean_abs_error`; NaN with a single repetition.
    pub std_error: f64,
    pub reps: usize,
    pub mc_rms_error: f64,
    pub pooled_abs_error: f64,
    pub lambda_mean_abs_error: f64,
    pub median_direction_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    /// Sorted by `L`.
    pub rows: Vec<StudyRow>,
    pub seed: u64,
    pub true_lambda: f64,
    pub true_direction: SpherePoint,
    /// `f(true_lambda)`, the target of every half-trace.
    pub f_true: f64,
}

struct Run {
    half_trace: f64,
    lambda_hat: f64,
    direction_error: f64,
}

fn single_run(params: &ProjNormParams, l: usize, seed: u64) -> Result<Run> {
    let points = sample(params, l, seed);
    let fit = estimate(&points)?;
    Ok(Run {
        half_trace: fit.half_trace,
        lambda_hat: fit.lambda_hat,
        direction_error: geodesic_distance(&fit.direction_hat, &params.direction),
    })
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Repeats `sample → estimate` `reps` times for each `L`.
///
/// Run `r` at size `L` draws from the stream `seed::derive(seed, [L, r])`, so
/// rows are independent of each other, of the order of `l_list`, and of the
/// thread count.
pub fn convergence_study(
    params: &ProjNormParams,
    l_list: &[usize],
    reps: usize,
    seed: u64,
) -> Result<ConvergenceStudy> {
    if reps == 0 {
        return Err(Error::Domain("repetitions must be >= 1".into()));
    }
    if let Some(&l) = l_list.iter().find(|&&l| l < 2) {
        return Err(Error::TooFewPoints { needed: 2, got: l });
    }
    let mut sizes = l_list.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let f_true = f_of_lambda(params.lambda)?;
    let mut rows = Vec::with_capacity(sizes.len());
    for &l in &sizes {
        let runs = (0..reps)
            .into_par_iter()
            .map(|r| single_run(params, l, seed::derive(seed, &[l as u64, r as u64])))
            .collect::<Result<Vec<_>>>()?;
        let n = reps as f64;
        let abs: Vec<f64> = runs.iter().map(|r| (r.half_trace - f_true).abs()).collect();
        let mean_abs_error = abs.iter().sum::<f64>() / n;
        let std_error = if reps > 1 {
            let var = abs
                .iter()
                .map(|a| (a - mean_abs_error).powi(2))
                .sum::<f64>()
                / (n - 1.0);
            (var / n).sqrt()
        } else {
            f64::NAN
        };
        let mean_sq = abs.iter().map(|a| a * a).sum::<f64>() / n;
        let mean_h = runs.iter().map(|r| r.half_trace).sum::<f64>() / n;
        rows.push(StudyRow {
            l,
            mean_abs_error,
            std_error,
            reps,
            mc_rms_error: (mean_sq / n).sqrt(),
            pooled_abs_error: (mean_h - f_true).abs(),
            lambda_mean_abs_error: runs
                .iter()
                .map(|r| (r.lambda_hat - params.lambda).abs())
                .sum::<f64>()
                / n,
            median_direction_error: median(runs.iter().map(|r| r.direction_error).collect()),
        });
    }
    Ok(ConvergenceStudy {
        rows,
        seed,
        true_lambda: params.lambda,
        true_direction: params.direction,
        f_true,
    })
}

/// Least-squares slope of `ln y` against `ln x`, skipping pairs with a
/// non-positive or non-finite coordinate. Needs three usable pairs.
pub fn log_log_slope(pairs: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all rows share one L".into()));
    }
    Ok(sxy / sxx)
}

/// Convergence rate: slope of `ln mean_abs_error` against `ln L`. Rows with
/// zero error are excluded.
pub fn rate_fit(study: &ConvergenceStudy) -> Result<f64> {
    let pairs: Vec<_> = study
        .rows
        .iter()
        .map(|r| (r.l as f64, r.mean_abs_error))
        .collect();
    log_log_slope(&pairs)
}
