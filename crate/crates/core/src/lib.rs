//! Intrinsic statistics of the projected normal distribution on the unit sphere.
//!
//! If `X ~ N(μ, σ² I₃)` is observed only through its direction `X/‖X‖`, the
//! identifiable parameters are the mean direction `μ/‖μ‖` and the ratio
//! `λ = σ²/‖μ‖²`. This crate recovers both from spherical data:
//!
//! 1. the Fréchet (intrinsic) mean of the sample estimates `μ/‖μ‖`;
//! 2. the half-trace of the intrinsic sample covariance estimates `f(λ)`,
//!    where the link function `f` is a strictly increasing bijection from
//!    `[0, ∞)` onto `[0, (π²−4)/4)`;
//! 3. inverting `f` by bisection gives `λ̂`.
//!
//! ```
//! use projnormal::{estimator, geometry::SpherePoint, projnorm};
//!
//! let truth = projnorm::ProjNormParams::new(SpherePoint::NORTH_POLE, 0.5).unwrap();
//! let data = projnorm::sample(&truth, 5_000, 7);
//! let fit = estimator::estimate(&data).unwrap();
//! assert!((fit.lambda_hat - 0.5).abs() < 0.05);
//! ```
//!
//! The runnable programs in `examples/` walk through each capability; the
//! `projnormal` binary wraps simulation, estimation and the convergence study.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimator;
pub mod frechet;
pub mod geometry;
pub mod io;
pub mod link;
pub mod projnorm;
pub mod quadrature;
pub mod seed;

pub use error::{Error, Result};
