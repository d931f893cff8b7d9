//! Acceptance suite: one line per criterion, non-zero exit if any gated
//! criterion fails. Run with `cargo test --test acceptance`.
//!
//! Two sub-criteria cannot be met by a correct implementation; they are
//! printed as `FAIL (known)` with the measured numbers and are not gated.
//! Instead the suite checks that the measurement agrees with the analytic
//! explanation, so a change in behaviour still shows up as a failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use projnormal::estimator::{convergence_study, rate_fit};
use projnormal::frechet::{empirical_covariance, frechet_mean, DEFAULT_MAX_ITER, DEFAULT_TOL};
use projnormal::geometry::{
    canonical_basis, exp_map, geodesic_distance, log_map, parallel_transport, SpherePoint,
    TangentVector,
};
use projnormal::link::{
    a_coeff, c_coeff, f_of_lambda, f_of_x, fprime_series, fprime_series_auto, invert_f, j_moment,
    DEFAULT_K_MAX, F_BOUND,
};
use projnormal::projnorm::{
    density, density_general, sample, sample_uniform, seeded_rng, GeneralNormalParams,
    ProjNormParams, SQRT_2PI,
};
use projnormal::quadrature::{integrate, sphere_integral, QuadOptions};

#[derive(PartialEq)]
enum Status {
    Pass,
    Fail,
    KnownFail,
}

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, name: &str, status: Status, detail: String) {
        let tag = match status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::KnownFail => "FAIL (known)",
        };
        println!("[{tag}] {id:>4} {name}: {detail}");
        if status == Status::Fail {
            self.failures.push(id.to_string());
        }
    }

    fn check(&mut self, id: &str, name: &str, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.line(id, name, status, detail);
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_link_bound(r: &mut Report) {
    let t = Instant::now();
    let f = f_of_lambda(1e6).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let ok = (F_BOUND - 1e-3..F_BOUND).contains(&f) && secs < 1.0;
    r.check(
        "1",
        "link bound",
        ok,
        format!("f(1e6) = {f:.12}, bound = {F_BOUND:.12}, {secs:.3} s"),
    );
}

fn c2_series_constants(r: &mut Report) {
    let pi2 = PI * PI;
    let pairs = [
        ("c0", c_coeff(0), -pi2 / 2.0),
        ("c1", c_coeff(1), 4.0 * SQRT_2PI / 9.0),
        ("c2", c_coeff(2), -pi2 / 8.0),
        ("a1", a_coeff(1).unwrap(), 4.0 * SQRT_2PI / 9.0),
        ("a2", a_coeff(2).unwrap(), -7.0 * pi2 / 32.0),
    ];
    let worst = pairs
        .iter()
        .map(|(_, v, e)| rel(*v, *e))
        .fold(0.0, f64::max);
    r.check(
        "2",
        "series constants",
        worst <= 1e-12,
        format!("max relative deviation {worst:.1e} over c0, c1, c2, a1, a2"),
    );
}

fn c3_recurrence(r: &mut Report) {
    let worst = (3..=30)
        .map(|k| rel(c_coeff(k), a_coeff(k).unwrap()))
        .fold(0.0, f64::max);
    let bad_sign = (0..=200u32).find(|&k| {
        let c = c_coeff(k);
        if k % 2 == 0 {
            !(c < 0.0)
        } else {
            !(c > 0.0)
        }
    });
    r.check(
        "3",
        "c_k = a_k and sign alternation",
        worst <= 1e-12 && bad_sign.is_none(),
        format!(
            "max relative |c_k − a_k| (k = 3..30) {worst:.1e}; first bad sign k = {bad_sign:?}"
        ),
    );
}

fn c4_j_oracle(r: &mut Report) {
    let opts = QuadOptions {
        abs_tol: 1e-13,
        ..Default::default()
    };
    let worst = (0..=20)
        .map(|m| {
            let q = integrate(|p| p * p * p.cos().powi(m as i32) * p.sin(), 0.0, PI, opts).value;
            (j_moment(m) - q).abs()
        })
        .fold(0.0, f64::max);
    let exact0 = j_moment(0) == PI * PI - 4.0;
    r.check(
        "4",
        "J closed form vs quadrature",
        worst <= 1e-8 && exact0,
        format!("max |Δ| (m = 0..20) {worst:.1e}; J(0) == π²−4: {exact0}"),
    );
}

fn c5_derivative(r: &mut Report) {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for x in [0.2, 0.5, 1.0, 2.0, 3.0] {
        let fd = (f_of_x(x + h).unwrap() - f_of_x(x - h).unwrap()) / (2.0 * h);
        let s = fprime_series(x, DEFAULT_K_MAX).unwrap().value * (-0.5 * x * x).exp();
        worst = worst.max(rel(s, fd));
    }
    let mut max_value = f64::NEG_INFINITY;
    let mut max_k = 0;
    for i in 0..=1000 {
        let s = fprime_series_auto(i as f64 * 0.01).unwrap();
        max_value = max_value.max(s.value);
        max_k = max_k.max(s.k_max);
    }
    r.check(
        "5",
        "series derivative",
        worst <= 1e-5 && max_value < 0.0,
        format!(
            "max relative series-vs-FD {worst:.1e}; max series value on [0, 10] {max_value:.3e} (k_max up to {max_k})"
        ),
    );
}

fn c6_round_trip(r: &mut Report) {
    let t = Instant::now();
    let worst = [0.01, 0.1, 1.0, 10.0, 100.0]
        .iter()
        .map(|&l| (invert_f(f_of_lambda(l).unwrap()).unwrap() - l).abs() / (1.0 + l))
        .fold(0.0, f64::max);
    let secs = t.elapsed().as_secs_f64();
    r.check(
        "6",
        "bijection round trip",
        worst <= 1e-8 && secs < 5.0,
        format!("max |λ̂ − λ|/(1+λ) {worst:.1e}, {secs:.2} s"),
    );
}

const REFERENCE_ERRORS: [(usize, f64); 5] = [
    (30, 0.013),
    (50, 0.0080),
    (100, 0.0055),
    (1000, 0.0033),
    (10_000, 0.0015),
];

fn c7_c8_table1(r: &mut Report) {
    let t = Instant::now();
    let truth = ProjNormParams::new(SpherePoint::NORTH_POLE, 1.0).unwrap();
    let grid: Vec<usize> = REFERENCE_ERRORS.iter().map(|p| p.0).collect();
    let study = convergence_study(&truth, &grid, 100, 42).unwrap();
    let secs = t.elapsed().as_secs_f64();

    let describe = |values: &[f64]| {
        values
            .iter()
            .zip(REFERENCE_ERRORS)
            .map(|(v, (l, p))| format!("L={l}: {v:.2e} (reference {p}, ×{:.2})", v / p))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let within = |values: &[f64]| {
        values
            .iter()
            .zip(REFERENCE_ERRORS)
            .all(|(v, (_, p))| *v >= p / 3.0 && *v <= p * 3.0)
    };
    let monotone = |values: &[f64]| values.windows(2).all(|w| w[1] < w[0]);

    let literal: Vec<f64> = study.rows.iter().map(|r| r.mean_abs_error).collect();
    // for near-normal h, mean|h − f| / rms-of-the-average ≈ √(2/π)·√reps ≈ 8
    let explained = study
        .rows
        .iter()
        .all(|r| (6.0..=10.0).contains(&(r.mean_abs_error / r.mc_rms_error)));
    let status = if within(&literal) && monotone(&literal) {
        Status::Pass
    } else if explained {
        Status::KnownFail
    } else {
        Status::Fail
    };
    r.line(
        "7a",
        "error table, mean over runs of |h − f(1)|",
        status,
        format!("{}; monotone: {}", describe(&literal), monotone(&literal)),
    );

    let rms: Vec<f64> = study.rows.iter().map(|r| r.mc_rms_error).collect();
    r.check(
        "7",
        "error table, error of the 100-run average",
        within(&rms) && monotone(&rms) && secs < 600.0,
        format!(
            "{}; monotone: {}; {secs:.1} s",
            describe(&rms),
            monotone(&rms)
        ),
    );

    let slope = rate_fit(&study).unwrap();
    r.check(
        "8",
        "convergence rate",
        (-0.65..=-0.35).contains(&slope),
        format!("log-log slope of mean_abs_error vs L = {slope:.4}"),
    );
}

fn c9_mean_direction(r: &mut Report) {
    let direction = SpherePoint::from_spherical(1.0, 2.0).unwrap();
    let mut details = Vec::new();
    let mut ok = true;
    for lambda in [0.25, 1.0] {
        let truth = ProjNormParams::new(direction, lambda).unwrap();
        let mut d: Vec<f64> = (0..20)
            .map(|run| {
                let pts = sample(&truth, 10_000, 900 + run);
                let m = frechet_mean(&pts, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
                geodesic_distance(&m.mean, &direction)
            })
            .collect();
        d.sort_by(f64::total_cmp);
        let median = 0.5 * (d[9] + d[10]);
        ok &= median < 0.05;
        details.push(format!("λ = {lambda}: median {median:.2e} rad"));
    }
    r.check("9", "Fréchet mean hits pr(μ)", ok, details.join("; "));
}

fn c10_uniform_covariance(r: &mut Report) {
    let pts = sample_uniform(100_000, 2024);
    let v = empirical_covariance(&pts, &SpherePoint::NORTH_POLE).unwrap();
    let h = v.trace() / 2.0;
    let dev = rel(h, F_BOUND);
    r.check(
        "10",
        "uniform-limit covariance",
        dev <= 0.02,
        format!("trace/2 = {h:.6}, relative deviation from (π²−4)/4 {dev:.2e}"),
    );
}

fn c11_density(r: &mut Report) {
    let direction = SpherePoint::from_spherical(0.3, 0.7).unwrap();
    let mut worst: f64 = 0.0;
    for lambda in [0.1, 1.0, 10.0] {
        let p = ProjNormParams::new(direction, lambda).unwrap();
        let total = sphere_integral(
            |t, f| density(&p, &SpherePoint::from_spherical(t, f).unwrap()).unwrap(),
            1e-9,
        );
        worst = worst.max((total - 1.0).abs());
    }
    r.check(
        "11a",
        "density normalization",
        worst <= 1e-6,
        format!("max |∫p − 1| over λ ∈ {{0.1, 1, 10}} = {worst:.1e}"),
    );

    let lambda = 1e8;
    let p = ProjNormParams::new(direction, lambda).unwrap();
    let mut max_dev: f64 = 0.0;
    let mut max_cos: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let u = SpherePoint::from_spherical(0.2 * PI * i as f64, PI * (j as f64 + 0.5) / 10.0)
                .unwrap();
            max_dev = max_dev.max((4.0 * PI * density(&p, &u).unwrap() - 1.0).abs());
            max_cos = max_cos.max(u.dot(&direction).abs());
        }
    }
    // 4πp = 1 + √(8/(πλ)) cos + O(1/λ)
    let predicted = (8.0 / (PI * lambda)).sqrt() * max_cos;
    let explained = (max_dev - predicted).abs() < 1e-7;
    let status = if max_dev <= 1e-4 {
        Status::Pass
    } else if explained {
        Status::KnownFail
    } else {
        Status::Fail
    };
    r.line(
        "11b",
        "uniform limit at λ = 1e8",
        status,
        format!(
            "max relative deviation from 1/(4π) on 100 probes {max_dev:.4e} (tolerance 1e-4); first-order prediction {predicted:.4e}"
        ),
    );
}

fn random_point<R: Rng>(rng: &mut R) -> SpherePoint {
    let z: f64 = rng.random_range(-1.0..1.0);
    let t: f64 = rng.random_range(0.0..2.0 * PI);
    SpherePoint::from_spherical(t, z.acos()).unwrap()
}

fn c12_geometry(r: &mut Report) {
    let mut rng = seeded_rng(12);
    let mut worst_round_trip: f64 = 0.0;
    let mut worst_isometry: f64 = 0.0;
    for _ in 0..10_000 {
        let p = random_point(&mut rng);
        let q = random_point(&mut rng);
        let back = exp_map(&log_map(&p, &q).unwrap());
        worst_round_trip = worst_round_trip.max((back.as_vector() - q.as_vector()).amax());

        let b = canonical_basis(&p);
        let v = TangentVector::new(b, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let w = TangentVector::new(b, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let (tv, tw) = (
            parallel_transport(&p, &q, &v).unwrap(),
            parallel_transport(&p, &q, &w).unwrap(),
        );
        worst_isometry = worst_isometry
            .max((tv.dot(&tw) - v.dot(&w)).abs())
            .max((tv.norm() - v.norm()).abs());
    }

    let ell = SpherePoint::from_spherical(0.4, 1.0).unwrap();
    let nu = SpherePoint::from_spherical(2.0, 1.8).unwrap();
    let base = log_map(&ell, &nu).unwrap();
    let dir = TangentVector::new(canonical_basis(&ell), 0.6, -0.8);
    let pairs: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&t| {
            let q = exp_map(&dir.scaled(t));
            let moved = parallel_transport(&q, &ell, &log_map(&q, &nu).unwrap()).unwrap();
            (t, (moved.ambient() - base.ambient()).norm())
        })
        .collect();
    let slope = projnormal::estimator::log_log_slope(&pairs).unwrap();
    r.check(
        "12",
        "geometry properties",
        worst_round_trip <= 1e-10 && worst_isometry <= 1e-12 && slope >= 0.9,
        format!(
            "exp∘log max error {worst_round_trip:.1e}; transport inner-product drift {worst_isometry:.1e}; Taylor slope {slope:.4}"
        ),
    );
}

fn c13_counterexample(r: &mut Report) {
    let sigma = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.5, 1.0);
    let params = GeneralNormalParams::new(Vector3::new(0.0, 0.0, 1.0), sigma).unwrap();
    // reflection through the x–z plane; fixes μ
    let reflect = |u: &SpherePoint| SpherePoint::from_cartesian(u.x(), -u.y(), u.z()).unwrap();
    let mut best = (0.0, 0.0, 0.0);
    for i in 0..24 {
        for j in 1..12 {
            let (t, f) = (2.0 * PI * i as f64 / 24.0, PI * j as f64 / 12.0);
            let u = SpherePoint::from_spherical(t, f).unwrap();
            let gap = (density_general(&params, &u) - density_general(&params, &reflect(&u))).abs();
            if gap > best.0 {
                best = (gap, t, f);
            }
        }
    }
    r.check(
        "13",
        "anisotropic counterexample",
        best.0 > 1e-3,
        format!(
            "max |p(y) − p(Ry)| = {:.4} at (θ, φ) = ({:.4}, {:.4})",
            best.0, best.1, best.2
        ),
    );
}

fn main() {
    // leave `cargo test -- --list` and filters alone
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let start = Instant::now();
    let mut r = Report {
        failures: Vec::new(),
    };
    c1_link_bound(&mut r);
    c2_series_constants(&mut r);
    c3_recurrence(&mut r);
    c4_j_oracle(&mut r);
    c5_derivative(&mut r);
    c6_round_trip(&mut r);
    c7_c8_table1(&mut r);
    c9_mean_direction(&mut r);
    c10_uniform_covariance(&mut r);
    c11_density(&mut r);
    c12_geometry(&mut r);
    c13_counterexample(&mut r);
    println!(
        "acceptance: {} gated failure(s) in {:.1} s",
        r.failures.len(),
        start.elapsed().as_secs_f64()
    );
    if !r.failures.is_empty() {
        eprintln!("failed criteria: {}", r.failures.join(", "));
        std::process::exit(1);
    }
}
