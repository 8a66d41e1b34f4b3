//! Randomized checkers for the convexity lemmas behind the sum arguments.
//!
//! These are regression guards, not decision procedures: each one samples a
//! configurable number of witnesses (default 256) from a seeded stream and
//! verifies the lemma's inclusion or inequality on every sample.

use super::{convex_hull, diameter, GeomError, Point};
use crate::sample::Sampler;
use crate::TOL_GEO;

/// Checks `conv(A) + conv(εA) = conv(A) + εA` on random samples.
///
/// Requires `0 ≤ eps ≤ 1/|A|` (the lemma hypothesis); use
/// [`sum_absorption_samples`] directly to observe behaviour outside it.
pub fn check_lemma_sum_absorption(
    a: &[Point],
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<bool, GeomError> {
    if a.is_empty() {
        return Err(GeomError::EmptyInput("check_lemma_sum_absorption"));
    }
    let max = 1.0 / a.len() as f64;
    if !(0.0..=1.0).contains(&eps) || eps > max + TOL_GEO {
        return Err(GeomError::EpsOutOfRange { eps, max });
    }
    sum_absorption_samples(a, eps, samples, seed)
}

/// The sampling core of the absorption check, without the hypothesis guard.
///
/// Both inclusions are exercised: sampled `x + y` with `x ∈ conv(A)`,
/// `y ∈ conv(εA)` must land in `conv(A) + εa_j` for some `j`, and sampled
/// `u + εa_j` must land in `conv(A) + conv(εA)` (the hull of pairwise sums).
pub fn sum_absorption_samples(
    a: &[Point],
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<bool, GeomError> {
    let dim = a[0].dim();
    let hull_a = convex_hull(a, dim)?;
    let mut pairwise = Vec::with_capacity(a.len() * a.len());
    for p in a {
        for q in a {
            pairwise.push(p.add(&q.scale(eps)));
        }
    }
    let hull_sum = convex_hull(&pairwise, dim)?;

    let mut s = Sampler::new(seed);
    for _ in 0..samples {
        let x = s.convex_combination(a);
        let y = s.convex_combination(a).scale(eps);
        let z = x.add(&y);
        let absorbed = a
            .iter()
            .any(|aj| hull_a.contains(&z.sub(&aj.scale(eps)), TOL_GEO));
        if !absorbed {
            return Ok(false);
        }

        let u = s.convex_combination(a);
        let j = s.index(a.len());
        if !hull_sum.contains(&u.add(&a[j].scale(eps)), TOL_GEO) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that every sampled `z ∈ conv(A)` satisfies
/// `‖z‖ ≥ R − diam(A)²/(2R) − tol` given `‖a‖ ≥ R` for all `a ∈ A`.
pub fn check_distance_bound(
    a: &[Point],
    big_r: f64,
    samples: usize,
    seed: u64,
) -> Result<bool, GeomError> {
    if a.is_empty() {
        return Err(GeomError::EmptyInput("check_distance_bound"));
    }
    if big_r <= 0.0 {
        return Err(GeomError::PreconditionViolated("R must be positive".into()));
    }
    if let Some(p) = a.iter().find(|p| p.norm() < big_r - TOL_GEO) {
        return Err(GeomError::PreconditionViolated(format!(
            "point at distance {} is inside the R = {} sphere",
            p.norm(),
            big_r
        )));
    }
    let d = diameter(a, a[0].dim())?;
    let bound = big_r - d * d / (2.0 * big_r) - TOL_GEO;
    let mut s = Sampler::new(seed);
    for _ in 0..samples {
        let z = s.convex_combination(a);
        if z.norm() < bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `U(z, r − δ) ⊂ conv(F)` for a δ-perturbation `F` of `A`,
/// given `B(z, r) ⊆ conv(A)`.
pub fn check_perturbation_lemma(
    a: &[Point],
    f: &[Point],
    z: &Point,
    r: f64,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<bool, GeomError> {
    if a.is_empty() || f.is_empty() {
        return Err(GeomError::EmptyInput("check_perturbation_lemma"));
    }
    if !(delta > 0.0 && delta < r) {
        return Err(GeomError::PreconditionViolated(format!(
            "need 0 < delta < r, got delta = {delta}, r = {r}"
        )));
    }
    let dim = a[0].dim();
    let hull_a = convex_hull(a, dim)?;
    if !hull_a.contains_ball(z, r, TOL_GEO) {
        return Err(GeomError::PreconditionViolated(
            "B(z, r) is not contained in conv(A)".into(),
        ));
    }
    for p in a {
        let near = f.iter().map(|q| p.dist(q)).fold(f64::INFINITY, f64::min);
        if near > delta + TOL_GEO {
            return Err(GeomError::PreconditionViolated(format!(
                "a point of A is {near} away from F, beyond delta = {delta}"
            )));
        }
    }
    let hull_f = convex_hull(f, dim)?;
    let mut s = Sampler::new(seed);
    // Stay strictly inside the open ball.
    let rad = (r - delta) * (1.0 - 1e-9);
    for _ in 0..samples {
        let p = s.in_ball(*z, rad);
        if !hull_f.contains(&p, TOL_GEO) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Failure counts of the four randomized lemma suites, one batch of
/// `trials` checks each, in one dimension.
#[derive(Clone, Copy, Debug, Default)]
pub struct LemmaSuiteReport {
    pub dim: usize,
    pub trials: usize,
    pub absorption_failures: usize,
    pub distance_bound_failures: usize,
    pub perturbation_failures: usize,
    pub ball_absorption_failures: usize,
}

impl LemmaSuiteReport {
    pub fn all_passed(&self) -> bool {
        self.absorption_failures == 0
            && self.distance_bound_failures == 0
            && self.perturbation_failures == 0
            && self.ball_absorption_failures == 0
    }
}

/// Runs all four lemma checkers on freshly sampled instances whose
/// hypotheses hold by construction.
pub fn run_lemma_trials(
    dim: usize,
    trials: usize,
    samples: usize,
    seed: u64,
) -> Result<LemmaSuiteReport, GeomError> {
    let mut report = LemmaSuiteReport { dim, trials, ..Default::default() };
    let mut s = Sampler::new(seed);
    for trial in 0..trials as u64 {
        let n = 2 + s.index(5);
        let pts: Vec<Point> = (0..n).map(|_| s.in_ball(Point::origin(dim), 1.0)).collect();
        let eps = s.uniform() / n as f64;
        if !check_lemma_sum_absorption(&pts, eps, samples, seed ^ trial)? {
            report.absorption_failures += 1;
        }
    }
    for trial in 0..trials as u64 {
        let n = 1 + s.index(6);
        let pts: Vec<Point> = (0..n)
            .map(|_| s.on_sphere(dim).scale(1.0 + s.uniform()))
            .collect();
        if !check_distance_bound(&pts, 1.0, samples, seed ^ trial)? {
            report.distance_bound_failures += 1;
        }
    }
    let mut done = 0u64;
    while done < trials as u64 {
        let n = dim + 2 + s.index(4);
        let pts: Vec<Point> = (0..n).map(|_| s.in_ball(Point::origin(dim), 1.0)).collect();
        let ins = convex_hull(&pts, dim)?.chebyshev_center()?;
        if ins.radius < 0.05 {
            continue;
        }
        let r = ins.radius * (0.5 + 0.4 * s.uniform());
        let delta = r * (0.05 + 0.5 * s.uniform());
        let f: Vec<Point> = pts.iter().map(|p| s.in_ball(*p, delta * 0.49)).collect();
        if !check_perturbation_lemma(&pts, &f, &ins.center, r, delta, samples, seed ^ done)? {
            report.perturbation_failures += 1;
        }
        done += 1;
    }
    let mut done = 0u64;
    while done < trials as u64 {
        let n = dim + 2 + s.index(4);
        let pts: Vec<Point> = (0..n).map(|_| s.in_ball(Point::origin(dim), 1.0)).collect();
        let ins = convex_hull(&pts, dim)?.chebyshev_center()?;
        if ins.radius < 0.05 {
            continue;
        }
        let r = ins.radius * 0.9;
        let d = diameter(&pts, dim)?;
        let big_r = d * d / r * (1.05 + s.uniform());
        if !check_ball_sum_absorption(&pts, &ins.center, r, big_r, samples, seed ^ done)? {
            report.ball_absorption_failures += 1;
        }
        done += 1;
    }
    Ok(report)
}

/// Sampled form of the ball-absorption corollary: when `conv(A) ⊇ B(y, r)`
/// and `R > diam(A)²/r`, every sampled point of `B(0, R) + B(y, r/2)` is
/// within `R` of some point of `A` (nearest-point oracle).
pub fn check_ball_sum_absorption(
    a: &[Point],
    y: &Point,
    r: f64,
    big_r: f64,
    samples: usize,
    seed: u64,
) -> Result<bool, GeomError> {
    if a.is_empty() {
        return Err(GeomError::EmptyInput("check_ball_sum_absorption"));
    }
    if r <= 0.0 {
        return Err(GeomError::PreconditionViolated("r must be positive".into()));
    }
    let dim = a[0].dim();
    let hull_a = convex_hull(a, dim)?;
    if !hull_a.contains_ball(y, r, TOL_GEO) {
        return Err(GeomError::PreconditionViolated(
            "conv(A) does not contain B(y, r)".into(),
        ));
    }
    let d = diameter(a, dim)?;
    if big_r <= d * d / r {
        return Err(GeomError::PreconditionViolated(format!(
            "need R > diam²/r = {}, got R = {big_r}",
            d * d / r
        )));
    }
    let mut s = Sampler::new(seed);
    for _ in 0..samples {
        let x = s.in_ball(Point::origin(dim), big_r);
        let v = s.in_ball(*y, r / 2.0);
        let w = x.add(&v);
        let near = a.iter().map(|p| w.dist(p)).fold(f64::INFINITY, f64::min);
        if near > big_r + TOL_GEO {
            return Ok(false);
        }
    }
    Ok(true)
}
