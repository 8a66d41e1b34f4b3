//! Iterated function systems, word combinatorics, and certified depth-k
//! attractor approximations.
//!
//! A depth-k [`CylinderCover`] brackets the attractor E from both sides:
//! the inner points are genuine members of E (images of an anchor point in
//! E under length-k compositions) and the outer balls cover E (images of an
//! invariant root ball), with a certified Hausdorff error `eps`.

use thiserror::Error;

use crate::geom::{Ball, Point};
use crate::linalg::{self, Mat};
use crate::TOL_GEO;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum IfsError {
    #[error("map {index} is not contracting (operator norm bound {norm} ≥ 1)")]
    NotContracting { index: usize, norm: f64 },
    #[error("maps disagree on dimension: map {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("empty map list")]
    Empty,
    #[error("word budget exceeded: {count} depth-{depth} cylinders over limit {budget}")]
    BudgetExceeded { depth: u32, count: u128, budget: u64 },
    #[error("I − T is numerically singular for map {index} (internal error)")]
    SingularSystem { index: usize },
    #[error("letter {letter} outside alphabet of {len} maps")]
    BadLetter { letter: usize, len: usize },
}

/// Affine contraction `x ↦ Tx + a` with a certified upper bound on `‖T‖`
/// and, for similitudes, the exact similarity ratio.
#[derive(Clone, Debug)]
pub struct AffineMap {
    linear: Mat,
    translation: Point,
    contraction_ub: f64,
    ratio: Option<f64>,
}

impl AffineMap {
    /// General affine map; the contraction bound comes from the largest
    /// singular value of `T` (Jacobi on `TᵀT`, rounded up).
    pub fn affine(linear: Mat, translation: Point) -> Self {
        assert_eq!(linear.dim, translation.dim());
        let contraction_ub = linear.operator_norm_ub();
        AffineMap { linear, translation, contraction_ub, ratio: None }
    }

    /// Similitude `x ↦ ρ R x + a` with `R` orthogonal; `‖T‖ = ρ` exactly.
    pub fn similitude(ratio: f64, rotation: Mat, translation: Point) -> Self {
        assert!(ratio > 0.0, "similarity ratio must be positive");
        assert_eq!(rotation.dim, translation.dim());
        let linear = scale_mat(&rotation, ratio);
        let map = AffineMap { linear, translation, contraction_ub: ratio, ratio: Some(ratio) };
        debug_assert!(map.ratio_consistent(), "rotation part is not orthogonal");
        map
    }

    /// `‖T v‖ = ρ·‖v‖` on sampled unit vectors, within tolerance.
    fn ratio_consistent(&self) -> bool {
        let Some(rho) = self.ratio else { return true };
        let mut s = crate::sample::Sampler::new(0x51);
        (0..16).all(|_| {
            let v = s.on_sphere(self.dim());
            (self.linear.apply(v).norm() - rho).abs() <= TOL_GEO
        })
    }

    /// Homothety `x ↦ ρ x + a`.
    pub fn homothety(ratio: f64, translation: Point) -> Self {
        Self::similitude(ratio, Mat::identity(translation.dim()), translation)
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn linear(&self) -> &Mat {
        &self.linear
    }

    pub fn translation(&self) -> Point {
        self.translation
    }

    pub fn contraction_ub(&self) -> f64 {
        self.contraction_ub
    }

    pub fn ratio(&self) -> Option<f64> {
        self.ratio
    }

    pub fn apply(&self, p: Point) -> Point {
        self.linear.apply(p).add(&self.translation)
    }

    /// Unique fixed point, the solution of `(I − T) b = a`.
    pub fn fixed_point(&self) -> Result<Point, IfsError> {
        let i = Mat::identity(self.dim());
        linalg::solve(&i.sub(&self.linear), self.translation)
            .ok_or(IfsError::SingularSystem { index: usize::MAX })
    }
}

fn scale_mat(m: &Mat, s: f64) -> Mat {
    let mut out = *m;
    for i in 0..m.dim {
        for j in 0..m.dim {
            out.m[i][j] *= s;
        }
    }
    out
}

/// A finite family of affine contractions sharing one dimension.
#[derive(Clone, Debug)]
pub struct Ifs {
    maps: Vec<AffineMap>,
    dim: usize,
}

impl Ifs {
    pub fn new(maps: Vec<AffineMap>) -> Result<Self, IfsError> {
        let Some(first) = maps.first() else {
            return Err(IfsError::Empty);
        };
        let dim = first.dim();
        for (i, m) in maps.iter().enumerate() {
            if m.dim() != dim {
                return Err(IfsError::DimensionMismatch { index: i, expected: dim, got: m.dim() });
            }
            if m.contraction_ub() >= 1.0 {
                return Err(IfsError::NotContracting { index: i, norm: m.contraction_ub() });
            }
        }
        Ok(Ifs { maps, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &AffineMap {
        &self.maps[i]
    }

    pub fn max_contraction_ub(&self) -> f64 {
        self.maps.iter().map(|m| m.contraction_ub()).fold(0.0, f64::max)
    }

    /// Minimum similarity ratio; `None` unless every map is a similitude.
    pub fn rho_min(&self) -> Option<f64> {
        self.maps
            .iter()
            .map(|m| m.ratio())
            .collect::<Option<Vec<f64>>>()
            .map(|rs| rs.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn is_similitude_system(&self) -> bool {
        self.maps.iter().all(|m| m.ratio().is_some())
    }

    /// Per-map fixed points `bᵢ = (I − Tᵢ)⁻¹ aᵢ` (`aᵢ/(1−ρᵢ)` for
    /// homotheties), each verified by one application of the map.
    pub fn fixed_points(&self) -> Result<Vec<Point>, IfsError> {
        self.maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let b = m
                    .fixed_point()
                    .map_err(|_| IfsError::SingularSystem { index: i })?;
                debug_assert!(m.apply(b).dist(&b) <= TOL_GEO, "fixed point drifted");
                Ok(b)
            })
            .collect()
    }

    /// An invariant ball: `φᵢ(B) ⊆ B` for every map. Centered at the mean
    /// of the fixed points with radius `maxᵢ ‖φᵢ(x₀) − x₀‖ / (1 − ubᵢ)`.
    pub fn root_ball(&self) -> Result<Ball, IfsError> {
        let fps = self.fixed_points()?;
        let mut center = Point::origin(self.dim);
        for p in &fps {
            center = center.add(&p.scale(1.0 / fps.len() as f64));
        }
        let mut radius = 0.0f64;
        for m in &self.maps {
            let drift = m.apply(center).dist(&center);
            radius = radius.max(drift / (1.0 - m.contraction_ub()));
        }
        let ball = Ball::new(center, radius);
        debug_assert!(self.invariant_on_samples(&ball), "root ball not invariant");
        Ok(ball)
    }

    /// Spot-check of `φᵢ(B) ⊆ B` on boundary samples (a regression guard;
    /// the containment holds by construction).
    fn invariant_on_samples(&self, ball: &Ball) -> bool {
        let mut s = crate::sample::Sampler::new(0xB0B);
        for _ in 0..32 {
            let dir = s.on_sphere(self.dim);
            let p = ball.center.add(&dir.scale(ball.radius));
            for m in &self.maps {
                if m.apply(p).dist(&ball.center) > ball.radius + 1e-7 {
                    return false;
                }
            }
        }
        true
    }

    /// `φ_I = φ_{i₁} ∘ ⋯ ∘ φ_{iₙ}` applied to `x` (the first letter is the
    /// outermost map).
    pub fn apply_word(&self, word: &Word, x: Point) -> Result<Point, IfsError> {
        let mut p = x;
        for &letter in word.letters().iter().rev() {
            if letter as usize >= self.maps.len() {
                return Err(IfsError::BadLetter { letter: letter as usize, len: self.maps.len() });
            }
            p = self.maps[letter as usize].apply(p);
        }
        Ok(p)
    }

    /// Product of the similarity ratios along `word`.
    pub fn word_ratio(&self, word: &Word) -> Option<f64> {
        word.letters()
            .iter()
            .map(|&l| self.maps[l as usize].ratio())
            .product::<Option<f64>>()
    }
}

/// A finite word over the alphabet `{0, …, ℓ−1}` (0-based letters; the
/// empty word is the identity map).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        Word(letters.to_vec())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word extended by one letter on the right: `I · i`.
    pub fn child(&self, letter: u8) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }
}

/// Options for cover expansion.
#[derive(Clone, Debug)]
pub struct ExpandCfg {
    /// Cap on the number of depth-k cylinders (ℓᵏ).
    pub budget: u64,
    /// Merge inner points closer than `TOL_GEO`; the merge count is recorded
    /// so downstream error accounting stays valid.
    pub dedup: bool,
}

impl Default for ExpandCfg {
    fn default() -> Self {
        ExpandCfg { budget: 10_000_000, dedup: false }
    }
}

/// Depth-k bracket of the attractor: one inner point and one outer ball per
/// cylinder, with `d_H(inner, E) ≤ eps` and `E ⊆ ⋃ outer`.
#[derive(Clone, Debug)]
pub struct CylinderCover {
    pub depth: u32,
    pub inner_points: Vec<Point>,
    pub outer_balls: Vec<Ball>,
    pub eps: f64,
    pub root: Ball,
    pub dedup_count: usize,
}

impl CylinderCover {
    /// A cover assembled from an external sample rather than cylinder
    /// expansion; used to feed generic compact sets into the thickness and
    /// sum probes. The caller asserts `d_H(points, E) ≤ eps` and coverage
    /// by the balls.
    pub fn synthetic(inner_points: Vec<Point>, outer_balls: Vec<Ball>, eps: f64) -> Self {
        assert!(!inner_points.is_empty());
        let (lo, hi) = crate::geom::bounding_box(&inner_points);
        let center = lo.add(&hi).scale(0.5);
        let radius = hi.sub(&lo).norm() / 2.0 + eps;
        CylinderCover {
            depth: 0,
            inner_points,
            outer_balls,
            eps,
            root: Ball::new(center, radius),
            dedup_count: 0,
        }
    }

    /// Upper bound on `diam(E)` from the outer cover: the diameter of the
    /// ball-center hull plus twice the largest radius. Inner points alone
    /// cannot certify an upper bound.
    pub fn diameter_upper_bound(&self) -> f64 {
        let centers: Vec<Point> = self.outer_balls.iter().map(|b| b.center).collect();
        let max_r = self.outer_balls.iter().map(|b| b.radius).fold(0.0, f64::max);
        let dim = centers[0].dim();
        let d = crate::geom::diameter(&centers, dim).unwrap_or(0.0);
        d + 2.0 * max_r
    }
}

/// Enumerates all depth-k cylinders level by level, so the depth-(k+1)
/// inner set is exactly `⋃ᵢ φᵢ(depth-k inner set)` bit for bit, ordered by
/// lexicographic word. The anchor is the fixed point of the first map.
pub fn expand_cover(ifs: &Ifs, depth: u32, cfg: &ExpandCfg) -> Result<CylinderCover, IfsError> {
    let ell = ifs.len() as u128;
    let count = ell
        .checked_pow(depth)
        .ok_or(IfsError::BudgetExceeded { depth, count: u128::MAX, budget: cfg.budget })?;
    if count > cfg.budget as u128 {
        return Err(IfsError::BudgetExceeded { depth, count, budget: cfg.budget });
    }

    let root = ifs.root_ball()?;
    let anchor = ifs.map(0).fixed_point().map_err(|_| IfsError::SingularSystem { index: 0 })?;

    let mut points = vec![anchor];
    let mut balls = vec![root];
    for _ in 0..depth {
        let mut next_points = Vec::with_capacity(points.len() * ifs.len());
        let mut next_balls = Vec::with_capacity(balls.len() * ifs.len());
        for m in ifs.maps() {
            let rad_factor = m.ratio().unwrap_or(m.contraction_ub());
            for p in &points {
                next_points.push(m.apply(*p));
            }
            for b in &balls {
                next_balls.push(Ball::new(m.apply(b.center), b.radius * rad_factor));
            }
        }
        points = next_points;
        balls = next_balls;
    }

    let mut dedup_count = 0;
    if cfg.dedup {
        let mut kept: Vec<Point> = Vec::with_capacity(points.len());
        for p in &points {
            if kept.iter().all(|q| q.dist(p) > TOL_GEO) {
                kept.push(*p);
            } else {
                dedup_count += 1;
            }
        }
        points = kept;
    }

    let eps = ifs.max_contraction_ub().powi(depth as i32) * 2.0 * root.radius;
    Ok(CylinderCover { depth, inner_points: points, outer_balls: balls, eps, root, dedup_count })
}
