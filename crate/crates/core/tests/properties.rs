//! Property tests over randomized inputs (proptest shrinks failures to
//! minimal counterexamples).

use proptest::prelude::*;

use fracsum::geom::{convex_hull, Point};
use fracsum::grid::{minkowski_sum, Raster, RasterMode, SumOpts};
use fracsum::ifs::{AffineMap, Ifs, Word};
use fracsum::thickness::sum_threshold;
use fracsum::TOL_GEO;

fn coord() -> impl Strategy<Value = f64> {
    (-1000i64..1000).prop_map(|v| v as f64 / 500.0)
}

fn points_2d(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((coord(), coord()).prop_map(|(x, y)| Point::p2(x, y)), 1..max)
}

proptest! {
    /// Rebuilding a hull from its own vertices reproduces the vertex set.
    #[test]
    fn hull_idempotent(pts in points_2d(24)) {
        let h = convex_hull(&pts, 2).unwrap();
        let h2 = convex_hull(h.vertices(), 2).unwrap();
        let mut a: Vec<Point> = h.vertices().to_vec();
        let mut b: Vec<Point> = h2.vertices().to_vec();
        a.sort_by(|p, q| p.lex_cmp(q));
        b.sort_by(|p, q| p.lex_cmp(q));
        prop_assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!(p.dist(q) < 1e-12);
        }
    }

    /// Every input point is a member of its hull.
    #[test]
    fn hull_contains_inputs(pts in points_2d(24)) {
        let h = convex_hull(&pts, 2).unwrap();
        for p in &pts {
            prop_assert!(h.contains(p, TOL_GEO));
        }
    }

    /// The inscribed ball never outgrows half the bounding-box width.
    #[test]
    fn chebyshev_radius_bounded(pts in points_2d(24)) {
        let h = convex_hull(&pts, 2).unwrap();
        let ins = h.chebyshev_center().unwrap();
        let (lo, hi) = fracsum::geom::bounding_box(&pts);
        let half_width = (0..2)
            .map(|i| (hi.coord(i) - lo.coord(i)) / 2.0)
            .fold(f64::INFINITY, f64::min);
        prop_assert!(ins.radius <= half_width + TOL_GEO);
        prop_assert!(h.contains(&ins.center, TOL_GEO));
    }

    /// Bit-level dilation agrees with the double-loop oracle.
    #[test]
    fn dilation_matches_oracle(
        a_bits in prop::collection::vec(any::<bool>(), 1..64),
        b_bits in prop::collection::vec(any::<bool>(), 1..64),
    ) {
        let mk = |bits: &[bool]| {
            let mut r = Raster::new_empty(
                Point::p1(0.0), 0.5, [bits.len(), 1, 1], RasterMode::Inner, 0.0, 1 << 30,
            ).unwrap();
            for (i, &b) in bits.iter().enumerate() {
                if b { r.set([i, 0, 0]); }
            }
            if r.is_empty() { r.set([0, 0, 0]); }
            r
        };
        let a = mk(&a_bits);
        let b = mk(&b_bits);
        let fast = minkowski_sum(&a, &b, &SumOpts::default()).unwrap();
        for u in 0..fast.dims()[0] {
            let expect = (0..a.dims()[0]).any(|i| {
                u >= i && u - i < b.dims()[0] && a.get([i, 0, 0]) && b.get([u - i, 0, 0])
            });
            prop_assert_eq!(fast.get([u, 0, 0]), expect, "cell {}", u);
        }
    }

    /// The thick-sum count threshold is antitone in the thickness constant.
    #[test]
    fn sum_threshold_antitone(a in 1u32..1000, b in 1u32..1000) {
        let (lo, hi) = (a.min(b) as f64 / 1000.0, a.max(b) as f64 / 1000.0);
        prop_assert!(sum_threshold(lo).unwrap() >= sum_threshold(hi).unwrap());
    }

    /// Word application is multiplicative: applying u·v equals applying v
    /// then u.
    #[test]
    fn word_composition_splits(
        letters in prop::collection::vec(0u8..2, 0..12),
        split in 0usize..12,
        x in coord(),
    ) {
        let ifs = Ifs::new(vec![
            AffineMap::homothety(1.0 / 3.0, Point::p1(0.0)),
            AffineMap::homothety(1.0 / 3.0, Point::p1(2.0 / 3.0)),
        ]).unwrap();
        let cut = split.min(letters.len());
        let w = Word::from_letters(&letters);
        let (u, v) = (Word::from_letters(&letters[..cut]), Word::from_letters(&letters[cut..]));
        let p = Point::p1(x);
        let direct = ifs.apply_word(&w, p).unwrap();
        let staged = ifs.apply_word(&u, ifs.apply_word(&v, p).unwrap()).unwrap();
        prop_assert!(direct.dist(&staged) < 1e-12);
    }
}
