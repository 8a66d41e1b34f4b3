//! Andrew's monotone chain in the first two intrinsic coordinates.

use crate::TOL_GEO;

/// Returns indices of the hull vertices in counterclockwise order, with
/// collinear points dropped (strict turns only).
pub fn monotone_chain(pts: &[[f64; 3]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| {
        pts[i][0]
            .total_cmp(&pts[j][0])
            .then(pts[i][1].total_cmp(&pts[j][1]))
    });

    let cross = |o: usize, a: usize, b: usize| -> f64 {
        (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1])
            - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
    };

    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= TOL_GEO
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= TOL_GEO
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lift(pts: &[(f64, f64)]) -> Vec<[f64; 3]> {
        pts.iter().map(|&(x, y)| [x, y, 0.0]).collect()
    }

    #[test]
    fn square_with_interior_point() {
        let pts = lift(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)]);
        let h = monotone_chain(&pts);
        assert_eq!(h.len(), 4);
        assert!(!h.contains(&4));
    }

    #[test]
    fn collinear_edge_point_dropped() {
        let pts = lift(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        let h = monotone_chain(&pts);
        assert_eq!(h.len(), 3);
        assert!(!h.contains(&2));
    }

    #[test]
    fn ccw_orientation() {
        let pts = lift(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let h = monotone_chain(&pts);
        let mut area2 = 0.0;
        for i in 0..h.len() {
            let a = pts[h[i]];
            let b = pts[h[(i + 1) % h.len()]];
            area2 += a[0] * b[1] - b[0] * a[1];
        }
        assert!(area2 > 0.0, "hull must be counterclockwise");
    }
}
