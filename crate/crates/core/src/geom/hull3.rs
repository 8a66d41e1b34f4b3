//! Incremental 3-D convex hull with visible-facet repair, followed by a
//! coplanar-face merge so the reported vertex set is minimal and the
//! H-representation has one halfspace per supporting plane.

use std::collections::BTreeSet;

use super::{cross3, Halfspace};
use crate::TOL_GEO;

#[derive(Clone, Copy)]
struct Face {
    n: [f64; 3],
    off: f64,
    vs: [usize; 3],
    alive: bool,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn make_face(pts: &[[f64; 3]], a: usize, b: usize, c: usize, interior: [f64; 3]) -> Face {
    let mut n = cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    let len = dot(n, n).sqrt();
    n = [n[0] / len, n[1] / len, n[2] / len];
    let mut off = dot(n, pts[a]);
    let mut vs = [a, b, c];
    if dot(n, interior) > off {
        n = [-n[0], -n[1], -n[2]];
        off = -off;
        vs = [a, c, b];
    }
    Face { n, off, vs, alive: true }
}

/// `support` holds four affinely independent indices found during span
/// construction; they seed the initial tetrahedron.
pub fn incremental_hull(
    pts: &[[f64; 3]],
    support: &[usize],
) -> (Vec<usize>, Vec<Halfspace>, Vec<Vec<usize>>) {
    assert!(support.len() >= 4, "rank-3 span must supply a tetrahedron");
    let (s0, s1, s2, s3) = (support[0], support[1], support[2], support[3]);
    let interior = {
        let mut c = [0.0; 3];
        for &i in &[s0, s1, s2, s3] {
            for k in 0..3 {
                c[k] += pts[i][k] / 4.0;
            }
        }
        c
    };
    let mut faces = vec![
        make_face(pts, s0, s1, s2, interior),
        make_face(pts, s0, s1, s3, interior),
        make_face(pts, s0, s2, s3, interior),
        make_face(pts, s1, s2, s3, interior),
    ];

    for i in 0..pts.len() {
        if i == s0 || i == s1 || i == s2 || i == s3 {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && dot(f.n, pts[i]) - f.off > TOL_GEO)
            .map(|(fi, _)| fi)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &fi in &visible {
            let [a, b, c] = faces[fi].vs;
            for e in [(a, b), (b, c), (c, a)] {
                edges.insert(e);
            }
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| !edges.contains(&(b, a)))
            .collect();
        for &fi in &visible {
            faces[fi].alive = false;
        }
        for (a, b) in horizon {
            faces.push(make_face(pts, a, b, i, interior));
        }
    }

    merge_coplanar(pts, &faces)
}

/// Groups alive triangles by supporting plane and reduces each group to its
/// polygon corners, which drops edge-collinear and face-interior points.
fn merge_coplanar(
    pts: &[[f64; 3]],
    faces: &[Face],
) -> (Vec<usize>, Vec<Halfspace>, Vec<Vec<usize>>) {
    let mut groups: Vec<(Face, Vec<usize>)> = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        match groups
            .iter_mut()
            .find(|(g, _)| dot(g.n, f.n) > 1.0 - 1e-9 && (g.off - f.off).abs() <= 1e-9)
        {
            Some((_, members)) => members.extend_from_slice(&f.vs),
            None => groups.push((*f, f.vs.to_vec())),
        }
    }

    let mut vertex_ids: BTreeSet<usize> = BTreeSet::new();
    let mut polygons: Vec<(Halfspace, Vec<usize>)> = Vec::new();
    for (face, members) in &groups {
        let ids: Vec<usize> = {
            let set: BTreeSet<usize> = members.iter().copied().collect();
            set.into_iter().collect()
        };
        // In-plane frame (u, v) with v = n × u, so counterclockwise in (u, v)
        // is counterclockwise seen from outside.
        let axis = if face.n[0].abs() <= face.n[1].abs() && face.n[0].abs() <= face.n[2].abs() {
            [1.0, 0.0, 0.0]
        } else if face.n[1].abs() <= face.n[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let proj = dot(axis, face.n);
        let mut u = [
            axis[0] - proj * face.n[0],
            axis[1] - proj * face.n[1],
            axis[2] - proj * face.n[2],
        ];
        let ulen = dot(u, u).sqrt();
        u = [u[0] / ulen, u[1] / ulen, u[2] / ulen];
        let v = cross3(face.n, u);
        let planar: Vec<[f64; 3]> = ids
            .iter()
            .map(|&i| [dot(pts[i], u), dot(pts[i], v), 0.0])
            .collect();
        let corner_local = super::hull2::monotone_chain(&planar);
        let corners: Vec<usize> = corner_local.iter().map(|&li| ids[li]).collect();
        vertex_ids.extend(corners.iter().copied());
        polygons.push((Halfspace { normal: face.n, offset: face.off }, corners));
    }

    let vertex_list: Vec<usize> = vertex_ids.into_iter().collect();
    let reindex = |id: usize| vertex_list.binary_search(&id).unwrap();
    let mut facets = Vec::with_capacity(polygons.len());
    let mut facet_vertices = Vec::with_capacity(polygons.len());
    for (hs, poly) in polygons {
        facets.push(hs);
        facet_vertices.push(poly.into_iter().map(reindex).collect());
    }
    (vertex_list, facets, facet_vertices)
}

#[cfg(test)]
mod tests {
    use crate::geom::{convex_hull, Point};

    #[test]
    fn tetrahedron() {
        let pts = vec![
            Point::p3(0.0, 0.0, 0.0),
            Point::p3(1.0, 0.0, 0.0),
            Point::p3(0.0, 1.0, 0.0),
            Point::p3(0.0, 0.0, 1.0),
            Point::p3(0.1, 0.1, 0.1), // interior
        ];
        let h = convex_hull(&pts, 3).unwrap();
        assert_eq!(h.vertices().len(), 4);
        assert_eq!(h.facets().len(), 4);
        assert!(!h.is_degenerate());
    }

    #[test]
    fn cube_faces_merge() {
        let mut pts = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    pts.push(Point::p3(x, y, z));
                }
            }
        }
        // Points on faces and edges must not survive as vertices.
        pts.push(Point::p3(0.5, 0.5, 0.0));
        pts.push(Point::p3(0.5, 0.0, 0.0));
        let h = convex_hull(&pts, 3).unwrap();
        assert_eq!(h.vertices().len(), 8);
        assert_eq!(h.facets().len(), 6);
        for f in h.facet_vertices() {
            assert_eq!(f.len(), 4);
        }
    }

    #[test]
    fn sphere_samples_are_all_extreme() {
        let mut s = crate::sample::Sampler::new(77);
        let pts: Vec<Point> = (0..50).map(|_| s.on_sphere(3)).collect();
        let h = convex_hull(&pts, 3).unwrap();
        // Every point of a sphere sample is extreme.
        assert_eq!(h.vertices().len(), pts.len());
        // Closed 2-manifold: the facet polygons sum to twice the edges and
        // Euler's formula holds.
        let edge_count: usize = h.facet_vertices().iter().map(|p| p.len()).sum();
        assert_eq!(edge_count % 2, 0);
        let (v, e, f) = (h.vertices().len(), edge_count / 2, h.facets().len());
        assert_eq!(v + f, e + 2, "V − E + F must be 2");
        for p in &pts {
            assert!(h.contains(p, crate::TOL_GEO));
        }
    }

    #[test]
    fn coplanar_input_is_degenerate() {
        let pts = vec![
            Point::p3(0.0, 0.0, 0.5),
            Point::p3(1.0, 0.0, 0.5),
            Point::p3(0.0, 1.0, 0.5),
            Point::p3(1.0, 1.0, 0.5),
        ];
        let h = convex_hull(&pts, 3).unwrap();
        assert!(h.is_degenerate());
        assert_eq!(h.vertices().len(), 4);
    }
}
