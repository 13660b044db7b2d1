//! Shape outlines: local vertices resolved to global polar coordinates, with
//! every edge tessellated along its geodesic.
//!
//! A shape's vertices are stored in the body's local polar frame. The local
//! reference direction points from the body centre `C` toward the reference
//! point `O`, and local bearings increase toward the side of `OC` on which
//! the global bearing `θ` increases.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    normalize_bearing, normalize_radius, reduce_angle, sas, sss, vanishes, Curvature, PolarPoint,
};

/// Segments per edge when a scene does not say otherwise.
pub const DEFAULT_TESSELLATION: usize = 16;

/// Edge lengths at or below this are treated as coincident vertices.
const COINCIDENT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pub vertices: Vec<PolarPoint>,
    pub tessellation: usize,
    pub closed: bool,
}

impl Shape {
    pub fn new(vertices: Vec<PolarPoint>, tessellation: usize, closed: bool) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::validation(
                "vertices",
                "a shape needs at least one vertex",
            ));
        }
        if tessellation == 0 {
            return Err(Error::validation("tessellation", "must be at least 1"));
        }
        if let Some(v) = vertices
            .iter()
            .find(|v| v.r.is_nan() || v.r < 0.0 || !v.theta.is_finite())
        {
            return Err(Error::validation(
                "vertices",
                format!("invalid local vertex ({}, {})", v.r, v.theta),
            ));
        }
        let vertices = vertices
            .into_iter()
            .map(|v| PolarPoint::new(v.r, v.theta))
            .collect();
        Ok(Shape {
            vertices,
            tessellation,
            closed,
        })
    }

    /// Regular polygon with `sides` vertices at distance `radius` from the
    /// centre.
    pub fn regular(sides: usize, radius: f64, tessellation: usize) -> Result<Self> {
        let step = TAU / sides.max(1) as f64;
        let vertices = (0..sides)
            .map(|i| PolarPoint::new(radius, (i as f64 + 0.5) * step))
            .collect();
        Shape::new(vertices, tessellation, true)
    }

    /// Number of points [`outline`] produces when no edge is degenerate.
    pub fn outline_len(&self) -> usize {
        let v = self.vertices.len();
        let n = self.tessellation;
        match (v, self.closed) {
            (1, _) => 1,
            (_, true) => v * n,
            (_, false) => v + (v - 1) * (n - 1),
        }
    }
}

/// Position and facing of a body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: PolarPoint,
    /// Rotation of the body's local frame, in radians.
    pub rotation: f64,
}

impl Pose {
    pub fn new(position: PolarPoint, rotation: f64) -> Self {
        Pose {
            position: PolarPoint::new(position.r, position.theta),
            rotation: normalize_bearing(rotation),
        }
    }
}

/// Which way the bearing sweeps when walking an edge from its first vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sweep {
    Increasing,
    Decreasing,
}

impl Sweep {
    fn sign(self) -> f64 {
        match self {
            Sweep::Increasing => 1.0,
            Sweep::Decreasing => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeGeometry {
    /// Geodesic length of the edge.
    pub d: f64,
    /// Angle at the reference point between the two vertex position vectors.
    pub delta_theta: f64,
    pub direction: Sweep,
}

/// Where a body centre sits relative to the singular points of the polar
/// frame.
pub(crate) enum Frame {
    Regular,
    Origin,
    Antipode(f64),
}

pub(crate) fn frame_at(r: f64, scale_len: f64, k: Curvature) -> Frame {
    if !vanishes(r, scale_len.max(r), k) {
        return Frame::Regular;
    }
    match k.antipodal_distance() {
        Some(half) if r > 0.5 * half => Frame::Antipode(half),
        _ => Frame::Origin,
    }
}

/// Global coordinates of the local vertex `v` of a body at `pose`.
///
/// At the reference point (or the spherical antipode) the local reference
/// direction is undefined; the stored bearing of the pose stands in for it.
pub fn vertex_global(pose: &Pose, v: PolarPoint, k: Curvature) -> PolarPoint {
    let c = pose.position;
    let beta = normalize_bearing(pose.rotation + v.theta);
    if v.r == 0.0 {
        return c;
    }
    match frame_at(c.r, v.r, k) {
        Frame::Origin => {
            return normalize_radius(PolarPoint::new(v.r, c.theta + PI - beta), k);
        }
        Frame::Antipode(half) => {
            return normalize_radius(PolarPoint::new(half - v.r, c.theta + beta), k);
        }
        Frame::Regular => {}
    }
    let (included, sign) = if beta > PI {
        (TAU - beta, -1.0)
    } else {
        (beta, 1.0)
    };
    let r_v = sas(c.r, v.r, included, k);
    match sss(c.r, r_v, v.r, k) {
        Some(delta) => normalize_radius(PolarPoint::new(r_v, c.theta + sign * delta), k),
        // the vertex sits on O or its antipode, where bearing is immaterial
        None => PolarPoint::new(r_v, c.theta),
    }
}

/// Length of the edge `v1 → v2` and the angle it subtends at the reference
/// point, given the body bearing `theta_c`.
pub fn edge_geometry(theta_c: f64, v1: PolarPoint, v2: PolarPoint, k: Curvature) -> EdgeGeometry {
    let off1 = reduce_angle(theta_c - v1.theta);
    let off2 = reduce_angle(theta_c - v2.theta);
    // Vertices on opposite sides of OC subtend |off1| + |off2|, which equals
    // |off1 - off2|; on the same side they subtend the difference.
    let spread = (off1 - off2).abs();
    let delta_theta = if spread > PI { TAU - spread } else { spread };
    let direction = if reduce_angle(off1 - off2) >= 0.0 {
        Sweep::Increasing
    } else {
        Sweep::Decreasing
    };
    EdgeGeometry {
        d: sas(v1.r, v2.r, delta_theta, k),
        delta_theta,
        direction,
    }
}

/// The `n − 1` interior points dividing the geodesic `v1 → v2` into `n`
/// equal parts. Endpoints are not included.
pub fn tessellate_edge(
    v1: PolarPoint,
    v2: PolarPoint,
    eg: &EdgeGeometry,
    n: usize,
    k: Curvature,
) -> Vec<PolarPoint> {
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    tessellate_into(v1, v2, eg, n, k, &mut out);
    out
}

fn tessellate_into(
    v1: PolarPoint,
    v2: PolarPoint,
    eg: &EdgeGeometry,
    n: usize,
    k: Curvature,
    out: &mut Vec<PolarPoint>,
) {
    let d = eg.d;
    if n <= 1 || d <= COINCIDENT * v1.r.max(v2.r).max(1.0) {
        return;
    }
    let fractions = (1..n).map(|i| i as f64 / n as f64);

    if k.k_metric() == 0.0 {
        let (x1, y1) = v1.to_cartesian();
        let (x2, y2) = v2.to_cartesian();
        out.extend(
            fractions.map(|t| PolarPoint::from_cartesian(x1 + t * (x2 - x1), y1 + t * (y2 - y1))),
        );
        return;
    }

    // angle at v1 between the directions to O and to v2
    let Some(corner) = sss(v1.r, d, v2.r, k) else {
        // v1 on O or its antipode: the edge runs along v2's meridian
        let base = match frame_at(v1.r, d, k) {
            Frame::Antipode(half) => Some(half),
            _ => None,
        };
        out.extend(fractions.map(|t| match base {
            Some(half) => PolarPoint::new(half - t * d, v2.theta),
            None => PolarPoint::new(t * d, v2.theta),
        }));
        return;
    };
    let sign = eg.direction.sign();
    out.extend(fractions.map(|t| {
        let d_i = t * d;
        let r_i = sas(v1.r, d_i, corner, k);
        match sss(v1.r, r_i, d_i, k) {
            Some(delta) => PolarPoint::new(r_i, v1.theta + sign * delta),
            None => PolarPoint::new(r_i, v1.theta),
        }
    }));
}

/// Global outline of `shape` placed at `pose`: every vertex followed by the
/// interior points of the edge leaving it.
pub fn outline(shape: &Shape, pose: &Pose, k: Curvature) -> Vec<PolarPoint> {
    let mut out = Vec::with_capacity(shape.outline_len());
    outline_into(shape, pose, k, &mut out);
    out
}

pub(crate) fn outline_into(shape: &Shape, pose: &Pose, k: Curvature, out: &mut Vec<PolarPoint>) {
    let globals: Vec<PolarPoint> = shape
        .vertices
        .iter()
        .map(|v| vertex_global(pose, *v, k))
        .collect();
    let count = globals.len();
    if count == 1 {
        out.push(globals[0]);
        return;
    }
    let edges = if shape.closed { count } else { count - 1 };
    let theta_c = pose.position.theta;
    for e in 0..edges {
        let (a, b) = (globals[e], globals[(e + 1) % count]);
        out.push(a);
        let eg = edge_geometry(theta_c, a, b, k);
        tessellate_into(a, b, &eg, shape.tessellation, k, out);
    }
    if !shape.closed {
        out.push(globals[count - 1]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_distance;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, SQRT_2};

    fn sphere() -> Curvature {
        Curvature::from_metric(1.0).unwrap()
    }

    fn all_k() -> [Curvature; 3] {
        [
            Curvature::FLAT,
            sphere(),
            Curvature::from_metric(-1.0).unwrap(),
        ]
    }

    fn close(a: PolarPoint, b: PolarPoint, tol: f64) -> bool {
        (a.r - b.r).abs() < tol && reduce_angle(a.theta - b.theta).abs() < tol
    }

    #[test]
    fn collinear_vertices() {
        let pose = Pose::new(PolarPoint::new(2.0, 0.0), 0.0);
        for k in [
            Curvature::FLAT,
            Curvature::new(1.0, 10.0).unwrap(),
            Curvature::new(-1.0, 10.0).unwrap(),
        ] {
            let toward = vertex_global(&pose, PolarPoint::new(0.5, 0.0), k);
            assert!(
                close(toward, PolarPoint::new(1.5, 0.0), 1e-12),
                "{toward:?}"
            );
            let away = vertex_global(&pose, PolarPoint::new(0.5, PI), k);
            assert!(close(away, PolarPoint::new(2.5, 0.0), 1e-12), "{away:?}");
        }
    }

    #[test]
    fn perpendicular_vertex_on_sphere() {
        let pose = Pose::new(PolarPoint::new(1.0, 0.0), 0.0);
        let v = vertex_global(&pose, PolarPoint::new(0.5, FRAC_PI_2), sphere());
        // frozen from the unit-sphere embedding
        assert!((v.r - 1.0767867445664643).abs() < 1e-12);
        assert!((v.theta - 0.5758289495618063).abs() < 1e-12);
    }

    #[test]
    fn zero_radius_vertex_is_centre() {
        let pose = Pose::new(PolarPoint::new(1.0, 0.0), 0.0);
        for k in all_k() {
            assert_eq!(
                vertex_global(&pose, PolarPoint::new(0.0, 2.2), k),
                PolarPoint::new(1.0, 0.0)
            );
        }
    }

    #[test]
    fn origin_pose_is_continuous() {
        for k in all_k() {
            for beta in [0.1, 1.0, 2.5, 4.0, 5.9] {
                let at = Pose::new(PolarPoint::new(0.0, 0.7), beta);
                let near = Pose::new(PolarPoint::new(1e-7, 0.7), beta);
                let v = PolarPoint::new(0.4, 0.0);
                let a = vertex_global(&at, v, k);
                let b = vertex_global(&near, v, k);
                assert!(oracle_distance(a, b, k) < 1e-6, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn antipodal_pose_is_continuous() {
        let k = sphere();
        for beta in [0.1, 1.0, 2.5, 4.0, 5.9] {
            let at = Pose::new(PolarPoint::new(PI, 0.7), beta);
            let near = Pose::new(PolarPoint::new(PI - 1e-7, 0.7), beta);
            let v = PolarPoint::new(0.4, 0.0);
            let a = vertex_global(&at, v, k);
            let b = vertex_global(&near, v, k);
            assert!(oracle_distance(a, b, k) < 1e-6, "{a:?} {b:?}");
        }
    }

    #[test]
    fn edge_examples() {
        let eg = edge_geometry(
            0.3,
            PolarPoint::new(1.0, 0.1),
            PolarPoint::new(1.0, 0.5),
            Curvature::FLAT,
        );
        assert!((eg.delta_theta - 0.4).abs() < 1e-12);
        assert_eq!(eg.direction, Sweep::Increasing);

        let p = PolarPoint::new(1.3, 2.0);
        let eg = edge_geometry(1.0, p, p, sphere());
        assert_eq!(eg.d, 0.0);
        assert_eq!(eg.delta_theta, 0.0);

        let eg = edge_geometry(
            PI / 4.0,
            PolarPoint::new(FRAC_PI_2, 0.0),
            PolarPoint::new(FRAC_PI_2, FRAC_PI_2),
            sphere(),
        );
        assert!((eg.d - FRAC_PI_2).abs() < 1e-12);
        assert!((eg.delta_theta - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn same_side_vertices_subtend_difference() {
        let (v1, v2) = (PolarPoint::new(1.0, 0.1), PolarPoint::new(2.0, 0.2));
        let eg = edge_geometry(0.3, v1, v2, Curvature::FLAT);
        assert!((eg.delta_theta - 0.1).abs() < 1e-12);
        assert!((eg.d - oracle_distance(v1, v2, Curvature::FLAT)).abs() < 1e-12);
    }

    #[test]
    fn edge_across_zero_bearing() {
        let (v1, v2) = (PolarPoint::new(1.0, TAU - 0.3), PolarPoint::new(1.0, 0.3));
        let eg = edge_geometry(0.0, v1, v2, sphere());
        assert!((eg.delta_theta - 0.6).abs() < 1e-12);
        assert_eq!(eg.direction, Sweep::Increasing);
    }

    #[test]
    fn tessellation_examples() {
        let (v1, v2) = (PolarPoint::new(1.0, 0.0), PolarPoint::new(1.0, FRAC_PI_2));
        let eg = edge_geometry(0.0, v1, v2, Curvature::FLAT);
        assert!(tessellate_edge(v1, v2, &eg, 1, Curvature::FLAT).is_empty());
        let mid = tessellate_edge(v1, v2, &eg, 2, Curvature::FLAT);
        assert_eq!(mid.len(), 1);
        assert!(close(
            mid[0],
            PolarPoint::new(SQRT_2 / 2.0, PI / 4.0),
            1e-12
        ));

        let (v1, v2) = (PolarPoint::new(1.0, TAU - 0.3), PolarPoint::new(1.0, 0.3));
        let eg = edge_geometry(0.0, v1, v2, sphere());
        let mid = tessellate_edge(v1, v2, &eg, 2, sphere());
        // frozen from the unit-sphere embedding: normalized chord midpoint
        assert!(
            close(mid[0], PolarPoint::new(0.979033707839985, 0.0), 1e-12),
            "{mid:?}"
        );
    }

    #[test]
    fn coincident_edge_is_empty() {
        let p = PolarPoint::new(0.7, 1.0);
        let eg = edge_geometry(0.0, p, p, sphere());
        assert!(tessellate_edge(p, p, &eg, 8, sphere()).is_empty());
    }

    #[test]
    fn edge_from_origin_runs_along_meridian() {
        for k in all_k() {
            let (v1, v2) = (PolarPoint::new(0.0, 0.0), PolarPoint::new(1.0, 1.2));
            let eg = edge_geometry(0.0, v1, v2, k);
            for (i, p) in tessellate_edge(v1, v2, &eg, 4, k).into_iter().enumerate() {
                assert!(
                    close(p, PolarPoint::new(0.25 * (i + 1) as f64, 1.2), 1e-12),
                    "{p:?}"
                );
            }
        }
    }

    #[test]
    fn outline_counts() {
        let square = Shape::new(
            (0..4)
                .map(|i| PolarPoint::new(90.0, (2 * i + 1) as f64 * FRAC_PI_8))
                .collect(),
            16,
            true,
        )
        .unwrap();
        let pose = Pose::new(PolarPoint::new(100.0, 0.5), 0.0);
        let k = Curvature::new(1.0, 300.0).unwrap();
        assert_eq!(outline(&square, &pose, k).len(), 64);
        assert_eq!(square.outline_len(), 64);

        let single = Shape::new(vec![PolarPoint::new(5.0, 1.0)], 16, true).unwrap();
        assert_eq!(outline(&single, &pose, k).len(), 1);

        let open = Shape::new(
            vec![PolarPoint::new(5.0, 1.0), PolarPoint::new(5.0, 2.0)],
            4,
            false,
        )
        .unwrap();
        assert_eq!(outline(&open, &pose, k).len(), 5);
        assert_eq!(open.outline_len(), 5);
    }

    #[test]
    fn shape_validation() {
        assert!(Shape::new(vec![], 4, true).is_err());
        assert!(Shape::new(vec![PolarPoint { r: 1.0, theta: 0.0 }], 0, true).is_err());
        assert!(Shape::new(
            vec![PolarPoint {
                r: f64::NAN,
                theta: 0.0
            }],
            2,
            true
        )
        .is_err());
    }
}
