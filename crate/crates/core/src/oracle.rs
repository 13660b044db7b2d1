//! Embedding-based distance, independent of the triangle solvers.
//!
//! Spherical worlds are embedded in the 2-sphere of radius `R` with the
//! reference point at the north pole (colatitude `r/R`, longitude `θ`).
//! Hyperbolic worlds are embedded in the upper sheet of the hyperboloid
//! `−t² + x² + y² = −k²` in Minkowski space. Flat worlds use the plane.

use crate::geometry::{Curvature, PolarPoint};

type Vec3 = [f64; 3];

fn sphere_point(p: PolarPoint) -> Vec3 {
    let (st, ct) = p.theta.sin_cos();
    let (sr, cr) = p.r.sin_cos();
    [sr * ct, sr * st, cr]
}

fn hyperboloid_point(p: PolarPoint) -> Vec3 {
    let (st, ct) = p.theta.sin_cos();
    let sr = p.r.sinh();
    [sr * ct, sr * st, p.r.cosh()]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Geodesic distance between two polar points.
pub fn oracle_distance(p1: PolarPoint, p2: PolarPoint, k: Curvature) -> f64 {
    let Some(radius) = k.radius() else {
        let (x1, y1) = p1.to_cartesian();
        let (x2, y2) = p2.to_cartesian();
        return (x1 - x2).hypot(y1 - y2);
    };
    let unit = |p: PolarPoint| PolarPoint {
        r: p.r / radius,
        theta: p.theta,
    };
    if k.is_spherical() {
        let (a, b) = (sphere_point(unit(p1)), sphere_point(unit(p2)));
        radius * norm(cross(a, b)).atan2(dot(a, b))
    } else {
        let (a, b) = (hyperboloid_point(unit(p1)), hyperboloid_point(unit(p2)));
        let minkowski = a[2] * b[2] - a[0] * b[0] - a[1] * b[1];
        if minkowski > 2.0 {
            radius * minkowski.acosh()
        } else {
            // chord form: <a−b, a−b> = 2(cosh d − 1) = 4 sinh²(d/2)
            let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
            let q = (d[0] * d[0] + d[1] * d[1] - d[2] * d[2]).max(0.0);
            radius * 2.0 * (0.5 * q.sqrt()).asinh()
        }
    }
}
