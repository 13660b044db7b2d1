//! Curvature-generic trigonometry on the constant-curvature plane.
//!
//! Every position is a polar pair `(r, θ)` measured from a fixed reference
//! point `O`: `r` is the geodesic distance from `O` and `θ` the bearing from
//! the eastbound reference direction. Triangles are solved with the spherical,
//! planar or hyperbolic law of cosines depending on the sign of the
//! curvature. The laws are evaluated in their half-angle forms, which are
//! algebraically identical to the cosine forms but keep full precision for
//! thin and nearly-flat triangles.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this value of `|k_metric| · L²` the planar law is used.
pub const PLANAR_THRESHOLD: f64 = 1e-12;

/// Sines (or hyperbolic sines) smaller than this make a triangle side
/// unusable as an adjacent side of an angle.
const VANISHING_SINE: f64 = 1e-12;

/// Constant Gaussian curvature of the world.
///
/// `k_norm` is the dimensionless user-facing value in `[-1, 1]`. The metric
/// curvature is `k_norm · (π / N)²` for a world of boundary radius `N`, so at
/// `k_norm = 1` the boundary circle is exactly the antipodal circle of the
/// sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curvature {
    k_norm: f64,
    k_metric: f64,
}

impl Curvature {
    pub const FLAT: Curvature = Curvature {
        k_norm: 0.0,
        k_metric: 0.0,
    };

    /// Curvature of a world with boundary radius `boundary_radius`.
    pub fn new(k_norm: f64, boundary_radius: f64) -> Result<Self> {
        if !k_norm.is_finite() || !(-1.0..=1.0).contains(&k_norm) {
            return Err(Error::CurvatureOutOfRange(k_norm));
        }
        if !boundary_radius.is_finite() || boundary_radius <= 0.0 {
            return Err(Error::InvalidBoundary(boundary_radius));
        }
        let unit = PI / boundary_radius;
        Ok(Curvature {
            k_norm,
            k_metric: k_norm * unit * unit,
        })
    }

    /// Curvature with the given metric value, in a world of boundary radius
    /// `π` (where `k_norm == k_metric`).
    pub fn from_metric(k_metric: f64) -> Result<Self> {
        Curvature::new(k_metric, PI)
    }

    pub fn k_norm(&self) -> f64 {
        self.k_norm
    }

    pub fn k_metric(&self) -> f64 {
        self.k_metric
    }

    /// `sqrt(|k_metric|)`, zero when flat.
    pub fn scale(&self) -> f64 {
        self.k_metric.abs().sqrt()
    }

    /// Sphere radius (`K > 0`) or hyperbolic length scale (`K < 0`).
    pub fn radius(&self) -> Option<f64> {
        (self.k_metric != 0.0).then(|| 1.0 / self.scale())
    }

    pub fn is_spherical(&self) -> bool {
        self.k_metric > 0.0
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.k_metric < 0.0
    }

    /// Distance from `O` to its antipode, for spherical worlds.
    pub fn antipodal_distance(&self) -> Option<f64> {
        self.is_spherical().then(|| PI / self.scale())
    }

    fn model(&self, longest: f64) -> Model {
        if self.k_metric == 0.0 || self.k_metric.abs() * longest * longest < PLANAR_THRESHOLD {
            Model::Planar
        } else if self.k_metric > 0.0 {
            Model::Spherical(self.scale())
        } else {
            Model::Hyperbolic(self.scale())
        }
    }
}

impl Default for Curvature {
    fn default() -> Self {
        Curvature::FLAT
    }
}

#[derive(Debug, Clone, Copy)]
enum Model {
    Planar,
    Spherical(f64),
    Hyperbolic(f64),
}

impl Model {
    /// The "sine" of a scaled length: `sin`, identity or `sinh`.
    fn sine(self, x: f64) -> f64 {
        match self {
            Model::Planar => x,
            Model::Spherical(_) => x.sin(),
            Model::Hyperbolic(_) => x.sinh(),
        }
    }

    fn scale(self) -> f64 {
        match self {
            Model::Planar => 1.0,
            Model::Spherical(s) | Model::Hyperbolic(s) => s,
        }
    }
}

/// A point in polar coordinates about the reference point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    /// Builds a point with `theta` normalized to `[0, 2π)`. A negative radius
    /// is reflected through the reference point.
    pub fn new(r: f64, theta: f64) -> Self {
        if r < 0.0 {
            PolarPoint {
                r: -r,
                theta: normalize_bearing(theta + PI),
            }
        } else {
            PolarPoint {
                r,
                theta: normalize_bearing(theta),
            }
        }
    }

    pub const ORIGIN: PolarPoint = PolarPoint { r: 0.0, theta: 0.0 };

    pub fn to_cartesian(self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.r * c, self.r * s)
    }

    pub fn from_cartesian(x: f64, y: f64) -> Self {
        PolarPoint::new(x.hypot(y), y.atan2(x))
    }
}

/// Cartesian screen position in pixels, y axis up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenPoint {
    pub x: f64,
    pub y: f64,
}

fn check_finite(op: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(op))
    }
}

/// Length of the side opposite `gamma` in the geodesic triangle with sides
/// `a`, `b` enclosing the angle `gamma`.
///
/// The law of cosines `cos c = cos a cos b + sin a sin b cos γ` (and its
/// hyperbolic and planar counterparts) is evaluated through
/// `sin²(c/2) = sin²((a−b)/2) + sin a sin b sin²(γ/2)`.
pub fn side_from_sas(a: f64, b: f64, gamma: f64, k: Curvature) -> Result<f64> {
    check_finite("side_from_sas", &[a, b, gamma])?;
    Ok(sas(a, b, gamma, k))
}

/// Angle opposite side `c` in the geodesic triangle with sides `a`, `b`, `c`.
///
/// Uses the half-angle form `tan²(C/2) = f(s−a) f(s−b) / (f(s) f(s−c))` with
/// `f` the curvature's sine and `s` the half perimeter. Fails with
/// [`Error::DegenerateTriangle`] when `a` or `b` has a vanishing sine (zero
/// length, or the spherical antipodal distance).
pub fn angle_from_sss(a: f64, b: f64, c: f64, k: Curvature) -> Result<f64> {
    check_finite("angle_from_sss", &[a, b, c])?;
    sss(a, b, c, k).ok_or(Error::DegenerateTriangle)
}

pub(crate) fn sas(a: f64, b: f64, gamma: f64, k: Curvature) -> f64 {
    let half = (0.5 * gamma).sin();
    let half_sq = half * half;
    match k.model(a.max(b)) {
        Model::Planar => {
            let d = a - b;
            (d * d + 4.0 * a * b * half_sq).max(0.0).sqrt()
        }
        Model::Spherical(s) => {
            let (x, y) = (a * s, b * s);
            let prod = x.sin() * y.sin();
            let dm = (0.5 * (x - y)).sin();
            let cp = (0.5 * (x + y)).cos();
            let hav = (dm * dm + prod * half_sq).max(0.0);
            let hav_c = (cp * cp + prod * (1.0 - half_sq)).max(0.0);
            2.0 * hav.sqrt().atan2(hav_c.sqrt()) / s
        }
        Model::Hyperbolic(s) => {
            let (x, y) = (a * s, b * s);
            let dm = (0.5 * (x - y)).sinh();
            let h = (dm * dm + x.sinh() * y.sinh() * half_sq).max(0.0);
            2.0 * h.sqrt().asinh() / s
        }
    }
}

/// True when `len` cannot serve as a side adjacent to a solved angle.
pub(crate) fn vanishes(len: f64, longest: f64, k: Curvature) -> bool {
    let model = k.model(longest);
    match model {
        Model::Planar => len <= VANISHING_SINE * longest.max(f64::MIN_POSITIVE),
        _ => model.sine(len * model.scale()).abs() <= VANISHING_SINE,
    }
}

pub(crate) fn sss(a: f64, b: f64, c: f64, k: Curvature) -> Option<f64> {
    let longest = a.max(b).max(c);
    if vanishes(a, longest, k) || vanishes(b, longest, k) {
        return None;
    }
    let model = k.model(longest);
    let scale = model.scale();
    let (x, y, z) = (a * scale, b * scale, c * scale);
    let half_perimeter = 0.5 * (x + y + z);
    let f = |v: f64| model.sine(v.max(0.0));
    let num = (f(half_perimeter - x) * f(half_perimeter - y)).max(0.0);
    let den = (f(half_perimeter) * f(half_perimeter - z)).max(0.0);
    Some(2.0 * num.sqrt().atan2(den.sqrt()))
}

/// Equivalent bearing in `[0, 2π)`.
pub fn normalize_bearing(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Reduces an angle to `(−π, π]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let t = normalize_bearing(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// Closes the sphere: a point beyond the antipode re-enters from the other
/// side. Identity for flat and hyperbolic worlds.
pub fn normalize_radius(p: PolarPoint, k: Curvature) -> PolarPoint {
    normalize_radius_with_parity(p, k).0
}

/// Like [`normalize_radius`], also reporting whether the point was reflected
/// through the antipode (which mirrors local bearings at that point).
pub(crate) fn normalize_radius_with_parity(p: PolarPoint, k: Curvature) -> (PolarPoint, bool) {
    let p = PolarPoint::new(p.r, p.theta);
    let Some(half) = k.antipodal_distance() else {
        return (p, false);
    };
    let r = p.r.rem_euclid(2.0 * half);
    if r > half {
        (
            PolarPoint {
                r: 2.0 * half - r,
                theta: normalize_bearing(p.theta + PI),
            },
            true,
        )
    } else {
        (PolarPoint { r, theta: p.theta }, false)
    }
}

/// Azimuthal equidistant projection: the polar pair is drawn as-is.
pub fn project_to_screen(p: PolarPoint, pixels_per_unit: f64) -> ScreenPoint {
    let (s, c) = p.theta.sin_cos();
    ScreenPoint {
        x: pixels_per_unit * p.r * c,
        y: pixels_per_unit * p.r * s,
    }
}
