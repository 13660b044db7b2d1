//! Geodesic motion of bodies with their orientation carried along.
//!
//! A body's velocity is a speed and a bearing `γ` measured at the body in
//! the same local frame as its facing `β`: zero points toward the reference
//! point, and positive angles turn toward increasing global bearing. The
//! offset `β − γ` between facing and direction of travel is preserved along
//! a geodesic when the body does not spin.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    normalize_bearing, normalize_radius_with_parity, sas, sss, Curvature, PolarPoint,
};
use crate::shape::{frame_at, Frame, Pose, Shape};

/// Default fixed timestep, in seconds.
pub const DEFAULT_DT: f64 = 1.0 / 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Velocity {
    pub speed: f64,
    /// Bearing of motion in the body's local frame.
    pub gamma: f64,
}

impl Velocity {
    pub fn new(speed: f64, gamma: f64) -> Self {
        if speed < 0.0 {
            Velocity {
                speed: -speed,
                gamma: normalize_bearing(gamma + PI),
            }
        } else {
            Velocity {
                speed,
                gamma: normalize_bearing(gamma),
            }
        }
    }

    pub const REST: Velocity = Velocity {
        speed: 0.0,
        gamma: 0.0,
    };
}

/// A simulated object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub id: u32,
    pub pose: Pose,
    pub velocity: Velocity,
    /// Thrust along the body's facing, in world units per second squared.
    pub acceleration: f64,
    /// Spin, in radians per second.
    pub rotation_speed: f64,
    pub shape: Shape,
    /// Whether the body re-enters at the antipodal boundary point.
    pub wraps: bool,
}

/// Control inputs a body responds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyInput {
    Thrust,
    Rotate,
}

impl FromStr for BodyInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thrust" => Ok(BodyInput::Thrust),
            "rotate" => Ok(BodyInput::Rotate),
            other => Err(Error::UnknownAction(other.to_string())),
        }
    }
}

impl fmt::Display for BodyInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BodyInput::Thrust => "thrust",
            BodyInput::Rotate => "rotate",
        })
    }
}

impl Body {
    /// Offset between facing and direction of travel.
    pub fn heading_offset(&self) -> f64 {
        normalize_bearing(self.pose.rotation - self.velocity.gamma)
    }

    pub fn apply_input(&mut self, input: BodyInput, value: f64) {
        match input {
            BodyInput::Thrust => self.acceleration = value,
            BodyInput::Rotate => self.rotation_speed = value,
        }
    }

    /// Advances the body by `dt` seconds: thrust, then a geodesic step with
    /// the updated velocity, then spin.
    pub fn step(&mut self, dt: f64, k: Curvature) {
        self.integrate_thrust(dt);
        let path = self.velocity.speed * dt;
        if path > 0.0 {
            self.geodesic_step(path, k);
        }
        self.pose.rotation += self.rotation_speed * dt;
        self.normalize(k);
    }

    /// Adds `acceleration · dt` along the facing to the velocity, as vectors
    /// in the body's tangent plane.
    fn integrate_thrust(&mut self, dt: f64) {
        if self.acceleration == 0.0 {
            return;
        }
        let dv = self.acceleration * dt;
        let (sg, cg) = self.velocity.gamma.sin_cos();
        let (sb, cb) = self.pose.rotation.sin_cos();
        let x = self.velocity.speed * cg + dv * cb;
        let y = self.velocity.speed * sg + dv * sb;
        let speed = x.hypot(y);
        if speed > 0.0 {
            self.velocity = Velocity::new(speed, y.atan2(x));
        } else {
            self.velocity.speed = 0.0;
        }
    }

    fn geodesic_step(&mut self, path: f64, k: Curvature) {
        let start = self.pose.position;
        let gamma = normalize_bearing(self.velocity.gamma);
        let offset = self.pose.rotation - gamma;
        let (included, sign) = if gamma > PI {
            (2.0 * PI - gamma, -1.0)
        } else {
            (gamma, 1.0)
        };

        let (end, new_gamma) = match frame_at(start.r, path, k) {
            // the stored bearing stands in for the undefined local frame
            Frame::Origin => (PolarPoint::new(path, start.theta + PI - gamma), PI),
            Frame::Antipode(half) => (PolarPoint::new(half - path, start.theta + gamma), 0.0),
            Frame::Regular => {
                let r1 = sas(start.r, path, included, k);
                match frame_at(r1, path.max(start.r), k) {
                    Frame::Origin => (PolarPoint::new(r1, start.theta), 0.0),
                    Frame::Antipode(_) => (PolarPoint::new(r1, start.theta), PI),
                    Frame::Regular => {
                        let swept = sss(start.r, r1, path, k).unwrap_or(0.0);
                        // angle at the new position between the directions to
                        // O and back along the path
                        let back = sss(r1, path, start.r, k).unwrap_or(PI - included);
                        let gamma1 = if sign > 0.0 { PI - back } else { PI + back };
                        (PolarPoint::new(r1, start.theta + sign * swept), gamma1)
                    }
                }
            }
        };
        self.pose.position = end;
        self.velocity.gamma = normalize_bearing(new_gamma);
        self.pose.rotation = new_gamma + offset;
    }

    /// Brings the pose back into canonical range; a body carried past the
    /// spherical antipode has its local bearings mirrored.
    pub(crate) fn normalize(&mut self, k: Curvature) {
        let (position, reflected) = normalize_radius_with_parity(self.pose.position, k);
        self.pose.position = position;
        if reflected {
            self.velocity.gamma = PI - self.velocity.gamma;
            self.pose.rotation = PI - self.pose.rotation;
        }
        self.velocity.gamma = normalize_bearing(self.velocity.gamma);
        self.pose.rotation = normalize_bearing(self.pose.rotation);
    }

    /// Re-enters a body that has left the boundary circle. The body is traced
    /// back along its geodesic to the crossing point, moved to the antipodal
    /// boundary point with its velocity and facing unchanged in the screen
    /// frame, and advanced again by the distance it had overshot. A body that
    /// cannot be traced back (at rest, or not heading outward) is placed on
    /// the antipodal boundary point directly.
    pub fn wrap_boundary(&mut self, boundary_radius: f64, k: Curvature) {
        if !self.wraps || self.pose.position.r <= boundary_radius {
            return;
        }
        let overshoot = if self.velocity.speed > 0.0 {
            overshoot(
                self.pose.position.r,
                self.velocity.gamma,
                boundary_radius,
                k,
            )
        } else {
            None
        };
        if let Some(t) = overshoot {
            self.velocity.gamma += PI;
            self.geodesic_step(t, k);
            self.velocity.gamma += PI;
        }
        let theta = self.pose.position.theta;
        self.pose.position = PolarPoint::new(boundary_radius, theta + PI);
        // the local frame at the antipodal point is the old one turned by π
        self.velocity.gamma = normalize_bearing(self.velocity.gamma + PI);
        self.pose.rotation = normalize_bearing(self.pose.rotation + PI);
        if let Some(t) = overshoot {
            self.geodesic_step(t, k);
            self.normalize(k);
        }
    }
}

/// Distance back along the geodesic from a point at `r` with heading `gamma`
/// to where it crossed the circle of radius `n`.
fn overshoot(r: f64, gamma: f64, n: f64, k: Curvature) -> Option<f64> {
    let back = normalize_bearing(gamma + PI);
    let g = if back > PI { 2.0 * PI - back } else { back };
    if g >= PI / 2.0 {
        return None;
    }
    // distance to the foot of the perpendicular from O, where r is smallest
    let s = k.scale();
    let foot = if k.is_spherical() {
        ((s * r).sin() * g.cos()).atan2((s * r).cos()) / s
    } else if k.is_hyperbolic() {
        ((s * r).tanh() * g.cos()).atanh() / s
    } else {
        r * g.cos()
    };
    let dist = |t: f64| sas(r, t, g, k);
    if dist(foot) > n {
        return None;
    }
    let (mut lo, mut hi) = (0.0, foot);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dist(mid) > n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Pure form of [`Body::step`].
pub fn step_body(body: &Body, dt: f64, k: Curvature) -> Body {
    let mut next = body.clone();
    next.step(dt, k);
    next
}

/// Pure form of [`Body::wrap_boundary`].
pub fn wrap_boundary(body: &Body, boundary_radius: f64, k: Curvature) -> Body {
    let mut next = body.clone();
    next.wrap_boundary(boundary_radius, k);
    next
}

/// Pure form of [`Body::apply_input`], taking the action by name.
pub fn apply_input(body: &Body, action: &str, value: f64) -> Result<Body> {
    let input: BodyInput = action.parse()?;
    let mut next = body.clone();
    next.apply_input(input, value);
    Ok(next)
}
