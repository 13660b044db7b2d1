//! The scene: bodies, grid, boundary and curvature, advanced on a fixed
//! clock.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::dynamics::{Body, BodyInput, Velocity};
use crate::error::{Error, Result};
use crate::geometry::{Curvature, PolarPoint};
use crate::shape::{Pose, Shape, DEFAULT_TESSELLATION};

pub const DEFAULT_BOUNDARY_RADIUS: f64 = 300.0;
/// Segments per grid line.
pub const GRID_TESSELLATION: usize = 64;
/// Change in `k_norm` per tick while a curvature key is held.
pub const CURVATURE_STEP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub spacing: f64,
    pub count: usize,
    /// Half length of each grid line.
    pub extent: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            spacing: 50.0,
            count: 5,
            extent: DEFAULT_BOUNDARY_RADIUS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyConfig {
    pub id: u32,
    pub vertices: Vec<[f64; 2]>,
    #[serde(default = "yes")]
    pub closed: bool,
    #[serde(default)]
    pub position: [f64; 2],
    #[serde(default)]
    pub rotation: f64,
    #[serde(default)]
    pub speed: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub rotation_speed: f64,
    #[serde(default)]
    pub acceleration: f64,
    #[serde(default = "yes")]
    pub wraps: bool,
    #[serde(default)]
    pub controlled: bool,
    #[serde(default)]
    pub tessellation: Option<usize>,
}

fn yes() -> bool {
    true
}

/// Scene document, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SceneConfig {
    pub boundary_radius: f64,
    pub k_norm: f64,
    pub pixels_per_unit: f64,
    pub tessellation: usize,
    /// Optional `null` disables the grid.
    pub grid: Option<GridConfig>,
    /// Scripted curvature drift, in `k_norm` per second.
    pub curvature_rate: f64,
    pub bodies: Vec<BodyConfig>,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            boundary_radius: DEFAULT_BOUNDARY_RADIUS,
            k_norm: 0.0,
            pixels_per_unit: 1.0,
            tessellation: DEFAULT_TESSELLATION,
            grid: Some(GridConfig::default()),
            curvature_rate: 0.0,
            bodies: Vec::new(),
        }
    }
}

impl SceneConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SceneParse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub bodies: Vec<Body>,
    pub grid: Vec<Body>,
    pub boundary_radius: f64,
    pub curvature: Curvature,
    pub time: f64,
    pub controlled_body: Option<u32>,
    pub pixels_per_unit: f64,
    pub curvature_rate: f64,
    pending: Vec<(BodyInput, f64)>,
}

/// Parses and validates a scene document.
pub fn load_scene(text: &str) -> Result<WorldState> {
    WorldState::from_config(&SceneConfig::from_json(text)?)
}

fn finite(field: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::validation(field, "must be finite"))
    }
}

impl WorldState {
    pub fn from_config(config: &SceneConfig) -> Result<Self> {
        let n = config.boundary_radius;
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::validation(
                "boundary_radius",
                format!("must be positive, got {n}"),
            ));
        }
        if !(config.k_norm.is_finite() && (-1.0..=1.0).contains(&config.k_norm)) {
            return Err(Error::validation(
                "k_norm",
                format!("must lie in [-1, 1], got {}", config.k_norm),
            ));
        }
        if !(config.pixels_per_unit.is_finite() && config.pixels_per_unit > 0.0) {
            return Err(Error::validation("pixels_per_unit", "must be positive"));
        }
        if config.tessellation == 0 {
            return Err(Error::validation("tessellation", "must be at least 1"));
        }
        finite("curvature_rate", config.curvature_rate)?;
        let curvature = Curvature::new(config.k_norm, n)?;

        let mut bodies = Vec::with_capacity(config.bodies.len());
        let mut controlled = None;
        for (index, bc) in config.bodies.iter().enumerate() {
            let field = |name: &str| format!("bodies[{index}].{name}");
            if bodies.iter().any(|b: &Body| b.id == bc.id) {
                return Err(Error::validation(
                    field("id"),
                    format!("duplicate id {}", bc.id),
                ));
            }
            if bc.controlled {
                if controlled.is_some() {
                    return Err(Error::validation(
                        field("controlled"),
                        "only one body may be controlled",
                    ));
                }
                controlled = Some(bc.id);
            }
            for (name, value) in [
                ("position", bc.position[0]),
                ("position", bc.position[1]),
                ("rotation", bc.rotation),
                ("speed", bc.speed),
                ("gamma", bc.gamma),
                ("rotation_speed", bc.rotation_speed),
                ("acceleration", bc.acceleration),
            ] {
                finite(&field(name), value)?;
            }
            if bc.position[0] < 0.0 {
                return Err(Error::validation(
                    field("position"),
                    "radius must be non-negative",
                ));
            }
            let vertices = bc
                .vertices
                .iter()
                .map(|[r, t]| PolarPoint { r: *r, theta: *t })
                .collect();
            let shape = Shape::new(
                vertices,
                bc.tessellation.unwrap_or(config.tessellation),
                bc.closed,
            )
            .map_err(|e| match e {
                Error::SceneValidation { field: f, message } => {
                    Error::validation(field(&f), message)
                }
                other => other,
            })?;
            let mut body = Body {
                id: bc.id,
                pose: Pose::new(PolarPoint::new(bc.position[0], bc.position[1]), bc.rotation),
                velocity: Velocity::new(bc.speed, bc.gamma),
                acceleration: bc.acceleration,
                rotation_speed: bc.rotation_speed,
                shape,
                wraps: bc.wraps,
            };
            body.normalize(curvature);
            bodies.push(body);
        }

        let grid = match &config.grid {
            Some(g) => {
                if !(g.spacing.is_finite() && g.spacing > 0.0) {
                    return Err(Error::validation("grid.spacing", "must be positive"));
                }
                if !(g.extent.is_finite() && g.extent > 0.0) {
                    return Err(Error::validation("grid.extent", "must be positive"));
                }
                make_grid(g.spacing, g.count, g.extent)
            }
            None => Vec::new(),
        };

        Ok(WorldState {
            bodies,
            grid,
            boundary_radius: n,
            curvature,
            time: 0.0,
            controlled_body: controlled,
            pixels_per_unit: config.pixels_per_unit,
            curvature_rate: config.curvature_rate,
            pending: Vec::new(),
        })
    }

    pub fn body(&self, id: u32) -> Option<&Body> {
        self.bodies.iter().find(|b| b.id == id)
    }

    /// Queues a control input for the controlled body; applied at the next
    /// step.
    pub fn queue_input(&mut self, input: BodyInput, value: f64) {
        self.pending.push((input, value));
    }

    /// Advances the world by `dt` seconds.
    pub fn step(&mut self, dt: f64) {
        let pending = std::mem::take(&mut self.pending);
        if let Some(id) = self.controlled_body {
            if let Some(body) = self.bodies.iter_mut().find(|b| b.id == id) {
                for (input, value) in pending {
                    body.apply_input(input, value);
                }
            }
        }
        if self.curvature_rate != 0.0 {
            self.adjust_curvature(self.curvature_rate * dt);
        }
        let k = self.curvature;
        for body in &mut self.bodies {
            body.step(dt, k);
            body.wrap_boundary(self.boundary_radius, k);
        }
        self.time += dt;
    }

    /// Replaces the curvature. Body coordinates are kept as they are; only
    /// points beyond a new spherical antipode are folded back.
    pub fn set_curvature(&mut self, k_norm: f64) {
        if k_norm.is_nan() {
            return;
        }
        let k_norm = k_norm.clamp(-1.0, 1.0);
        if k_norm == self.curvature.k_norm() {
            return;
        }
        self.curvature = Curvature::new(k_norm, self.boundary_radius)
            .expect("clamped curvature with validated boundary");
        for body in self.bodies.iter_mut().chain(self.grid.iter_mut()) {
            body.normalize(self.curvature);
        }
    }

    pub fn adjust_curvature(&mut self, delta: f64) {
        self.set_curvature(self.curvature.k_norm() + delta);
    }
}

/// Pure form of [`WorldState::step`].
pub fn step_world(world: &WorldState, dt: f64) -> WorldState {
    let mut next = world.clone();
    next.step(dt);
    next
}

/// Pure form of [`WorldState::set_curvature`].
pub fn set_curvature(world: &WorldState, k_norm: f64) -> WorldState {
    let mut next = world.clone();
    next.set_curvature(k_norm);
    next
}

/// Pure form of [`WorldState::adjust_curvature`].
pub fn adjust_curvature(world: &WorldState, delta: f64) -> WorldState {
    let mut next = world.clone();
    next.adjust_curvature(delta);
    next
}

/// Static grid lines, built as ordinary two-vertex bodies so they bend with
/// the curvature like any other edge.
///
/// For each offset `m · spacing`, `m ∈ [−count, count]`, and each of the two
/// axes, one line of half length `extent` is centred at distance
/// `|m| · spacing` from the reference point, perpendicular to its position
/// vector.
pub fn make_grid(spacing: f64, count: usize, extent: f64) -> Vec<Body> {
    let count = count as i64;
    let shape = Shape {
        vertices: vec![
            PolarPoint::new(extent, FRAC_PI_2),
            PolarPoint::new(extent, 3.0 * FRAC_PI_2),
        ],
        tessellation: GRID_TESSELLATION,
        closed: false,
    };
    let mut lines = Vec::with_capacity(2 * (2 * count as usize + 1));
    for axis in [0.0, FRAC_PI_2] {
        for m in -count..=count {
            let bearing = if m < 0 { axis + PI } else { axis };
            lines.push(Body {
                id: lines.len() as u32,
                pose: Pose::new(
                    PolarPoint::new(m.unsigned_abs() as f64 * spacing, bearing),
                    0.0,
                ),
                velocity: Velocity::REST,
                acceleration: 0.0,
                rotation_speed: 0.0,
                shape: shape.clone(),
                wraps: false,
            });
        }
    }
    lines
}
