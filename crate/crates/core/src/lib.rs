//! Real-time 2D geometry on a plane of constant curvature.
//!
//! Positions are polar pairs around a fixed reference point, shapes are
//! polygons whose edges are geodesics, and bodies move along geodesics while
//! keeping their facing. The same code path handles the sphere, the plane and
//! the hyperbolic plane; the curvature can change between frames.
//!
//! ```
//! use curved::{Curvature, PolarPoint, side_from_sas};
//!
//! // on the unit sphere, a right angle between two sides of length π/2
//! // spans another π/2
//! let sphere = Curvature::from_metric(1.0).unwrap();
//! let h = std::f64::consts::FRAC_PI_2;
//! let c = side_from_sas(h, h, h, sphere).unwrap();
//! assert!((c - h).abs() < 1e-12);
//! let p = PolarPoint::new(-2.0, 0.0);
//! assert_eq!(p.r, 2.0);
//! ```

pub mod bench;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod protocol;
pub mod render;
pub mod shape;
pub mod world;

pub use dynamics::{apply_input, step_body, wrap_boundary, Body, BodyInput, Velocity};
pub use error::{Error, Result};
pub use geometry::{
    angle_from_sss, normalize_bearing, normalize_radius, project_to_screen, reduce_angle,
    side_from_sas, Curvature, PolarPoint, ScreenPoint,
};
pub use oracle::oracle_distance;
pub use render::{
    compose_timelapse, snapshot, write_ppm, write_svg, FrameSnapshot, Polyline, StyleClass,
};
pub use shape::{
    edge_geometry, outline, tessellate_edge, vertex_global, EdgeGeometry, Pose, Shape, Sweep,
};
pub use world::{adjust_curvature, load_scene, set_curvature, step_world, SceneConfig, WorldState};

/// Guide chapters and the README, compiled so their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/triangles.md")]
    mod triangles {}
    #[doc = include_str!("../../../book/src/shapes.md")]
    mod shapes {}
    #[doc = include_str!("../../../book/src/motion.md")]
    mod motion {}
    #[doc = include_str!("../../../book/src/world.md")]
    mod world {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    mod rendering {}
    #[doc = include_str!("../../../book/src/protocol.md")]
    mod protocol {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
