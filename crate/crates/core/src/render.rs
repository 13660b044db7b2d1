//! Frame snapshots and their vector and raster exports.
//!
//! A [`FrameSnapshot`] holds every outline of a world already projected to
//! screen coordinates. SVG output writes coordinates with three decimals and
//! flips the y axis with a group transform, so the numbers in a path are the
//! snapshot's own.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::geometry::{project_to_screen, PolarPoint, ScreenPoint};
use crate::shape::outline_into;
use crate::world::WorldState;

/// Points on the boundary circle polyline.
pub const BOUNDARY_SEGMENTS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StyleClass {
    Grid,
    Boundary,
    Object,
    Controlled,
}

impl StyleClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StyleClass::Grid => "grid",
            StyleClass::Boundary => "boundary",
            StyleClass::Object => "object",
            StyleClass::Controlled => "controlled",
        }
    }

    fn is_body(self) -> bool {
        matches!(self, StyleClass::Object | StyleClass::Controlled)
    }

    fn rgb(self, id: Option<u32>) -> [u8; 3] {
        const PALETTE: [[u8; 3]; 6] = [
            [0x4f, 0xc3, 0xf7],
            [0xae, 0xd5, 0x81],
            [0xff, 0xd5, 0x4f],
            [0xba, 0x68, 0xc8],
            [0x4d, 0xb6, 0xac],
            [0xff, 0x8a, 0x65],
        ];
        match self {
            StyleClass::Grid => [0x55, 0x55, 0x55],
            StyleClass::Boundary => [0xff, 0xff, 0xff],
            StyleClass::Controlled => [0xe5, 0x39, 0x35],
            StyleClass::Object => PALETTE[id.unwrap_or(0) as usize % PALETTE.len()],
        }
    }

    fn color(self, id: Option<u32>) -> String {
        let [r, g, b] = self.rgb(id);
        format!("#{r:02x}{g:02x}{b:02x}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub id: Option<u32>,
    pub class: StyleClass,
    pub closed: bool,
    pub points: Vec<ScreenPoint>,
    /// Body centre in polar coordinates, for body polylines.
    pub center: Option<PolarPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSnapshot {
    pub time: f64,
    pub k_norm: f64,
    pub boundary_radius: f64,
    pub pixels_per_unit: f64,
    pub polylines: Vec<Polyline>,
}

impl FrameSnapshot {
    pub fn bodies(&self) -> impl Iterator<Item = &Polyline> {
        self.polylines.iter().filter(|p| p.class.is_body())
    }
}

/// Projects every outline of `world`. Order: grid, boundary, objects, then
/// the controlled body. Grid lines are clipped to the boundary disc.
pub fn snapshot(world: &WorldState, pixels_per_unit: f64) -> FrameSnapshot {
    let k = world.curvature;
    let n = world.boundary_radius;
    let mut polylines = Vec::new();
    let mut scratch = Vec::new();
    let project = |pts: &[PolarPoint]| -> Vec<ScreenPoint> {
        pts.iter()
            .map(|p| project_to_screen(*p, pixels_per_unit))
            .collect()
    };

    let limit = n * (1.0 + 1e-9);
    for line in &world.grid {
        scratch.clear();
        outline_into(&line.shape, &line.pose, k, &mut scratch);
        for run in scratch.split(|p| p.r > limit).filter(|run| run.len() >= 2) {
            polylines.push(Polyline {
                id: Some(line.id),
                class: StyleClass::Grid,
                closed: false,
                points: project(run),
                center: None,
            });
        }
    }

    let circle: Vec<PolarPoint> = (0..BOUNDARY_SEGMENTS)
        .map(|i| PolarPoint::new(n, TAU * i as f64 / BOUNDARY_SEGMENTS as f64))
        .collect();
    polylines.push(Polyline {
        id: None,
        class: StyleClass::Boundary,
        closed: true,
        points: project(&circle),
        center: None,
    });

    let mut controlled = None;
    for body in &world.bodies {
        scratch.clear();
        outline_into(&body.shape, &body.pose, k, &mut scratch);
        let is_controlled = world.controlled_body == Some(body.id);
        let line = Polyline {
            id: Some(body.id),
            class: if is_controlled {
                StyleClass::Controlled
            } else {
                StyleClass::Object
            },
            closed: body.shape.closed,
            points: project(&scratch),
            center: Some(body.pose.position),
        };
        if is_controlled {
            controlled = Some(line);
        } else {
            polylines.push(line);
        }
    }
    polylines.extend(controlled);

    FrameSnapshot {
        time: world.time,
        k_norm: k.k_norm(),
        boundary_radius: n,
        pixels_per_unit,
        polylines,
    }
}

/// Three-decimal fixed formatting without a negative zero.
pub fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn path_data(points: &[ScreenPoint], closed: bool) -> String {
    let mut d = String::with_capacity(points.len() * 18);
    for (i, p) in points.iter().enumerate() {
        let _ = write!(
            d,
            "{}{},{}",
            if i == 0 { "M" } else { " L" },
            fmt3(p.x),
            fmt3(p.y)
        );
    }
    if closed && points.len() > 1 {
        d.push_str(" Z");
    }
    d
}

fn half_extent(frame: &FrameSnapshot) -> f64 {
    (frame.boundary_radius * frame.pixels_per_unit + 10.0).ceil()
}

fn write_path(out: &mut String, line: &Polyline) {
    let _ = write!(out, "<path class=\"{}\"", line.class.as_str());
    if let Some(id) = line.id {
        let _ = write!(out, " data-id=\"{id}\"");
    }
    if let Some(c) = line.center {
        let _ = write!(
            out,
            " data-r=\"{}\" data-theta=\"{}\"",
            fmt3(c.r),
            fmt3(c.theta)
        );
    }
    let _ = writeln!(
        out,
        " stroke=\"{}\" d=\"{}\"/>",
        line.class.color(line.id),
        path_data(&line.points, line.closed)
    );
}

fn render_document(scene: &FrameSnapshot, layers: &[(&FrameSnapshot, Option<f64>)]) -> String {
    let h = half_extent(scene);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{w}\" viewBox=\"{min} {min} {w} {w}\">",
        w = fmt3(2.0 * h),
        min = fmt3(-h)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{min}\" y=\"{min}\" width=\"{w}\" height=\"{w}\" fill=\"#000000\"/>",
        w = fmt3(2.0 * h),
        min = fmt3(-h)
    );
    out.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"1\">\n");
    out.push_str("<g class=\"scene\">\n");
    for line in scene.polylines.iter().filter(|l| !l.class.is_body()) {
        write_path(&mut out, line);
    }
    out.push_str("</g>\n");
    for (frame, opacity) in layers {
        let _ = write!(
            out,
            "<g class=\"layer\" data-time=\"{}\" data-k-norm=\"{}\"",
            fmt3(frame.time),
            fmt3(frame.k_norm)
        );
        if let Some(o) = opacity {
            let _ = write!(out, " opacity=\"{}\"", fmt3(*o));
        }
        out.push_str(">\n");
        for line in frame.bodies() {
            write_path(&mut out, line);
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Standalone SVG 1.1 document for one frame.
pub fn write_svg(frame: &FrameSnapshot) -> String {
    render_document(frame, &[(frame, None)])
}

/// Overlays the body outlines of every `every`-th frame on the last frame's
/// grid and boundary. Older layers fade linearly from opacity 1.0 (newest)
/// down to 0.25 (oldest).
pub fn compose_timelapse(frames: &[FrameSnapshot], every: usize) -> String {
    let every = every.max(1);
    let Some(last) = frames.last() else {
        return String::new();
    };
    let picked: Vec<&FrameSnapshot> = frames.iter().step_by(every).collect();
    let count = picked.len();
    let layers: Vec<(&FrameSnapshot, Option<f64>)> = picked
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let opacity = if count == 1 {
                1.0
            } else {
                0.25 + 0.75 * i as f64 / (count - 1) as f64
            };
            (f, Some(opacity))
        })
        .collect();
    render_document(last, &layers)
}

/// Binary PPM (P6) raster of a frame, one pixel per screen unit.
pub fn write_ppm<W: Write>(frame: &FrameSnapshot, mut out: W) -> io::Result<()> {
    let h = half_extent(frame);
    let size = (2.0 * h) as usize + 1;
    let mut pixels = vec![0u8; size * size * 3];
    let to_pixel = |p: &ScreenPoint| ((p.x + h).round() as i64, (h - p.y).round() as i64);
    let mut plot = |x: i64, y: i64, rgb: [u8; 3]| {
        if x >= 0 && y >= 0 && (x as usize) < size && (y as usize) < size {
            let i = (y as usize * size + x as usize) * 3;
            pixels[i..i + 3].copy_from_slice(&rgb);
        }
    };
    for line in &frame.polylines {
        let rgb = line.class.rgb(line.id);
        let pts: Vec<(i64, i64)> = line.points.iter().map(to_pixel).collect();
        let closing = if line.closed && pts.len() > 2 {
            Some((pts[pts.len() - 1], pts[0]))
        } else {
            None
        };
        if pts.len() == 1 {
            plot(pts[0].0, pts[0].1, rgb);
        }
        for (a, b) in pts.windows(2).map(|w| (w[0], w[1])).chain(closing) {
            draw_line(a, b, |x, y| plot(x, y, rgb));
        }
    }
    write!(out, "P6\n{size} {size}\n255\n")?;
    out.write_all(&pixels)
}

fn draw_line((mut x0, mut y0): (i64, i64), (x1, y1): (i64, i64), mut plot: impl FnMut(i64, i64)) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        plot(x0, y0);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::load_scene;

    fn square_world() -> WorldState {
        load_scene(
            r#"{"grid": null, "k_norm": -1, "bodies": [{"id": 1,
                "vertices": [[90, 0.39269908169872414], [90, 1.1780972450961724],
                             [90, 1.9634954084936207], [90, 2.748893571891069]],
                "position": [60, 0.3]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn empty_world_has_boundary_only() {
        let w = load_scene(r#"{"grid": null}"#).unwrap();
        let s = snapshot(&w, 1.0);
        assert_eq!(s.polylines.len(), 1);
        assert_eq!(s.polylines[0].class, StyleClass::Boundary);
        let svg = write_svg(&s);
        assert_eq!(svg.matches("<path").count(), 1);
    }

    #[test]
    fn square_body_has_64_points() {
        let w = square_world();
        let s = snapshot(&w, 1.0);
        let bodies: Vec<_> = s.bodies().collect();
        assert_eq!(bodies.len(), 1);
        assert_eq!(bodies[0].points.len(), 64);
        assert_eq!(snapshot(&w, 1.0), s);
    }

    #[test]
    fn controlled_body_is_last() {
        let w = load_scene(
            r#"{"bodies": [
                {"id": 1, "vertices": [[5, 0], [5, 2]], "controlled": true},
                {"id": 2, "vertices": [[5, 0], [5, 2]], "position": [40, 1]}]}"#,
        )
        .unwrap();
        let s = snapshot(&w, 1.0);
        let last = s.polylines.last().unwrap();
        assert_eq!((last.class, last.id), (StyleClass::Controlled, Some(1)));
        assert_eq!(s.polylines[0].class, StyleClass::Grid);
    }

    #[test]
    fn svg_paths_match_polylines() {
        let s = snapshot(&square_world(), 1.0);
        let svg = write_svg(&s);
        assert_eq!(svg.matches("<path").count(), s.polylines.len());
        assert!(svg.starts_with("<?xml"));
    }

    #[test]
    fn single_frame_timelapse_adds_opacity() {
        let s = snapshot(&square_world(), 1.0);
        let plain = write_svg(&s);
        let composed = compose_timelapse(std::slice::from_ref(&s), 1);
        assert_eq!(composed.replace(" opacity=\"1.000\"", ""), plain);
        assert!(composed.contains("opacity=\"1.000\""));
    }

    #[test]
    fn timelapse_layer_count() {
        let mut w = square_world();
        let frames: Vec<_> = (0..10)
            .map(|_| {
                let s = snapshot(&w, 1.0);
                w.step(0.1);
                s
            })
            .collect();
        let svg = compose_timelapse(&frames, 5);
        assert_eq!(svg.matches("class=\"layer\"").count(), 2);
        assert!(svg.contains("opacity=\"0.250\""));
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(fmt3(-0.0001), "0.000");
        assert_eq!(fmt3(-1.25), "-1.250");
        assert_eq!(fmt3(2.0), "2.000");
    }

    #[test]
    fn ppm_header_and_size() {
        let s = snapshot(&square_world(), 1.0);
        let mut buf = Vec::new();
        write_ppm(&s, &mut buf).unwrap();
        let size = (2.0 * half_extent(&s)) as usize + 1;
        let header = format!("P6\n{size} {size}\n255\n");
        assert!(buf.starts_with(header.as_bytes()));
        assert_eq!(buf.len(), header.len() + size * size * 3);
        assert!(buf[header.len()..].contains(&0xff));
    }
}
