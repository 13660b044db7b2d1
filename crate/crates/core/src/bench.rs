//! Timing harness for the snapshot pipeline and a fit of its cost to
//! `t = c · s · v · i` (shapes × vertices × tessellation).

use std::f64::consts::TAU;
use std::io::{self, Write};
use std::time::Instant;

use crate::render::snapshot;
use crate::world::{BodyConfig, SceneConfig, WorldState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub shapes: usize,
    pub vertices: usize,
    pub tessellation: usize,
    pub median_ms: f64,
}

impl BenchRow {
    /// `s · v · i`.
    pub fn work(&self) -> f64 {
        (self.shapes * self.vertices * self.tessellation) as f64
    }
}

/// World of `shapes` regular polygons with `vertices` corners each, spread
/// over the disc, no grid, at `k_norm = 1`.
pub fn synthetic_world(shapes: usize, vertices: usize, tessellation: usize) -> WorldState {
    let polygon: Vec<[f64; 2]> = (0..vertices)
        .map(|j| [20.0, (j as f64 + 0.5) * TAU / vertices as f64])
        .collect();
    let bodies = (0..shapes)
        .map(|b| BodyConfig {
            id: b as u32,
            vertices: polygon.clone(),
            closed: true,
            position: [
                30.0 + 200.0 * (b % 7) as f64 / 7.0,
                b as f64 * 2.399963229728653,
            ],
            rotation: 0.1 * b as f64,
            speed: 0.0,
            gamma: 0.0,
            rotation_speed: 0.0,
            acceleration: 0.0,
            wraps: true,
            controlled: false,
            tessellation: Some(tessellation),
        })
        .collect();
    let config = SceneConfig {
        k_norm: 1.0,
        grid: None,
        bodies,
        ..SceneConfig::default()
    };
    WorldState::from_config(&config).expect("synthetic scene is valid")
}

/// Median wall time, in milliseconds, of `reps` snapshots of
/// [`synthetic_world`]. Runs on the calling thread.
pub fn bench(shapes: usize, vertices: usize, tessellation: usize, reps: usize) -> BenchRow {
    let world = synthetic_world(shapes, vertices, tessellation);
    std::hint::black_box(snapshot(&world, 1.0));
    let mut times: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(snapshot(std::hint::black_box(&world), 1.0));
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    times.sort_by(f64::total_cmp);
    BenchRow {
        shapes,
        vertices,
        tessellation,
        median_ms: median_sorted(&times),
    }
}

fn median_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Every combination of the three parameter lists, in row-major order.
///
/// Repetitions are interleaved round-robin across the lattice so a slow
/// stretch on a shared machine lands on every cell rather than one.
pub fn bench_lattice(
    shapes: &[usize],
    vertices: &[usize],
    tessellations: &[usize],
    reps: usize,
) -> Vec<BenchRow> {
    let mut cells = Vec::with_capacity(shapes.len() * vertices.len() * tessellations.len());
    for &s in shapes {
        for &v in vertices {
            for &i in tessellations {
                cells.push((s, v, i, synthetic_world(s, v, i)));
            }
        }
    }
    for (_, _, _, world) in &cells {
        std::hint::black_box(snapshot(world, 1.0));
    }
    let mut times = vec![Vec::with_capacity(reps.max(1)); cells.len()];
    for _ in 0..reps.max(1) {
        for ((_, _, _, world), t) in cells.iter().zip(&mut times) {
            let start = Instant::now();
            std::hint::black_box(snapshot(std::hint::black_box(world), 1.0));
            t.push(start.elapsed().as_secs_f64() * 1e3);
        }
    }
    cells
        .into_iter()
        .zip(times)
        .map(|((shapes, vertices, tessellation, _), mut t)| {
            t.sort_by(f64::total_cmp);
            BenchRow {
                shapes,
                vertices,
                tessellation,
                median_ms: median_sorted(&t),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    /// Milliseconds per unit of `s · v · i`.
    pub coefficient: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `t = c · s · v · i` through the origin.
pub fn fit_scaling_law(rows: &[BenchRow]) -> ScalingFit {
    let sxy: f64 = rows.iter().map(|r| r.work() * r.median_ms).sum();
    let sxx: f64 = rows.iter().map(|r| r.work() * r.work()).sum();
    let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mean = rows.iter().map(|r| r.median_ms).sum::<f64>() / rows.len().max(1) as f64;
    let ss_res: f64 = rows
        .iter()
        .map(|r| (r.median_ms - c * r.work()).powi(2))
        .sum();
    let ss_tot: f64 = rows.iter().map(|r| (r.median_ms - mean).powi(2)).sum();
    ScalingFit {
        coefficient: c,
        r_squared: if ss_tot > 0.0 {
            1.0 - ss_res / ss_tot
        } else {
            1.0
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Shapes,
    Vertices,
    Tessellation,
}

/// Median ratio `t(2x) / t(x)` over all row pairs that differ only by a
/// doubling of `factor`. `None` if the lattice has no such pair.
pub fn doubling_ratio(rows: &[BenchRow], factor: Factor) -> Option<f64> {
    let key = |r: &BenchRow| match factor {
        Factor::Shapes => (r.shapes, (r.vertices, r.tessellation)),
        Factor::Vertices => (r.vertices, (r.shapes, r.tessellation)),
        Factor::Tessellation => (r.tessellation, (r.shapes, r.vertices)),
    };
    let mut ratios: Vec<f64> = rows
        .iter()
        .flat_map(|a| {
            let (x, rest) = key(a);
            rows.iter()
                .filter(move |b| key(b) == (2 * x, rest))
                .map(move |b| b.median_ms / a.median_ms)
        })
        .collect();
    if ratios.is_empty() {
        return None;
    }
    ratios.sort_by(f64::total_cmp);
    Some(median_sorted(&ratios))
}

/// CSV report with header `s,v,i,median_ms`.
pub fn write_csv<W: Write>(rows: &[BenchRow], mut out: W) -> io::Result<()> {
    writeln!(out, "s,v,i,median_ms")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.6}",
            r.shapes, r.vertices, r.tessellation, r.median_ms
        )?;
    }
    Ok(())
}
