//! Command implementations behind the `curved` binary.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

use crate::bench::{bench_lattice, doubling_ratio, fit_scaling_law, write_csv, Factor};
use crate::protocol::{serve, Session, Transport};
use crate::render::{compose_timelapse, snapshot, write_ppm, write_svg, FrameSnapshot};
use crate::world::{SceneConfig, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameFormat {
    Svg,
    Ppm,
}

impl FrameFormat {
    fn extension(self) -> &'static str {
        match self {
            FrameFormat::Svg => "svg",
            FrameFormat::Ppm => "ppm",
        }
    }
}

pub fn read_scene(path: &Path) -> Result<SceneConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read scene file {}", path.display()))?;
    let config = SceneConfig::from_json(&text)
        .with_context(|| format!("invalid scene file {}", path.display()))?;
    WorldState::from_config(&config)
        .with_context(|| format!("invalid scene file {}", path.display()))?;
    Ok(config)
}

fn load_world(path: &Path) -> Result<WorldState> {
    Ok(WorldState::from_config(&read_scene(path)?)?)
}

/// `steps + 1` snapshots: the initial state and one after every step.
pub fn simulate_frames(world: &mut WorldState, dt: f64, steps: usize) -> Vec<FrameSnapshot> {
    let mut frames = Vec::with_capacity(steps + 1);
    frames.push(snapshot(world, world.pixels_per_unit));
    for _ in 0..steps {
        world.step(dt);
        frames.push(snapshot(world, world.pixels_per_unit));
    }
    frames
}

/// Writes `frame_000000.<ext>` through `frame_<steps>.<ext>` into `out_dir`.
pub fn run_simulate(
    scene: &Path,
    dt: f64,
    steps: usize,
    out_dir: &Path,
    format: FrameFormat,
) -> Result<()> {
    let mut world = load_world(scene)?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    for index in 0..=steps {
        if index > 0 {
            world.step(dt);
        }
        let frame = snapshot(&world, world.pixels_per_unit);
        let path = out_dir.join(format!("frame_{index:06}.{}", format.extension()));
        let write = |path: &Path| -> Result<()> {
            let mut file = BufWriter::new(File::create(path)?);
            match format {
                FrameFormat::Svg => file.write_all(write_svg(&frame).as_bytes())?,
                FrameFormat::Ppm => write_ppm(&frame, &mut file)?,
            }
            file.flush()?;
            Ok(())
        };
        write(&path).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

pub fn run_timelapse(scene: &Path, dt: f64, steps: usize, every: usize, out: &Path) -> Result<()> {
    let mut world = load_world(scene)?;
    let frames = simulate_frames(&mut world, dt, steps);
    fs::write(out, compose_timelapse(&frames, every))
        .with_context(|| format!("cannot write {}", out.display()))
}

pub fn run_bench(
    shapes: &[usize],
    vertices: &[usize],
    tessellations: &[usize],
    reps: usize,
    out: &Path,
) -> Result<()> {
    let rows = bench_lattice(shapes, vertices, tessellations, reps);
    let mut file = BufWriter::new(
        File::create(out).with_context(|| format!("cannot write {}", out.display()))?,
    );
    write_csv(&rows, &mut file)?;
    file.flush()?;
    let fit = fit_scaling_law(&rows);
    eprintln!(
        "t = {:.3e} ms * s*v*i, R^2 = {:.4}",
        fit.coefficient, fit.r_squared
    );
    for (name, factor) in [
        ("s", Factor::Shapes),
        ("v", Factor::Vertices),
        ("i", Factor::Tessellation),
    ] {
        if let Some(r) = doubling_ratio(&rows, factor) {
            eprintln!("doubling {name}: x{r:.3}");
        }
    }
    Ok(())
}

pub fn run_serve(
    scene: &Path,
    transport: Transport,
    dt: f64,
    replay_ticks: Option<u64>,
) -> Result<()> {
    let mut session = Session::new(read_scene(scene)?)?.with_dt(dt);
    serve(&mut session, transport, replay_ticks).context("session transport failed")
}
