use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use curved::cli::{self, FrameFormat};
use curved::protocol::Transport;

/// Constant-curvature 2D geometry engine.
#[derive(Debug, Parser)]
#[command(name = "curved", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scene and write one frame file per step.
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        /// Timestep in seconds; accepts fractions such as `1/60`.
        #[arg(long, default_value = "1/60", value_parser = parse_dt)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
    /// Run a scene and overlay every K-th frame in one SVG.
    Timelapse {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value = "1/60", value_parser = parse_dt)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        every: u64,
        #[arg(long, default_value = "timelapse.svg")]
        out: PathBuf,
    },
    /// Time snapshots over a lattice of shape, vertex and tessellation counts.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        shapes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        vertices: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        tess: Vec<usize>,
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
        reps: u64,
        #[arg(long, default_value = "bench.csv")]
        out: PathBuf,
    },
    /// Stream frames and accept inputs over NDJSON.
    Serve {
        #[arg(long)]
        scene: PathBuf,
        /// `stdio` or `tcp:PORT`.
        #[arg(long, default_value = "stdio")]
        transport: Transport,
        #[arg(long, default_value = "1/60", value_parser = parse_dt)]
        dt: f64,
        /// Read a recorded input transcript and tick without wall-clock pacing.
        #[arg(long)]
        replay: bool,
        /// Minimum tick count in replay mode.
        #[arg(long, default_value_t = 0, requires = "replay")]
        ticks: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Ppm,
}

fn parse_dt(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|e| format!("{e}"))?;
            let d: f64 = d.trim().parse().map_err(|e| format!("{e}"))?;
            n / d
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("timestep must be positive, got `{s}`"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            scene,
            dt,
            steps,
            out,
            format,
        } => {
            let format = match format {
                Format::Svg => FrameFormat::Svg,
                Format::Ppm => FrameFormat::Ppm,
            };
            cli::run_simulate(&scene, dt, steps, &out, format)
        }
        Command::Timelapse {
            scene,
            dt,
            steps,
            every,
            out,
        } => cli::run_timelapse(&scene, dt, steps, every as usize, &out),
        Command::Bench {
            shapes,
            vertices,
            tess,
            reps,
            out,
        } => cli::run_bench(&shapes, &vertices, &tess, reps as usize, &out),
        Command::Serve {
            scene,
            transport,
            dt,
            replay,
            ticks,
        } => cli::run_serve(&scene, transport, dt, replay.then_some(ticks)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
