use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use voxgrid_core::geometry::io::{read_depth_image, read_point_cloud};
use voxgrid_core::grid::write_dump;
use voxgrid_core::{
    ConfigFile, LocalMapper, MeasurementFrame, Parallelism, PipelineConfig, PipelineStats, TracerMode, Vec3, VoxelState,
};
use voxgrid_simbench::sweeps::{DEFAULT_GRID_DIMS, DEFAULT_POINT_COUNTS, DEFAULT_RAY_HALF_WIDTHS};
use voxgrid_simbench::{
    camera_pose, compare_methods, render_depth, sweep_points_benchmark, sweep_rays_benchmark, sweep_voxels_benchmark,
    BenchmarkReport, Scene, SweepOptions, TimingOptions, Trajectory,
};

#[derive(Parser)]
#[command(name = "voxgrid", version, about = "Local voxel grid mapping benchmarks")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Populate time against point count.
    BenchPoints {
        #[command(flatten)]
        common: Common,
        /// Comma-separated point counts.
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<usize>>,
    },
    /// Trace time against ray count (square bundles).
    BenchRays {
        #[command(flatten)]
        common: Common,
        /// Comma-separated bundle half-widths in voxels.
        #[arg(long, value_delimiter = ',')]
        half_widths: Option<Vec<u32>>,
    },
    /// Merge time against grid size.
    BenchVoxels {
        #[command(flatten)]
        common: Common,
    },
    /// Bundled against per-pixel tracing on a rendered sequence.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// Integrate frames and optionally dump the local grid.
    Run {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_enum)]
        tracer: Option<Tracer>,
        /// Write the final local grid here.
        #[arg(long)]
        dump_grid: Option<PathBuf>,
        /// Camera-frame point cloud (`x y z` per line) instead of a scene.
        #[arg(long, conflicts_with = "depth")]
        cloud: Option<PathBuf>,
        /// Depth image (.pgm in millimeters or .pfm in meters) instead of a scene.
        #[arg(long)]
        depth: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML configuration; missing keys take the standard values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, default_value_t = 5)]
    warmup: usize,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
}

#[derive(Args)]
struct SceneArgs {
    /// `empty`, `wall`, `box-field`, or a scene file.
    #[arg(long, default_value = "wall")]
    scene: String,
    #[arg(long)]
    frames: Option<usize>,
    /// Camera position `x,y,z` for a stationary run.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    position: Option<Vec<f64>>,
    /// Camera heading in degrees from +x toward +y.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    yaw_deg: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sequential,
    Parallel,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tracer {
    Bundled,
    PerPixel,
}

fn load_config(common: &Common) -> Result<(PipelineConfig<f64>, u64)> {
    let file = match &common.config {
        Some(p) => ConfigFile::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => ConfigFile::default(),
    };
    let mut cfg: PipelineConfig<f64> = file.to_pipeline_config()?;
    if let Some(m) = common.mode {
        cfg.parallelism = match m {
            Mode::Sequential => Parallelism::Sequential,
            Mode::Parallel => Parallelism::DataParallel,
        };
    }
    Ok((cfg, common.seed.unwrap_or(file.seed)))
}

fn sweep_options(common: &Common, cfg: &PipelineConfig<f64>, seed: u64) -> SweepOptions {
    SweepOptions {
        timing: TimingOptions {
            warmup: common.warmup,
            iterations: common.iterations,
        },
        mode: cfg.parallelism,
        seed,
    }
}

fn write_report(report: &BenchmarkReport, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => report.write_csv(File::create(p).with_context(|| format!("creating {}", p.display()))?)?,
        None => report.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn trajectory(args: &SceneArgs, default_frames: usize) -> Trajectory {
    let frames = args.frames.unwrap_or(default_frames);
    match &args.position {
        Some(p) => Trajectory::stationary(
            camera_pose(Vec3::new(p[0], p[1], p[2]), args.yaw_deg.to_radians()),
            frames,
        ),
        None if frames <= 1 => Trajectory::stationary(camera_pose(Vec3::zeros(), args.yaw_deg.to_radians()), frames),
        None => Trajectory::sweep(frames),
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Command::BenchPoints { common, counts } => {
            let (cfg, seed) = load_config(&common)?;
            let counts = counts.unwrap_or_else(|| DEFAULT_POINT_COUNTS.to_vec());
            let report = sweep_points_benchmark(&cfg, &counts, &sweep_options(&common, &cfg, seed))?;
            write_report(&report, common.out.as_deref())
        }
        Command::BenchRays { common, half_widths } => {
            let (cfg, seed) = load_config(&common)?;
            let hw = half_widths.unwrap_or_else(|| DEFAULT_RAY_HALF_WIDTHS.to_vec());
            let report = sweep_rays_benchmark(&cfg, &hw, &sweep_options(&common, &cfg, seed))?;
            write_report(&report, common.out.as_deref())
        }
        Command::BenchVoxels { common } => {
            let (cfg, seed) = load_config(&common)?;
            let report = sweep_voxels_benchmark(&cfg, &DEFAULT_GRID_DIMS, &sweep_options(&common, &cfg, seed))?;
            write_report(&report, common.out.as_deref())
        }
        Command::Compare { common, scene } => {
            let (cfg, seed) = load_config(&common)?;
            let world = Scene::from_name(&scene.scene, seed)?;
            let traj = trajectory(&scene, 30);
            let cmp = compare_methods(&cfg, &world, &traj)?;
            let a = &cmp.agreement;
            eprintln!(
                "frames={} occupied_equal={} bundled_free={} per_pixel_free={} free_ratio={:.4} \
                 equal_state_fraction={:.4} local_equal_state_fraction={:.4} trace_speedup={:.2}",
                traj.len(),
                a.occupied_sets_equal(),
                a.bundled_free(),
                a.per_pixel_free(),
                a.free_ratio(),
                a.equal_state_fraction(),
                a.local_equal_state_fraction,
                cmp.trace_speedup()
            );
            write_report(&cmp.report, common.out.as_deref())
        }
        Command::Run {
            common,
            scene,
            tracer,
            dump_grid,
            cloud,
            depth,
        } => {
            let (mut cfg, seed) = load_config(&common)?;
            if let Some(t) = tracer {
                cfg.tracer = match t {
                    Tracer::Bundled => TracerMode::Bundled,
                    Tracer::PerPixel => TracerMode::PerPixel,
                };
            }
            let traj = trajectory(&scene, 1);
            if traj.is_empty() {
                bail!("--frames must be at least 1");
            }
            let mut mapper = LocalMapper::new(cfg, traj.poses[0].translation())?;
            let mut stats = Vec::with_capacity(traj.len());
            if cloud.is_some() || depth.is_some() {
                let pose = traj.poses[0];
                let frame = match (&cloud, &depth) {
                    (Some(p), _) => MeasurementFrame::from_cloud(
                        read_point_cloud(p).with_context(|| format!("reading {}", p.display()))?,
                        pose,
                    ),
                    (None, Some(p)) => MeasurementFrame::from_depth(
                        read_depth_image(p).with_context(|| format!("reading {}", p.display()))?,
                        pose,
                    ),
                    (None, None) => unreachable!(),
                };
                stats.push(mapper.integrate(&frame)?);
            } else {
                let world = Scene::from_name(&scene.scene, seed)?;
                for (k, pose) in traj.poses.iter().enumerate() {
                    let img = render_depth(&world, pose, &cfg.camera);
                    let frame = MeasurementFrame::from_depth(img, *pose).with_timestamp(traj.timestamp(k));
                    stats.push(mapper.integrate(&frame)?);
                }
            }
            write_frame_stats(&stats, common.out.as_deref())?;
            let counts = mapper.local_grid().state_counts();
            eprintln!(
                "local grid: unknown={} free={} occupied={}",
                counts[VoxelState::Unknown as usize],
                counts[VoxelState::Free as usize],
                counts[VoxelState::Occupied as usize]
            );
            if let Some(p) = dump_grid {
                let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                write_dump(mapper.local_grid(), io::BufWriter::new(f))?;
            }
            Ok(())
        }
    }
}

/// One row per frame: `frame,populate_us,trace_us,merge_us,shift_us,rays,occupied,freed`.
fn write_frame_stats(stats: &[PipelineStats], out: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "frame",
        "populate_us",
        "trace_us",
        "merge_us",
        "shift_us",
        "rays",
        "occupied",
        "freed",
    ])?;
    for (k, s) in stats.iter().enumerate() {
        w.write_record([
            k.to_string(),
            format!("{:.3}", s.populate_us),
            format!("{:.3}", s.trace_us),
            format!("{:.3}", s.merge_us),
            format!("{:.3}", s.shift_us),
            s.trace.rays_traced.to_string(),
            s.occupied.to_string(),
            s.freed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
