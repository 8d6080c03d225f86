use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::geometry::CameraModel;
use crate::grid::GridSpec;
use crate::integrator::IntegratorConfig;
use crate::math::Vec3;
use crate::scalar::Real;

/// How free space is carved in step three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TracerMode {
    /// One Amanatides–Woo ray per far-plane voxel.
    #[default]
    Bundled,
    /// One Bresenham line per measurement point.
    PerPixel,
}

impl std::str::FromStr for TracerMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bundled" => Ok(Self::Bundled),
            "per_pixel" | "per-pixel" => Ok(Self::PerPixel),
            other => Err(format!("unknown tracer mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig<T> {
    /// Grid extent and resolution. The origin is replaced when a mapper is
    /// centered on its initial pose.
    pub grid: GridSpec<T>,
    pub camera: CameraModel<T>,
    pub integrator: IntegratorConfig,
    /// Range cleared by ray tracing, in meters.
    pub depth: T,
    pub tracer: TracerMode,
    pub parallelism: Parallelism,
}

impl<T: Real> PipelineConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.depth > T::zero()) {
            return Err(Error::Config(format!("depth must be positive, got {}", self.depth)));
        }
        if self.depth > self.camera.max_depth() {
            return Err(Error::Config(format!(
                "depth {} exceeds camera max_depth {}",
                self.depth,
                self.camera.max_depth()
            )));
        }
        Ok(())
    }

    /// 15×15×3 m grid of 0.15 m voxels, 320×240 camera with 85°×101° field
    /// of view and 6.5 m range, two voxels of inflation.
    pub fn standard() -> Self {
        ConfigFile::default()
            .to_pipeline_config()
            .expect("default configuration is valid")
    }
}

/// On-disk configuration, `key = value` per line (TOML).
///
/// ```text
/// grid_size_x = 15.0
/// vox_size = 0.15
/// fov_x_deg = 85.0
/// tracer_mode = "bundled"      # or "per_pixel"
/// parallelism = "sequential"   # or "data_parallel"
/// ```
///
/// Missing keys take the defaults of [`PipelineConfig::standard`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub grid_size_x: f64,
    pub grid_size_y: f64,
    pub grid_size_z: f64,
    pub vox_size: f64,
    pub fov_x_deg: f64,
    pub fov_y_deg: f64,
    pub width: usize,
    pub height: usize,
    pub depth: f64,
    /// Sensor range; defaults to `depth`.
    pub max_depth: Option<f64>,
    pub vox_inf: u32,
    pub tracer_mode: TracerMode,
    pub parallelism: Parallelism,
    pub seed: u64,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            grid_size_x: 15.0,
            grid_size_y: 15.0,
            grid_size_z: 3.0,
            vox_size: 0.15,
            fov_x_deg: 85.0,
            fov_y_deg: 101.0,
            width: 320,
            height: 240,
            depth: 6.5,
            max_depth: None,
            vox_inf: 2,
            tracer_mode: TracerMode::Bundled,
            parallelism: Parallelism::Sequential,
            seed: 0,
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_pipeline_config<T: Real>(&self) -> Result<PipelineConfig<T>> {
        let grid = GridSpec::new(
            [
                T::lit(self.grid_size_x),
                T::lit(self.grid_size_y),
                T::lit(self.grid_size_z),
            ],
            T::lit(self.vox_size),
            Vec3::zeros(),
        )?;
        let camera = CameraModel::from_degrees(
            T::lit(self.fov_x_deg),
            T::lit(self.fov_y_deg),
            self.width,
            self.height,
            T::lit(self.max_depth.unwrap_or(self.depth)),
        )?;
        let cfg = PipelineConfig {
            grid: grid.recentered(Vec3::zeros()),
            camera,
            integrator: IntegratorConfig { vox_inf: self.vox_inf },
            depth: T::lit(self.depth),
            tracer: self.tracer_mode,
            parallelism: self.parallelism,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
