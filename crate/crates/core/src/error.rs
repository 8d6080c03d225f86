use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("voxel ({x}, {y}, {z}) is outside a {dx}x{dy}x{dz} grid")]
    OutOfBounds {
        x: i64,
        y: i64,
        z: i64,
        dx: usize,
        dy: usize,
        dz: usize,
    },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid specs differ: {0}")]
    SpecMismatch(String),
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("invalid ray: {0}")]
    InvalidRay(String),
    #[error("invalid ray bundle: {0}")]
    InvalidBundle(String),
    #[error("depth image is {got_w}x{got_h}, camera expects {want_w}x{want_h}")]
    DimensionMismatch {
        got_w: usize,
        got_h: usize,
        want_w: usize,
        want_h: usize,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
