//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("no frame files found in {0}")]
    EmptyDirectory(PathBuf),

    #[error("need >= 2 frames, found {found}")]
    TooFewFrames { found: usize },

    #[error("{file}: frame is {found_w}x{found_h}, expected {expected_w}x{expected_h}")]
    MixedDimensions {
        file: PathBuf,
        expected_w: u32,
        expected_h: u32,
        found_w: u32,
        found_h: u32,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel support radius {radius} exceeds cap {cap}; check lambda/sigma/gamma")]
    KernelRadiusExceedsCap { radius: usize, cap: usize },

    #[error("kernel side {kernel} does not fit in frame {width}x{height}")]
    KernelExceedsFrame {
        kernel: usize,
        width: u32,
        height: u32,
    },

    #[error("roi point ({u}, {v}) outside frame {width}x{height}")]
    RoiOutOfBounds { u: u32, v: u32, width: u32, height: u32 },

    #[error("no DFT bin falls inside the band fc={fc_hz} Hz, b={b_hz} Hz (resolution {df_hz} Hz); band too narrow for this record length")]
    EmptyBand { fc_hz: f64, b_hz: f64, df_hz: f64 },

    #[error("all {0} roi points fell below the reliability threshold; texture or lighting is unusable")]
    AllPointsMasked(usize),

    #[error("point {index} is masked as unreliable")]
    MaskedPoint { index: usize },

    #[error("signal lengths differ: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },

    #[error("mode count mismatch: baseline has {baseline}, test has {test}")]
    ModeCountMismatch { baseline: usize, test: usize },

    #[error("shape has zero norm")]
    ZeroNormShape,

    #[error("no detectable edge in {dropped} of {total} columns; input contrast may be too low (consider contrast enhancement)")]
    InsufficientEdges { dropped: usize, total: usize },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
