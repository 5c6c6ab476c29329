use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}")]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid transmittance profile: {0}")]
    Profile(String),

    /// A zero timestamp would divide by h(0) = 0.
    #[error("zero timestamp at ({x}, {y}); intensity is unbounded")]
    Singularity { x: usize, y: usize },

    #[error("cold pixel at ({x}, {y}); fill cold pixels before reconstruction")]
    ColdPixel { x: usize, y: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Input is valid but degenerate for the requested operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("malformed file: {0}")]
    Format(String),

    #[error("unsupported format: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// `true` for failures of the underlying reader or writer.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
