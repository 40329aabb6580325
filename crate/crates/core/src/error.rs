use crate::grid::Parity;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expected {expected:?} parity, found {found:?}")]
    ParityMismatch { expected: Parity, found: Parity },

    #[error("odd-parity boundary rows are not zero (largest magnitude {magnitude:e}, field scale {scale:e})")]
    ParityViolation { magnitude: f64, scale: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("vertical mode k = 0 is not allowed for sine-parity quantities")]
    ZeroMode,

    #[error("time step {dt} exceeds the advective limit; admissible dt is {admissible}")]
    CflViolation { dt: f64, admissible: f64 },

    #[error("non-finite coefficient at mode (j = {j}, k = {k}) at t = {t}")]
    NonFinite { j: i64, k: usize, t: f64 },

    #[error("non-positive value {value:e} at t = {t} inside the fit window")]
    NonPositive { t: f64, value: f64 },

    #[error("fit window holds {found} samples; at least {required} are needed")]
    TooFewSamples { found: usize, required: usize },

    #[error("window [{t_min}, {t_max}] is too short: a span of at least {required_ratio}x is required")]
    WindowTooShort {
        t_min: f64,
        t_max: f64,
        required_ratio: f64,
    },

    #[error("malformed snapshot (line {line}): {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
