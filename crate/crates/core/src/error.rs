use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    ConstraintViolation(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("nonlinear solve did not converge after {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("fit window [{lo:.3}, {hi:.3}] spans only {decades:.3} decades")]
    FitWindowTooSmall { lo: f64, hi: f64, decades: f64 },

    #[error("cut-off support leaves [pi/9, 8pi/9]: {0}")]
    SupportViolation(String),

    #[error("chart degenerate near the axis: {0}")]
    AxisDegeneracy(String),

    #[error("quadrature tail not converged: relative change {0:e}")]
    TailNotConverged(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("Sobolev order {requested} exceeds resolved order {available}")]
    OrderTooHigh { requested: usize, available: usize },

    #[error("empty history")]
    EmptyHistory,

    #[error("density outside the admissible range: {0}")]
    DensityBound(String),

    #[error("time step {dt:e} exceeds the stability limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("density lost positivity at node {node} (t = {t})")]
    PositivityLoss { node: usize, t: f64 },

    #[error("run did not finish: {0}")]
    DidNotFinish(String),

    #[error("config parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
