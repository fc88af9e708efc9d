use thiserror::Error;

/// Everything that can go wrong inside the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no sign change of the target function on [{lo}, {hi}]")]
    Bracket { lo: String, hi: String },

    #[error("pole of the connection coefficient near E = {energy}")]
    Pole { energy: String },

    #[error("truncation not valid: {0}")]
    Truncation(String),

    #[error("contour geometry: {0}")]
    Geometry(String),

    #[error("newton iteration did not converge after {iterations} steps (last |step| = {last_step})")]
    Divergence { iterations: usize, last_step: String },

    #[error("iterate left the validated disk |z| <= {radius}")]
    Radius { radius: f64 },

    #[error("normalisation integral vanishes (|norm| = {0})")]
    DegenerateNorm(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Failures while decoding one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Table { line: usize, msg: String },

    #[error("not a finite decimal number: {0:?}")]
    Number(String),

    #[error("bad list {input:?}: {msg}")]
    List { input: String, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
