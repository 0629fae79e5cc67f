use std::path::PathBuf;

use thiserror::Error;

/// Error type shared by every module of the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Output volume at or below the excluded-volume floor of the active model.
    #[error("domain error: Q = {q} is not above the excluded-volume floor b = {b}")]
    VolumeFloor { q: f64, b: f64 },

    /// Other equation-of-state domain violations (non-positive stability, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// An iterative solve stopped without reaching its target residual.
    #[error("{what} did not converge: last residual {residual:e}")]
    Convergence { what: String, residual: f64 },

    /// Maxwell construction requested above the critical stability.
    #[error("stability I = {i} is supercritical (critical stability I_c = {i_c}); no coexistence curve exists there")]
    Supercritical { i: f64, i_c: f64 },

    /// The isotherm has no price window with three volume roots.
    #[error("no coexistence at I = {i}: the isotherm has no three-root price window")]
    NoCoexistence { i: f64 },

    /// Liquidity- and income-branch volumes coincide (critical degeneracy).
    #[error("degenerate coexistence point at Q = {q}: branch volumes coincide")]
    DegeneratePoint { q: f64 },

    /// Query outside the I-range covered by a built diagram.
    #[error("stability I = {i} outside the diagram range [{min}, {max}]")]
    StabilityRange { i: f64, min: f64, max: f64 },

    #[error("unknown {direction} symbol {symbol:?}; available: {available}")]
    UnknownSymbol {
        symbol: String,
        direction: &'static str,
        available: String,
    },

    /// Malformed JSON in a config file.
    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// A key the config schema does not define.
    #[error("unknown config key: {0}")]
    ConfigUnknownKey(String),

    /// A config value violating a documented constraint.
    #[error("config validation error: {0}")]
    ConfigInvalid(String),

    /// Failure of one stage of the diagram assembly.
    #[error("diagram build failed at the {stage} stage: {source}")]
    Build {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// Extra location context attached to an inner error.
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("render error: {0}")]
    Render(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn ctx(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, unwrapping build/context layers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Build { source, .. } | Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
