use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {value} ({reason})")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("detuning too close to resonance: |Δ|/Γ = {detuning_over_gamma:e} (must be ≥ {guard:e})")]
    Resonance { detuning_over_gamma: f64, guard: f64 },

    #[error("degenerate frequencies: |Δ − Z|/Γ = {value:e} (must be ≥ {guard:e})")]
    DegenerateFrequency { value: f64, guard: f64 },

    #[error("Laguerre polynomial domain error: p = {p}, alpha = {alpha} (both must be ≥ 0)")]
    LaguerreDomain { p: i64, alpha: i64 },

    #[error("unknown preset `{name}`; available presets: {}", available.join(", "))]
    UnknownPreset { name: String, available: Vec<&'static str> },

    #[error("preset not available: {reason}")]
    PresetUnavailable { name: String, reason: &'static str },

    #[error(
        "quadrature oracle infeasible: max(|Δ|, Z)/Γ' = {ratio:e} exceeds {limit:e}; \
         use desk-scale parameters (e.g. the `desk_synthetic` preset)"
    )]
    OracleInfeasible { ratio: f64, limit: f64 },

    #[error("quadrature did not reach rel_tol = {rel_tol:e}: estimate {estimate:e}, achieved {achieved:e}")]
    NoConvergence { estimate: f64, achieved: f64, rel_tol: f64 },

    #[error("correction ratio undefined at r = {r}: Ω(r) = 0")]
    UndefinedRatio { r: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("curve has no plottable points")]
    EmptyCurve,

    #[error("invalid term selection `{0}`: expected digits from {{1,2,3}}, e.g. `1,2,3` or `1`")]
    InvalidTerms(String),

    #[error("configuration error in {path}: {source}")]
    Config {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
