//! One error enum for the whole crate; the CLI maps these onto exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("weighted norm unsupported: {0}")]
    UnsupportedWeight(String),
    #[error("causality budget exceeded: box length {len} < 2*(R + T) = {need} (R = {support}, T = {horizon})")]
    CausalityBudgetExceeded {
        len: f64,
        need: f64,
        support: f64,
        horizon: f64,
    },
    #[error("integrator step rejected at t = {t}: {reason}")]
    StepRejected { t: f64, reason: String },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("minimization failed: {0}")]
    MinimizationFailed(String),
    #[error("support sampling empty: {0}")]
    SupportSamplingEmpty(String),
    #[error("finite-difference stencil out of range: {0}")]
    StencilOutOfRange(String),
    #[error("grid too large for dense bilinear apply: {points} points (limit {limit})")]
    GridTooLarge { points: usize, limit: usize },
    #[error("invalid Holder triple: 1/{r} != 1/{p} + 1/{q}")]
    InvalidHolderTriple { r: f64, p: f64, q: f64 },
    #[error("insufficient jet depth: have {have}, need {need} ({what})")]
    InsufficientJetDepth {
        have: usize,
        need: usize,
        what: String,
    },
    #[error("fixed-point iteration failed to contract: {0}")]
    NonConvergence(String),
    #[error("tail fit inconclusive: {0}")]
    TailFitInconclusive(String),
    #[error("run not converged: {0}")]
    NotConverged(String),
    #[error("half-wave convention mismatch: {0}")]
    ConventionMismatch(String),
    #[error("missing artifact: {0}")]
    MissingArtifact(String),
    #[error("certification missing: {0}")]
    CertificationMissing(String),
    #[error("config parse error: {0}")]
    ParseError(String),
    #[error("config validation error: {0}")]
    ValidationError(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
