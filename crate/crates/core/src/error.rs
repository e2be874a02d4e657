use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model invariant was violated (parameter bounds, infeasible inventory, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The integrator left the feasible inventory polytope beyond tolerance.
    #[error("feasibility drift at t = {t}: {detail}")]
    FeasibilityDrift { t: f64, detail: String },

    /// An iterative solver exhausted its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Best-response extraction found more switching times than the configured cap.
    #[error("too many strategy switches ({count} > cap {cap}); the iteration is oscillating")]
    TooManySwitches { count: usize, cap: usize },

    /// A value function grew past the divergence bound during backward integration.
    #[error("value integration diverged at t = {t} (|V| = {magnitude:e})")]
    Divergence { t: f64, magnitude: f64 },

    #[error("singular linear system")]
    SingularSystem,

    /// The requested closed form is not available for this strategy profile.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
