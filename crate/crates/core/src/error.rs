use crate::math::Vec3;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("integration produced a non-finite state (eta = {eta:?}, nu = {nu:?})")]
    IntegrationFault { eta: Vec3, nu: Vec3 },

    #[error("disturbance sampled out of order: expected t = {expected}, got t = {got}")]
    DisturbanceOrder { expected: f64, got: f64 },

    #[error("initial state violates obstacle {obstacle}: h(0) = {h}")]
    UnsafeStart { obstacle: usize, h: f64 },

    #[error("constraint set is infeasible")]
    Infeasible,

    #[error("malformed trajectory log: {0}")]
    Log(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
