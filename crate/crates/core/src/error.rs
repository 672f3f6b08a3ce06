use thiserror::Error;

/// Errors produced by the model, registry, feasibility and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("per-vehicle capacity is zero; per-packet delay is infinite")]
    InfiniteDelay,

    #[error("capacity ratio undefined: baseline capacity is zero")]
    ZeroCapacity,

    #[error("invalid application requirement `{id}`: {reason}")]
    InvalidRequirement { id: String, reason: String },

    #[error("invalid registry: {0}")]
    InvalidRegistry(String),

    #[error("invalid classifier thresholds: {0}")]
    InvalidThresholds(String),

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error("improper TDMA schedule: vehicles {a} and {b} share slot {slot} within interference reach")]
    ImproperSchedule { a: usize, b: usize, slot: usize },

    #[error("schedule covers {schedule} vehicles but the road has {vehicles}")]
    ScheduleMismatch { schedule: usize, vehicles: usize },

    #[error("TDMA collision at t={time_s} s between vehicles {a} and {b}")]
    TdmaCollision { time_s: f64, a: usize, b: usize },

    #[error("invalid backoff window: {0}")]
    InvalidBackoffWindow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
