//! Error types shared across the simulator.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Configuration violates a structural invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A defining vector or matrix is degenerate (zero, or wrong rank), so a
    /// null-space basis or direction basis cannot be formed.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// The suspicious receiver's SINR floor is unreachable even with zero
    /// jamming; the monitoring constraint can never bind.
    #[error("monitoring infeasible: {0}")]
    MonitoringInfeasible(String),

    /// Mandatory probe-power leakage alone pushes the suspicious receiver
    /// below its SINR floor; no power-minimizing solution exists.
    #[error("over-jammed: {0}")]
    OverJammed(String),

    /// The power budget cannot cover the per-direction radar floors.
    #[error("radar infeasible: {0}")]
    RadarInfeasible(String),

    /// A digital combiner came out identically zero although its driving
    /// component is nonzero.
    #[error("internal consistency: {0}")]
    Internal(String),

    /// The test-side convex solver failed to converge; never silent.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
