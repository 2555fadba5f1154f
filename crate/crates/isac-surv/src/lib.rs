//! Simulator for a dual-function phased-array monitor that jams and decodes a
//! suspicious link while scanning probe directions with the same aperture.
//!
//! The monitor has `N` antennas and `M` RF chains. Per probe direction it
//! selects analog codewords from a DFT codebook, separates the surveillance
//! and radar paths with rank-1 null-space projections at the digital stage,
//! and allocates transmit power across a jamming direction and a probe
//! direction in closed form. Two closed-form regimes exist: minimize total
//! power while pinning the suspicious receiver's SINR to its floor, or spend
//! the whole budget maximizing jamming. A dispatcher picks the regime by
//! comparing the budget against the minimum-power threshold.
//!
//! The `analysis` module carries the analytic success-probability formulas and
//! the independent numerical machinery (quadrature, projected-gradient convex
//! solver) used to validate every closed form. The `experiments` module runs
//! seeded Monte Carlo sweeps and emits CSV/JSON tables.
//!
//! Trial loops are data-parallel via rayon when the `parallel` feature
//! (default) is enabled; disabling it yields a dependency-free sequential
//! build with identical outputs.

pub mod analysis;
pub mod beams;
pub mod channel;
pub mod combining;
pub mod config;
pub mod cx;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod parallel;
pub mod power;

pub use channel::{ChannelSet, Codebook, DirectionGrid};
pub use config::SystemConfig;
pub use error::Error;

/// Convert decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power ratio to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
