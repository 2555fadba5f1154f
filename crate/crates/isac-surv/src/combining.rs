//! Digital receive combiners: the closed-form optimal pair and the two
//! benchmark schemes.

use num_complex::Complex64;

use crate::beams::Beamformer;
use crate::channel::{steering_vector, ChannelSet, DirectionGrid};
use crate::config::SystemConfig;
use crate::cx::{norm, norm_sq, tdot, CVec};
use crate::error::{Error, Result};

/// Receive combining scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Scheme {
    /// Closed-form optimal: matched filtering in the interference null space
    /// on both the surveillance and radar paths.
    Optimal,
    /// Maximum-ratio combining on both paths; cross-interference stays.
    Mrc,
    /// MRC on the surveillance path, null-space combining on the radar path.
    SurveillanceCentric,
}

/// Per-direction digital combiners for one scheme.
///
/// Under `Optimal` (and the radar side of `SurveillanceCentric`) the vectors
/// live in the (M-1)-dimensional null-space coordinates; under MRC they live
/// in the full M-dimensional RF-chain space. Combiners are stored unnormalized
/// exactly as the closed forms produce them; every SINR they enter is scale
/// invariant.
#[derive(Debug, Clone)]
pub struct Combiners {
    pub scheme: Scheme,
    pub ws: Vec<CVec>,
    pub wr: Vec<CVec>,
}

/// Digital-stage image of the radar echo for direction `bf.dir` given the
/// probe-interval transmit vector: `U_rx^H A U_tx p`, computed through the
/// rank-1 action of the probing channel.
pub fn echo_at_rf(
    bf: &Beamformer,
    grid: &DirectionGrid,
    cfg: &SystemConfig,
    p_nr: &[Complex64],
) -> CVec {
    let alpha = steering_vector(grid, bf.dir, cfg);
    let tx_gain: Complex64 = bf
        .u_tx
        .cols
        .iter()
        .zip(p_nr)
        .map(|(c, p)| tdot(&alpha, c) * p)
        .sum();
    let r = bf.u_rx.h_mul(&alpha);
    r.iter().map(|ri| bf.beta * tx_gain * ri).collect()
}

/// Optimal surveillance combiners: each direction's equivalent combiner is
/// the null-space-projected channel over the monitor noise power. Errors if
/// the stacked projected channel is identically zero.
pub fn optimal_surveillance_combiner(
    bfs: &[Beamformer],
    channels: &ChannelSet,
    cfg: &SystemConfig,
) -> Result<Vec<CVec>> {
    let mut total = 0.0;
    let mut out = Vec::with_capacity(bfs.len());
    for bf in bfs {
        let q = bf.u_rx.h_mul(&channels.h_se);
        let h_tilde = bf.z_s.h_mul(&q);
        total += norm_sq(&h_tilde);
        out.push(h_tilde.iter().map(|z| z / cfg.noise_rx_monitor).collect());
    }
    if !(total > 0.0) {
        return Err(Error::DegenerateGeometry(
            "surveillance channel entirely nulled".into(),
        ));
    }
    Ok(out)
}

/// Optimal radar combiner for one direction given its probe-interval transmit
/// vector.
pub fn optimal_radar_combiner(
    bf: &Beamformer,
    grid: &DirectionGrid,
    cfg: &SystemConfig,
    p_nr: &[Complex64],
) -> Result<CVec> {
    let echo = echo_at_rf(bf, grid, cfg, p_nr);
    let w: CVec = bf
        .z_r
        .h_mul(&echo)
        .iter()
        .map(|z| z / cfg.noise_rx_monitor)
        .collect();
    let radar_component = crate::cx::cdot(&bf.radar_assembly_basis(), p_nr).norm();
    if norm(&w) == 0.0 && radar_component > 1e-12 {
        return Err(Error::Internal(format!(
            "radar combiner vanished with probe component {radar_component:.3e} (direction {})",
            bf.dir
        )));
    }
    Ok(w)
}

/// MRC pair for one direction: normalized matched filters with no null-space
/// projection.
pub fn mrc_combiners(
    bf: &Beamformer,
    grid: &DirectionGrid,
    cfg: &SystemConfig,
    channels: &ChannelSet,
    p_nr: &[Complex64],
) -> Result<(CVec, CVec)> {
    let q = bf.u_rx.h_mul(&channels.h_se);
    let qn = norm(&q);
    if !(qn > 0.0) {
        return Err(Error::DegenerateGeometry("zero projected surveillance channel".into()));
    }
    let ws = q.iter().map(|z| z / qn).collect();
    let echo = echo_at_rf(bf, grid, cfg, p_nr);
    let en = norm(&echo);
    if !(en > 0.0) {
        return Err(Error::DegenerateGeometry("zero radar echo at the RF stage".into()));
    }
    let wr = echo.iter().map(|z| z / en).collect();
    Ok((ws, wr))
}

/// Build the combiner set for a scheme given the allocation's per-direction
/// probe-interval transmit vectors.
pub fn build_combiners(
    scheme: Scheme,
    bfs: &[Beamformer],
    grid: &DirectionGrid,
    cfg: &SystemConfig,
    channels: &ChannelSet,
    p_nr_all: &[CVec],
) -> Result<Combiners> {
    match scheme {
        Scheme::Optimal => {
            let ws = optimal_surveillance_combiner(bfs, channels, cfg)?;
            let wr = bfs
                .iter()
                .zip(p_nr_all)
                .map(|(bf, p)| optimal_radar_combiner(bf, grid, cfg, p))
                .collect::<Result<Vec<_>>>()?;
            Ok(Combiners { scheme, ws, wr })
        }
        Scheme::Mrc => {
            let mut ws = Vec::with_capacity(bfs.len());
            let mut wr = Vec::with_capacity(bfs.len());
            for (bf, p) in bfs.iter().zip(p_nr_all) {
                let (s, r) = mrc_combiners(bf, grid, cfg, channels, p)?;
                ws.push(s);
                wr.push(r);
            }
            Ok(Combiners { scheme, ws, wr })
        }
        Scheme::SurveillanceCentric => {
            let mut ws = Vec::with_capacity(bfs.len());
            let mut wr = Vec::with_capacity(bfs.len());
            for (bf, p) in bfs.iter().zip(p_nr_all) {
                let (s, _) = mrc_combiners(bf, grid, cfg, channels, p)?;
                ws.push(s);
                wr.push(optimal_radar_combiner(bf, grid, cfg, p)?);
            }
            Ok(Combiners { scheme, ws, wr })
        }
    }
}
