//! Closed-form transmit power allocation and the case dispatcher.
//!
//! Two regimes, both solved in closed form over the per-direction orthogonal
//! bases `{v_jam, v_radar}`:
//!
//! * power minimization — pin the suspicious receiver's SINR to its floor
//!   with the least total power while meeting every radar floor;
//! * jamming maximization — spend the whole budget, radar floors first, the
//!   rest on jamming.
//!
//! The dispatcher solves the first, compares the resulting minimum power
//! threshold against the budget, and falls back to the second when the budget
//! is short. Wait-interval transmit vectors are identically zero in both
//! regimes.

use serde::Serialize;

use crate::beams::Beamformer;
use crate::channel::ChannelSet;
use crate::config::SystemConfig;
use crate::cx::{zeros, CVec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    PowerMin,
    JamMax,
}

/// Complete transmit-side solution for one channel realization.
#[derive(Debug, Clone)]
pub struct PowerAllocation {
    pub case_label: CaseLabel,
    /// Jamming coefficient per direction (nonnegative).
    pub p_jam: Vec<f64>,
    /// Probe coefficient per direction (nonnegative).
    pub p_radar: Vec<f64>,
    /// Assembled probe-interval digital vectors, one per direction.
    pub p_nr: Vec<CVec>,
    /// Wait-interval digital vectors; identically zero.
    pub p_nw: Vec<CVec>,
    /// Minimum total power that pins the suspicious receiver at its floor.
    /// When that floor is unreachable from above (over-jammed dispatch) this
    /// holds the radar-floor power instead.
    pub p_th: f64,
    /// Total transmit power of this allocation.
    pub p_total: f64,
    /// Set when the mandatory probe leakage alone pushes the suspicious
    /// receiver below its SINR floor.
    pub gamma_s_violated: bool,
}

/// Per-direction radar floor on the squared probe coefficient.
pub fn radar_floor_coeffs(cfg: &SystemConfig, bfs: &[Beamformer]) -> Vec<f64> {
    bfs.iter()
        .map(|bf| cfg.gamma_r * cfg.noise_rx_monitor / (bf.beta.norm_sqr() * bf.g_n))
        .collect()
}

fn mean_g_jam(bfs: &[Beamformer]) -> f64 {
    bfs.iter().map(|bf| bf.g_jam).sum::<f64>() / bfs.len() as f64
}

/// Closed-form minimum-power threshold. Kept as the single evaluation used by
/// both [`compute_p_th`] and the dispatcher so the case flip is exact.
fn p_th_formula(cfg: &SystemConfig, h2ps: f64, bfs: &[Beamformer], c2_sq: &[f64], g_jam: f64) -> f64 {
    let n = bfs.len() as f64;
    let leak_term: f64 = c2_sq.iter().zip(bfs).map(|(&c2, bf)| c2 * bf.g_radar).sum();
    let floor_term: f64 = c2_sq.iter().sum();
    (n * h2ps - n * cfg.noise_rx_d * cfg.gamma_s) / (cfg.gamma_s * g_jam)
        - cfg.lambda_r * leak_term / g_jam
        + cfg.lambda_r * floor_term
}

/// Assemble the per-direction probe-interval vectors from the coefficients:
/// jamming component along `v_jam`, probe component along the quadrature
/// probe basis. Wait-interval vectors are zero.
pub fn assemble_tx_vectors(
    p_jam: &[f64],
    p_radar: &[f64],
    bfs: &[Beamformer],
) -> (Vec<CVec>, Vec<CVec>) {
    let m = bfs.first().map_or(0, |bf| bf.v_jam.len());
    let p_nr = bfs
        .iter()
        .zip(p_jam.iter().zip(p_radar))
        .map(|(bf, (&pj, &pr))| {
            let basis = bf.radar_assembly_basis();
            bf.v_jam
                .iter()
                .zip(&basis)
                .map(|(j, r)| pj * j + pr * r)
                .collect()
        })
        .collect();
    let p_nw = bfs.iter().map(|_| zeros(m)).collect();
    (p_nr, p_nw)
}

fn total_power_of(cfg: &SystemConfig, p_jam: &[f64], p_radar: &[f64]) -> f64 {
    cfg.lambda_r
        * p_jam
            .iter()
            .zip(p_radar)
            .map(|(&j, &r)| j * j + r * r)
            .sum::<f64>()
}

/// Power-minimizing closed form.
///
/// Every probe coefficient sits exactly on its radar floor; the jamming
/// coefficient is identical across directions and sized so the delivered
/// jamming power hits the monitoring constraint with equality.
pub fn solve_power_min(
    cfg: &SystemConfig,
    channels: &ChannelSet,
    bfs: &[Beamformer],
) -> Result<PowerAllocation> {
    let n = bfs.len() as f64;
    let h2ps = channels.h_sd.norm_sqr() * cfg.p_s;
    if h2ps <= cfg.noise_rx_d * cfg.gamma_s {
        return Err(Error::MonitoringInfeasible(format!(
            "|h_sd|^2 p_s = {h2ps:.4e} cannot reach gamma_s = {:.4e} even without jamming",
            cfg.gamma_s
        )));
    }
    let c1 = n * h2ps / cfg.gamma_s - n * cfg.noise_rx_d;
    let c2_sq = radar_floor_coeffs(cfg, bfs);
    let leak: f64 = cfg.lambda_r
        * c2_sq
            .iter()
            .zip(bfs)
            .map(|(&c2, bf)| c2 * bf.g_radar)
            .sum::<f64>();
    let required_jam = c1 - leak;
    if required_jam < 0.0 {
        return Err(Error::OverJammed(format!(
            "probe leakage {leak:.4e} already exceeds the jamming budget {c1:.4e} for gamma_s"
        )));
    }
    let g_jam = mean_g_jam(bfs);
    let pj = (required_jam / (n * cfg.lambda_r * g_jam)).sqrt();
    let p_jam = vec![pj; bfs.len()];
    let p_radar: Vec<f64> = c2_sq.iter().map(|&x| x.sqrt()).collect();
    let (p_nr, p_nw) = assemble_tx_vectors(&p_jam, &p_radar, bfs);
    let p_total = total_power_of(cfg, &p_jam, &p_radar);
    Ok(PowerAllocation {
        case_label: CaseLabel::PowerMin,
        p_jam,
        p_radar,
        p_nr,
        p_nw,
        p_th: p_th_formula(cfg, h2ps, bfs, &c2_sq, g_jam),
        p_total,
        gamma_s_violated: false,
    })
}

/// Minimum total power threshold, evaluated directly from its closed form.
/// Agrees with the total power of [`solve_power_min`]'s output.
pub fn compute_p_th(cfg: &SystemConfig, channels: &ChannelSet, bfs: &[Beamformer]) -> Result<f64> {
    let n = bfs.len() as f64;
    let h2ps = channels.h_sd.norm_sqr() * cfg.p_s;
    if h2ps <= cfg.noise_rx_d * cfg.gamma_s {
        return Err(Error::MonitoringInfeasible("gamma_s unreachable".into()));
    }
    let g_jam = mean_g_jam(bfs);
    let c2_sq = radar_floor_coeffs(cfg, bfs);
    let c1 = n * h2ps / cfg.gamma_s - n * cfg.noise_rx_d;
    let leak: f64 = cfg.lambda_r
        * c2_sq
            .iter()
            .zip(bfs)
            .map(|(&c2, bf)| c2 * bf.g_radar)
            .sum::<f64>();
    if c1 - leak < 0.0 {
        return Err(Error::OverJammed(format!(
            "probe leakage {leak:.4e} already exceeds the jamming budget {c1:.4e} for gamma_s"
        )));
    }
    Ok(p_th_formula(cfg, h2ps, bfs, &c2_sq, g_jam))
}

/// Jamming-maximizing closed form: radar floors exactly met, the remaining
/// budget split evenly across directions as jamming.
pub fn solve_jam_max(
    cfg: &SystemConfig,
    _channels: &ChannelSet,
    bfs: &[Beamformer],
) -> Result<PowerAllocation> {
    let n = bfs.len() as f64;
    let c2_sq = radar_floor_coeffs(cfg, bfs);
    let floor_sum: f64 = c2_sq.iter().sum();
    let pj_sq = cfg.p_max / (n * cfg.lambda_r) - floor_sum / n;
    if pj_sq < 0.0 {
        return Err(Error::RadarInfeasible(format!(
            "budget {:.4e} below the radar floor power {:.4e}",
            cfg.p_max,
            cfg.lambda_r * floor_sum
        )));
    }
    let p_jam = vec![pj_sq.sqrt(); bfs.len()];
    let p_radar: Vec<f64> = c2_sq.iter().map(|&x| x.sqrt()).collect();
    let (p_nr, p_nw) = assemble_tx_vectors(&p_jam, &p_radar, bfs);
    let p_total = total_power_of(cfg, &p_jam, &p_radar);
    Ok(PowerAllocation {
        case_label: CaseLabel::JamMax,
        p_jam,
        p_radar,
        p_nr,
        p_nw,
        p_th: f64::NAN, // dispatcher fills this in
        p_total,
        gamma_s_violated: false,
    })
}

/// Case dispatcher: solve the power minimization, compare its threshold with
/// the budget, and fall back to jamming maximization when the budget is
/// short. An over-jammed power minimization (probe leakage alone violates the
/// monitoring floor) also dispatches to jamming maximization, flagged.
pub fn algorithm1(
    cfg: &SystemConfig,
    channels: &ChannelSet,
    bfs: &[Beamformer],
) -> Result<PowerAllocation> {
    match solve_power_min(cfg, channels, bfs) {
        Ok(alloc) => {
            if cfg.p_max >= alloc.p_th {
                Ok(alloc)
            } else {
                let mut jm = solve_jam_max(cfg, channels, bfs)?;
                jm.p_th = alloc.p_th;
                Ok(jm)
            }
        }
        Err(Error::OverJammed(_)) => {
            let mut jm = solve_jam_max(cfg, channels, bfs)?;
            jm.gamma_s_violated = true;
            jm.p_th = cfg.lambda_r * radar_floor_coeffs(cfg, bfs).iter().sum::<f64>();
            Ok(jm)
        }
        Err(e) => Err(e),
    }
}
