//! Seeded Monte Carlo estimation of the eavesdropping success probability
//! through the full pipeline.

use serde::Serialize;

use crate::beams::Beamformer;
use crate::channel::{generate_channels_with, trial_rng, ChannelSet, Codebook, DirectionGrid};
use crate::combining::{build_combiners, Scheme};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::metrics::{evaluate, TrialMetrics};
use crate::parallel::{map_indexed, map_indexed_seq};
use crate::power::{algorithm1, solve_jam_max, solve_power_min, CaseLabel, PowerAllocation};

/// How the transmit power case is chosen per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CasePolicy {
    /// Threshold dispatch between the two regimes.
    Auto,
    /// Always the power-minimizing solution, ignoring the budget.
    ForcePowerMin,
    /// Always the budget-exhausting solution.
    ForceJamMax,
}

pub fn allocate(
    cfg: &SystemConfig,
    channels: &ChannelSet,
    bfs: &[Beamformer],
    policy: CasePolicy,
) -> Result<PowerAllocation> {
    match policy {
        CasePolicy::Auto => algorithm1(cfg, channels, bfs),
        CasePolicy::ForcePowerMin => solve_power_min(cfg, channels, bfs),
        CasePolicy::ForceJamMax => solve_jam_max(cfg, channels, bfs),
    }
}

/// One full trial: channels, beamformers, allocation, combiners, metrics.
pub fn run_trial(
    cfg: &SystemConfig,
    grid: &DirectionGrid,
    codebook: &Codebook,
    scheme: Scheme,
    policy: CasePolicy,
    master_seed: u64,
    trial_index: u64,
) -> Result<(TrialMetrics, CaseLabel)> {
    let mut rng = trial_rng(master_seed, trial_index);
    let channels = generate_channels_with(cfg, &mut rng);
    let bfs = Beamformer::build_all(cfg, grid, codebook, &channels)?;
    let alloc = allocate(cfg, &channels, &bfs, policy)?;
    let combiners = build_combiners(scheme, &bfs, grid, cfg, &channels, &alloc.p_nr)?;
    let label = alloc.case_label;
    Ok((evaluate(&combiners, &bfs, grid, &channels, &alloc, cfg), label))
}

/// Aggregated Monte Carlo outcome.
///
/// The success probability conditions on feasible trials: a draw where the
/// scheme has no valid transmit solution (monitoring floor unreachable, or
/// budget below the radar floors) defines no success event. Infeasible draws
/// are counted and reported alongside.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub success_prob: f64,
    pub std_err: f64,
    pub n_trials: usize,
    pub n_success: usize,
    pub n_infeasible: usize,
    pub n_power_min: usize,
    pub n_gamma_s_violated: usize,
    /// Mean per-direction radar SINR over feasible trials, linear; NaN when
    /// every trial was infeasible.
    pub mean_sinr_r: f64,
}

impl McEstimate {
    pub fn n_feasible(&self) -> usize {
        self.n_trials - self.n_infeasible
    }

    /// Fraction of feasible trials dispatched to the power-minimizing case.
    pub fn powermin_frac(&self) -> f64 {
        if self.n_feasible() == 0 {
            f64::NAN
        } else {
            self.n_power_min as f64 / self.n_feasible() as f64
        }
    }

    pub fn infeasible_frac(&self) -> f64 {
        self.n_infeasible as f64 / self.n_trials as f64
    }
}

fn reduce(outcomes: Vec<Result<(TrialMetrics, CaseLabel)>>) -> McEstimate {
    let n_trials = outcomes.len();
    let mut n_success = 0usize;
    let mut n_infeasible = 0usize;
    let mut n_power_min = 0usize;
    let mut n_gamma = 0usize;
    let mut sinr_r_acc = 0.0;
    let mut feasible = 0usize;
    for out in outcomes {
        match out {
            Ok((m, label)) => {
                feasible += 1;
                if m.success {
                    n_success += 1;
                }
                if label == CaseLabel::PowerMin {
                    n_power_min += 1;
                }
                if m.gamma_s_violated {
                    n_gamma += 1;
                }
                sinr_r_acc += m.sinr_r.iter().sum::<f64>() / m.sinr_r.len() as f64;
            }
            Err(_) => n_infeasible += 1,
        }
    }
    let (p, se) = if feasible > 0 {
        let p = n_success as f64 / feasible as f64;
        (p, (p * (1.0 - p) / feasible as f64).sqrt())
    } else {
        (f64::NAN, f64::NAN)
    };
    McEstimate {
        success_prob: p,
        std_err: se,
        n_trials,
        n_success,
        n_infeasible,
        n_power_min,
        n_gamma_s_violated: n_gamma,
        mean_sinr_r: if feasible > 0 { sinr_r_acc / feasible as f64 } else { f64::NAN },
    }
}

/// Estimate the success probability over independent channel draws.
/// Deterministic for a given `(cfg, scheme, policy, n_trials, master_seed)`.
pub fn monte_carlo_success_prob(
    cfg: &SystemConfig,
    scheme: Scheme,
    policy: CasePolicy,
    n_trials: usize,
    master_seed: u64,
) -> Result<McEstimate> {
    if n_trials == 0 {
        return Err(Error::InvalidConfig("n_trials must be at least 1".into()));
    }
    cfg.validate()?;
    let grid = DirectionGrid::uniform(cfg.n_antennas);
    let codebook = Codebook::dft(&grid, cfg);
    let outcomes = map_indexed(n_trials, |i| {
        run_trial(cfg, &grid, &codebook, scheme, policy, master_seed, i as u64)
    });
    Ok(reduce(outcomes))
}

/// Sequential twin of [`monte_carlo_success_prob`], kept callable in parallel
/// builds for benchmarking; outputs are identical.
pub fn monte_carlo_success_prob_seq(
    cfg: &SystemConfig,
    scheme: Scheme,
    policy: CasePolicy,
    n_trials: usize,
    master_seed: u64,
) -> Result<McEstimate> {
    if n_trials == 0 {
        return Err(Error::InvalidConfig("n_trials must be at least 1".into()));
    }
    cfg.validate()?;
    let grid = DirectionGrid::uniform(cfg.n_antennas);
    let codebook = Codebook::dft(&grid, cfg);
    let outcomes = map_indexed_seq(n_trials, |i| {
        run_trial(cfg, &grid, &codebook, scheme, policy, master_seed, i as u64)
    });
    Ok(reduce(outcomes))
}
