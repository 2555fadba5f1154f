//! Scan-period SINRs, total transmit power, the success indicator, and
//! transmit beampatterns, all evaluated through the actual beamformer
//! matrices rather than the scalar-gain shortcuts.

use num_complex::Complex64;

use crate::beams::Beamformer;
use crate::channel::{steering_vector_at, ChannelSet, DirectionGrid};
use crate::combining::{echo_at_rf, Combiners, Scheme};
use crate::config::SystemConfig;
use crate::cx::{cdot, norm_sq, CVec};
use crate::power::PowerAllocation;

/// Outcome of one channel realization under one scheme.
#[derive(Debug, Clone)]
pub struct TrialMetrics {
    pub sinr_e: f64,
    pub sinr_d: f64,
    pub sinr_r: Vec<f64>,
    pub p_total: f64,
    pub success: bool,
    pub gamma_s_violated: bool,
}

/// Monitor-side eavesdropping SINR over one scan period.
///
/// The numerator combines the per-direction outputs coherently; the
/// denominator carries the monitor noise and, for combiners that do not null
/// it, the probe-interval radar echo power.
pub fn sinr_e(
    combiners: &Combiners,
    bfs: &[Beamformer],
    grid: &DirectionGrid,
    channels: &ChannelSet,
    alloc: &PowerAllocation,
    cfg: &SystemConfig,
) -> f64 {
    let mut signal_amp = Complex64::new(0.0, 0.0);
    let mut denom = 0.0;
    for (bf, w) in bfs.iter().zip(&combiners.ws) {
        let q = bf.u_rx.h_mul(&channels.h_se);
        let echo = echo_at_rf(bf, grid, cfg, &alloc.p_nr[bf.dir]);
        let (chan, echo_eff): (CVec, CVec) = match combiners.scheme {
            Scheme::Optimal => (bf.z_s.h_mul(&q), bf.z_s.h_mul(&echo)),
            Scheme::Mrc | Scheme::SurveillanceCentric => (q, echo),
        };
        signal_amp += cdot(w, &chan);
        denom += cfg.noise_rx_monitor * norm_sq(w) + cfg.lambda_r * cdot(w, &echo_eff).norm_sqr();
    }
    if denom == 0.0 {
        return 0.0;
    }
    cfg.p_s * signal_amp.norm_sqr() / denom
}

/// Suspicious-receiver SINR over one scan period.
pub fn sinr_d(
    channels: &ChannelSet,
    bfs: &[Beamformer],
    alloc: &PowerAllocation,
    cfg: &SystemConfig,
) -> f64 {
    let n = bfs.len() as f64;
    let mut jam = 0.0;
    for bf in bfs {
        let tx = bf.u_tx.mul(&alloc.p_nr[bf.dir]);
        jam += cfg.lambda_r * cdot(&channels.h_ed, &tx).norm_sqr();
        // Wait interval: probe coordinate of the wait vector is masked off.
        let mut pw = alloc.p_nw[bf.dir].clone();
        if let Some(last) = pw.last_mut() {
            *last = Complex64::new(0.0, 0.0);
        }
        let txw = bf.u_tx.mul(&pw);
        jam += cfg.lambda_w * cdot(&channels.h_ed, &txw).norm_sqr();
    }
    n * channels.h_sd.norm_sqr() * cfg.p_s / (jam + n * cfg.noise_rx_d)
}

/// Per-direction radar SINR. Combiners that do not null the suspicious
/// signal pay for it in the denominator.
pub fn sinr_r(
    combiners: &Combiners,
    bfs: &[Beamformer],
    grid: &DirectionGrid,
    channels: &ChannelSet,
    alloc: &PowerAllocation,
    cfg: &SystemConfig,
    dir: usize,
) -> f64 {
    let bf = &bfs[dir];
    let w = &combiners.wr[dir];
    let wn = norm_sq(w);
    if wn == 0.0 {
        return 0.0;
    }
    let echo = echo_at_rf(bf, grid, cfg, &alloc.p_nr[dir]);
    let q = bf.u_rx.h_mul(&channels.h_se);
    let (echo_eff, chan_eff): (CVec, CVec) = match combiners.scheme {
        Scheme::Optimal | Scheme::SurveillanceCentric => (bf.z_r.h_mul(&echo), bf.z_r.h_mul(&q)),
        Scheme::Mrc => (echo, q),
    };
    let signal = cdot(w, &echo_eff).norm_sqr();
    let interference = cfg.p_s * cdot(w, &chan_eff).norm_sqr();
    signal / (cfg.noise_rx_monitor * wn + interference)
}

/// Total transmit power over one scan period.
pub fn total_power(alloc: &PowerAllocation, cfg: &SystemConfig) -> f64 {
    let mut total = 0.0;
    for (pr, pw) in alloc.p_nr.iter().zip(&alloc.p_nw) {
        total += cfg.lambda_r * norm_sq(pr);
        let mut masked = pw.clone();
        if let Some(last) = masked.last_mut() {
            *last = Complex64::new(0.0, 0.0);
        }
        total += cfg.lambda_w * norm_sq(&masked);
    }
    total
}

/// Evaluate every metric for one realization under one scheme.
pub fn evaluate(
    combiners: &Combiners,
    bfs: &[Beamformer],
    grid: &DirectionGrid,
    channels: &ChannelSet,
    alloc: &PowerAllocation,
    cfg: &SystemConfig,
) -> TrialMetrics {
    let e = sinr_e(combiners, bfs, grid, channels, alloc, cfg);
    let d = sinr_d(channels, bfs, alloc, cfg);
    let r = (0..bfs.len())
        .map(|dir| sinr_r(combiners, bfs, grid, channels, alloc, cfg, dir))
        .collect();
    TrialMetrics {
        sinr_e: e,
        sinr_d: d,
        sinr_r: r,
        p_total: total_power(alloc, cfg),
        success: e >= d,
        gamma_s_violated: alloc.gamma_s_violated,
    }
}

/// Transmit beampattern of direction `dir`: gain versus a uniform sine grid.
#[derive(Debug, Clone)]
pub struct Beampattern {
    pub sin_theta: Vec<f64>,
    pub gain: Vec<f64>,
}

/// Pattern of direction `dir` for an arbitrary digital vector `p`.
pub fn beampattern_with(
    bfs: &[Beamformer],
    cfg: &SystemConfig,
    dir: usize,
    samples: usize,
    p: &[Complex64],
) -> Beampattern {
    let bf = &bfs[dir];
    let tx = bf.u_tx.mul(p);
    let n = tx.len();
    let mut sin_theta = Vec::with_capacity(samples);
    let mut gain = Vec::with_capacity(samples);
    for i in 0..samples {
        let s = -1.0 + 2.0 * i as f64 / samples as f64;
        let a = steering_vector_at(s, n, cfg);
        sin_theta.push(s);
        gain.push(cdot(&a, &tx).norm_sqr());
    }
    Beampattern { sin_theta, gain }
}

pub fn beampattern(
    alloc: &PowerAllocation,
    bfs: &[Beamformer],
    cfg: &SystemConfig,
    dir: usize,
    samples: usize,
) -> Beampattern {
    beampattern_with(bfs, cfg, dir, samples, &alloc.p_nr[dir])
}

/// Pattern of the analog stage alone: every RF chain driven at unit
/// amplitude, before any power allocation.
pub fn beampattern_unit(bfs: &[Beamformer], cfg: &SystemConfig, dir: usize, samples: usize) -> Beampattern {
    let m = bfs[dir].u_tx.ncols();
    let ones = vec![Complex64::new(1.0, 0.0); m];
    beampattern_with(bfs, cfg, dir, samples, &ones)
}

/// Indices of dominant lobes: local maxima within `threshold_db` of the peak.
pub fn dominant_lobes(pattern: &Beampattern, threshold_db: f64) -> Vec<usize> {
    let peak = pattern.gain.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Vec::new();
    }
    let floor = peak * 10f64.powf(-threshold_db / 10.0);
    let g = &pattern.gain;
    let k = g.len();
    (0..k)
        .filter(|&i| {
            let prev = g[(i + k - 1) % k];
            let next = g[(i + 1) % k];
            g[i] >= floor && g[i] >= prev && g[i] > next
        })
        .collect()
}
