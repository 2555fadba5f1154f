//! Per-direction analog beamformers, rank-1 null-space bases, scalar channel
//! gains, and the orthogonal direction bases that drive the closed-form power
//! allocation.

use num_complex::Complex64;

use crate::channel::{steering_vector, ChannelSet, Codebook, DirectionGrid};
use crate::config::SystemConfig;
use crate::cx::{cdot, norm, norm_sq, scale, tdot, CVec, ColMat};
use crate::error::{Error, Result};
use crate::parallel::map_indexed;

/// Everything the pipeline needs about one probe direction.
#[derive(Debug, Clone)]
pub struct Beamformer {
    /// Grid index of the probed direction.
    pub dir: usize,
    /// Codeword indices driving the transmit (jamming) columns.
    pub tx_idx: Vec<usize>,
    /// Codeword indices driving the receive (eavesdropping) columns.
    pub rx_idx: Vec<usize>,
    /// Analog transmit beamformer, N x M; column M is the conjugate steering
    /// vector of the probed direction.
    pub u_tx: ColMat,
    /// Analog receive beamformer, N x M; column M is the steering vector of
    /// the probed direction.
    pub u_rx: ColMat,
    /// Null-space basis separating the suspicious signal from the radar echo
    /// (orthonormal, M x (M-1)).
    pub z_s: ColMat,
    /// Null-space basis separating the radar echo from the suspicious signal
    /// (orthonormal, M x (M-1)).
    pub z_r: ColMat,
    /// Radar combining gain: squared amplitude delivered through the whole
    /// receive chain (echo projection plus null-space combining) by a unit
    /// coefficient on the probe direction basis.
    pub g_n: f64,
    /// Squared norm of the transmit-projected jamming channel.
    pub g_sum: f64,
    /// Squared magnitude of the probe column's coupling into the jamming
    /// channel (the leakage term).
    pub g_radar: f64,
    /// Squared norm of the jamming-only part; `g_sum = g_radar + g_jam`.
    pub g_jam: f64,
    /// Normalized transmit-projected jamming channel.
    pub v_sum: CVec,
    /// Probe direction basis, phased so the decomposition of `v_sum` over
    /// `{v_jam, v_radar}` has real nonnegative coefficients.
    pub v_radar: CVec,
    /// Jamming direction basis (probe coordinate zeroed).
    pub v_jam: CVec,
    /// Completion of `v_sum` to an orthonormal pair inside the span of
    /// `{v_jam, v_radar}`.
    pub v_new: CVec,
    /// Unit phasor applied to the probe component at assembly time so that
    /// its jamming-channel contribution lands in quadrature with the jamming
    /// component (energies add without a cross term).
    pub radar_phase: Complex64,
    /// Probing gain factor of this direction.
    pub beta: Complex64,
}

/// Rank the codewords by correlation magnitude with `x`, strongest first,
/// skipping `exclude`; exact ties resolve to the lower index.
fn rank_codewords(correlations: &[Complex64], exclude: usize, keep: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..correlations.len()).filter(|&k| k != exclude).collect();
    order.sort_by(|&a, &b| {
        correlations[b]
            .norm_sqr()
            .total_cmp(&correlations[a].norm_sqr())
            .then(a.cmp(&b))
    });
    order.truncate(keep);
    order
}

/// Indices of the M-1 transmit codewords for direction `dir`: the strongest
/// correlators with the jamming channel, excluding the codeword that equals
/// the probe column (the mirror direction), which would duplicate it.
pub fn select_tx_indices(
    codebook: &Codebook,
    grid: &DirectionGrid,
    h_ed: &[Complex64],
    dir: usize,
    m: usize,
) -> Vec<usize> {
    let corr = codebook.correlations(h_ed);
    rank_codewords(&corr, grid.mirror(dir), m - 1)
}

/// Indices of the M-1 receive codewords for direction `dir`: the strongest
/// correlators with the eavesdropping channel, excluding the probe codeword
/// itself.
pub fn select_rx_indices(
    codebook: &Codebook,
    h_se: &[Complex64],
    dir: usize,
    m: usize,
) -> Vec<usize> {
    let corr = codebook.correlations(h_se);
    rank_codewords(&corr, dir, m - 1)
}

/// Assemble the N x M analog transmit beamformer for `dir`.
pub fn select_tx_codewords(
    codebook: &Codebook,
    grid: &DirectionGrid,
    h_ed: &[Complex64],
    dir: usize,
    cfg: &SystemConfig,
) -> ColMat {
    let idx = select_tx_indices(codebook, grid, h_ed, dir, cfg.n_rf);
    let mut cols: Vec<CVec> = idx.iter().map(|&k| codebook.col(k).to_vec()).collect();
    cols.push(steering_vector(grid, dir, cfg).iter().map(|z| z.conj()).collect());
    ColMat::from_cols(cols)
}

/// Assemble the N x M analog receive beamformer for `dir`.
pub fn select_rx_codewords(
    codebook: &Codebook,
    grid: &DirectionGrid,
    h_se: &[Complex64],
    dir: usize,
    cfg: &SystemConfig,
) -> ColMat {
    let idx = select_rx_indices(codebook, h_se, dir, cfg.n_rf);
    let mut cols: Vec<CVec> = idx.iter().map(|&k| codebook.col(k).to_vec()).collect();
    cols.push(steering_vector(grid, dir, cfg));
    ColMat::from_cols(cols)
}

const RANK1_REL_TOL: f64 = 1e-6;

/// Orthonormal basis of the orthogonal complement of a nonzero vector,
/// via Householder completion. Deterministic: each basis column is phased so
/// its first nonzero component is real positive.
pub fn null_space_rank1_vec(d: &[Complex64]) -> Result<ColMat> {
    let m = d.len();
    let dn = norm(d);
    if !(dn > 0.0) || !dn.is_finite() {
        return Err(Error::DegenerateGeometry("null space of a zero vector".into()));
    }
    let q: CVec = d.iter().map(|z| z / dn).collect();
    // Householder vector v = q + phase * e_0 maps q onto the first axis; the
    // remaining columns of the reflector are an orthonormal basis of q's
    // complement.
    let phase = if q[0].norm() > 0.0 { q[0] / q[0].norm() } else { Complex64::new(1.0, 0.0) };
    let mut v = q.clone();
    v[0] += phase;
    let vn2 = norm_sq(&v);
    let mut cols = Vec::with_capacity(m - 1);
    for j in 1..m {
        // Column j of H = I - 2 v v^H / ||v||^2.
        let coef = 2.0 * v[j].conj() / vn2;
        let mut col: CVec = v.iter().map(|x| -coef * x).collect();
        col[j] += 1.0;
        cols.push(col);
    }
    // Fixed sign convention.
    for col in &mut cols {
        if let Some(first) = col.iter().find(|z| z.norm() > 1e-14) {
            let ph = first / first.norm();
            let inv = ph.conj();
            for z in col.iter_mut() {
                *z *= inv;
            }
        }
    }
    Ok(ColMat::from_cols(cols))
}

/// Orthonormal basis `Z` with `Z^H B = 0` for a rank-1 matrix `B` (columns).
/// Errors when the deflation residual shows rank above 1.
pub fn null_space_rank1_mat(b: &ColMat) -> Result<ColMat> {
    let (pivot, pivot_sq) = b
        .cols
        .iter()
        .map(|c| norm_sq(c))
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or_else(|| Error::DegenerateGeometry("empty matrix".into()))?;
    if !(pivot_sq > 0.0) {
        return Err(Error::DegenerateGeometry("null space of a zero matrix".into()));
    }
    let a = &b.cols[pivot];
    let mut resid = 0.0f64;
    let mut total = 0.0f64;
    for c in &b.cols {
        let coef = cdot(a, c) / pivot_sq;
        resid += c.iter().zip(a).map(|(x, y)| (x - coef * y).norm_sqr()).sum::<f64>();
        total += norm_sq(c);
    }
    if resid.sqrt() > RANK1_REL_TOL * total.sqrt() {
        return Err(Error::DegenerateGeometry(format!(
            "matrix rank exceeds 1 (deflation residual {:.3e})",
            resid.sqrt() / total.sqrt()
        )));
    }
    null_space_rank1_vec(a)
}

/// The four scalar gains of one direction, computed from the transmit
/// projection of the jamming channel and the radar receive chain.
pub fn compute_gains(
    u_tx: &ColMat,
    u_rx: &ColMat,
    z_r: &ColMat,
    grid: &DirectionGrid,
    dir: usize,
    h_ed: &[Complex64],
    cfg: &SystemConfig,
) -> Result<(f64, f64, f64, f64)> {
    let m = u_tx.ncols();
    let b = u_tx.h_mul(h_ed);
    let g_sum = norm_sq(&b);
    let g_radar = b[m - 1].norm_sqr();
    let g_jam: f64 = b[..m - 1].iter().map(|z| z.norm_sqr()).sum();

    let alpha = steering_vector(grid, dir, cfg);
    // Receive side of the radar chain: null-space projection of the echo
    // direction at the digital stage.
    let r = u_rx.h_mul(&alpha);
    let chain_rx = norm_sq(&z_r.h_mul(&r));
    // Transmit side: coupling of the probe basis through the echo.
    let w = u_tx.h_mul(&alpha.iter().map(|z| z.conj()).collect::<CVec>());
    let wn = norm(&w);
    if !(wn > 0.0) {
        return Err(Error::DegenerateGeometry("probe column projects to zero".into()));
    }
    let t: CVec = u_tx.cols.iter().map(|c| tdot(&alpha, c)).collect();
    let chain_tx = (tdot(&t, &w) / wn).norm_sqr();
    let g_n = chain_rx * chain_tx;
    if g_n <= 1e-12 {
        return Err(Error::DegenerateGeometry(format!(
            "radar combining gain {g_n:.3e} too small for direction {dir}"
        )));
    }
    Ok((g_n, g_sum, g_radar, g_jam))
}

/// Direction bases of one direction. `v_radar` is phased so that the
/// decomposition `v_sum = sqrt(g_jam/g_sum) v_jam + sqrt(g_radar/g_sum) v_radar`
/// holds with real nonnegative coefficients.
pub fn direction_bases(
    u_tx: &ColMat,
    h_ed: &[Complex64],
    grid: &DirectionGrid,
    dir: usize,
    cfg: &SystemConfig,
) -> Result<(CVec, CVec, CVec, CVec)> {
    let m = u_tx.ncols();
    let b = u_tx.h_mul(h_ed);
    let g_sum = norm_sq(&b);
    if !(g_sum > 0.0) {
        return Err(Error::DegenerateGeometry("jamming channel projects to zero".into()));
    }
    let v_sum: CVec = b.iter().map(|z| z / g_sum.sqrt()).collect();

    let mut bj = b.clone();
    bj[m - 1] = Complex64::new(0.0, 0.0);
    let g_jam = norm_sq(&bj);
    if !(g_jam > 0.0) {
        return Err(Error::DegenerateGeometry(
            "jamming part of the projected channel is zero".into(),
        ));
    }
    let v_jam: CVec = bj.iter().map(|z| z / g_jam.sqrt()).collect();

    let alpha_conj: CVec = steering_vector(grid, dir, cfg).iter().map(|z| z.conj()).collect();
    let w = u_tx.h_mul(&alpha_conj);
    let wn = norm(&w);
    if !(wn > 0.0) {
        return Err(Error::DegenerateGeometry("probe direction projects to zero".into()));
    }
    let raw: CVec = w.iter().map(|z| z / wn).collect();
    let c = b[m - 1];
    let v_radar = if c.norm() > 0.0 { scale(&raw, c / c.norm()) } else { raw };

    let g_radar = c.norm_sqr();
    // v_new = -sqrt(g_radar / g_jam) v_sum + sqrt(g_sum / g_jam) v_radar.
    let a1 = Complex64::new(-(g_radar / g_jam).sqrt(), 0.0);
    let a2 = Complex64::new((g_sum / g_jam).sqrt(), 0.0);
    let v_new: CVec = v_sum
        .iter()
        .zip(&v_radar)
        .map(|(s, r)| a1 * s + a2 * r)
        .collect();
    Ok((v_sum, v_radar, v_jam, v_new))
}

impl Beamformer {
    /// Build the full per-direction structure for `dir`.
    pub fn build(
        cfg: &SystemConfig,
        grid: &DirectionGrid,
        codebook: &Codebook,
        channels: &ChannelSet,
        dir: usize,
    ) -> Result<Self> {
        let corr_ed = codebook.correlations(&channels.h_ed);
        let corr_se = codebook.correlations(&channels.h_se);
        Self::build_cached(cfg, grid, codebook, channels, dir, &corr_ed, &corr_se)
    }

    /// As [`Beamformer::build`] with the codebook correlations of both
    /// channels precomputed; they are shared across directions, which keeps
    /// the per-realization cost quadratic in the antenna count.
    fn build_cached(
        cfg: &SystemConfig,
        grid: &DirectionGrid,
        codebook: &Codebook,
        channels: &ChannelSet,
        dir: usize,
        corr_ed: &[Complex64],
        corr_se: &[Complex64],
    ) -> Result<Self> {
        let m = cfg.n_rf;
        let tx_idx = rank_codewords(corr_ed, grid.mirror(dir), m - 1);
        let rx_idx = rank_codewords(corr_se, dir, m - 1);
        let u_tx = {
            let mut cols: Vec<CVec> = tx_idx.iter().map(|&k| codebook.col(k).to_vec()).collect();
            cols.push(steering_vector(grid, dir, cfg).iter().map(|z| z.conj()).collect());
            ColMat::from_cols(cols)
        };
        let u_rx = {
            let mut cols: Vec<CVec> = rx_idx.iter().map(|&k| codebook.col(k).to_vec()).collect();
            cols.push(steering_vector(grid, dir, cfg));
            ColMat::from_cols(cols)
        };

        let beta = channels.beta[dir];
        // Digital-stage image of the radar echo: rank-1 by construction.
        let alpha = steering_vector(grid, dir, cfg);
        let r = u_rx.h_mul(&alpha);
        let t: CVec = u_tx.cols.iter().map(|c| tdot(&alpha, c)).collect();
        let echo_mat = ColMat::from_cols(
            t.iter().map(|tj| r.iter().map(|ri| beta * ri * tj).collect()).collect(),
        );
        let z_s = null_space_rank1_mat(&echo_mat)?;
        let q = u_rx.h_mul(&channels.h_se);
        let z_r = null_space_rank1_vec(&q)?;

        let (g_n, g_sum, g_radar, g_jam) =
            compute_gains(&u_tx, &u_rx, &z_r, grid, dir, &channels.h_ed, cfg)?;
        let (v_sum, v_radar, v_jam, v_new) = direction_bases(&u_tx, &channels.h_ed, grid, dir, cfg)?;

        Ok(Self {
            dir,
            tx_idx,
            rx_idx,
            u_tx,
            u_rx,
            z_s,
            z_r,
            g_n,
            g_sum,
            g_radar,
            g_jam,
            v_sum,
            v_radar,
            v_jam,
            v_new,
            radar_phase: Complex64::new(0.0, 1.0),
            beta,
        })
    }

    /// Build beamformers for every direction, in parallel.
    pub fn build_all(
        cfg: &SystemConfig,
        grid: &DirectionGrid,
        codebook: &Codebook,
        channels: &ChannelSet,
    ) -> Result<Vec<Self>> {
        let corr_ed = codebook.correlations(&channels.h_ed);
        let corr_se = codebook.correlations(&channels.h_se);
        let results = map_indexed(grid.len(), |dir| {
            Self::build_cached(cfg, grid, codebook, channels, dir, &corr_ed, &corr_se)
        });
        results.into_iter().collect()
    }

    /// Probe-direction unit vector used at transmit assembly: the in-phase
    /// basis rotated into quadrature against the jamming component.
    pub fn radar_assembly_basis(&self) -> CVec {
        scale(&self.v_radar, self.radar_phase)
    }
}
