//! Scenario sweeps behind the headline figures, structured result emission,
//! and the self-verification suite.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::analysis::{
    coefficient_variant_verdict, default_verdict_grid, monte_carlo_success_prob,
    power_min_quadrature, solve_jam_max_oracle, solve_power_min_oracle,
    solve_power_min_wait_split, success_prob_power_min, CasePolicy, OracleInstance,
    ProbabilityInputs, StartPoint,
};
use crate::beams::Beamformer;
use crate::channel::{generate_channels, trial_rng, Codebook, DirectionGrid};
use crate::combining::{build_combiners, Scheme};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::metrics::{beampattern_unit, evaluate, sinr_d, sinr_r};
use crate::power::{algorithm1, compute_p_th, solve_power_min, CaseLabel};
use crate::{db_to_linear, linear_to_db};

/// Which headline figure a sweep reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FigureTag {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl fmt::Display for FigureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FigureTag::Fig4 => "fig4",
            FigureTag::Fig5 => "fig5",
            FigureTag::Fig6 => "fig6",
            FigureTag::Fig7 => "fig7",
            FigureTag::Fig8 => "fig8",
            FigureTag::Fig9 => "fig9",
        };
        f.write_str(s)
    }
}

impl FromStr for FigureTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig4" => Ok(FigureTag::Fig4),
            "fig5" => Ok(FigureTag::Fig5),
            "fig6" => Ok(FigureTag::Fig6),
            "fig7" => Ok(FigureTag::Fig7),
            "fig8" => Ok(FigureTag::Fig8),
            "fig9" => Ok(FigureTag::Fig9),
            other => Err(Error::InvalidConfig(format!("unknown figure tag: {other}"))),
        }
    }
}

/// Scheme label of a sweep: receive combining plus case policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepScheme {
    Optimal,
    Mrc,
    SurveillanceCentric,
    ForcedPowerMin,
    ForcedJamMax,
}

impl SweepScheme {
    pub fn parts(self) -> (Scheme, CasePolicy) {
        match self {
            SweepScheme::Optimal => (Scheme::Optimal, CasePolicy::Auto),
            SweepScheme::Mrc => (Scheme::Mrc, CasePolicy::Auto),
            SweepScheme::SurveillanceCentric => (Scheme::SurveillanceCentric, CasePolicy::Auto),
            SweepScheme::ForcedPowerMin => (Scheme::Optimal, CasePolicy::ForcePowerMin),
            SweepScheme::ForcedJamMax => (Scheme::Optimal, CasePolicy::ForceJamMax),
        }
    }
}

impl fmt::Display for SweepScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SweepScheme::Optimal => "optimal",
            SweepScheme::Mrc => "mrc",
            SweepScheme::SurveillanceCentric => "surveillance-centric",
            SweepScheme::ForcedPowerMin => "forced-power-min",
            SweepScheme::ForcedJamMax => "forced-jam-max",
        };
        f.write_str(s)
    }
}

impl FromStr for SweepScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(SweepScheme::Optimal),
            "mrc" => Ok(SweepScheme::Mrc),
            "surveillance-centric" => Ok(SweepScheme::SurveillanceCentric),
            "forced-power-min" => Ok(SweepScheme::ForcedPowerMin),
            "forced-jam-max" => Ok(SweepScheme::ForcedJamMax),
            other => Err(Error::InvalidConfig(format!("unknown scheme: {other}"))),
        }
    }
}

/// Which configuration field a sweep varies (values are linear).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweptParam {
    PMax,
    GammaS,
    RhoSdOverRhoSe,
    GammaR,
}

impl SweptParam {
    pub fn name(self) -> &'static str {
        match self {
            SweptParam::PMax => "p_max",
            SweptParam::GammaS => "gamma_s",
            SweptParam::RhoSdOverRhoSe => "rho_sd_over_rho_se",
            SweptParam::GammaR => "gamma_r",
        }
    }

    pub fn apply(self, cfg: &mut SystemConfig, value: f64) {
        match self {
            SweptParam::PMax => cfg.p_max = value,
            SweptParam::GammaS => cfg.gamma_s = value,
            SweptParam::RhoSdOverRhoSe => cfg.rho_sd = value * cfg.rho_se,
            SweptParam::GammaR => cfg.gamma_r = value,
        }
    }
}

/// A full sweep description; identical specs yield identical tables.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub figure_tag: FigureTag,
    pub param: SweptParam,
    /// Swept values, linear domain, ascending.
    pub values: Vec<f64>,
    pub schemes: Vec<SweepScheme>,
    pub n_trials: usize,
    pub master_seed: u64,
    pub base: SystemConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidConfig("sweep needs at least one value".into()));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("sweep values must be strictly ascending".into()));
        }
        if self.n_trials == 0 {
            return Err(Error::InvalidConfig("n_trials must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidConfig("sweep needs at least one scheme".into()));
        }
        self.base.validate()
    }

    /// Desk-scale preset for a figure tag. `fig4` has no sweep; ask
    /// [`run_beampattern`] instead.
    pub fn preset(tag: FigureTag, base: SystemConfig, n_trials: usize, master_seed: u64) -> Result<Self> {
        let n_sigma = base.n_antennas as f64 * base.noise_rx_d;
        let db_grid = |lo: i32, hi: i32, step: i32| -> Vec<f64> {
            (lo..=hi)
                .step_by(step as usize)
                .map(|db| db_to_linear(db as f64))
                .collect()
        };
        let spec = match tag {
            FigureTag::Fig4 => {
                return Err(Error::InvalidConfig(
                    "fig4 is a beampattern, not a sweep; use the beampattern runner".into(),
                ))
            }
            FigureTag::Fig5 => Self {
                figure_tag: tag,
                param: SweptParam::PMax,
                values: db_grid(-20, 30, 5).iter().map(|v| v * n_sigma).collect(),
                schemes: vec![
                    SweepScheme::Optimal,
                    SweepScheme::ForcedPowerMin,
                    SweepScheme::ForcedJamMax,
                ],
                n_trials,
                master_seed,
                base,
            },
            FigureTag::Fig6 => Self {
                figure_tag: tag,
                param: SweptParam::PMax,
                values: db_grid(-20, 30, 5).iter().map(|v| v * n_sigma).collect(),
                schemes: vec![
                    SweepScheme::Optimal,
                    SweepScheme::SurveillanceCentric,
                    SweepScheme::Mrc,
                ],
                n_trials,
                master_seed,
                base,
            },
            FigureTag::Fig7 => Self {
                figure_tag: tag,
                param: SweptParam::GammaS,
                values: db_grid(-20, 20, 5),
                schemes: vec![
                    SweepScheme::Optimal,
                    SweepScheme::SurveillanceCentric,
                    SweepScheme::Mrc,
                ],
                n_trials,
                master_seed,
                base,
            },
            FigureTag::Fig8 => Self {
                figure_tag: tag,
                param: SweptParam::RhoSdOverRhoSe,
                values: vec![1.0, db_to_linear(7.5), db_to_linear(15.0), db_to_linear(22.5), db_to_linear(30.0)],
                schemes: vec![
                    SweepScheme::Optimal,
                    SweepScheme::SurveillanceCentric,
                    SweepScheme::Mrc,
                ],
                n_trials,
                master_seed,
                base,
            },
            FigureTag::Fig9 => Self {
                figure_tag: tag,
                param: SweptParam::GammaR,
                values: db_grid(0, 25, 5),
                schemes: vec![SweepScheme::Optimal],
                n_trials,
                master_seed,
                base,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// One sweep point for one scheme.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub figure_tag: FigureTag,
    pub scheme: SweepScheme,
    pub param_name: &'static str,
    pub param_value_linear: f64,
    pub param_value_db: f64,
    pub success_prob: f64,
    pub std_err: f64,
    pub case_powermin_frac: f64,
    pub infeasible_frac: f64,
    pub mean_sinr_r_db: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultTable {
    pub version: String,
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

pub const CSV_HEADER: &str = "figure_tag,scheme,param_name,param_value_linear,param_value_db,success_prob,std_err,case_powermin_frac,infeasible_frac,mean_sinr_r_db";

impl ResultTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.figure_tag,
                r.scheme,
                r.param_name,
                r.param_value_linear,
                r.param_value_db,
                r.success_prob,
                r.std_err,
                r.case_powermin_frac,
                r.infeasible_frac,
                r.mean_sinr_r_db,
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn version_string() -> String {
    format!("isac-surv-v{}", env!("CARGO_PKG_VERSION"))
}

/// Run every (value, scheme) cell of a sweep. Each cell reuses the same
/// master seed, so schemes see identical channel draws and cross-scheme
/// comparisons are paired.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.values.len() * spec.schemes.len());
    for &value in &spec.values {
        let mut cfg = spec.base.clone();
        spec.param.apply(&mut cfg, value);
        for &scheme in &spec.schemes {
            let (combining, policy) = scheme.parts();
            let est = monte_carlo_success_prob(&cfg, combining, policy, spec.n_trials, spec.master_seed)?;
            rows.push(SweepRow {
                figure_tag: spec.figure_tag,
                scheme,
                param_name: spec.param.name(),
                param_value_linear: value,
                param_value_db: linear_to_db(value),
                success_prob: est.success_prob,
                std_err: est.std_err,
                case_powermin_frac: est.powermin_frac(),
                infeasible_frac: est.infeasible_frac(),
                mean_sinr_r_db: linear_to_db(est.mean_sinr_r),
            });
        }
    }
    Ok(ResultTable {
        version: version_string(),
        spec: spec.clone(),
        rows,
    })
}

/// Beampattern table: analog-stage gain (unit digital coefficients, the
/// pre-allocation pattern) of one pipeline realization versus sine angle.
#[derive(Debug, Clone, Serialize)]
pub struct BeampatternTable {
    pub version: String,
    pub direction: usize,
    pub seed: u64,
    pub config: SystemConfig,
    pub rows: Vec<(f64, f64)>,
}

impl BeampatternTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sin_theta,gain_db\n");
        for (s, g) in &self.rows {
            out.push_str(&format!("{s},{g}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Run the full pipeline once and emit the beampattern of `dir` (default:
/// the broadside direction, whose probe and mirror coincide).
pub fn run_beampattern(
    cfg: &SystemConfig,
    seed: u64,
    dir: Option<usize>,
    samples: usize,
) -> Result<BeampatternTable> {
    cfg.validate()?;
    let grid = DirectionGrid::uniform(cfg.n_antennas);
    let codebook = Codebook::dft(&grid, cfg);
    let channels = generate_channels(cfg, seed);
    let bfs = Beamformer::build_all(cfg, &grid, &codebook, &channels)?;
    // The allocation is not part of the emitted pattern but pipeline errors
    // must surface here rather than downstream.
    let _alloc = algorithm1(cfg, &channels, &bfs)?;
    let dir = dir.unwrap_or(cfg.n_antennas / 2);
    if dir >= cfg.n_antennas {
        return Err(Error::InvalidConfig(format!("direction {dir} out of range")));
    }
    let bp = beampattern_unit(&bfs, cfg, dir, samples);
    let rows = bp
        .sin_theta
        .iter()
        .zip(&bp.gain)
        .map(|(&s, &g)| (s, if g > 0.0 { linear_to_db(g) } else { -300.0 }))
        .collect();
    Ok(BeampatternTable {
        version: version_string(),
        direction: dir,
        seed,
        config: cfg.clone(),
        rows,
    })
}

/// Depth of the verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyDepth {
    Quick,
    Full,
}

impl FromStr for VerifyDepth {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(VerifyDepth::Quick),
            "full" => Ok(VerifyDepth::Full),
            other => Err(Error::InvalidConfig(format!("unknown depth: {other}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {:<32} worst={:<12.3e} {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.detail
            ));
        }
        out.push_str(&format!(
            "{}: {} checks, {} failed\n",
            if self.all_passed() { "OK" } else { "FAILED" },
            self.checks.len(),
            self.checks.iter().filter(|c| !c.passed).count()
        ));
        out
    }
}

fn check(name: &str, passed: bool, worst: f64, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        worst,
        detail,
    }
}

fn desk_cfg(n: usize, m: usize) -> SystemConfig {
    SystemConfig {
        n_antennas: n,
        n_rf: m,
        p_max: 100.0 * n as f64,
        ..SystemConfig::default()
    }
}

/// Oracle equivalence over synthetic regime instances of one size.
fn oracle_battery(count: usize, n_dirs: usize, m: usize, seed: u64) -> (f64, f64, f64, bool) {
    let mut rng = trial_rng(seed, 77);
    let mut worst_obj = 0.0f64;
    let mut worst_var = 0.0f64;
    let mut worst_kkt = 0.0f64;
    let mut ok = true;
    for i in 0..count {
        let inst = OracleInstance::synthetic(&mut rng, n_dirs, m);
        for case in 0..2 {
            let (cf, certified, random) = if case == 0 {
                let cf = match inst.closed_form_power_min() {
                    Ok(c) => c,
                    Err(_) => {
                        ok = false;
                        continue;
                    }
                };
                (
                    cf,
                    solve_power_min_oracle(&inst, StartPoint::ClosedForm),
                    solve_power_min_oracle(&inst, StartPoint::Random(1000 + i as u64)),
                )
            } else {
                let cf = match inst.closed_form_jam_max() {
                    Ok(c) => c,
                    Err(_) => {
                        ok = false;
                        continue;
                    }
                };
                (
                    cf,
                    solve_jam_max_oracle(&inst, StartPoint::ClosedForm),
                    solve_jam_max_oracle(&inst, StartPoint::Random(2000 + i as u64)),
                )
            };
            match (certified, random) {
                (Ok(cert), Ok(rand)) => {
                    worst_kkt = worst_kkt.max(cert.kkt_residual).max(rand.kkt_residual);
                    let scale = cf.objective.abs().max(1e-12);
                    worst_obj = worst_obj.max((rand.objective - cf.objective).abs() / scale);
                    // Variable agreement on the certified point (ties across
                    // jamming coordinates make the random-start split free).
                    for (a, b) in cert
                        .x_jam
                        .iter()
                        .chain(&cert.x_radar)
                        .zip(cf.x_jam.iter().chain(&cf.x_radar))
                    {
                        worst_var = worst_var.max((a - b).abs() / (1.0 + b.abs()));
                    }
                    // Radar bounds bind in every mode.
                    for (xr, c2) in rand.x_radar.iter().zip(&inst.c2_sq) {
                        worst_var = worst_var.max((xr - c2).abs() / (1.0 + c2.abs()));
                    }
                }
                _ => ok = false,
            }
        }
    }
    (worst_obj, worst_var, worst_kkt, ok)
}

/// Execute the oracle, identity, quadrature, and invariant batteries.
pub fn run_verification_suite(depth: VerifyDepth) -> VerificationReport {
    let full = depth == VerifyDepth::Full;
    let mut checks = Vec::new();

    // Codebook orthogonality.
    {
        let mut worst = 0.0f64;
        let sizes: &[usize] = if full { &[8, 16, 64, 128] } else { &[8, 16, 64] };
        for &n in sizes {
            let cfg = desk_cfg(n, 2);
            let grid = DirectionGrid::uniform(n);
            let cb = Codebook::dft(&grid, &cfg);
            for a in 0..n {
                for b in 0..n {
                    let ip = crate::cx::cdot(cb.col(a), cb.col(b));
                    let target = if a == b { n as f64 } else { 0.0 };
                    worst = worst.max((ip - num_complex::Complex64::new(target, 0.0)).norm());
                }
            }
        }
        checks.push(check(
            "codebook_orthogonality",
            worst < 1e-10 * 128.0,
            worst,
            "gram residual vs N*I".into(),
        ));
    }

    // Beamformer structural invariants on random channels.
    {
        let seeds = if full { 60 } else { 15 };
        let mut worst = 0.0f64;
        let mut ok = true;
        for m in [2usize, 3, 4] {
            let cfg = desk_cfg(16, m);
            let grid = DirectionGrid::uniform(16);
            let cb = Codebook::dft(&grid, &cfg);
            for seed in 0..seeds {
                let ch = generate_channels(&cfg, 40_000 + seed);
                let bfs = match Beamformer::build_all(&cfg, &grid, &cb, &ch) {
                    Ok(b) => b,
                    Err(_) => {
                        ok = false;
                        continue;
                    }
                };
                for bf in &bfs {
                    worst = worst.max(bf.z_s.orthonormality_residual());
                    worst = worst.max(bf.z_r.orthonormality_residual());
                    worst = worst.max((bf.g_sum - bf.g_radar - bf.g_jam).abs() / bf.g_sum.max(1e-30));
                    worst = worst.max(crate::cx::cdot(&bf.v_radar, &bf.v_jam).norm());
                }
            }
        }
        checks.push(check(
            "beamformer_invariants",
            ok && worst < 1e-8,
            worst,
            "null bases, gain split, basis orthogonality".into(),
        ));
    }

    // Oracle equivalence at both instance sizes.
    for (n_dirs, m, tag) in [(8usize, 2usize, "n8_m2"), (16, 3, "n16_m3")] {
        let count = if full { 200 } else { 40 };
        let (wobj, wvar, wkkt, ok) = oracle_battery(count, n_dirs, m, 7 + n_dirs as u64);
        checks.push(check(
            &format!("oracle_equivalence_{tag}"),
            ok && wobj <= 1e-5 && wvar <= 1e-4 && wkkt <= 1e-6,
            wobj.max(wvar),
            format!("{count} instances/case, worst kkt {wkkt:.2e}"),
        ));
    }

    // Wait-interval structure.
    {
        let count = if full { 50 } else { 12 };
        let mut rng = trial_rng(99, 3);
        let mut worst = 0.0f64;
        let mut ok = true;
        for _ in 0..count {
            let inst = OracleInstance::synthetic(&mut rng, 8, 3);
            match solve_power_min_wait_split(&inst) {
                Ok(sol) => {
                    let scale = sol.x_jam.iter().cloned().fold(1e-12, f64::max);
                    for &w in &sol.x_wait {
                        worst = worst.max(w / scale);
                    }
                    worst = worst.max(sol.kkt_residual);
                }
                Err(_) => ok = false,
            }
        }
        checks.push(check(
            "wait_interval_vanishes",
            ok && worst < 1e-6,
            worst,
            "wait-split optimum certified with zero wait power".into(),
        ));
    }

    // Threshold identity and the case flip.
    {
        let count = if full { 1000 } else { 200 };
        let cfg = SystemConfig::desk();
        let grid = DirectionGrid::uniform(cfg.n_antennas);
        let cb = Codebook::dft(&grid, &cfg);
        let mut worst = 0.0f64;
        let mut ok = true;
        for seed in 0..count {
            let ch = generate_channels(&cfg, 60_000 + seed);
            let bfs = match Beamformer::build_all(&cfg, &grid, &cb, &ch) {
                Ok(b) => b,
                Err(_) => continue,
            };
            match (solve_power_min(&cfg, &ch, &bfs), compute_p_th(&cfg, &ch, &bfs)) {
                (Ok(alloc), Ok(p_th)) => {
                    worst = worst.max((alloc.p_total - p_th).abs() / p_th);
                    let mut c = cfg.clone();
                    c.p_max = p_th;
                    let at = algorithm1(&c, &ch, &bfs);
                    c.p_max = p_th * (1.0 - 1e-12);
                    let below = algorithm1(&c, &ch, &bfs);
                    match (at, below) {
                        (Ok(a), Ok(b)) => {
                            if a.case_label != CaseLabel::PowerMin || b.case_label != CaseLabel::JamMax {
                                ok = false;
                            }
                            worst = worst.max((a.p_total - b.p_total).abs() / a.p_total);
                        }
                        _ => ok = false,
                    }
                }
                (Err(_), Err(_)) => {}
                _ => ok = false,
            }
        }
        checks.push(check(
            "threshold_identity",
            ok && worst < 1e-9,
            worst,
            format!("{count} channel draws, closed form vs assembled total"),
        ));
    }

    // Binding constraints through the full pipeline.
    {
        let count = if full { 40 } else { 10 };
        let cfg = SystemConfig::desk();
        let grid = DirectionGrid::uniform(cfg.n_antennas);
        let cb = Codebook::dft(&grid, &cfg);
        let mut worst = 0.0f64;
        for seed in 0..count {
            let ch = generate_channels(&cfg, 70_000 + seed);
            let bfs = match Beamformer::build_all(&cfg, &grid, &cb, &ch) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let alloc = match algorithm1(&cfg, &ch, &bfs) {
                Ok(a) => a,
                Err(_) => continue,
            };
            let comb = match build_combiners(Scheme::Optimal, &bfs, &grid, &cfg, &ch, &alloc.p_nr) {
                Ok(c) => c,
                Err(_) => continue,
            };
            for dir in 0..bfs.len() {
                let r = sinr_r(&comb, &bfs, &grid, &ch, &alloc, &cfg, dir);
                worst = worst.max((r - cfg.gamma_r).abs() / cfg.gamma_r);
            }
            if alloc.case_label == CaseLabel::PowerMin {
                let d = sinr_d(&ch, &bfs, &alloc, &cfg);
                worst = worst.max((d - cfg.gamma_s).abs() / cfg.gamma_s);
            }
        }
        checks.push(check(
            "binding_constraints",
            worst < 1e-6,
            worst,
            "radar floors and monitoring floor met with equality".into(),
        ));
    }

    // Tail formula vs quadrature.
    {
        let mut worst = 0.0f64;
        let mut ok = true;
        for m in [2usize, 3, 4, 6] {
            for &gamma_s in &[0.05, 1.0, 8.0] {
                let inp = ProbabilityInputs {
                    rho_sd: 10.0,
                    rho_se: 1.0,
                    rho_ed: 1.0,
                    sigma2: 1.0,
                    sigma2_tilde: 2.0,
                    p_s: 10.0,
                    gamma_s,
                    m,
                    p_j: 1.0,
                };
                match power_min_quadrature(&inp) {
                    Ok(reference) => {
                        worst = worst.max((success_prob_power_min(&inp) - reference).abs())
                    }
                    Err(_) => ok = false,
                }
            }
        }
        checks.push(check(
            "power_min_tail_vs_quadrature",
            ok && worst < 1e-8,
            worst,
            "Erlang tail against adaptive quadrature".into(),
        ));
    }

    // Jamming-regime closed form vs quadrature, plus the coefficient verdict.
    {
        let grid = if full {
            default_verdict_grid()
        } else {
            default_verdict_grid().into_iter().step_by(5).collect()
        };
        match coefficient_variant_verdict(&grid) {
            Ok(v) => {
                checks.push(check(
                    "jam_max_closed_vs_quadrature",
                    v.factorial_max_err < 1e-6,
                    v.factorial_max_err,
                    format!("{} grid points", grid.len()),
                ));
                checks.push(check(
                    "coefficient_variant_verdict",
                    v.factorial_wins,
                    v.literal_max_err,
                    format!(
                        "factorial variant err {:.2e}; literal variant err {:.2e}; factorial wins: {}",
                        v.factorial_max_err, v.literal_max_err, v.factorial_wins
                    ),
                ));
            }
            Err(e) => checks.push(check("jam_max_closed_vs_quadrature", false, f64::NAN, e.to_string())),
        }
    }

    // Informational: spread of the per-direction jamming gains around their
    // mean (the driver of the equal-split interpretation).
    {
        let cfg = SystemConfig::desk();
        let grid = DirectionGrid::uniform(cfg.n_antennas);
        let cb = Codebook::dft(&grid, &cfg);
        let mut worst = 0.0f64;
        for seed in 0..20u64 {
            let ch = generate_channels(&cfg, 80_000 + seed);
            if let Ok(bfs) = Beamformer::build_all(&cfg, &grid, &cb, &ch) {
                let mean = bfs.iter().map(|b| b.g_jam).sum::<f64>() / bfs.len() as f64;
                for bf in &bfs {
                    worst = worst.max((bf.g_jam - mean).abs() / mean);
                }
            }
        }
        checks.push(check(
            "per_direction_gain_spread",
            true,
            worst,
            "informational: max relative deviation of g_jam from its mean".into(),
        ));
    }

    if full {
        // Full-pipeline Monte Carlo vs the analytic tail at full scale.
        {
            let cfg = SystemConfig::default();
            match monte_carlo_success_prob(&cfg, Scheme::Optimal, CasePolicy::ForcePowerMin, 2000, 31) {
                Ok(est) => {
                    let inp = ProbabilityInputs {
                        rho_sd: cfg.rho_sd,
                        rho_se: cfg.rho_se,
                        rho_ed: cfg.rho_ed,
                        sigma2: cfg.noise_rx_d,
                        sigma2_tilde: cfg.noise_rx_monitor,
                        p_s: cfg.p_s,
                        gamma_s: cfg.gamma_s,
                        m: cfg.n_rf,
                        p_j: 0.0,
                    };
                    let analytic = success_prob_power_min(&inp);
                    let gap = (est.success_prob - analytic).abs();
                    checks.push(check(
                        "pipeline_vs_analytic_gap",
                        gap <= 3.0 * est.std_err + 0.02,
                        gap,
                        format!(
                            "pipeline {:.5} vs analytic {analytic:.5}; Erlang-model shape gap, measured",
                            est.success_prob
                        ),
                    ));
                }
                Err(e) => checks.push(check("pipeline_vs_analytic_gap", false, f64::NAN, e.to_string())),
            }
        }

        // Wall-time scaling of the full pipeline in the antenna count.
        {
            let mut times = Vec::new();
            for &n in &[32usize, 64, 128, 256] {
                let cfg = desk_cfg(n, 4);
                let grid = DirectionGrid::uniform(n);
                let cb = Codebook::dft(&grid, &cfg);
                let reps = 6;
                let mut best = f64::INFINITY;
                for r in 0..reps {
                    let ch = generate_channels(&cfg, r);
                    let t0 = Instant::now();
                    let bfs = Beamformer::build_all(&cfg, &grid, &cb, &ch).unwrap();
                    let alloc = algorithm1(&cfg, &ch, &bfs).unwrap();
                    let comb = build_combiners(Scheme::Optimal, &bfs, &grid, &cfg, &ch, &alloc.p_nr).unwrap();
                    let _ = evaluate(&comb, &bfs, &grid, &ch, &alloc, &cfg);
                    best = best.min(t0.elapsed().as_secs_f64());
                }
                times.push((n, best));
            }
            let ratio = times[3].1 / times[1].1;
            checks.push(check(
                "complexity_scaling",
                ratio <= 24.0,
                ratio,
                format!("pipeline times {times:?}; 256-vs-64 ratio"),
            ));
        }
    }

    VerificationReport { checks }
}
