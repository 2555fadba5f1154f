//! System configuration: every scalar parameter of the scenario.
//!
//! All stored values are linear; dB-valued inputs (`*_db` keys) are converted
//! once at parse time. The JSON schema accepts exactly the field names below,
//! with a `_db` suffix allowed on the SINR/power fields.

use serde::{Deserialize, Serialize};

use crate::db_to_linear;
use crate::error::{Error, Result};

/// All scenario parameters, linear domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemConfig {
    /// Transmit = receive antenna count `N`.
    pub n_antennas: usize,
    /// RF chain count `M`; one chain probes, `M - 1` eavesdrop.
    pub n_rf: usize,
    /// Effective noise-plus-clutter variance at the monitor.
    pub noise_rx_monitor: f64,
    /// Noise variance at the suspicious receiver.
    pub noise_rx_d: f64,
    /// Minimum SINR the suspicious receiver must keep (monitoring floor).
    pub gamma_s: f64,
    /// Minimum per-direction radar SINR.
    pub gamma_r: f64,
    /// Suspicious transmit power.
    pub p_s: f64,
    /// Monitor total transmit power budget.
    pub p_max: f64,
    /// Probe-interval time ratio.
    pub lambda_r: f64,
    /// Wait-interval time ratio; `lambda_r + lambda_w = 1`.
    pub lambda_w: f64,
    /// Suspicious-channel quality variance.
    pub rho_sd: f64,
    /// Eavesdropping-channel quality variance.
    pub rho_se: f64,
    /// Jamming-channel quality variance.
    pub rho_ed: f64,
    /// Element spacing over wavelength, `d / lambda`.
    pub antenna_spacing_ratio: f64,
    /// Constant magnitude of the per-direction probing gain factors.
    pub beta_mag: f64,
}

impl Default for SystemConfig {
    /// Full-scale defaults: N=128, M=4, unit noise at D, doubled noise at the
    /// monitor, 0 dB monitoring floor, 10 dB radar floor, 10 dB suspicious
    /// SNR, 20 dB per-antenna budget, and channel qualities (10, 1, 1).
    fn default() -> Self {
        let n = 128;
        Self {
            n_antennas: n,
            n_rf: 4,
            noise_rx_monitor: 2.0,
            noise_rx_d: 1.0,
            gamma_s: 1.0,
            gamma_r: 10.0,
            p_s: 10.0,
            p_max: 100.0 * n as f64,
            lambda_r: 0.1,
            lambda_w: 0.9,
            rho_sd: 10.0,
            rho_se: 1.0,
            rho_ed: 1.0,
            antenna_spacing_ratio: 0.5,
            beta_mag: 0.1,
        }
    }
}

/// Raw JSON form: every field optional, `_db` variants accepted for the
/// SINR/power fields, unknown keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n_antennas: Option<usize>,
    n_rf: Option<usize>,
    noise_rx_monitor: Option<f64>,
    noise_rx_monitor_db: Option<f64>,
    noise_rx_d: Option<f64>,
    noise_rx_d_db: Option<f64>,
    gamma_s: Option<f64>,
    gamma_s_db: Option<f64>,
    gamma_r: Option<f64>,
    gamma_r_db: Option<f64>,
    p_s: Option<f64>,
    p_s_db: Option<f64>,
    p_max: Option<f64>,
    p_max_db: Option<f64>,
    lambda_r: Option<f64>,
    lambda_w: Option<f64>,
    rho_sd: Option<f64>,
    rho_se: Option<f64>,
    rho_ed: Option<f64>,
    antenna_spacing_ratio: Option<f64>,
    beta_mag: Option<f64>,
}

fn pick(linear: Option<f64>, db: Option<f64>, name: &str, out: &mut f64) -> Result<()> {
    match (linear, db) {
        (Some(_), Some(_)) => Err(Error::InvalidConfig(format!(
            "both {name} and {name}_db given; pick one"
        ))),
        (Some(v), None) => {
            *out = v;
            Ok(())
        }
        (None, Some(v)) => {
            *out = db_to_linear(v);
            Ok(())
        }
        (None, None) => Ok(()),
    }
}

impl SystemConfig {
    /// Desk-scale configuration used by the default experiment presets:
    /// N=16, M=3, budget scaled to the antenna count, everything else as in
    /// [`SystemConfig::default`].
    pub fn desk() -> Self {
        let n = 16;
        Self {
            n_antennas: n,
            n_rf: 3,
            p_max: 100.0 * n as f64,
            ..Self::default()
        }
    }

    /// Parse from a JSON document. Missing fields take the defaults; `_db`
    /// variants are converted to linear here.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(s)?;
        let mut cfg = Self::default();
        cfg.absorb(raw)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn absorb(&mut self, raw: RawConfig) -> Result<()> {
        if let Some(v) = raw.n_antennas {
            self.n_antennas = v;
            // Keep the budget pinned to the antenna count unless overridden.
            if raw.p_max.is_none() && raw.p_max_db.is_none() {
                self.p_max = 100.0 * v as f64;
            }
        }
        if let Some(v) = raw.n_rf {
            self.n_rf = v;
        }
        pick(raw.noise_rx_monitor, raw.noise_rx_monitor_db, "noise_rx_monitor", &mut self.noise_rx_monitor)?;
        pick(raw.noise_rx_d, raw.noise_rx_d_db, "noise_rx_d", &mut self.noise_rx_d)?;
        pick(raw.gamma_s, raw.gamma_s_db, "gamma_s", &mut self.gamma_s)?;
        pick(raw.gamma_r, raw.gamma_r_db, "gamma_r", &mut self.gamma_r)?;
        pick(raw.p_s, raw.p_s_db, "p_s", &mut self.p_s)?;
        pick(raw.p_max, raw.p_max_db, "p_max", &mut self.p_max)?;
        if let Some(v) = raw.lambda_r {
            self.lambda_r = v;
        }
        if let Some(v) = raw.lambda_w {
            self.lambda_w = v;
        }
        if let Some(v) = raw.rho_sd {
            self.rho_sd = v;
        }
        if let Some(v) = raw.rho_se {
            self.rho_se = v;
        }
        if let Some(v) = raw.rho_ed {
            self.rho_ed = v;
        }
        if let Some(v) = raw.antenna_spacing_ratio {
            self.antenna_spacing_ratio = v;
        }
        if let Some(v) = raw.beta_mag {
            self.beta_mag = v;
        }
        Ok(())
    }

    /// Apply a `key=value` override. Keys are the JSON field names; the `_db`
    /// forms are accepted for the SINR/power fields.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |e| Error::InvalidConfig(format!("override {key}={value}: {e}"));
        let fval = || value.parse::<f64>().map_err(|e| bad(e.to_string()));
        match key {
            "n_antennas" => {
                self.n_antennas = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
                self.p_max = 100.0 * self.n_antennas as f64;
            }
            "n_rf" => self.n_rf = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "noise_rx_monitor" => self.noise_rx_monitor = fval()?,
            "noise_rx_monitor_db" => self.noise_rx_monitor = db_to_linear(fval()?),
            "noise_rx_d" => self.noise_rx_d = fval()?,
            "noise_rx_d_db" => self.noise_rx_d = db_to_linear(fval()?),
            "gamma_s" => self.gamma_s = fval()?,
            "gamma_s_db" => self.gamma_s = db_to_linear(fval()?),
            "gamma_r" => self.gamma_r = fval()?,
            "gamma_r_db" => self.gamma_r = db_to_linear(fval()?),
            "p_s" => self.p_s = fval()?,
            "p_s_db" => self.p_s = db_to_linear(fval()?),
            "p_max" => self.p_max = fval()?,
            "p_max_db" => self.p_max = db_to_linear(fval()?),
            "lambda_r" => self.lambda_r = fval()?,
            "lambda_w" => self.lambda_w = fval()?,
            "rho_sd" => self.rho_sd = fval()?,
            "rho_se" => self.rho_se = fval()?,
            "rho_ed" => self.rho_ed = fval()?,
            "antenna_spacing_ratio" => self.antenna_spacing_ratio = fval()?,
            "beta_mag" => self.beta_mag = fval()?,
            _ => return Err(Error::InvalidConfig(format!("unknown override key: {key}"))),
        }
        Ok(())
    }

    /// Check every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidConfig(m));
        if self.n_rf < 2 {
            return err(format!("n_rf = {} but at least 2 RF chains are required", self.n_rf));
        }
        if self.n_rf >= self.n_antennas {
            return err(format!(
                "n_rf = {} must be well below n_antennas = {}",
                self.n_rf, self.n_antennas
            ));
        }
        if (self.lambda_r + self.lambda_w - 1.0).abs() > 1e-12 {
            return err(format!(
                "lambda_r + lambda_w = {} must equal 1",
                self.lambda_r + self.lambda_w
            ));
        }
        if !(self.lambda_r > 0.0 && self.lambda_r < 1.0) {
            return err(format!("lambda_r = {} must lie in (0, 1)", self.lambda_r));
        }
        let positives = [
            ("noise_rx_monitor", self.noise_rx_monitor),
            ("noise_rx_d", self.noise_rx_d),
            ("gamma_s", self.gamma_s),
            ("p_s", self.p_s),
            ("p_max", self.p_max),
            ("rho_sd", self.rho_sd),
            ("rho_se", self.rho_se),
            ("rho_ed", self.rho_ed),
            ("antenna_spacing_ratio", self.antenna_spacing_ratio),
            ("beta_mag", self.beta_mag),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return err(format!("{name} = {v} must be strictly positive"));
            }
        }
        // gamma_r = 0 is allowed: it makes the radar constraint vacuous.
        if !(self.gamma_r >= 0.0) || !self.gamma_r.is_finite() {
            return err(format!("gamma_r = {} must be nonnegative", self.gamma_r));
        }
        Ok(())
    }
}
