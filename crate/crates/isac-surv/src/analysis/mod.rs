//! Analytic success-probability formulas and the independent numerical
//! machinery (quadrature, special functions, convex oracle, Monte Carlo)
//! that validates the closed forms.

pub mod montecarlo;
pub mod oracle;
pub mod probability;
pub mod quadrature;
pub mod special;

pub use montecarlo::{
    allocate, monte_carlo_success_prob, monte_carlo_success_prob_seq, run_trial, CasePolicy,
    McEstimate,
};
pub use oracle::{
    solve_jam_max_oracle, solve_power_min_oracle, solve_power_min_wait_split, OracleInstance,
    OracleSolution, StartPoint,
};
pub use probability::{
    coefficient_variant_verdict, default_verdict_grid, jam_max_closed_form, jam_max_quadrature,
    power_min_quadrature, success_prob_jam_max, success_prob_power_min, CoefficientVerdict,
    ProbabilityInputs,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::montecarlo::CasePolicy;
    use crate::channel::trial_rng;
    use crate::combining::Scheme;
    use crate::config::SystemConfig;
    use rand::Rng;

    /// Draw the model's random primitives directly (Erlang projected-channel
    /// energies, exponential suspicious power) and score the success event.
    /// This checks the closed forms against their own distributional model,
    /// independent of the quadrature path.
    #[test]
    fn closed_forms_match_model_level_monte_carlo() {
        let inp = ProbabilityInputs {
            rho_sd: 10.0,
            rho_se: 1.0,
            rho_ed: 1.0,
            sigma2: 1.0,
            sigma2_tilde: 2.0,
            p_s: 10.0,
            gamma_s: 1.0,
            m: 4,
            p_j: 8.0,
        };
        let mut rng = trial_rng(2024, 0);
        let trials = 200_000;
        let mut erlang = |rho: f64| -> f64 {
            (0..inp.m - 1)
                .map(|_| -rho * (1.0 - rng.gen::<f64>()).ln())
                .sum()
        };
        let mut ok_pm = 0usize;
        let mut ok_jm = 0usize;
        let mut draws = Vec::with_capacity(trials);
        for _ in 0..trials {
            let gamma_se: f64 = erlang(inp.rho_se);
            let gamma_ed: f64 = erlang(inp.rho_ed);
            draws.push((gamma_se, gamma_ed));
        }
        for &(gamma_se, gamma_ed) in &draws {
            let gamma_sd = -inp.rho_sd * (1.0 - rng.gen::<f64>()).ln();
            let sinr_e = inp.p_s * gamma_se / inp.sigma2_tilde;
            if sinr_e >= inp.gamma_s {
                ok_pm += 1;
            }
            let sinr_d = inp.p_s * gamma_sd / (inp.p_j * gamma_ed + inp.sigma2);
            if sinr_e >= sinr_d {
                ok_jm += 1;
            }
        }
        let pm_hat = ok_pm as f64 / trials as f64;
        let jm_hat = ok_jm as f64 / trials as f64;
        let pm = success_prob_power_min(&inp);
        let jm = success_prob_jam_max(&inp).unwrap();
        let se = |p: f64| (p * (1.0 - p) / trials as f64).sqrt().max(1e-6);
        assert!(
            (pm_hat - pm).abs() <= 3.0 * se(pm),
            "power-min: {pm_hat} vs {pm}"
        );
        assert!(
            (jm_hat - jm).abs() <= 3.0 * se(jm),
            "jam-max: {jm_hat} vs {jm}"
        );
    }

    /// Full-pipeline Monte Carlo against the analytic formula at the
    /// full-scale configuration, forced to the power-minimization regime.
    ///
    /// The analytic model takes the retained projected-channel energies as
    /// Erlang; the pipeline's energies are top-order-statistic sums combined
    /// coherently across the scan, so a shape gap of a few parts in a
    /// thousand remains after the variance calibration. The assertion bounds
    /// that documented gap rather than the Monte Carlo noise alone; the
    /// verification report prints the measured value.
    #[test]
    fn pipeline_monte_carlo_tracks_the_power_min_formula() {
        let cfg = SystemConfig::default();
        let est = monte_carlo_success_prob(&cfg, Scheme::Optimal, CasePolicy::ForcePowerMin, 2000, 31)
            .unwrap();
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
        assert!(
            gap <= 3.0 * est.std_err + 0.02,
            "pipeline {} vs analytic {analytic} (gap {gap:.4})",
            est.success_prob
        );
    }
}
