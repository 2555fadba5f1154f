//! Command-line front end: figure sweeps, single simulations, beampatterns,
//! analytic probability evaluation, and the verification suite.
//!
//! Every subcommand is a pure function of (config, overrides, seed): repeated
//! invocations produce byte-identical output. The `ISAC_SURV_THREADS`
//! environment variable sets the worker-thread count (0 or unset = auto).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use isac_surv::analysis::{
    monte_carlo_success_prob, success_prob_jam_max, success_prob_power_min,
    ProbabilityInputs,
};
use isac_surv::experiments::{
    run_beampattern, run_sweep, run_verification_suite, version_string, FigureTag, SweepScheme,
    SweepSpec, VerifyDepth,
};
use isac_surv::{Error, SystemConfig};

#[derive(Parser)]
#[command(name = "isac-surv", version, about = "Dual-function radar / surveillance beamforming simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// JSON configuration file; missing fields take the full-scale defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Full-scale configuration (N=128, M=4) instead of the desk-scale one.
    #[arg(long)]
    paper_scale: bool,
    /// key=value overrides onto the configuration (dB keys carry a _db suffix).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl ConfigArgs {
    fn build(&self) -> Result<SystemConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => SystemConfig::from_json_str(&fs::read_to_string(path)?)?,
            None if self.paper_scale => SystemConfig::default(),
            None => SystemConfig::desk(),
        };
        for kv in &self.set {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("override `{kv}` is not key=value")))?;
            cfg.apply_override(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Echo the table to stdout even when writing a file.
    #[arg(long)]
    echo: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl OutputArgs {
    fn emit(&self, csv: String, json: String) -> Result<(), Error> {
        let body = match self.format {
            Format::Csv => csv,
            Format::Json => json,
        };
        match &self.out {
            Some(path) => {
                fs::write(path, &body)?;
                eprintln!("wrote {}", path.display());
                if self.echo {
                    print!("{body}");
                }
            }
            None => print!("{body}"),
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimate of the eavesdropping success probability at one
    /// configuration.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "optimal")]
        scheme: String,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a preset figure sweep (fig4 emits the beampattern table).
    Figure {
        #[arg(long)]
        tag: String,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Beampattern samples (fig4 only).
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Transmit beampattern of one pipeline realization.
    Beampattern {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Probed direction index; defaults to broadside (N/2).
        #[arg(long)]
        direction: Option<usize>,
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Analytic success probability for given model parameters.
    Prob {
        /// power-min or jam-max.
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 10.0)]
        rho_sd: f64,
        #[arg(long, default_value_t = 1.0)]
        rho_se: f64,
        #[arg(long, default_value_t = 1.0)]
        rho_ed: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        #[arg(long, default_value_t = 2.0)]
        sigma2_tilde: f64,
        #[arg(long, default_value_t = 10.0)]
        p_s: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_s: f64,
        /// Effective per-direction jamming power (jam-max case).
        #[arg(long, default_value_t = 0.0)]
        p_j: f64,
    },
    /// Run the oracle/invariant verification suite; nonzero exit on failure.
    Verify {
        #[arg(long, default_value = "quick")]
        depth: String,
    },
}

fn configure_threads() {
    if let Ok(v) = std::env::var("ISAC_SURV_THREADS") {
        match v.parse::<usize>() {
            Ok(n) => isac_surv::parallel::configure_threads(n),
            Err(_) => eprintln!("ignoring non-integer ISAC_SURV_THREADS={v}"),
        }
    }
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    configure_threads();
    match cli.command {
        Command::Simulate {
            config,
            scheme,
            trials,
            seed,
            output,
        } => {
            let cfg = config.build()?;
            let scheme = SweepScheme::from_str(&scheme)?;
            let (combining, policy) = scheme.parts();
            let est = monte_carlo_success_prob(&cfg, combining, policy, trials, seed)?;
            let json = serde_json::to_string_pretty(&serde_json::json!({
                "version": version_string(),
                "scheme": scheme,
                "seed": seed,
                "config": cfg,
                "estimate": est,
            }))?;
            let mut csv = String::from("key,value\n");
            csv.push_str(&format!("success_prob,{}\n", est.success_prob));
            csv.push_str(&format!("std_err,{}\n", est.std_err));
            csv.push_str(&format!("n_trials,{}\n", est.n_trials));
            csv.push_str(&format!("n_infeasible,{}\n", est.n_infeasible));
            csv.push_str(&format!("n_power_min,{}\n", est.n_power_min));
            csv.push_str(&format!("n_gamma_s_violated,{}\n", est.n_gamma_s_violated));
            csv.push_str(&format!("mean_sinr_r,{}\n", est.mean_sinr_r));
            output.emit(csv, json)?;
            Ok(true)
        }
        Command::Figure {
            tag,
            config,
            trials,
            seed,
            samples,
            output,
        } => {
            let cfg = config.build()?;
            let tag = FigureTag::from_str(&tag)?;
            if tag == FigureTag::Fig4 {
                let table = run_beampattern(&cfg, seed, None, samples)?;
                output.emit(table.to_csv(), table.to_json()?)?;
            } else {
                let spec = SweepSpec::preset(tag, cfg, trials, seed)?;
                let table = run_sweep(&spec)?;
                output.emit(table.to_csv(), table.to_json()?)?;
            }
            Ok(true)
        }
        Command::Beampattern {
            config,
            seed,
            direction,
            samples,
            output,
        } => {
            let cfg = config.build()?;
            let table = run_beampattern(&cfg, seed, direction, samples)?;
            output.emit(table.to_csv(), table.to_json()?)?;
            Ok(true)
        }
        Command::Prob {
            case,
            m,
            rho_sd,
            rho_se,
            rho_ed,
            sigma2,
            sigma2_tilde,
            p_s,
            gamma_s,
            p_j,
        } => {
            let inp = ProbabilityInputs {
                rho_sd,
                rho_se,
                rho_ed,
                sigma2,
                sigma2_tilde,
                p_s,
                gamma_s,
                m,
                p_j,
            };
            inp.validate()?;
            let probability = match case.as_str() {
                "power-min" => success_prob_power_min(&inp),
                "jam-max" => success_prob_jam_max(&inp)?,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown case `{other}` (expected power-min or jam-max)"
                    )))
                }
            };
            let json = serde_json::to_string_pretty(&serde_json::json!({
                "version": version_string(),
                "case": case,
                "inputs": inp,
                "probability": probability,
            }))?;
            println!("{json}");
            Ok(true)
        }
        Command::Verify { depth } => {
            let depth = VerifyDepth::from_str(&depth)?;
            let report = run_verification_suite(depth);
            print!("{}", report.render());
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
