//! stabcert: certify uniform exponential stability of discrete evolution
//! families and verify the growth-bound inequality chain with certified
//! numerical brackets.
//!
//! Exit codes: 0 certified/completed, 2 not certified, 3 theorem violation
//! or oracle mismatch (an implementation bug, never expected), 4 config
//! error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stabcert_core::certify::{Verdict, certify, gamma_grid, oracle_compare, sweep, sweep_csv};
use stabcert_core::config::{AnalysisConfig, ConfigFile, parse_space_label};
use stabcert_core::error::CoreError;
use stabcert_core::family::EvolutionFamily;
use stabcert_core::linalg::MatrixNorm;

const EXIT_NOT_CERTIFIED: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_CONFIG: u8 = 4;

#[derive(Parser)]
#[command(name = "stabcert", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Family diagnostics only: growth bound bracket, semigroup power
    /// norms, and the semigroup spectral-radius bracket
    Analyze {
        config: PathBuf,
    },
    /// Full certification pipeline; writes the certificate as JSON
    Certify {
        config: PathBuf,
        /// Space override: lp:<p>, linf or c0
        #[arg(long)]
        space: Option<String>,
        /// Bracket tolerance override
        #[arg(long)]
        tol: Option<f64>,
        /// Seed override for every randomized estimator
        #[arg(long)]
        seed: Option<u64>,
        /// Report destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tightness sweep over scalar constant families on c₀
    Sweep {
        #[arg(long)]
        gamma_from: f64,
        #[arg(long)]
        gamma_to: f64,
        #[arg(long)]
        steps: usize,
        /// CSV destination (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dense brute-force cross-check: structured apply vs the oracle
    /// matrix; exits nonzero on any mismatch above 1e-10
    Oracle {
        config: PathBuf,
        /// Truncation length for the oracle matrix
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
}

fn load_config(path: &PathBuf) -> Result<(ConfigFile, AnalysisConfig), CoreError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CoreError::Config(format!("{}: {e}", path.display())))?;
    let file = ConfigFile::from_json(&text)?;
    let resolved = file.resolve()?;
    Ok((file, resolved))
}

fn exit_for(err: &CoreError) -> u8 {
    match err {
        CoreError::Config(_) | CoreError::InvalidParameter(_) => EXIT_CONFIG,
        _ => 1,
    }
}

fn run() -> Result<u8, CoreError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { config } => {
            let (_, resolved) = load_config(&config)?;
            let fam = EvolutionFamily::new(resolved.spec.clone());
            let growth = fam.growth_bound_oracle()?;
            let norm = resolved.space.upper_matrix_norm();
            let sem = fam.semigroup_spectral_radius(norm);
            let power_norms: Vec<(u64, f64)> = [1u64, 2, 4, 8, 16]
                .iter()
                .map(|&j| (j, fam.semigroup_power_norm(j, norm)))
                .collect();
            let two_norm_of_step = MatrixNorm::Two.measure(fam.spec().step(0), resolved.seed)?;
            let doc = serde_json::json!({
                "family_digest": resolved.family_digest,
                "dimension": resolved.spec.dim(),
                "prefix_length": resolved.spec.prefix_len(),
                "period": resolved.spec.period(),
                "space": resolved.space.label(),
                "step0_two_norm": two_norm_of_step,
                "omega0": {
                    "lower": fmt_ext(growth.lower),
                    "upper": fmt_ext(growth.upper),
                    "value": fmt_ext(growth.value),
                },
                "semigroup_power_norms": power_norms,
                "semigroup_radius": {
                    "lower": sem.lower,
                    "upper": sem.upper,
                    "evaluations": sem.evaluations,
                },
                "uniformly_exponentially_stable": growth.upper < 0.0,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            Ok(0)
        }
        Command::Certify {
            config,
            space,
            tol,
            seed,
            out,
        } => {
            let (_, mut resolved) = load_config(&config)?;
            if let Some(label) = space {
                resolved.space = parse_space_label(&label)?;
            }
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CoreError::Config(format!("--tol must be positive, got {t}")));
                }
                resolved.tolerance = t;
            }
            if let Some(s) = seed {
                resolved.seed = s;
            }
            let cert = certify(&resolved)?;
            let text = cert.report.to_json();
            match out {
                Some(path) => fs::write(&path, &text)
                    .map_err(|e| CoreError::Config(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            eprintln!(
                "verdict: {} (report digest {})",
                cert.report.verdict,
                cert.report.digest()
            );
            Ok(match cert.verdict {
                Verdict::CertifiedStable => 0,
                Verdict::NotCertified => EXIT_NOT_CERTIFIED,
                Verdict::TheoremViolation => EXIT_VIOLATION,
            })
        }
        Command::Sweep {
            gamma_from,
            gamma_to,
            steps,
            out,
            tol,
            seed,
        } => {
            let grid = gamma_grid(gamma_from, gamma_to, steps)?;
            let rows = sweep(&grid, tol.unwrap_or(1e-6), seed.unwrap_or(42))?;
            let csv = sweep_csv(&rows);
            match out {
                Some(path) => fs::write(&path, &csv)
                    .map_err(|e| CoreError::Config(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Command::Oracle { config, n } => {
            let (_, resolved) = load_config(&config)?;
            let fam = EvolutionFamily::new(resolved.spec.clone());
            let cmp = oracle_compare(&fam, n, resolved.seed)?;
            println!(
                "apply mismatch (scaled): {:.3e}\nrow/col-sum mismatch:    {:.3e}",
                cmp.apply_mismatch, cmp.norm_mismatch
            );
            if cmp.apply_mismatch > 1e-10 || cmp.norm_mismatch > 1e-10 {
                eprintln!("oracle disagreement above 1e-10: implementation bug");
                Ok(EXIT_VIOLATION)
            } else {
                println!("oracle and structured paths agree");
                Ok(0)
            }
        }
    }
}

fn fmt_ext(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v == f64::NEG_INFINITY {
        serde_json::json!("-inf")
    } else {
        serde_json::json!("inf")
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
