//! `kahler`: inspect Kähler curvature operators, build model fixtures and run
//! the identity verification suite.
//!
//! Exit codes: 0 success, 1 an identity or character check failed, 2 usage or
//! input error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use kahler_core::characters::{chi_pq_k, dim_pqk, lemma_weight, verify_tau_identity, weyl_character, TorusPoint};
use kahler_core::format::{load_operator, named_model, save_operator_with, to_json_string, Representation, MODEL_NAMES};
use kahler_core::report::{build_report, fmt_values, ReportOptions};
use kahler_core::rng;
use kahler_core::suite::{run_suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "kahler", version, about = "Kähler curvature operators: spectra, reports, fixtures and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sorted eigenvalues of the operator in a kco-v1 file
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Curvature decomposition, condition table and Hodge-number conclusions
    Report {
        #[arg(long)]
        input: PathBuf,
        /// level κ ≤ 0 for the non-strict conditions
        #[arg(long, allow_negative_numbers = true)]
        kappa: Option<f64>,
        /// diameter bound D > 0 (requires --kappa)
        #[arg(long)]
        diameter: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// samples for the orthogonal bisectional minimum when n ≥ 3
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long)]
        json: bool,
        /// write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a model operator as a kco-v1 fixture
    Model {
        /// cpn, cpk_flat, example_2pos, example_optimality or zero
        name: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        epsilon: Option<f64>,
        /// store h on Sym²ℂⁿ instead of the operator matrix
        #[arg(long)]
        hermitian: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity verification suite
    Verify {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// override every per-configuration sample count
        #[arg(long)]
        trials: Option<usize>,
        /// override every tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Compare Weyl characters with telescoped (p,q) characters at random torus points
    Characters {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// torus points per component
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Spectrum { input, json } => {
            let file = load_operator(&input).with_context(|| format!("loading {}", input.display()))?;
            let sp = file.curvature.spectrum();
            if json {
                println!("{}", serde_json::to_string(&sp)?);
            } else {
                println!("{}", fmt_values(sp.values()));
            }
            Ok(Outcome::Ok)
        }
        Command::Report {
            input,
            kappa,
            diameter,
            seed,
            trials,
            json,
            out,
        } => {
            if let Some(k) = kappa {
                if k > 0.0 {
                    bail!("--kappa must be ≤ 0 (got {k})");
                }
            }
            if let Some(d) = diameter {
                if kappa.is_none() {
                    bail!("--diameter requires --kappa");
                }
                if d <= 0.0 {
                    bail!("--diameter must be positive (got {d})");
                }
            }
            let file = load_operator(&input).with_context(|| format!("loading {}", input.display()))?;
            let opts = ReportOptions {
                kappa,
                diameter,
                seed,
                trials,
            };
            let doc = build_report(&file.curvature, file.metadata.name.as_deref(), &opts)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, doc.to_json()?).with_context(|| format!("writing {}", path.display()))?;
                    if !json {
                        print!("{}", doc.to_text());
                    }
                }
                None if json => print!("{}", doc.to_json()?),
                None => print!("{}", doc.to_text()),
            }
            Ok(Outcome::Ok)
        }
        Command::Model {
            name,
            n,
            k,
            epsilon,
            hermitian,
            out,
        } => {
            if !MODEL_NAMES.contains(&name.as_str()) {
                bail!("unknown model `{name}`; expected one of {}", MODEL_NAMES.join(", "));
            }
            let (r, meta) = named_model(&name, n, k, epsilon)?;
            let rep = if hermitian {
                Representation::HermitianSym2
            } else {
                Representation::UOperator
            };
            match out {
                Some(path) => save_operator_with(&r, &path, rep, &meta).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{}", to_json_string(&r, rep, &meta)?),
            }
            Ok(Outcome::Ok)
        }
        Command::Verify {
            nmax,
            seed,
            trials,
            tol,
            json,
        } => {
            let report = run_suite(&SuiteConfig { nmax, seed, trials, tol })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(if report.passed { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Characters {
            n,
            p,
            q,
            trials,
            seed,
            tol,
            json,
        } => characters(n, p, q, trials, seed, tol, json),
    }
}

#[derive(serde::Serialize)]
struct ComponentRow {
    k: usize,
    dim: usize,
    weight: Option<Vec<i64>>,
    max_rel_error: Option<f64>,
}

fn characters(n: usize, p: usize, q: usize, trials: usize, seed: u64, tol: f64, json: bool) -> Result<Outcome> {
    if n == 0 || n > 8 {
        bail!("--n must lie in 1..=8");
    }
    if p > n || q > n {
        bail!("--p and --q must not exceed n = {n}");
    }
    if trials == 0 {
        bail!("--trials must be positive");
    }
    let mut rows = Vec::new();
    let mut ok = true;
    let mut stream = 0u64;
    for k in 0..=p.min(q) {
        let dim = dim_pqk(n, p, q, k);
        // the highest weight only exists when (p−k)+(q−k) ≤ n
        let weight = lemma_weight(n, p, q, k).ok();
        let max_rel_error = match &weight {
            Some(f) => {
                let mut worst: f64 = 0.0;
                for _ in 0..trials {
                    stream += 1;
                    let eps = TorusPoint::random(n, rng::derive(seed, stream))?;
                    let w = weyl_character(f, &eps)?;
                    let c = chi_pq_k(&eps, p as i64, q as i64, k as i64);
                    worst = worst.max((w - c).norm() / w.norm().max(c.norm()).max(1.0));
                }
                ok &= worst <= tol;
                Some(worst)
            }
            None => None,
        };
        rows.push(ComponentRow {
            k,
            dim,
            weight,
            max_rel_error,
        });
    }
    let mut tau_worst: f64 = 0.0;
    for a in 0..=n + 1 {
        for b in 0..=n + 1 {
            stream += 1;
            let eps = TorusPoint::random(n, rng::derive(seed, stream))?;
            let scale = kahler_core::characters::tau(&eps, a, b).norm().max(1.0);
            tau_worst = tau_worst.max(verify_tau_identity(&eps, a, b)? / scale);
        }
    }
    ok &= tau_worst <= 1e-8;

    if json {
        let doc = serde_json::json!({
            "n": n, "p": p, "q": q, "trials": trials, "seed": seed,
            "components": rows, "tau_max_residual": tau_worst, "passed": ok
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("Λ^{{{p},{q}}} over ℂ^{n}: {trials} torus points per component");
        for r in &rows {
            match (&r.weight, r.max_rel_error) {
                (Some(f), Some(e)) => println!("  k = {}  dim {:>5}  weight {:?}  max rel error {:.2e}", r.k, r.dim, f, e),
                _ => println!("  k = {}  dim {:>5}  (no component)", r.k, r.dim),
            }
        }
        println!("  τ identity max residual {tau_worst:.2e}");
        println!("{}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}
