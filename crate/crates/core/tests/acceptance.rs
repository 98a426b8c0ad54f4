//! Acceptance criteria 1–11. Runs as a plain binary so each criterion prints a
//! single pass/fail line; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use kahler_core::suite::{run_check, run_suite, CheckResult, SuiteConfig};

const SEED: u64 = 20_241_015;

struct Criterion {
    number: u32,
    title: &'static str,
    checks: &'static [&'static str],
    nmax: usize,
    budget_s: Option<f64>,
}

const CRITERIA: [Criterion; 10] = [
    Criterion { number: 1, title: "ℂPᵏ×ℂ^{n−k} hat norm, both paths, n ≤ 5", checks: &["cpk_flat_hat_norm"], nmax: 5, budget_s: Some(10.0) },
    Criterion { number: 2, title: "curvature-norm identity, 100 tensors per n ∈ 2..=5", checks: &["curvature_norm_identity"], nmax: 5, budget_s: Some(30.0) },
    Criterion { number: 3, title: "(p,q)-form coefficient, n ≤ 5", checks: &["form_coefficient"], nmax: 5, budget_s: Some(60.0) },
    Criterion { number: 4, title: "action bound and extremizers, 10³ samples, n ≤ 4", checks: &["action_bound"], nmax: 4, budget_s: None },
    Criterion { number: 5, title: "Weitzenböck cross-path, 200 samples per n ∈ {2,3}", checks: &["weitzenboeck_paths"], nmax: 3, budget_s: None },
    Criterion { number: 6, title: "n = 2 counterexample family at ε = 1", checks: &["n2_example"], nmax: 2, budget_s: None },
    Criterion { number: 7, title: "optimality example", checks: &["optimality_example"], nmax: 2, budget_s: None },
    Criterion { number: 8, title: "characters, τ identity, projector ranks", checks: &["characters"], nmax: 5, budget_s: None },
    Criterion { number: 9, title: "kernel: ω^k and ℂPⁿ, n ≤ 5", checks: &["kernel"], nmax: 5, budget_s: None },
    Criterion { number: 10, title: "condition checkers on the fixture corpus", checks: &["condition_checkers"], nmax: 5, budget_s: None },
];

fn describe(r: &CheckResult) -> String {
    let mut s = format!("{} cases, worst {:.2e} (tol {:.0e}), {:.2}s", r.cases, r.worst, r.tolerance, r.seconds);
    for f in &r.failures {
        s.push_str(&format!("\n         {f}"));
    }
    s
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let cfg = SuiteConfig {
            nmax: c.nmax,
            seed: SEED,
            trials: None,
            tol: None,
        };
        let start = Instant::now();
        let results: Vec<_> = c.checks.iter().map(|id| run_check(id, &cfg)).collect();
        let elapsed = start.elapsed().as_secs_f64();
        let mut ok = true;
        let mut detail = Vec::new();
        for r in results {
            match r {
                Ok(r) => {
                    ok &= r.passed;
                    detail.push(describe(&r));
                }
                Err(e) => {
                    ok = false;
                    detail.push(format!("error: {e}"));
                }
            }
        }
        if let Some(b) = c.budget_s {
            if elapsed > b {
                ok = false;
                detail.push(format!("runtime {elapsed:.2}s exceeds {b}s"));
            }
        }
        failed += usize::from(!ok);
        println!(
            "[{}] criterion {:>2}: {}: {}",
            if ok { "PASS" } else { "FAIL" },
            c.number,
            c.title,
            detail.join("; ")
        );
    }

    let start = Instant::now();
    let suite = run_suite(&SuiteConfig {
        nmax: 4,
        seed: SEED,
        trials: None,
        tol: None,
    });
    let elapsed = start.elapsed().as_secs_f64();
    let ok = matches!(&suite, Ok(s) if s.passed) && elapsed <= 60.0;
    failed += usize::from(!ok);
    let summary = match &suite {
        Ok(s) => format!(
            "{}/{} checks passed",
            s.checks.iter().filter(|c| c.passed).count(),
            s.checks.len()
        ),
        Err(e) => format!("error: {e}"),
    };
    println!(
        "[{}] criterion 11: full suite at nmax = 4 within 60 s: {summary} in {elapsed:.2}s",
        if ok { "PASS" } else { "FAIL" }
    );

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
