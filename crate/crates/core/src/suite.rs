//! Identity verification suite. Each check recomputes one algebraic identity
//! over a family of inputs and records its worst residual against a fixed
//! tolerance. Randomness comes from `rng::derive(master seed, check index)`, so
//! results do not depend on which checks run or in what order.

use std::time::Instant;

use serde::Serialize;

use crate::bochner::{
    hodge_report_for_curvature, ring_condition, tachibana_condition, verify_action_bound, weighted_sum,
    weitzenboeck_frame_sum, weitzenboeck_quadratic, HodgeRoute, HodgeStatus,
};
use crate::characters::{chi_pq_k, dim_pqk, lemma_weight, verify_tau_identity, weyl_character, TorusPoint};
use crate::curvature::{decompose, isotropic_curvatures_n2, model_cp_k_flat, model_cpn, random_kahler};
use crate::exterior::{component_projector, kahler_power, ring_reduce};
use crate::format::named_model;
use crate::index::binomial;
use crate::lie::{act_on_curvature, action_norm_sq_eigen, hat_norm_sq_curvature, hat_norm_sq_curvature_direct, hat_norm_sq_form, LieElement};
use crate::report::{build_report, ReportOptions};
use crate::{rng, Error, KahlerCurvature, PQForm, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub nmax: usize,
    pub seed: u64,
    /// overrides every per-configuration sample count
    pub trials: Option<usize>,
    /// overrides every tolerance
    pub tol: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            nmax: 4,
            seed: 0,
            trials: None,
            tol: None,
        }
    }
}

impl SuiteConfig {
    fn samples(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub anchor: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// largest residual (relative unless noted by the check)
    pub worst: f64,
    pub tolerance: f64,
    pub seconds: f64,
    /// first few failing cases
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub nmax: usize,
    pub seed: u64,
    pub passed: bool,
    pub seconds: f64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{}  {:<22} cases {:>6}  worst {:.2e}  tol {:.0e}  {:>6.2}s  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.cases,
                c.worst,
                c.tolerance,
                c.seconds,
                c.anchor
            ));
            for f in &c.failures {
                s.push_str(&format!("      {f}\n"));
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!(
            "{} of {} checks passed in {:.2}s (nmax = {}, seed = {})\n",
            self.checks.len() - failed,
            self.checks.len(),
            self.seconds,
            self.nmax,
            self.seed
        ));
        s
    }
}

struct Tally {
    tol: f64,
    worst: f64,
    cases: usize,
    failures: Vec<String>,
    failed: bool,
}

impl Tally {
    fn new(tol: f64) -> Self {
        Self {
            tol,
            worst: 0.0,
            cases: 0,
            failures: Vec::new(),
            failed: false,
        }
    }

    /// Records a residual that must not exceed the tolerance.
    fn residual(&mut self, value: f64, what: impl FnOnce() -> String) {
        self.bounded(value, self.tol, what);
    }

    /// Records a residual against its own limit.
    fn bounded(&mut self, value: f64, limit: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        if value.is_nan() || value > limit {
            self.fail(format!("{} (residual {value:.3e})", what()));
        }
        if !value.is_nan() {
            self.worst = self.worst.max(value);
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed = true;
        if self.failures.len() < 5 {
            self.failures.push(msg);
        }
    }

    fn error(&mut self, e: Error) {
        self.fail(format!("error: {e}"));
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

type CheckFn = fn(&SuiteConfig, u64, &mut Tally) -> Result<()>;

/// (id, anchor formula, default tolerance, check)
const CHECKS: [(&str, &str, f64, CheckFn); 10] = [
    ("cpk_flat_hat_norm", "|R^u|² = 32k(k+1)(n−k)", 1e-9, check_cpk_flat),
    ("curvature_norm_identity", "|R^u|² = 4(n+1)|R̊|² − 4|Ric̊|²", 1e-9, check_norm_identity),
    ("form_coefficient", "|φ^u|² = (2(p−k)(q−k) + (p+q−2k)(n+1−(p+q−2k)))|φ̊|²", 1e-8, check_form_coefficient),
    ("action_bound", "|Lφ|² ≤ (p+q−2k)|L|²|φ̊|²", 1e-9, check_action_bound),
    ("weitzenboeck_paths", "g(Ric(T), T̄) = Σ_α λ_α |Ξ_α T|²", 1e-8, check_weitzenboeck),
    ("n2_example", "spectrum 𝔑 = {−1, −1, 6, 8}, R₁₃₁₃ = −1/2, R₁₂₃₄ = −1", 1e-10, check_n2_example),
    ("optimality_example", "|Ξ_{2,−}R|² = 8|Ξ_{2,−}|²|R̊|², |Ξ_{1,+}R|² = 0", 1e-10, check_optimality),
    ("characters", "χ^{p,q}_k = det(ε_i^{f_j+n−j})/Δ, f = (1^{p−k},0,…,0,(−1)^{q−k})", 1e-6, check_characters),
    // ω^k below the tolerance, ℂPⁿ below 100× the tolerance
    ("kernel", "(ω^k)^u = 0, (R_{ℂPⁿ})^u = 0", 1e-12, check_kernel),
    ("condition_checkers", "λ₁ + … + λ_⌊C⌋ + (C−⌊C⌋)λ_{⌊C⌋+1} ≥ κ(⌊C⌋+1)", 1e-12, check_conditions),
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

fn validate(cfg: &SuiteConfig) -> Result<()> {
    if !(2..=5).contains(&cfg.nmax) {
        return Err(Error::InvalidArgument(format!("nmax = {} must lie in 2..=5", cfg.nmax)));
    }
    if cfg.trials == Some(0) {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if let Some(t) = cfg.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance {t} must be positive")));
        }
    }
    Ok(())
}

/// Runs one check by id.
pub fn run_check(id: &str, cfg: &SuiteConfig) -> Result<CheckResult> {
    validate(cfg)?;
    let (index, entry) = CHECKS
        .iter()
        .enumerate()
        .find(|(_, c)| c.0 == id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown check `{id}`")))?;
    Ok(execute(index, entry, cfg))
}

fn execute(index: usize, &(id, anchor, tol, f): &(&'static str, &'static str, f64, CheckFn), cfg: &SuiteConfig) -> CheckResult {
    let start = Instant::now();
    let mut tally = Tally::new(cfg.tol(tol));
    if let Err(e) = f(cfg, rng::derive(cfg.seed, index as u64), &mut tally) {
        tally.error(e);
    }
    CheckResult {
        id,
        anchor,
        passed: !tally.failed,
        cases: tally.cases,
        worst: tally.worst,
        tolerance: tally.tol,
        seconds: start.elapsed().as_secs_f64(),
        failures: tally.failures,
    }
}

/// Runs every check, concurrently; the report lists them in a fixed order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    validate(cfg)?;
    let start = Instant::now();
    let checks: Vec<CheckResult> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .map(|(i, entry)| s.spawn(move || execute(i, entry, cfg)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    Ok(SuiteReport {
        nmax: cfg.nmax,
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        seconds: start.elapsed().as_secs_f64(),
        checks,
    })
}

fn check_cpk_flat(cfg: &SuiteConfig, _seed: u64, t: &mut Tally) -> Result<()> {
    for n in 1..=cfg.nmax {
        for k in 0..=n {
            let r = model_cp_k_flat(n, k)?;
            let want = 32.0 * (k * (k + 1) * (n - k)) as f64;
            let eigen = hat_norm_sq_curvature(&r)?;
            let direct = hat_norm_sq_curvature_direct(&r)?;
            t.residual(rel(eigen, want), || format!("eigenbasis n={n} k={k}: {eigen} vs {want}"));
            t.residual(rel(direct, want), || format!("direct n={n} k={k}: {direct} vs {want}"));
        }
    }
    Ok(())
}

fn check_norm_identity(cfg: &SuiteConfig, seed: u64, t: &mut Tally) -> Result<()> {
    let samples = cfg.samples(100);
    for n in 2..=cfg.nmax {
        for s in 0..samples {
            let r = random_kahler(n, rng::derive(seed, (n * 100_000 + s) as u64))?;
            let dec = decompose(&r)?;
            let lhs = r.hat_norm_sq();
            let rhs = 4.0 * (n + 1) as f64 * dec.r_ring_norm_sq - 4.0 * dec.ric0_norm_sq;
            t.residual(rel(lhs, rhs), || format!("n={n} sample {s}: {lhs} vs {rhs}"));
        }
    }
    Ok(())
}

pub fn form_coefficient(n: usize, p: usize, q: usize, k: usize) -> f64 {
    let m = (p + q - 2 * k) as f64;
    2.0 * ((p - k) * (q - k)) as f64 + m * (n as f64 + 1.0 - m)
}

fn check_form_coefficient(cfg: &SuiteConfig, seed: u64, t: &mut Tally) -> Result<()> {
    let samples = cfg.samples(3);
    let mut g = rng::from_seed(seed);
    for n in 1..=cfg.nmax {
        for p in 0..=n {
            for q in 0..=n {
                for k in 0..=p.min(q) {
                    if p + q == 2 * k {
                        continue;
                    }
                    let proj = component_projector(n, p, q, k)?;
                    if proj.rank() == 0 {
                        continue;
                    }
                    let c = form_coefficient(n, p, q, k);
                    for _ in 0..samples {
                        let phi = proj.combine(&rng::complex_normal_vec(&mut g, proj.rank()))?;
                        let hat = hat_norm_sq_form(&phi)?;
                        let ring = ring_reduce(&phi)?.norm_sq();
                        t.residual((hat - c * ring).abs() / hat.max(c * ring), || {
                            format!("n={n} ({p},{q},{k}): ratio {} vs {c}", hat / ring)
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_action_bound(cfg: &SuiteConfig, seed: u64, t: &mut Tally) -> Result<()> {
    let samples = cfg.samples(1000);
    let mut stream = 0;
    for n in 1..=cfg.nmax.min(4) {
        for p in 0..=n {
            for q in 0..=n {
                for k in 0..=p.min(q) {
                    if p + q == 2 * k {
                        continue;
                    }
                    stream += 1;
                    let out = verify_action_bound(n, p, q, k, samples, rng::derive(seed, stream))?;
                    t.residual((out.max_ratio - 1.0).max(0.0), || {
                        format!("n={n} ({p},{q},{k}): max ratio {}", out.max_ratio)
                    });
                    if let Some(e) = out.extremizer_ratio {
                        t.residual((e - 1.0).abs(), || format!("n={n} ({p},{q},{k}): extremizer ratio {e}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_weitzenboeck(cfg: &SuiteConfig, seed: u64, t: &mut Tally) -> Result<()> {
    let samples = cfg.samples(200);
    for n in 2..=cfg.nmax.min(3) {
        let degrees: Vec<(usize, usize)> = (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).collect();
        let mut g = rng::from_seed(rng::derive(seed, n as u64));
        for s in 0..samples {
            let r = random_kahler(n, rng::derive(seed, (1000 * n + s) as u64))?;
            let (p, q) = degrees[s % degrees.len()];
            let len = binomial(n, p) * binomial(n, q);
            let phi = PQForm::from_coeffs(n, p, q, rng::complex_normal_vec(&mut g, len))?;
            let a = weitzenboeck_frame_sum(&r, &phi)?;
            let b = weitzenboeck_quadratic(&r, &phi)?;
            let scale = a.norm().max(b.abs()).max(1.0);
            t.residual((a.re - b).abs() / scale, || format!("n={n} ({p},{q}) sample {s}: {a} vs {b}"));
            t.require(a.im.abs() <= 1e-10 * scale, || format!("n={n} ({p},{q}): imaginary residue {}", a.im));
        }
    }
    Ok(())
}

fn check_n2_example(_cfg: &SuiteConfig, _seed: u64, t: &mut Tally) -> Result<()> {
    let (r, _) = named_model("example_2pos", 2, None, Some(1.0))?;
    for (a, b) in r.spectrum().values().iter().zip([-1.0, -1.0, 6.0, 8.0]) {
        t.residual((a - b).abs(), || format!("eigenvalue {a} vs {b}"));
    }
    let iso = isotropic_curvatures_n2(&r)?;
    for (name, v) in [("R1313", iso.r1313), ("R1414", iso.r1414), ("R2323", iso.r2323), ("R2424", iso.r2424)] {
        t.residual((v + 0.5).abs(), || format!("{name} = {v}"));
    }
    t.residual((iso.r1234 + 1.0).abs(), || format!("R1234 = {}", iso.r1234));
    t.residual(r.ricci_traceless().abs().max(), || "trace-free Ricci does not vanish".into());
    let s = r.spectrum();
    t.require(s.partial_sum(2) < 0.0, || "λ₁ + λ₂ is not negative".into());
    t.require(s.partial_sum(2) + s.values()[2] > 0.0, || "λ₁ + λ₂ + λ₃ is not positive".into());
    Ok(())
}

fn check_optimality(_cfg: &SuiteConfig, _seed: u64, t: &mut Tally) -> Result<()> {
    let (r, _) = named_model("example_optimality", 2, None, None)?;
    let dec = decompose(&r)?;
    t.residual((dec.r_ring_norm_sq - 8.0).abs(), || format!("|R̊|² = {}", dec.r_ring_norm_sq));
    let hat = r.hat_norm_sq();
    t.residual((hat - 96.0).abs(), || format!("|R^u|² = {hat}"));
    let x2 = LieElement::xi_n2(2, false)?;
    let x1 = LieElement::xi_n2(1, true)?;
    for (label, v) in [
        ("eigenbasis", action_norm_sq_eigen(&x2, &r)?),
        ("direct", act_on_curvature(&x2, &r)?.norm_sq()),
    ] {
        let bound = 8.0 * x2.norm_sq() * dec.r_ring_norm_sq;
        t.residual((v - 64.0).abs(), || format!("{label} |Ξ2−R|² = {v}"));
        t.residual((v - bound).abs(), || format!("{label} |Ξ2−R|² = {v} misses the bound {bound}"));
    }
    for (label, v) in [
        ("eigenbasis", action_norm_sq_eigen(&x1, &r)?),
        ("direct", act_on_curvature(&x1, &r)?.norm_sq()),
    ] {
        t.residual(v.abs(), || format!("{label} |Ξ1+R|² = {v}"));
    }
    Ok(())
}

fn check_characters(cfg: &SuiteConfig, seed: u64, t: &mut Tally) -> Result<()> {
    let samples = cfg.samples(50);
    let mut stream = 0u64;
    for n in 1..=6 {
        for p in 0..=n {
            for q in 0..=n - p {
                for k in 0..=p.min(q) {
                    let f = lemma_weight(n, p, q, k)?;
                    for _ in 0..samples {
                        stream += 1;
                        let eps = TorusPoint::random(n, rng::derive(seed, stream))?;
                        let w = weyl_character(&f, &eps)?;
                        let c = chi_pq_k(&eps, p as i64, q as i64, k as i64);
                        let err = (w - c).norm() / w.norm().max(c.norm()).max(1.0);
                        t.residual(err, || format!("n={n} ({p},{q},{k}): {w} vs {c}"));
                    }
                }
            }
        }
        // the τ identity, 1e−8 absolute on the scale of τ
        for a in 0..=n + 1 {
            for b in 0..=n + 1 {
                stream += 1;
                let eps = TorusPoint::random(n, rng::derive(seed, stream))?;
                let res = verify_tau_identity(&eps, a, b)?;
                let scale = crate::characters::tau(&eps, a, b).norm().max(1.0);
                t.require(res <= 1e-8 * scale, || format!("τ_{{{a},{b}}} residual {res:.3e} at n={n}"));
            }
        }
    }
    for n in 1..=cfg.nmax {
        for p in 0..=n {
            for q in 0..=n {
                for k in 0..=p.min(q) {
                    let rank = component_projector(n, p, q, k)?.rank();
                    let want = dim_pqk(n, p, q, k);
                    t.require(rank == want, || format!("rank of Λ^{{{p},{q}}}_{k} at n={n}: {rank} vs {want}"));
                }
            }
        }
    }
    Ok(())
}

fn check_kernel(cfg: &SuiteConfig, _seed: u64, t: &mut Tally) -> Result<()> {
    for n in 1..=cfg.nmax {
        for k in 0..=n {
            let w = kahler_power(n, k)?;
            let v = hat_norm_sq_form(&w)?;
            t.residual(v, || format!("|(ω^{k})^u|² = {v} at n={n}"));
        }
        let v = model_cpn(n)?.hat_norm_sq();
        t.bounded(v, 100.0 * t.tol, || format!("|R_ℂP{n}^u|² = {v}"));
    }
    Ok(())
}

fn check_conditions(cfg: &SuiteConfig, seed: u64, t: &mut Tally) -> Result<()> {
    let opts = ReportOptions {
        seed,
        trials: 200,
        ..ReportOptions::default()
    };
    for n in 2..=cfg.nmax {
        let cp = model_cpn(n)?;
        let doc = build_report(&cp, Some("cpn"), &opts)?;
        t.require(doc.hodge.ring_condition.is_some_and(|c| c.satisfied), || format!("ℂP{n}: ring condition"));
        t.require(doc.conditions.iter().all(|c| c.satisfied && !c.boundary), || {
            format!("ℂP{n}: some condition is unsatisfied")
        });
        t.require(doc.hodge.is_projective_space_diamond(), || format!("ℂP{n}: diamond"));
        let again = build_report(&cp, Some("cpn"), &opts)?;
        t.require(doc.to_json()? == again.to_json()?, || format!("ℂP{n}: report bytes differ between runs"));
    }

    let (ex, _) = named_model("example_2pos", 2, None, Some(1.0))?;
    let s = ex.spectrum();
    t.require(!ring_condition(&s, 2)?.satisfied, || "example: ring condition should fail".into());
    let rep = hodge_report_for_curvature(&ex, None, None)?;
    for p in 1..=2 {
        let e = rep.entry(p, 0);
        t.require(e.status == HodgeStatus::Vanishes && e.route == HodgeRoute::RicciPositivity, || {
            format!("example: h^{{{p},0}} should vanish by Ricci positivity, got {:?}/{:?}", e.status, e.route)
        });
    }

    for n in 2..=cfg.nmax {
        let z = KahlerCurvature::zero(n)?;
        let s = z.spectrum();
        let c = weighted_sum(&s, 3.0 - 2.0 / n as f64, 0.0, false)?;
        t.require(c.satisfied && c.boundary && c.margin == 0.0, || format!("zero n={n}: non-strict boundary"));
        t.require(!ring_condition(&s, n)?.satisfied, || format!("zero n={n}: strict condition must fail"));
        let e = tachibana_condition(&s, n, false)?;
        t.require(e.satisfied && e.boundary, || format!("zero n={n}: tachibana non-strict boundary"));
        let cp = model_cpn(n)?.spectrum();
        t.require(tachibana_condition(&cp, n, true)?.satisfied, || format!("ℂP{n}: tachibana"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig {
            nmax: 3,
            seed: 1,
            trials: Some(5),
            tol: None,
        };
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed, "{}", report.to_text());
        assert_eq!(report.checks.len(), CHECKS.len());
    }

    #[test]
    fn single_check_matches_suite_seeding() {
        let cfg = SuiteConfig {
            nmax: 2,
            seed: 9,
            trials: Some(4),
            tol: None,
        };
        let one = run_check("form_coefficient", &cfg).unwrap();
        let all = run_suite(&cfg).unwrap();
        let same = all.checks.iter().find(|c| c.id == "form_coefficient").unwrap();
        assert_eq!(one.worst, same.worst);
        assert!(run_check("nonsense", &cfg).is_err());
        assert!(run_suite(&SuiteConfig { nmax: 9, ..cfg }).is_err());
    }
}
