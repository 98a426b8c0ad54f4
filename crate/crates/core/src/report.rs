//! The JSON report document produced for a single curvature operator.

use std::fmt::Write as _;

use nalgebra::SymmetricEigen;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bochner::{
    c_pq, curvature_quadratic, hodge_report_for_curvature, ring_condition, tachibana_condition, weighted_sum,
    ConditionOutcome, HodgeReport, HodgeStatus,
};
use crate::curvature::{decompose, min_orthogonal_bisectional, BisectionalMinimum, KahlerCurvature, Spectrum};
use crate::format::{to_json_string, Metadata, Representation};
use crate::tolerances::BOUNDARY;
use crate::{Error, Result};

pub const REPORT_FORMAT: &str = "kahler-report-v1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub kappa: Option<f64>,
    pub diameter: Option<f64>,
    pub seed: u64,
    /// samples for the orthogonal bisectional minimum when n ≥ 3
    pub trials: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            kappa: None,
            diameter: None,
            seed: 0,
            trials: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSummary {
    /// SHA-256 of the canonical `kco-v1` u_operator serialisation
    pub digest: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionNorms {
    pub scal: f64,
    pub ric0_norm_sq: f64,
    pub r_ring_norm_sq: f64,
    pub bochner_norm_sq: f64,
    pub hat_norm_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// λ₁ + λ₂ + (1 − 2/n)λ₃ > 0: rational cohomology ring of ℂPⁿ
    Ring,
    /// strict weighted condition at C^{p,q}, κ = 0: h^{p,q} = 0 (p ≠ q) or 1
    Vanishing,
    /// non-strict weighted condition at C^{p,q}, level κ: harmonic forms parallel
    Parallel,
    /// λ₁ + … + λ_{⌊(n+1)/2⌋} + ((1+(−1)ⁿ)/4)λ_{⌊(n+1)/2⌋+1} ≥ 0: curvature tensor parallel
    Tachibana,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionRow {
    pub kind: ConditionKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// the weight constant C of λ₁ + … + λ_⌊C⌋ + (C − ⌊C⌋)λ_{⌊C⌋+1}
    pub constant: f64,
    pub kappa: f64,
    pub strict: bool,
    pub satisfied: bool,
    pub margin: f64,
    pub boundary: bool,
}

impl ConditionRow {
    fn new(kind: ConditionKind, pq: Option<(usize, usize)>, constant: f64, kappa: f64, out: ConditionOutcome, strict: bool) -> Self {
        Self {
            kind,
            p: pq.map(|x| x.0),
            q: pq.map(|x| x.1),
            constant,
            kappa,
            strict,
            satisfied: out.satisfied,
            margin: out.margin,
            boundary: out.boundary,
        }
    }

    fn label(&self) -> String {
        let base = match self.kind {
            ConditionKind::Ring => "ring",
            ConditionKind::Vanishing => "vanishing",
            ConditionKind::Parallel => "parallel",
            ConditionKind::Tachibana => "tachibana",
        };
        match (self.p, self.q) {
            (Some(p), Some(q)) => format!("{base}({p},{q})"),
            _ => base.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub format: &'static str,
    pub version: &'static str,
    pub input: InputSummary,
    pub seed: u64,
    pub trials: usize,
    pub kappa: Option<f64>,
    pub diameter: Option<f64>,
    pub spectrum: Spectrum,
    pub decomposition: DecompositionNorms,
    pub ricci_min: f64,
    pub einstein: bool,
    pub curvature_quadratic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthogonal_bisectional_min: Option<BisectionalMinimum>,
    pub conditions: Vec<ConditionRow>,
    pub hodge: HodgeReport,
    pub semantics: &'static str,
    pub warnings: Vec<String>,
}

const SEMANTICS: &str = "conclusions hold for any compact Kähler manifold whose curvature operator \
satisfies these spectral bounds at every point";

pub fn digest(r: &KahlerCurvature) -> Result<String> {
    let canonical = to_json_string(r, Representation::UOperator, &Metadata::default())?;
    let hash = Sha256::digest(canonical.as_bytes());
    Ok(hash.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    }))
}

pub fn build_report(r: &KahlerCurvature, name: Option<&str>, opts: &ReportOptions) -> Result<ReportDocument> {
    let n = r.n();
    if let Some(k) = opts.kappa {
        if k > 0.0 || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("κ = {k} must be ≤ 0")));
        }
    }
    let spectrum = r.spectrum();
    let dec = decompose(r)?;
    let ricci_min = SymmetricEigen::new(r.ricci()).eigenvalues.min();
    let hodge = hodge_report_for_curvature(r, opts.kappa, opts.diameter)?;
    let mut warnings = Vec::new();

    let mut conditions = Vec::new();
    if n >= 2 {
        let out = ring_condition(&spectrum, n)?;
        conditions.push(ConditionRow::new(ConditionKind::Ring, None, 3.0 - 2.0 / n as f64, 0.0, out, true));
    }
    let level = opts.kappa.unwrap_or(0.0);
    for p in 0..=n {
        for q in 0..=n - p {
            if p + q == 0 {
                continue;
            }
            let c = c_pq(n, p, q)?;
            let strict = weighted_sum(&spectrum, c, 0.0, true)?;
            conditions.push(ConditionRow::new(ConditionKind::Vanishing, Some((p, q)), c, 0.0, strict, true));
            let loose = weighted_sum(&spectrum, c, level, false)?;
            conditions.push(ConditionRow::new(ConditionKind::Parallel, Some((p, q)), c, level, loose, false));
        }
    }
    let tach = tachibana_condition(&spectrum, n, false)?;
    let count = n.div_ceil(2).max(1);
    let weight = if n.is_multiple_of(2) { 0.5 } else { 0.0 };
    conditions.push(ConditionRow::new(ConditionKind::Tachibana, None, count as f64 + weight, 0.0, tach, false));
    if n < 4 {
        warnings.push(format!("tachibana condition evaluated at n = {n}; it is stated for n ≥ 4"));
    }
    for row in &conditions {
        if row.boundary {
            warnings.push(format!(
                "{} margin {:.3e} is within {BOUNDARY:e} of zero; reported as a boundary case",
                row.label(),
                row.margin
            ));
        }
    }

    let orthogonal_bisectional_min = if n >= 2 {
        let m = min_orthogonal_bisectional(r, opts.trials.max(1), opts.seed)?;
        if !m.exact {
            warnings.push(format!(
                "orthogonal bisectional minimum is a heuristic upper bound from {} random samples",
                opts.trials.max(1)
            ));
        }
        Some(m)
    } else {
        None
    };
    if opts.diameter.is_some() {
        warnings.push(
            "dimension estimates list the binomial cap and exponent argument only; the constant \
             depending on n and κD² is left symbolic"
                .into(),
        );
    }

    Ok(ReportDocument {
        format: REPORT_FORMAT,
        version: env!("CARGO_PKG_VERSION"),
        input: InputSummary {
            digest: digest(r)?,
            n,
            name: name.map(str::to_string),
        },
        seed: opts.seed,
        trials: opts.trials,
        kappa: opts.kappa,
        diameter: opts.diameter,
        spectrum,
        decomposition: DecompositionNorms {
            scal: dec.scal,
            ric0_norm_sq: dec.ric0_norm_sq,
            r_ring_norm_sq: dec.r_ring_norm_sq,
            bochner_norm_sq: dec.bochner_norm_sq,
            hat_norm_sq: r.hat_norm_sq(),
        },
        ricci_min,
        einstein: r.is_einstein(1e-10 * r.operator().abs().max().max(1.0)),
        curvature_quadratic: curvature_quadratic(r)?,
        orthogonal_bisectional_min,
        conditions,
        hodge,
        semantics: SEMANTICS,
        warnings,
    })
}

impl ReportDocument {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "operator  n = {}  digest {}", self.input.n, &self.input.digest[..16]);
        if let Some(name) = &self.input.name {
            let _ = writeln!(s, "model     {name}");
        }
        let _ = writeln!(s, "spectrum  {}", fmt_values(self.spectrum.values()));
        let d = &self.decomposition;
        let _ = writeln!(
            s,
            "norms     scal {:.6}  |Ric0|² {:.6}  |R̊|² {:.6}  |B|² {:.6}  |R^u|² {:.6}",
            d.scal, d.ric0_norm_sq, d.r_ring_norm_sq, d.bochner_norm_sq, d.hat_norm_sq
        );
        let _ = writeln!(s, "ricci min {:.6}  einstein {}", self.ricci_min, self.einstein);
        if let Some(b) = self.orthogonal_bisectional_min {
            let _ = writeln!(
                s,
                "orthogonal bisectional min {:.6} ({})",
                b.value,
                if b.exact { "exact" } else { "sampled" }
            );
        }
        let _ = writeln!(s, "\nconditions");
        for row in &self.conditions {
            let _ = writeln!(
                s,
                "  {:<16} C = {:<8.4} κ = {:<6} {:<10} {:>5}  margin {:+.6}{}",
                row.label(),
                row.constant,
                row.kappa,
                if row.strict { "strict" } else { "non-strict" },
                if row.satisfied { "yes" } else { "no" },
                row.margin,
                if row.boundary { "  (boundary)" } else { "" }
            );
        }
        if let Some(rc) = &self.hodge.ring_condition {
            let _ = writeln!(s, "\nring condition (ℂPⁿ cohomology ring): {}", rc.satisfied);
        }
        let _ = writeln!(s, "\nHodge diamond, row p, column q");
        for row in &self.hodge.entries {
            let cells: Vec<String> = row.iter().map(|e| format!("{:<6}", status_cell(e.status))).collect();
            let _ = writeln!(s, "  {}", cells.join(" ").trim_end());
        }
        let _ = writeln!(s, "  (0 vanishes, 1 equals one, ∥ harmonic forms parallel, ? no conclusion)");
        if !self.warnings.is_empty() {
            let _ = writeln!(s, "\nwarnings");
            for w in &self.warnings {
                let _ = writeln!(s, "  - {w}");
            }
        }
        s
    }
}

fn status_cell(s: HodgeStatus) -> &'static str {
    match s {
        HodgeStatus::Vanishes => "0",
        HodgeStatus::EqualsOne => "1",
        HodgeStatus::ParallelOnly => "∥",
        HodgeStatus::NoConclusion => "?",
    }
}

pub fn fmt_values(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.6}", clean(*x))).collect();
    format!("[{}]", parts.join(", "))
}

/// Suppresses "-0.000000".
fn clean(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}
