//! The curvature term of the Lichnerowicz Laplacian on (p,q)-forms and the
//! weighted eigenvalue conditions built on it.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::curvature::{KahlerCurvature, Spectrum};
use crate::exterior::real::RealForm;
use crate::exterior::{check_degree, component_projector, flag_generator, flag_generators, ring_reduce, PQForm};
use crate::index::binomial;
use crate::lie::{act_on_form, u_dim, LieElement};
use crate::rng;
use crate::tolerances::BOUNDARY;
use crate::{Error, Result, C64};

/// C^{p,q} = n+1 − (p²+q²)/(p+q).
pub fn c_pq(n: usize, p: usize, q: usize) -> Result<f64> {
    check_degree(n, p, q)?;
    if p + q == 0 {
        return Err(Error::DegreeOutOfRange { n, p, q });
    }
    // equal to C^{p,q}_0; evaluated through it so both agree bit for bit
    Ok(c_pq_k(n, p, q, 0).expect("p + q ≥ 1"))
}

/// C^{p,q}_k = n+1 − (p+q) + 2(pq − k²)/(p+q−2k); none when p = q = k.
pub fn c_pq_k(n: usize, p: usize, q: usize, k: usize) -> Option<f64> {
    if p > n || q > n || k > p.min(q) || p + q == 2 * k {
        return None;
    }
    let (nf, pf, qf, kf) = (n as f64, p as f64, q as f64, k as f64);
    Some(nf + 1.0 - (pf + qf) + 2.0 * (pf * qf - kf * kf) / (pf + qf - 2.0 * kf))
}

/// λ₁ + … + λ_l + w·λ_{l+1} ≥ κ(l+1) (or > when strict).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedCondition {
    pub count: usize,
    pub weight: f64,
    pub kappa: f64,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionOutcome {
    pub satisfied: bool,
    pub margin: f64,
    /// margin within ±1e−12 of zero
    pub boundary: bool,
}

impl WeightedCondition {
    pub fn new(count: usize, weight: f64, kappa: f64, strict: bool) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("eigenvalue count must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidArgument(format!("weight {weight} outside [0, 1]")));
        }
        if kappa > 0.0 || kappa.is_nan() {
            return Err(Error::InvalidArgument(format!("κ = {kappa} must be ≤ 0")));
        }
        Ok(Self {
            count,
            weight,
            kappa,
            strict,
        })
    }

    /// l = ⌊C⌋ and w = C − ⌊C⌋.
    pub fn from_constant(c: f64, kappa: f64, strict: bool) -> Result<Self> {
        if c.is_nan() || c < 1.0 {
            return Err(Error::InvalidArgument(format!("C = {c} must be at least 1")));
        }
        let l = c.floor();
        Self::new(l as usize, c - l, kappa, strict)
    }

    pub fn evaluate(&self, spectrum: &Spectrum) -> Result<ConditionOutcome> {
        let needed = if self.weight > 0.0 { self.count + 1 } else { self.count };
        if needed > spectrum.len() {
            return Err(Error::SpectrumTooShort {
                needed,
                available: spectrum.len(),
            });
        }
        let mut margin = spectrum.partial_sum(self.count) - self.kappa * (self.count + 1) as f64;
        if self.weight > 0.0 {
            margin += self.weight * spectrum.values()[self.count];
        }
        let boundary = margin.abs() <= BOUNDARY;
        let satisfied = if self.strict {
            margin > BOUNDARY
        } else {
            margin >= -BOUNDARY
        };
        Ok(ConditionOutcome {
            satisfied,
            margin,
            boundary,
        })
    }
}

/// Evaluates the weighted condition with l = ⌊C⌋.
pub fn weighted_sum(spectrum: &Spectrum, c: f64, kappa: f64, strict: bool) -> Result<ConditionOutcome> {
    WeightedCondition::from_constant(c, kappa, strict)?.evaluate(spectrum)
}

/// λ₁ + … + λ_{⌊(n+1)/2⌋} + ((1+(−1)ⁿ)/4)·λ_{⌊(n+1)/2⌋+1} ≥ 0.
pub fn tachibana_condition(spectrum: &Spectrum, n: usize, strict: bool) -> Result<ConditionOutcome> {
    let count = n.div_ceil(2);
    let weight = if n.is_multiple_of(2) { 0.5 } else { 0.0 };
    WeightedCondition::new(count.max(1), weight, 0.0, strict)?.evaluate(spectrum)
}

/// λ₁ + λ₂ + (1 − 2/n)λ₃ > 0, i.e. the strict condition at C = 3 − 2/n.
pub fn ring_condition(spectrum: &Spectrum, n: usize) -> Result<ConditionOutcome> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    weighted_sum(spectrum, 3.0 - 2.0 / n as f64, 0.0, true)
}

/// g(Ric(φ), φ̄) = Σ_α λ_α |E_α φ|² over an orthonormal eigenbasis of 𝔑.
pub fn weitzenboeck_quadratic(r: &KahlerCurvature, phi: &PQForm) -> Result<f64> {
    let (values, vectors) = r.eigen();
    eigen_sum(r.n(), values, vectors, phi)
}

/// Σ_α λ_α |E_α φ|² for any symmetric operator on u(n), Bianchi or not.
pub fn weitzenboeck_quadratic_operator(op: &DMatrix<f64>, phi: &PQForm) -> Result<f64> {
    let n = phi.n();
    if op.nrows() != u_dim(n) || op.ncols() != u_dim(n) {
        return Err(Error::DimensionMismatch(format!(
            "{}×{} operator for forms over ℂ^{n}",
            op.nrows(),
            op.ncols()
        )));
    }
    let eig = SymmetricEigen::new((op + op.transpose()) * 0.5);
    eigen_sum(n, eig.eigenvalues.as_slice(), &eig.eigenvectors, phi)
}

fn eigen_sum(n: usize, values: &[f64], vectors: &DMatrix<f64>, phi: &PQForm) -> Result<f64> {
    if phi.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "curvature over ℂ^{n} against a form over ℂ^{}",
            phi.n()
        )));
    }
    let mut acc = 0.0;
    for (a, &lambda) in values.iter().enumerate() {
        let e = LieElement::from_u_coeffs(n, vectors.column(a).as_slice())?;
        acc += lambda * act_on_form(&e, phi)?.norm_sq();
    }
    Ok(acc)
}

/// Frame double sum Ric(T) = Σ_{a,j} e^a ∧ ι_{e_j}(R(e_a, e_j)T), paired with T.
///
/// Works in the real coframe with g(R(e_a, e_j)z, w) = R(e_a, e_j, z, w) acting
/// as a derivation; returns the complex pairing so callers can inspect the
/// imaginary residue.
pub fn weitzenboeck_frame_sum(r: &KahlerCurvature, phi: &PQForm) -> Result<C64> {
    let n = r.n();
    if phi.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "curvature over ℂ^{n} against a form over ℂ^{}",
            phi.n()
        )));
    }
    let d = 2 * n;
    let t = RealForm::from_pq(phi);
    let mut ric = RealForm::zero(d);
    let tensor = r.tensor();
    for a in 0..d {
        for j in 0..d {
            if a == j {
                continue;
            }
            let e = DMatrix::from_fn(d, d, |w, z| tensor.get(a, j, z, w));
            if e.abs().max() == 0.0 {
                continue;
            }
            let term = t.derivation(&e)?.interior(j).wedge_basis(a);
            ric.add_assign(&term);
        }
    }
    Ok(ric.inner(&t))
}

/// g(𝔑(R^𝔲), R̄^𝔲) = Σ_α λ_α |E_α R|² for the curvature tensor itself.
pub fn curvature_quadratic(r: &KahlerCurvature) -> Result<f64> {
    let (values, vectors) = r.eigen();
    let n = r.n();
    let mut acc = 0.0;
    for (a, &lambda) in values.iter().enumerate() {
        let e = LieElement::from_u_coeffs(n, vectors.column(a).as_slice())?;
        acc += lambda * crate::lie::action_norm_sq_eigen(&e, r)?;
    }
    Ok(acc)
}

fn random_combination(n: usize, p: usize, q: usize, gens: &[PQForm], g: &mut rng::Rng) -> Result<PQForm> {
    let mut phi = PQForm::zeros(n, p, q)?;
    for gen in gens {
        phi = phi.axpy(rng::complex_normal(g), gen)?;
    }
    Ok(phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionBound {
    /// max over trials of |Lφ|² / ((p+q−2k)|L|²|φ̊|²)
    pub max_ratio: f64,
    /// ratio attained by L = Σ_{i∈I} I_ii − Σ_{j∈J} I_jj on dz^I∧ω^k∧dz̄^J, I ∩ J = ∅,
    /// when such a nonzero form exists
    pub extremizer_ratio: Option<f64>,
}

/// None when φ̊ vanishes (then Lφ = 0 as well and the bound is trivial).
fn action_ratio(l: &LieElement, phi: &PQForm, weight: f64) -> Result<Option<f64>> {
    let ring = ring_reduce(phi)?.norm_sq();
    if ring <= 1e-24 * phi.norm_sq() {
        return Ok(None);
    }
    let lphi = act_on_form(l, phi)?.norm_sq();
    Ok(Some(lphi / (weight * l.norm_sq() * ring)))
}

/// Samples |Lφ|² ≤ (p+q−2k)|L|²|φ̊|² for random L ∈ u(n) and φ ∈ V^{p,q}_k.
pub fn verify_action_bound(n: usize, p: usize, q: usize, k: usize, trials: usize, seed: u64) -> Result<ActionBound> {
    check_degree(n, p, q)?;
    if k > p.min(q) {
        return Err(Error::LefschetzIndexOutOfRange { p, q, k });
    }
    if p + q == 2 * k {
        return Err(Error::InvalidArgument(format!(
            "V^{{{p},{q}}}_{k} is spanned by ω^{k}; the bound is degenerate"
        )));
    }
    let weight = (p + q - 2 * k) as f64;
    let gens = flag_generators(n, p, q, k)?;
    let mut g = rng::from_seed(seed);
    let mut max_ratio: f64 = 0.0;
    if gens.iter().any(|x| x.max_abs() > 0.0) {
        for _ in 0..trials {
            let l = LieElement::from_u_coeffs(n, &rng::normal_vec(&mut g, u_dim(n)))?;
            let phi = random_combination(n, p, q, &gens, &mut g)?;
            if let Some(ratio) = action_ratio(&l, &phi, weight)? {
                max_ratio = max_ratio.max(ratio);
            }
        }
    }
    let extremizer_ratio = if p + q - k <= n {
        let holo: Vec<usize> = (1..=p - k).collect();
        let anti: Vec<usize> = (p - k + 1..=p + q - 2 * k).collect();
        let phi = flag_generator(n, k, &holo, &anti)?;
        let mut l = LieElement::zeros(n)?;
        let diag = u_dim(n) - n;
        let mut coeffs = l.coeffs().to_vec();
        for &i in &holo {
            coeffs[diag + i - 1] = 1.0;
        }
        for &j in &anti {
            coeffs[diag + j - 1] = -1.0;
        }
        l = LieElement::from_coeffs(n, coeffs)?;
        action_ratio(&l, &phi, weight)?
    } else {
        None
    };
    Ok(ActionBound {
        max_ratio,
        extremizer_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundCheck {
    pub precondition: ConditionOutcome,
    /// false only when the precondition holds and some sample violates the bound
    pub holds: bool,
    /// min over samples of (quadratic − bound)/|φ̊|²; NaN when nothing was sampled
    pub min_slack: f64,
    pub samples: usize,
}

/// Which displayed lower bound to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundForm {
    /// condition at C^{p,q}_k, bound κ(⌊C^{p,q}_k⌋+1)(p+q−2k)|φ̊|²
    Component,
    /// condition at C^{p,q}, bound κ(n+2−|p−q|)(p+q)|φ̊|²
    Uniform,
}

/// Checks the quadratic lower bound on random φ ∈ Λ^{p,q}_k. An unmet
/// precondition is reported, not treated as a failure.
#[allow(clippy::too_many_arguments)]
pub fn quadratic_lower_bound_check(
    r: &KahlerCurvature,
    p: usize,
    q: usize,
    k: usize,
    kappa: f64,
    form: BoundForm,
    trials: usize,
    seed: u64,
) -> Result<LowerBoundCheck> {
    let n = r.n();
    check_degree(n, p, q)?;
    if k > p.min(q) {
        return Err(Error::LefschetzIndexOutOfRange { p, q, k });
    }
    let spectrum = r.spectrum();
    let (c, factor) = match form {
        BoundForm::Component => match c_pq_k(n, p, q, k) {
            Some(c) => (c, (c.floor() + 1.0) * (p + q - 2 * k) as f64),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "C^{{{p},{q}}}_{k} is undefined for p = q = k"
                )))
            }
        },
        BoundForm::Uniform => (
            c_pq(n, p, q)?,
            ((n + 2 - p.abs_diff(q)) * (p + q)) as f64,
        ),
    };
    let precondition = weighted_sum(&spectrum, c, kappa, false)?;
    if !precondition.satisfied {
        return Ok(LowerBoundCheck {
            precondition,
            holds: true,
            min_slack: f64::NAN,
            samples: 0,
        });
    }
    let proj = component_projector(n, p, q, k)?;
    let scale = spectrum.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut g = rng::from_seed(seed);
    let mut min_slack = f64::INFINITY;
    let mut holds = true;
    let mut samples = 0;
    if proj.rank() > 0 {
        for _ in 0..trials {
            let phi = proj.combine(&rng::complex_normal_vec(&mut g, proj.rank()))?;
            let ring = ring_reduce(&phi)?.norm_sq();
            let quad = weitzenboeck_quadratic(r, &phi)?;
            let slack = (quad - kappa * factor * ring) / ring.max(f64::MIN_POSITIVE);
            samples += 1;
            min_slack = min_slack.min(slack);
            if slack < -1e-9 * scale {
                holds = false;
            }
        }
    }
    Ok(LowerBoundCheck {
        precondition,
        holds,
        min_slack: if samples == 0 { f64::NAN } else { min_slack },
        samples,
    })
}

/// Conclusion recorded for one Hodge number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HodgeStatus {
    Vanishes,
    EqualsOne,
    ParallelOnly,
    NoConclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HodgeRoute {
    Trivial,
    WeightedCpq,
    RicciPositivity,
    LevelKappa,
    SerreFold,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimation {
    /// C(n,p)·C(n,q)
    pub binomial_cap: u64,
    /// √(−κD²(n+2−|p−q|)(p+q))
    pub exponent_argument: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HodgeEntry {
    pub p: usize,
    pub q: usize,
    pub status: HodgeStatus,
    pub route: HodgeRoute,
    /// slack of the binding condition (NaN when no condition applies)
    pub margin: f64,
    pub boundary: bool,
    pub estimation: Option<Estimation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HodgeReport {
    pub n: usize,
    pub kappa: Option<f64>,
    pub diameter: Option<f64>,
    /// λ₁ + λ₂ + (1 − 2/n)λ₃ > 0 (absent for n = 1)
    pub ring_condition: Option<ConditionOutcome>,
    /// λ₁ + … + λ_n, the proxy lower bound for the Ricci curvature
    pub ricci_proxy: f64,
    /// smallest Ricci eigenvalue, when the full tensor was available
    pub ricci_min: Option<f64>,
    /// (n+1)×(n+1) table indexed [p][q]
    pub entries: Vec<Vec<HodgeEntry>>,
}

impl HodgeReport {
    pub fn entry(&self, p: usize, q: usize) -> &HodgeEntry {
        &self.entries[p][q]
    }

    pub fn status(&self, p: usize, q: usize) -> HodgeStatus {
        self.entries[p][q].status
    }

    /// Table of statuses, row p, column q.
    pub fn status_table(&self) -> Vec<Vec<HodgeStatus>> {
        self.entries.iter().map(|row| row.iter().map(|e| e.status).collect()).collect()
    }

    /// true when every off-diagonal entry vanishes and every diagonal entry equals one
    pub fn is_projective_space_diamond(&self) -> bool {
        self.entries.iter().flatten().all(|e| {
            if e.p == e.q {
                e.status == HodgeStatus::EqualsOne
            } else {
                e.status == HodgeStatus::Vanishes
            }
        })
    }
}

/// Pointwise Hodge-number conclusions implied for a compact Kähler manifold
/// whose curvature operator has this spectrum (as a uniform bound) everywhere.
///
/// From the spectrum alone the Ricci route uses Ric ≥ (λ₁ + … + λ_n)·g.
pub fn hodge_report(spectrum: &Spectrum, n: usize, kappa: Option<f64>, diameter: Option<f64>) -> Result<HodgeReport> {
    hodge_report_with_ricci(spectrum, n, kappa, diameter, None)
}

/// As [`hodge_report`], with the Ricci route also firing when the smallest
/// eigenvalue of the actual Ricci tensor is positive.
pub fn hodge_report_for_curvature(r: &KahlerCurvature, kappa: Option<f64>, diameter: Option<f64>) -> Result<HodgeReport> {
    let ricci_min = SymmetricEigen::new(r.ricci()).eigenvalues.min();
    hodge_report_with_ricci(&r.spectrum(), r.n(), kappa, diameter, Some(ricci_min))
}

pub fn hodge_report_with_ricci(
    spectrum: &Spectrum,
    n: usize,
    kappa: Option<f64>,
    diameter: Option<f64>,
    ricci_min: Option<f64>,
) -> Result<HodgeReport> {
    crate::exterior::check_n(n)?;
    if spectrum.len() != n * n {
        return Err(Error::SizeMismatch {
            field: "spectrum".into(),
            expected: n * n,
            found: spectrum.len(),
        });
    }
    if let Some(k) = kappa {
        if k > 0.0 || k.is_nan() {
            return Err(Error::InvalidArgument(format!("κ = {k} must be ≤ 0")));
        }
    }
    if let Some(d) = diameter {
        if kappa.is_none() {
            return Err(Error::InvalidArgument("a diameter requires κ".into()));
        }
        if d <= 0.0 || d.is_nan() {
            return Err(Error::InvalidArgument(format!("diameter {d} must be positive")));
        }
    }
    let ricci_proxy = spectrum.partial_sum(n);
    let ricci_bound = ricci_min.map_or(ricci_proxy, |m| m.max(ricci_proxy));
    let ricci_positive = ricci_bound > BOUNDARY;
    let ring_condition = if n >= 2 { Some(ring_condition(spectrum, n)?) } else { None };

    let mut folded: Vec<Vec<Option<HodgeEntry>>> = vec![vec![None; n + 1]; n + 1];
    for p in 0..=n {
        for q in 0..=n - p {
            folded[p][q] = Some(evaluate_entry(spectrum, n, p, q, kappa, diameter, ricci_positive, ricci_bound)?);
        }
    }
    let entries = (0..=n)
        .map(|p| {
            (0..=n)
                .map(|q| {
                    if p + q <= n {
                        folded[p][q].expect("filled above")
                    } else {
                        let src = folded[n - p][n - q].expect("filled above");
                        HodgeEntry {
                            p,
                            q,
                            route: if src.route == HodgeRoute::None { HodgeRoute::None } else { HodgeRoute::SerreFold },
                            ..src
                        }
                    }
                })
                .collect()
        })
        .collect();
    Ok(HodgeReport {
        n,
        kappa,
        diameter,
        ring_condition,
        ricci_proxy,
        ricci_min,
        entries,
    })
}

#[allow(clippy::too_many_arguments)]
fn evaluate_entry(
    spectrum: &Spectrum,
    n: usize,
    p: usize,
    q: usize,
    kappa: Option<f64>,
    diameter: Option<f64>,
    ricci_positive: bool,
    ricci_bound: f64,
) -> Result<HodgeEntry> {
    let mut entry = HodgeEntry {
        p,
        q,
        status: HodgeStatus::NoConclusion,
        route: HodgeRoute::None,
        margin: f64::NAN,
        boundary: false,
        estimation: None,
    };
    if p + q == 0 {
        entry.status = HodgeStatus::EqualsOne;
        entry.route = HodgeRoute::Trivial;
        return Ok(entry);
    }
    let c = c_pq(n, p, q)?;
    let strict = weighted_sum(spectrum, c, 0.0, true)?;
    entry.margin = strict.margin;
    entry.boundary = strict.boundary;
    if strict.satisfied {
        entry.status = if p == q { HodgeStatus::EqualsOne } else { HodgeStatus::Vanishes };
        entry.route = HodgeRoute::WeightedCpq;
        return Ok(entry);
    }
    if (p == 0 || q == 0) && ricci_positive {
        entry.status = HodgeStatus::Vanishes;
        entry.route = HodgeRoute::RicciPositivity;
        entry.margin = ricci_bound;
        entry.boundary = false;
        return Ok(entry);
    }
    if let Some(k) = kappa {
        let level = weighted_sum(spectrum, c, k, false)?;
        entry.margin = level.margin;
        entry.boundary = level.boundary;
        if level.satisfied {
            if k == 0.0 {
                entry.status = HodgeStatus::ParallelOnly;
                entry.route = HodgeRoute::LevelKappa;
            }
            if let Some(d) = diameter {
                entry.estimation = Some(Estimation {
                    binomial_cap: (binomial(n, p) * binomial(n, q)) as u64,
                    exponent_argument: (-k * d * d * ((n + 2 - p.abs_diff(q)) * (p + q)) as f64).sqrt(),
                });
                entry.route = HodgeRoute::LevelKappa;
            }
        }
    }
    Ok(entry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{model_cp_k_flat, model_cpn, model_n2_from_mu, random_kahler};
    use crate::exterior::kahler_power;
    use crate::lie::hat_norm_sq_form;

    fn sp(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec())
    }

    #[test]
    fn constants() {
        for n in 1..=6 {
            assert!((c_pq(n, n, 0).unwrap() - 1.0).abs() < 1e-15);
            if n >= 2 {
                assert!((c_pq(n, n - 1, 0).unwrap() - 2.0).abs() < 1e-15);
                assert!((c_pq_k(n, n - 1, 1, 0).unwrap() - (3.0 - 2.0 / n as f64)).abs() < 1e-15);
            }
            if n >= 3 {
                assert!((c_pq_k(n, n - 1, 1, 1).unwrap() - 3.0).abs() < 1e-15);
            }
            for p in 0..=n {
                assert_eq!(c_pq_k(n, p, p, p), None);
                for q in 0..=n {
                    if p + q == 0 {
                        continue;
                    }
                    assert_eq!(c_pq(n, p, q).unwrap(), c_pq_k(n, p, q, 0).unwrap());
                    if p == q {
                        assert!((c_pq(n, p, p).unwrap() - (n + 1 - p) as f64).abs() < 1e-15);
                    }
                    let mut prev = f64::NEG_INFINITY;
                    for k in 0..=p.min(q) {
                        if let Some(c) = c_pq_k(n, p, q, k) {
                            assert!(c >= prev - 1e-15);
                            prev = c;
                        }
                    }
                    if p != q {
                        let top = c_pq_k(n, p, q, p.min(q)).unwrap();
                        assert!((top - (n + 1 - p.abs_diff(q)) as f64).abs() < 1e-12);
                    }
                }
            }
        }
        assert!(c_pq(3, 0, 0).is_err());
    }

    #[test]
    fn weighted_sum_examples() {
        let s = sp(&[-1.0, -1.0, 6.0, 8.0]);
        for alpha in [0.2, 1.0 / 3.0 + 1e-6, 0.5, 0.9] {
            let out = weighted_sum(&s, 2.0 + alpha, 0.0, true).unwrap();
            assert!((out.margin - (-2.0 + 6.0 * alpha)).abs() < 1e-12);
            assert_eq!(out.satisfied, alpha > 1.0 / 3.0);
        }
        assert!(weighted_sum(&sp(&[1.0, 2.0, 3.0, 4.0]), 3.7, 0.0, true).unwrap().satisfied);
        let z = weighted_sum(&sp(&[0.0; 4]), 2.5, 0.0, false).unwrap();
        assert!(z.satisfied && z.boundary && z.margin == 0.0);
        assert!(!weighted_sum(&sp(&[0.0; 4]), 2.5, 0.0, true).unwrap().satisfied);
        assert!(matches!(
            weighted_sum(&sp(&[1.0; 4]), 4.5, 0.0, true),
            Err(Error::SpectrumTooShort { needed: 5, available: 4 })
        ));
        assert!(weighted_sum(&sp(&[1.0; 4]), 4.0, 0.0, true).is_ok());
        let k = weighted_sum(&sp(&[-1.0; 4]), 2.0, -1.0, false).unwrap();
        assert!((k.margin - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tachibana_examples() {
        let mut v = vec![2.0; 15];
        v.push(10.0);
        let out = tachibana_condition(&sp(&v), 4, true).unwrap();
        assert!(out.satisfied && (out.margin - 5.0).abs() < 1e-12);
        let odd = tachibana_condition(&sp(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]), 3, true).unwrap();
        assert!((odd.margin - 3.0).abs() < 1e-12);
        let z = tachibana_condition(&sp(&[0.0; 16]), 4, false).unwrap();
        assert!(z.satisfied && z.margin == 0.0);
    }

    #[test]
    fn weitzenboeck_paths_agree() {
        for n in 2..=3 {
            for seed in 0..4u64 {
                let r = random_kahler(n, seed).unwrap();
                let mut g = rng::from_seed(seed + 50);
                for (p, q) in [(1, 0), (1, 1), (2, 1), (0, 2)] {
                    if p > n || q > n {
                        continue;
                    }
                    let len = binomial(n, p) * binomial(n, q);
                    let phi = PQForm::from_coeffs(n, p, q, rng::complex_normal_vec(&mut g, len)).unwrap();
                    let a = weitzenboeck_frame_sum(&r, &phi).unwrap();
                    let b = weitzenboeck_quadratic(&r, &phi).unwrap();
                    let scale = a.norm().max(b.abs()).max(1.0);
                    assert!((a.re - b).abs() < 1e-8 * scale, "n={n} ({p},{q}): {a} vs {b}");
                    assert!(a.im.abs() < 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn weitzenboeck_examples() {
        let r = random_kahler(3, 1).unwrap();
        for k in 0..=3 {
            assert!(weitzenboeck_quadratic(&r, &kahler_power(3, k).unwrap()).unwrap().abs() < 1e-10);
        }
        let mut g = rng::from_seed(2);
        let phi = PQForm::from_coeffs(3, 1, 2, rng::complex_normal_vec(&mut g, 9)).unwrap();
        let base = weitzenboeck_quadratic(&r, &phi).unwrap();
        let c = 0.75;
        let shifted = r.operator() + DMatrix::identity(9, 9) * c;
        let moved = weitzenboeck_quadratic_operator(&shifted, &phi).unwrap();
        let hat = hat_norm_sq_form(&phi).unwrap();
        assert!((moved - base - c * hat).abs() < 1e-9 * moved.abs().max(1.0));
    }

    #[test]
    fn curvature_quadratic_examples() {
        assert!(curvature_quadratic(&model_cpn(3).unwrap()).unwrap().abs() < 1e-10);
        let opt = model_n2_from_mu([3.0, 0.0, 0.0], [-1.0, 1.0, 3.0]).unwrap();
        assert!((curvature_quadratic(&opt).unwrap() - 96.0).abs() < 1e-9);
        for k in 0..=4 {
            assert!(curvature_quadratic(&model_cp_k_flat(4, k).unwrap()).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn action_bound_sharpness() {
        let n = 3;
        for p in 0..=n {
            for q in 0..=n {
                for k in 0..=p.min(q) {
                    if p + q == 2 * k {
                        assert!(verify_action_bound(n, p, q, k, 10, 1).is_err());
                        continue;
                    }
                    let out = verify_action_bound(n, p, q, k, 50, 3).unwrap();
                    assert!(out.max_ratio <= 1.0 + 1e-9, "({p},{q},{k}): {}", out.max_ratio);
                    if let Some(e) = out.extremizer_ratio {
                        assert!((e - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn lower_bound_checker() {
        let cp = model_cpn(3).unwrap();
        for (p, q, k) in [(1, 0, 0), (1, 1, 0), (2, 1, 1), (2, 2, 1)] {
            let out = quadratic_lower_bound_check(&cp, p, q, k, 0.0, BoundForm::Component, 20, 5).unwrap();
            assert!(out.precondition.satisfied && out.holds && out.samples == 20);
        }
        let ex = model_n2_from_mu([6.0, 0.0, 0.0], [8.0, -1.0, -1.0]).unwrap();
        let out = quadratic_lower_bound_check(&ex, 1, 1, 0, 0.0, BoundForm::Component, 10, 5).unwrap();
        assert!(!out.precondition.satisfied && out.samples == 0);
    }

    #[test]
    fn hodge_report_examples() {
        let rep = hodge_report(&sp(&[2.0, 2.0, 2.0, 6.0]), 2, None, None).unwrap();
        assert!(rep.is_projective_space_diamond());
        assert!(rep.ring_condition.unwrap().satisfied);

        let ex_spec = hodge_report(&sp(&[-1.0, -1.0, 6.0, 8.0]), 2, None, None).unwrap();
        assert!(!ex_spec.ring_condition.unwrap().satisfied);
        assert_eq!(ex_spec.status(1, 0), HodgeStatus::NoConclusion);
        let example = model_n2_from_mu([6.0, 0.0, 0.0], [8.0, -1.0, -1.0]).unwrap();
        let ex = hodge_report_for_curvature(&example, None, None).unwrap();
        assert!(!ex.ring_condition.unwrap().satisfied);
        assert!((ex.ricci_min.unwrap() - 6.0).abs() < 1e-12);
        assert_eq!(ex.status(1, 0), HodgeStatus::Vanishes);
        assert_eq!(ex.status(2, 0), HodgeStatus::Vanishes);
        assert_eq!(ex.entry(1, 0).route, HodgeRoute::RicciPositivity);

        let z = hodge_report(&sp(&[0.0; 9]), 3, None, None).unwrap();
        for p in 0..=3 {
            for q in 0..=3 {
                let want = if p + q == 0 || (p, q) == (3, 3) {
                    HodgeStatus::EqualsOne
                } else {
                    HodgeStatus::NoConclusion
                };
                assert_eq!(z.status(p, q), want, "({p},{q})");
            }
        }
        let zk = hodge_report(&sp(&[0.0; 9]), 3, Some(0.0), None).unwrap();
        assert_eq!(zk.status(1, 1), HodgeStatus::ParallelOnly);

        let est = hodge_report(&sp(&[-1.0; 4]), 2, Some(-2.0), Some(1.5)).unwrap();
        let e = est.entry(1, 0).estimation.unwrap();
        assert_eq!(e.binomial_cap, 2);
        assert!((e.exponent_argument - (2.0f64 * 2.25 * 3.0 * 1.0).sqrt()).abs() < 1e-12);
        assert!(hodge_report(&sp(&[0.0; 4]), 2, None, Some(1.0)).is_err());
        assert!(hodge_report(&sp(&[0.0; 4]), 3, None, None).is_err());
    }

    #[test]
    fn hodge_symmetries() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 3);
            let mut g = rng::from_seed(seed);
            let v: Vec<f64> = rng::normal_vec(&mut g, n * n).iter().map(|x| x + 1.0).collect();
            let rep = hodge_report(&sp(&v), n, Some(-0.5), Some(1.0)).unwrap();
            for p in 0..=n {
                for q in 0..=n {
                    assert_eq!(rep.status(p, q), rep.status(q, p));
                    assert_eq!(rep.status(p, q), rep.status(n - p, n - q));
                }
            }
        }
    }
}
