//! u(n) ⊂ so(2n) ≅ Λ²ℝ²ⁿ.
//!
//! A bivector x∧y acts on vectors as z ↦ g(y,z)x − g(x,z)y, i.e. as the matrix
//! x yᵀ − y xᵀ. With this sign (e_i∧f_j) sends dx^i to −dy^j through the
//! derivation action on 1-forms, which fixes the whole action table on dz, dz̄.
//!
//! Basis order: R_ij (i<j, lex), I_ij (i<j, lex), I_ii, then R^⊥_ij, I^⊥_ij, where
//! R_ij = (e_i∧e_j + f_i∧f_j)/√2, I_ij = (e_i∧f_j + e_j∧f_i)/√2, I_ii = e_i∧f_i and
//! the ⊥ versions carry a minus sign between the two terms.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::curvature::KahlerCurvature;
use crate::exterior::{check_n, PQForm};
use crate::index::{members, substitution_sign, MAX_N};
use crate::tensor::{pair_position, Tensor4};
use crate::tolerances::CONSTRUCTION;
use crate::{Error, Result, C64};

/// Real coefficients over the ordered orthonormal basis of Λ²ℝ²ⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    n: usize,
    coeffs: Vec<f64>,
}

pub fn so_dim(n: usize) -> usize {
    n * (2 * n - 1)
}

pub fn u_dim(n: usize) -> usize {
    n * n
}

impl LieElement {
    pub fn zeros(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            coeffs: vec![0.0; so_dim(n)],
        })
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_n(n)?;
        if coeffs.len() != so_dim(n) {
            return Err(Error::SizeMismatch {
                field: "Λ² coefficients".into(),
                expected: so_dim(n),
                found: coeffs.len(),
            });
        }
        Ok(Self { n, coeffs })
    }

    /// Element of u(n) from its n² coordinates in the u-block.
    pub fn from_u_coeffs(n: usize, u: &[f64]) -> Result<Self> {
        check_n(n)?;
        if u.len() != u_dim(n) {
            return Err(Error::SizeMismatch {
                field: "u(n) coefficients".into(),
                expected: u_dim(n),
                found: u.len(),
            });
        }
        let mut coeffs = vec![0.0; so_dim(n)];
        coeffs[..u.len()].copy_from_slice(u);
        Ok(Self { n, coeffs })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut out = Self::zeros(n)?;
        if index >= out.coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for Λ²ℝ^{}",
                2 * n
            )));
        }
        out.coeffs[index] = 1.0;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn u_part(&self) -> &[f64] {
        &self.coeffs[..u_dim(self.n)]
    }

    pub fn perp_part(&self) -> &[f64] {
        &self.coeffs[u_dim(self.n)..]
    }

    pub fn perp_norm(&self) -> f64 {
        self.perp_part().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.perp_norm() <= tol * self.norm().max(1.0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inner(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// self + s·other
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "Lie elements over ℂ^{} and ℂ^{}",
                self.n, other.n
            )));
        }
        Ok(Self {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + s * b).collect(),
        })
    }

    /// The n = 2 basis Ξ_{i,±} in the real labelling 1 = e₁, 2 = f₁, 3 = e₂, 4 = f₂:
    /// Ξ_{1,±} = (e₁∧f₁ ± e₂∧f₂)/√2, Ξ_{2,±} = (e₁∧e₂ ∓ f₁∧f₂)/√2,
    /// Ξ_{3,±} = (e₁∧f₂ ∓ e₂∧f₁)/√2. The minus versions together with Ξ_{1,+} span u(2).
    pub fn xi_n2(i: usize, plus: bool) -> Result<Self> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // u-block of n=2: R_12, I_12, I_11, I_22; perp block: R⊥_12, I⊥_12
        let coeffs = match (i, plus) {
            (1, true) => vec![0.0, 0.0, s, s, 0.0, 0.0],
            (1, false) => vec![0.0, 0.0, s, -s, 0.0, 0.0],
            (2, false) => vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            (3, false) => vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
            (2, true) => vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            (3, true) => vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            _ => {
                return Err(Error::InvalidArgument(format!("Ξ index {i} must be 1, 2 or 3")));
            }
        };
        Self::from_coeffs(2, coeffs)
    }
}

/// c[γ][α][β] = g([Ξ_γ, Ξ_α], Ξ_β) over the u(n) basis, nonzero entries only.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    n: usize,
    entries: Vec<Vec<(usize, usize, f64)>>,
}

impl StructureConstants {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Nonzero (α, β, c) for fixed γ.
    pub fn row(&self, gamma: usize) -> &[(usize, usize, f64)] {
        &self.entries[gamma]
    }

    pub fn get(&self, gamma: usize, alpha: usize, beta: usize) -> f64 {
        self.entries[gamma]
            .iter()
            .find(|(a, b, _)| *a == alpha && *b == beta)
            .map_or(0.0, |e| e.2)
    }

    /// ad(Ξ_γ) restricted to u(n) as a matrix: entry (β, α) = c[γ][α][β].
    pub fn ad_matrix(&self, gamma: usize) -> DMatrix<f64> {
        let d = u_dim(self.n);
        let mut m = DMatrix::zeros(d, d);
        for &(a, b, c) in &self.entries[gamma] {
            m[(b, a)] = c;
        }
        m
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }
}

/// Cached basis data for u(n) ⊂ so(2n).
#[derive(Debug)]
pub struct UnitaryAlgebra {
    n: usize,
    labels: Vec<String>,
    endomorphisms: Vec<DMatrix<f64>>,
    /// Column α holds the coefficients of basis element α on e_a∧e_b (a<b, lex).
    bivectors: DMatrix<f64>,
    structure: StructureConstants,
    /// For each u(n) basis element, A with Ξ dz^i = Σ_j A[(j,i)] dz^j.
    form_actions: Vec<DMatrix<C64>>,
}

static CACHE: [OnceLock<UnitaryAlgebra>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];

impl UnitaryAlgebra {
    pub fn get(n: usize) -> Result<&'static Self> {
        check_n(n)?;
        Ok(CACHE[n].get_or_init(|| Self::build(n)))
    }

    fn build(n: usize) -> Self {
        let d = 2 * n;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (e, f) = (|i: usize| i, |i: usize| n + i);
        let mut labels = Vec::with_capacity(so_dim(n));
        let mut terms: Vec<Vec<(usize, usize, f64)>> = Vec::with_capacity(so_dim(n));
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for &(i, j) in &pairs {
            labels.push(format!("R_{}{}", i + 1, j + 1));
            terms.push(vec![(e(i), e(j), s), (f(i), f(j), s)]);
        }
        for &(i, j) in &pairs {
            labels.push(format!("I_{}{}", i + 1, j + 1));
            terms.push(vec![(e(i), f(j), s), (e(j), f(i), s)]);
        }
        for i in 0..n {
            labels.push(format!("I_{}{}", i + 1, i + 1));
            terms.push(vec![(e(i), f(i), 1.0)]);
        }
        for &(i, j) in &pairs {
            labels.push(format!("R⊥_{}{}", i + 1, j + 1));
            terms.push(vec![(e(i), e(j), s), (f(i), f(j), -s)]);
        }
        for &(i, j) in &pairs {
            labels.push(format!("I⊥_{}{}", i + 1, j + 1));
            terms.push(vec![(e(i), f(j), s), (e(j), f(i), -s)]);
        }

        let mut endomorphisms = Vec::with_capacity(terms.len());
        let mut bivectors = DMatrix::zeros(d * (d - 1) / 2, terms.len());
        for (col, t) in terms.iter().enumerate() {
            let mut m = DMatrix::zeros(d, d);
            for &(x, y, c) in t {
                m[(x, y)] += c;
                m[(y, x)] -= c;
                let (lo, hi, sign) = if x < y { (x, y, 1.0) } else { (y, x, -1.0) };
                bivectors[(pair_position(d, lo, hi), col)] += sign * c;
            }
            endomorphisms.push(m);
        }

        let ud = u_dim(n);
        let mut entries = vec![Vec::new(); ud];
        for (g, row) in entries.iter_mut().enumerate() {
            for a in 0..ud {
                let comm = &endomorphisms[g] * &endomorphisms[a] - &endomorphisms[a] * &endomorphisms[g];
                for b in 0..ud {
                    let c: f64 = 0.5 * comm.dot(&endomorphisms[b]);
                    if c.abs() > 1e-14 {
                        row.push((a, b, c));
                    }
                }
            }
        }
        let form_actions = endomorphisms[..ud]
            .iter()
            .map(|m| complex_action(n, m).0)
            .collect();
        Self {
            n,
            labels,
            endomorphisms,
            bivectors,
            structure: StructureConstants { n, entries },
            form_actions,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_endomorphism(&self, index: usize) -> &DMatrix<f64> {
        &self.endomorphisms[index]
    }

    /// Bivector coefficients (rows: pairs a<b of real indices) of all basis elements.
    pub fn bivectors(&self) -> &DMatrix<f64> {
        &self.bivectors
    }

    /// The first n² columns of [`Self::bivectors`].
    pub fn u_bivectors(&self) -> DMatrix<f64> {
        self.bivectors.columns(0, u_dim(self.n)).into_owned()
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.structure
    }
}

/// Splits the derivation action of a real endomorphism M on 1-forms into
/// holomorphic and mixed parts: M dz^i = Σ_j A[(j,i)] dz^j + B[(j,i)] dz̄^j.
fn complex_action(n: usize, m: &DMatrix<f64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let i_unit = C64::new(0.0, 1.0);
    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        // (Mα)(X) = −α(MX); for α = dz^i the row is −(M[x_i,:] + √−1 M[y_i,:])
        let r = |c: usize| -(C64::new(m[(i, c)], 0.0) + i_unit * m[(n + i, c)]);
        for j in 0..n {
            let (rx, ry) = (r(j), r(n + j));
            a[(j, i)] = (rx - i_unit * ry) * 0.5;
            b[(j, i)] = (rx + i_unit * ry) * 0.5;
        }
    }
    (a, b)
}

pub fn u_basis(n: usize) -> Result<Vec<LieElement>> {
    (0..u_dim(n)).map(|i| LieElement::basis(n, i)).collect()
}

pub fn so_basis(n: usize) -> Result<Vec<LieElement>> {
    (0..so_dim(n)).map(|i| LieElement::basis(n, i)).collect()
}

pub fn structure_constants(n: usize) -> Result<&'static StructureConstants> {
    Ok(UnitaryAlgebra::get(n)?.structure_constants())
}

/// Skew-symmetric 2n×2n matrix of L.
pub fn as_endomorphism(l: &LieElement) -> DMatrix<f64> {
    let alg = UnitaryAlgebra::get(l.n).expect("LieElement has a valid dimension");
    let d = 2 * l.n;
    let mut m = DMatrix::zeros(d, d);
    for (c, e) in l.coeffs.iter().zip(&alg.endomorphisms) {
        if *c != 0.0 {
            m += e * *c;
        }
    }
    m
}

/// Inverse of [`as_endomorphism`] on skew-symmetric matrices.
pub fn from_endomorphism(n: usize, m: &DMatrix<f64>) -> Result<LieElement> {
    let alg = UnitaryAlgebra::get(n)?;
    let d = 2 * n;
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}×{} matrix is not an endomorphism of ℝ^{d}",
            m.nrows(),
            m.ncols()
        )));
    }
    let skew = (m + m.transpose()).abs().max();
    if skew > CONSTRUCTION * m.abs().max().max(1.0) {
        return Err(Error::NonSymmetricInput { defect: skew });
    }
    let coeffs = alg.endomorphisms.iter().map(|e| 0.5 * m.dot(e)).collect();
    LieElement::from_coeffs(n, coeffs)
}

pub fn bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(format!(
            "bracket of elements over ℂ^{} and ℂ^{}",
            a.n, b.n
        )));
    }
    let (ma, mb) = (as_endomorphism(a), as_endomorphism(b));
    from_endomorphism(a.n, &(&ma * &mb - &mb * &ma))
}

fn require_unitary(l: &LieElement) -> Result<()> {
    if !l.is_unitary(CONSTRUCTION) {
        return Err(Error::NotUnitary {
            perp_norm: l.perp_norm(),
        });
    }
    Ok(())
}

/// A[(j,i)] for the u(n)-part of L: L dz^i = Σ_j A[(j,i)] dz^j.
fn holomorphic_action(l: &LieElement) -> DMatrix<C64> {
    let alg = UnitaryAlgebra::get(l.n).expect("LieElement has a valid dimension");
    let mut a = DMatrix::zeros(l.n, l.n);
    for (c, m) in l.u_part().iter().zip(&alg.form_actions) {
        if *c != 0.0 {
            a += m * C64::new(*c, 0.0);
        }
    }
    a
}

/// Applies the derivation with L dz^i = Σ_j A[(j,i)] dz^j and L dz̄^i = Σ_j conj(A[(j,i)]) dz̄^j.
fn apply_holomorphic(a: &DMatrix<C64>, phi: &PQForm) -> Result<PQForm> {
    let n = phi.n();
    let mut out = PQForm::zeros(n, phi.p(), phi.q())?;
    for (pair, c) in phi.terms() {
        let (h, an) = (pair.holo_mask(), pair.anti_mask());
        for i in members(h) {
            for j in 0..n {
                let w = a[(j, i)];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                if j == i {
                    let idx = out.index_of(h, an);
                    out.coeffs_mut()[idx] += c * w;
                } else if h & (1 << j) == 0 {
                    let nh = (h & !(1 << i)) | (1 << j);
                    let idx = out.index_of(nh, an);
                    out.coeffs_mut()[idx] += c * w * substitution_sign(h, i, j);
                }
            }
        }
        for i in members(an) {
            for j in 0..n {
                let w = a[(j, i)].conj();
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                if j == i {
                    let idx = out.index_of(h, an);
                    out.coeffs_mut()[idx] += c * w;
                } else if an & (1 << j) == 0 {
                    let na = (an & !(1 << i)) | (1 << j);
                    let idx = out.index_of(h, na);
                    out.coeffs_mut()[idx] += c * w * substitution_sign(an, i, j);
                }
            }
        }
    }
    Ok(out)
}

/// Derivation action of L ∈ u(n) on a (p,q)-form.
pub fn act_on_form(l: &LieElement, phi: &PQForm) -> Result<PQForm> {
    if l.n != phi.n() {
        return Err(Error::DimensionMismatch(format!(
            "u({}) acting on forms over ℂ^{}",
            l.n,
            phi.n()
        )));
    }
    require_unitary(l)?;
    apply_holomorphic(&holomorphic_action(l), phi)
}

/// |φ^𝔲|² = Σ_α |Ξ_α φ|² over the standard u(n) basis.
pub fn hat_norm_sq_form(phi: &PQForm) -> Result<f64> {
    let alg = UnitaryAlgebra::get(phi.n())?;
    let mut acc = 0.0;
    for a in &alg.form_actions {
        acc += apply_holomorphic(a, phi)?.norm_sq();
    }
    Ok(acc)
}

/// Σ_α |Ξ_α φ|² over a caller-supplied family of u(n) elements.
pub fn hat_norm_sq_form_in(basis: &[LieElement], phi: &PQForm) -> Result<f64> {
    let mut acc = 0.0;
    for l in basis {
        acc += act_on_form(l, phi)?.norm_sq();
    }
    Ok(acc)
}

/// Derivation action of L ∈ u(n) on a (0,4)-tensor over ℝ²ⁿ.
pub fn act_on_tensor(l: &LieElement, t: &Tensor4) -> Result<Tensor4> {
    if t.dim() != 2 * l.n {
        return Err(Error::DimensionMismatch(format!(
            "u({}) acting on a tensor over ℝ^{}",
            l.n,
            t.dim()
        )));
    }
    require_unitary(l)?;
    Ok(t.derivation(&as_endomorphism(l)))
}

pub fn act_on_curvature(l: &LieElement, r: &KahlerCurvature) -> Result<Tensor4> {
    if l.n != r.n() {
        return Err(Error::DimensionMismatch(format!(
            "u({}) acting on a curvature tensor over ℂ^{}",
            l.n,
            r.n()
        )));
    }
    act_on_tensor(l, r.tensor())
}

/// |LR|² = 2 Σ_{α<β} (λ_α − λ_β)² g(L E_α, E_β)² in an orthonormal eigenbasis E of 𝔑.
pub fn action_norm_sq_eigen(l: &LieElement, r: &KahlerCurvature) -> Result<f64> {
    if l.n != r.n() {
        return Err(Error::DimensionMismatch(format!(
            "u({}) acting on a curvature tensor over ℂ^{}",
            l.n,
            r.n()
        )));
    }
    require_unitary(l)?;
    let sc = structure_constants(l.n)?;
    let d = u_dim(l.n);
    let mut ad = DMatrix::zeros(d, d);
    for (g, &c) in l.u_part().iter().enumerate() {
        if c != 0.0 {
            ad += sc.ad_matrix(g) * c;
        }
    }
    Ok(eigen_action_sum(&ad, r))
}

fn eigen_action_sum(ad: &DMatrix<f64>, r: &KahlerCurvature) -> f64 {
    let (lambda, v) = r.eigen();
    // entry (β, α) = g(L E_α, E_β)
    let c = v.transpose() * ad * v;
    let d = lambda.len();
    let mut acc = 0.0;
    for a in 0..d {
        for b in a + 1..d {
            let diff = lambda[a] - lambda[b];
            acc += diff * diff * c[(b, a)] * c[(b, a)];
        }
    }
    2.0 * acc
}

/// |R^𝔲|² = Σ_γ |Ξ_γ R|² through the structure constants and the eigenbasis of 𝔑.
pub fn hat_norm_sq_curvature(r: &KahlerCurvature) -> Result<f64> {
    let sc = structure_constants(r.n())?;
    Ok((0..u_dim(r.n())).map(|g| eigen_action_sum(&sc.ad_matrix(g), r)).sum())
}

/// |R^𝔲|² by differentiating the 4-tensor directly.
pub fn hat_norm_sq_curvature_direct(r: &KahlerCurvature) -> Result<f64> {
    let alg = UnitaryAlgebra::get(r.n())?;
    Ok(alg.endomorphisms[..u_dim(r.n())]
        .iter()
        .map(|m| r.tensor().derivation(m).norm_sq())
        .sum())
}

/// Coordinates of a u(n) element given as a vector in the u-block.
pub fn u_element(n: usize, v: &DVector<f64>) -> Result<LieElement> {
    LieElement::from_u_coeffs(n, v.as_slice())
}
