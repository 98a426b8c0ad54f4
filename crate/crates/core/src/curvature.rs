//! Algebraic Kähler curvature tensors on ℂⁿ.
//!
//! The canonical data is h((i,k),(j,l)) = −R(∂_i, ∂̄_j, ∂_k, ∂̄_l), a Hermitian
//! form on Sym²ℂⁿ indexed by unordered pairs i ≤ k. Any Hermitian h gives a
//! tensor with all Kähler symmetries and first Bianchi. The real tensor is
//!
//!   R(X,Y,Z,W) = −Re Σ h((i,k),(j,l)) A_ij(X,Y) A_kl(Z,W),
//!   A_ij(X,Y) = X^i conj(Y^j) − Y^i conj(X^j),
//!
//! with complex coordinates X^m = 1 on e_m and √−1 on f_m. The operator 𝔑 on
//! u(n) satisfies g(𝔑(x∧y), z∧w) = R(x,y,z,w).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::index::{pair_count, pair_from_index, pair_index};
use crate::lie::{self, u_dim, UnitaryAlgebra};
use crate::rng;
use crate::tensor::{pair_position, Tensor4};
use crate::tolerances::{BIANCHI, CONSTRUCTION};
use crate::exterior::check_n;
use crate::{Error, Result, C64};

#[derive(Debug, Clone)]
pub struct KahlerCurvature {
    n: usize,
    herm: DMatrix<C64>,
    operator: DMatrix<f64>,
    tensor: Tensor4,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

/// Sorted eigenvalues λ₁ ≤ … ≤ λ_N.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// λ₁ + … + λ_l
    pub fn partial_sum(&self, l: usize) -> f64 {
        self.values[..l.min(self.values.len())].iter().sum()
    }

    /// n with length n², if the length is a perfect square.
    pub fn complex_dim(&self) -> Option<usize> {
        let n = (self.values.len() as f64).sqrt().round() as usize;
        (n * n == self.values.len() && n > 0).then_some(n)
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }
}

/// Complex coordinate vector of ∂_i (conj = false) or ∂̄_i (conj = true) in the real frame.
fn dz_vector(n: usize, i: usize, conj: bool) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 2 * n];
    v[i] = C64::new(0.5, 0.0);
    v[n + i] = C64::new(0.0, if conj { 0.5 } else { -0.5 });
    v
}

/// Rows: real pairs a<b; column i·n+j: A_ij(e_a, e_b).
fn pair_transfer(n: usize) -> DMatrix<C64> {
    let d = 2 * n;
    let coord = |a: usize, m: usize| -> C64 {
        if a == m {
            C64::new(1.0, 0.0)
        } else if a == n + m {
            C64::new(0.0, 1.0)
        } else {
            C64::new(0.0, 0.0)
        }
    };
    let mut out = DMatrix::zeros(d * (d - 1) / 2, n * n);
    for a in 0..d {
        for b in a + 1..d {
            let row = pair_position(d, a, b);
            for i in 0..n {
                for j in 0..n {
                    out[(row, i * n + j)] = coord(a, i) * coord(b, j).conj() - coord(b, i) * coord(a, j).conj();
                }
            }
        }
    }
    out
}

fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn max_abs_c(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl KahlerCurvature {
    /// Builds R from h on Sym²ℂⁿ (pairs i ≤ k, lexicographic).
    pub fn from_hermitian(n: usize, herm: DMatrix<C64>) -> Result<Self> {
        check_n(n)?;
        let p = pair_count(n);
        if herm.nrows() != p || herm.ncols() != p {
            return Err(Error::SizeMismatch {
                field: "hermitian form on Sym²".into(),
                expected: p,
                found: herm.nrows().max(herm.ncols()),
            });
        }
        let defect = hermitian_defect(&herm);
        if defect > CONSTRUCTION * max_abs_c(&herm).max(1.0) {
            return Err(Error::NonHermitianInput { defect });
        }
        let herm = (&herm + herm.adjoint()) * C64::new(0.5, 0.0);

        let nn = n * n;
        let k = DMatrix::from_fn(nn, nn, |r, c| {
            let (i, j) = (r / n, r % n);
            let (kk, l) = (c / n, c % n);
            -herm[(pair_index(n, i, kk), pair_index(n, j, l))]
        });
        let a = pair_transfer(n);
        let rpair = (&a * k * a.transpose()).map(|z| z.re);
        let rpair = (&rpair + rpair.transpose()) * 0.5;
        let tensor = Tensor4::from_pair_matrix(2 * n, &rpair)?;
        let u = UnitaryAlgebra::get(n)?.u_bivectors();
        let operator = u.transpose() * &rpair * &u;
        let operator = (&operator + operator.transpose()) * 0.5;
        let (eigenvalues, eigenvectors) = sorted_eigen(&operator);
        Ok(Self {
            n,
            herm,
            operator,
            tensor,
            eigenvalues,
            eigenvectors,
        })
    }

    /// Builds R from a symmetric operator on u(n), rejecting matrices whose
    /// induced tensor violates the first Bianchi identity.
    pub fn from_operator_matrix(n: usize, m: &DMatrix<f64>) -> Result<Self> {
        check_n(n)?;
        let nn = u_dim(n);
        if m.nrows() != nn || m.ncols() != nn {
            return Err(Error::SizeMismatch {
                field: "operator matrix".into(),
                expected: nn,
                found: if m.nrows() != nn { m.nrows() } else { m.ncols() },
            });
        }
        let scale = m.abs().max().max(1.0);
        let asym = (m - m.transpose()).abs().max();
        if asym > CONSTRUCTION * scale {
            return Err(Error::NonSymmetricInput { defect: asym });
        }
        let m = (m + m.transpose()) * 0.5;
        let u = UnitaryAlgebra::get(n)?.u_bivectors();
        let rpair = &u * &m * u.transpose();
        let tensor = Tensor4::from_pair_matrix(2 * n, &rpair)?;
        let defect = tensor.bianchi_defect();
        if defect > BIANCHI * scale {
            return Err(Error::BianchiViolation { defect });
        }
        let herm = hermitian_from_pairs(n, &rpair);
        let out = Self::from_hermitian(n, herm)?;
        let mismatch = (&out.operator - &m).abs().max();
        if mismatch > BIANCHI * scale {
            return Err(Error::BianchiViolation { defect: mismatch });
        }
        Ok(out)
    }

    pub fn zero(n: usize) -> Result<Self> {
        let p = pair_count(n);
        Self::from_hermitian(n, DMatrix::zeros(p, p))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn herm(&self) -> &DMatrix<C64> {
        &self.herm
    }

    pub fn operator(&self) -> &DMatrix<f64> {
        &self.operator
    }

    pub fn to_operator_matrix(&self) -> DMatrix<f64> {
        self.operator.clone()
    }

    pub fn tensor(&self) -> &Tensor4 {
        &self.tensor
    }

    /// R(e_a, e_b, e_c, e_d) in the real frame (e_1..e_n, f_1..f_n).
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.tensor.get(a, b, c, d)
    }

    /// Ascending eigenvalues and matching orthonormal eigenvectors (columns).
    pub fn eigen(&self) -> (&[f64], &DMatrix<f64>) {
        (&self.eigenvalues, &self.eigenvectors)
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum {
            values: self.eigenvalues.clone(),
        }
    }

    pub fn ricci(&self) -> DMatrix<f64> {
        self.tensor.ricci()
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// Ric − (scal/2n) g
    pub fn ricci_traceless(&self) -> DMatrix<f64> {
        let ric = self.ricci();
        let d = 2 * self.n;
        let s = ric.trace() / d as f64;
        ric - DMatrix::identity(d, d) * s
    }

    pub fn bianchi_defect(&self) -> f64 {
        self.tensor.bianchi_defect()
    }

    /// |R|² = ¼ Σ R_abcd².
    pub fn norm_sq(&self) -> f64 {
        self.tensor.norm_sq()
    }

    /// |R^𝔲|² via structure constants in the eigenbasis of 𝔑.
    pub fn hat_norm_sq(&self) -> f64 {
        lie::hat_norm_sq_curvature(self).expect("dimension already validated")
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_hermitian(self.n, self.herm.map(|z| z * s)).expect("scaling preserves validity")
    }

    /// self + s·other
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "curvature tensors over ℂ^{} and ℂ^{}",
                self.n, other.n
            )));
        }
        Self::from_hermitian(self.n, &self.herm + other.herm.map(|z| z * s))
    }

    pub fn is_einstein(&self, tol: f64) -> bool {
        self.ricci_traceless().abs().max() <= tol * self.ricci().abs().max().max(1.0)
    }

    /// R(X, JX, Y, JY) for real vectors.
    pub fn bisectional(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n;
        let jv = |v: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; 2 * n];
            for i in 0..n {
                out[n + i] = v[i];
                out[i] = -v[n + i];
            }
            out
        };
        let (jx, jy) = (jv(x), jv(y));
        contract(&self.tensor, x, &jx, y, &jy)
    }
}

/// R(x, y, z, w) = Σ x^a y^b z^c w^d R_abcd.
pub fn contract(t: &Tensor4, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
    let d = t.dim();
    let mut acc = 0.0;
    for a in 0..d {
        if x[a] == 0.0 {
            continue;
        }
        for b in 0..d {
            if y[b] == 0.0 {
                continue;
            }
            for c in 0..d {
                if z[c] == 0.0 {
                    continue;
                }
                for e in 0..d {
                    acc += x[a] * y[b] * z[c] * w[e] * t.get(a, b, c, e);
                }
            }
        }
    }
    acc
}

/// h((i,k),(j,l)) = −R(∂_i, ∂̄_j, ∂_k, ∂̄_l) from a pair matrix.
fn hermitian_from_pairs(n: usize, rpair: &DMatrix<f64>) -> DMatrix<C64> {
    let d = 2 * n;
    let biv = |i: usize, j: usize| -> Vec<C64> {
        let (u, v) = (dz_vector(n, i, false), dz_vector(n, j, true));
        let mut out = vec![C64::new(0.0, 0.0); d * (d - 1) / 2];
        for a in 0..d {
            for b in a + 1..d {
                out[pair_position(d, a, b)] = u[a] * v[b] - u[b] * v[a];
            }
        }
        out
    };
    let p = pair_count(n);
    let bivs: Vec<Vec<C64>> = (0..n * n).map(|r| biv(r / n, r % n)).collect();
    DMatrix::from_fn(p, p, |r, c| {
        let (i, k) = pair_from_index(n, r);
        let (j, l) = pair_from_index(n, c);
        let (x, y) = (&bivs[i * n + j], &bivs[k * n + l]);
        let mut acc = C64::new(0.0, 0.0);
        for (s, xs) in x.iter().enumerate() {
            if xs.norm_sqr() == 0.0 {
                continue;
            }
            for (t, yt) in y.iter().enumerate() {
                acc += xs * rpair[(s, t)] * yt;
            }
        }
        -acc
    })
}

fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(m.nrows(), m.ncols());
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn spectrum(r: &KahlerCurvature) -> Spectrum {
    r.spectrum()
}

/// ℂPᵏ × ℂ^{n−k}: the Fubini–Study tensor (holomorphic sectional curvature 4)
/// on the first k coordinates and flat elsewhere.
pub fn model_cp_k_flat(n: usize, k: usize) -> Result<KahlerCurvature> {
    check_n(n)?;
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let p = pair_count(n);
    let mut h = DMatrix::zeros(p, p);
    for r in 0..p {
        let (i, kk) = pair_from_index(n, r);
        if kk < k {
            h[(r, r)] = C64::new(if i == kk { 1.0 } else { 0.5 }, 0.0);
        }
    }
    KahlerCurvature::from_hermitian(n, h)
}

pub fn model_cpn(n: usize) -> Result<KahlerCurvature> {
    model_cp_k_flat(n, n)
}

/// The n = 2 operator diag(μ_{i,±}) on the basis Ξ_{i,±}.
///
/// Kähler operators vanish on Ξ_{2,+}, Ξ_{3,+}; Bianchi holds iff Σμ₊ = Σμ₋.
pub fn model_n2_from_mu(mu_plus: [f64; 3], mu_minus: [f64; 3]) -> Result<KahlerCurvature> {
    if mu_plus[1] != 0.0 || mu_plus[2] != 0.0 {
        return Err(Error::InvalidArgument(
            "μ_{2,+} and μ_{3,+} must vanish: Ξ_{2,+}, Ξ_{3,+} lie outside u(2)".into(),
        ));
    }
    let xs = [
        (mu_plus[0], lie::LieElement::xi_n2(1, true)?),
        (mu_minus[0], lie::LieElement::xi_n2(1, false)?),
        (mu_minus[1], lie::LieElement::xi_n2(2, false)?),
        (mu_minus[2], lie::LieElement::xi_n2(3, false)?),
    ];
    let mut m = DMatrix::zeros(4, 4);
    for (mu, x) in &xs {
        let v = nalgebra::DVector::from_column_slice(x.u_part());
        m += &v * v.transpose() * *mu;
    }
    KahlerCurvature::from_operator_matrix(2, &m)
}

/// Random Hermitian h with unit-normal real and imaginary parts (real diagonal).
pub fn random_kahler(n: usize, seed: u64) -> Result<KahlerCurvature> {
    check_n(n)?;
    let mut g = rng::from_seed(seed);
    let p = pair_count(n);
    let mut h = DMatrix::zeros(p, p);
    for r in 0..p {
        h[(r, r)] = C64::new(rng::normal(&mut g), 0.0);
        for c in r + 1..p {
            let z = rng::complex_normal(&mut g);
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    KahlerCurvature::from_hermitian(n, h)
}

/// A random Kähler–Einstein tensor: random h with its trace-free Ricci part removed.
pub fn random_einstein(n: usize, seed: u64) -> Result<KahlerCurvature> {
    let r = random_kahler(n, seed)?;
    let dec = decompose(&r)?;
    r.axpy(-1.0, &dec.r0)
}

/// R = (scal/4n(n+1)) R_{ℂPⁿ} + R₀ + B.
#[derive(Debug, Clone)]
pub struct CurvatureDecomposition {
    pub scal: f64,
    pub ric0_norm_sq: f64,
    pub r_ring_norm_sq: f64,
    pub r0_norm_sq: f64,
    pub bochner_norm_sq: f64,
    /// R̊ = R − (scal/4n(n+1)) R_{ℂPⁿ}
    pub r_ring: KahlerCurvature,
    pub r0: KahlerCurvature,
    pub bochner: KahlerCurvature,
    pub cpn_part: KahlerCurvature,
}

pub fn r_ring(r: &KahlerCurvature) -> Result<KahlerCurvature> {
    let n = r.n;
    let c = r.scalar() / (4.0 * (n * (n + 1)) as f64);
    r.axpy(-c, &model_cpn(n)?)
}

/// Ric̊(∂_i, ∂̄_j) as a Hermitian n×n matrix.
fn complex_ricci(n: usize, ric: &DMatrix<f64>) -> DMatrix<C64> {
    let vs: Vec<Vec<C64>> = (0..n).map(|i| dz_vector(n, i, false)).collect();
    let ws: Vec<Vec<C64>> = (0..n).map(|j| dz_vector(n, j, true)).collect();
    DMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..2 * n {
            for b in 0..2 * n {
                acc += vs[i][a] * ric[(a, b)] * ws[j][b];
            }
        }
        acc
    })
}

/// Φ(H)_{(ik),(jl)} = H_ij δ_kl + H_il δ_kj + δ_ij H_kl + δ_il H_kj.
fn ricci_type_hermitian(n: usize, hm: &DMatrix<C64>) -> DMatrix<C64> {
    let p = pair_count(n);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    DMatrix::from_fn(p, p, |r, c| {
        let (i, k) = pair_from_index(n, r);
        let (j, l) = pair_from_index(n, c);
        hm[(i, j)] * delta(k, l) + hm[(i, l)] * delta(k, j) + hm[(k, l)] * delta(i, j) + hm[(k, j)] * delta(i, l)
    })
}

pub fn decompose(r: &KahlerCurvature) -> Result<CurvatureDecomposition> {
    let n = r.n;
    let scal = r.scalar();
    let cpn = model_cpn(n)?;
    let cpn_part = cpn.scale(scal / (4.0 * (n * (n + 1)) as f64));
    let ring = r.axpy(-1.0, &cpn_part)?;
    let ric0 = r.ricci_traceless();
    let ric0_norm_sq = ric0.norm_squared();

    let r0 = if ric0_norm_sq > 0.0 {
        let candidate = KahlerCurvature::from_hermitian(n, ricci_type_hermitian(n, &complex_ricci(n, &ric0)))?;
        let s2 = candidate.ricci().dot(&ric0) / ric0_norm_sq;
        candidate.scale(1.0 / s2)
    } else {
        KahlerCurvature::zero(n)?
    };
    let bochner = ring.axpy(-1.0, &r0)?;
    Ok(CurvatureDecomposition {
        scal,
        ric0_norm_sq,
        r_ring_norm_sq: ring.norm_sq(),
        r0_norm_sq: r0.norm_sq(),
        bochner_norm_sq: bochner.norm_sq(),
        r_ring: ring,
        r0,
        bochner,
        cpn_part,
    })
}

/// Components of an n = 2 tensor in the real labelling 1 = e₁, 2 = f₁, 3 = e₂, 4 = f₂,
/// and the isotropic curvature combinations
/// K(a,b,c,d) = R_acac + R_adad + R_bcbc + R_bdbd − 2R_abcd for the four
/// frames (1,2,4,3), (1,3,2,4), (1,3,4,2), (1,4,3,2).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IsotropicN2 {
    pub r1313: f64,
    pub r1414: f64,
    pub r2323: f64,
    pub r2424: f64,
    pub r1234: f64,
    pub r1324: f64,
    pub r1423: f64,
    pub combinations: [f64; 4],
}

pub fn isotropic_curvatures_n2(r: &KahlerCurvature) -> Result<IsotropicN2> {
    if r.n != 2 {
        return Err(Error::UnsupportedDimension(r.n));
    }
    // label → real index in (e₁, e₂, f₁, f₂)
    const IDX: [usize; 5] = [usize::MAX, 0, 2, 1, 3];
    let g = |a: usize, b: usize, c: usize, d: usize| r.get(IDX[a], IDX[b], IDX[c], IDX[d]);
    let k = |a: usize, b: usize, c: usize, d: usize| {
        g(a, c, a, c) + g(a, d, a, d) + g(b, c, b, c) + g(b, d, b, d) - 2.0 * g(a, b, c, d)
    };
    Ok(IsotropicN2 {
        r1313: g(1, 3, 1, 3),
        r1414: g(1, 4, 1, 4),
        r2323: g(2, 3, 2, 3),
        r2424: g(2, 4, 2, 4),
        r1234: g(1, 2, 3, 4),
        r1324: g(1, 3, 2, 4),
        r1423: g(1, 4, 2, 3),
        combinations: [k(1, 2, 4, 3), k(1, 3, 2, 4), k(1, 3, 4, 2), k(1, 4, 3, 2)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BisectionalMinimum {
    pub value: f64,
    /// true when computed in closed form (n = 2), false when sampled
    pub exact: bool,
}

/// Minimum of R(X,JX,Y,JY) over unit X, Y with Y ⊥ span{X, JX}.
///
/// For n = 2 this is exact: X∧JX and Y∧JY split as (Ξ_{1,+} ± ξ)/√2 with ξ on the
/// unit sphere of span{Ξ_{1,−}, Ξ_{2,−}, Ξ_{3,−}}, so the minimum is
/// (⟨𝔑Ξ_{1,+}, Ξ_{1,+}⟩ − λ_max(𝔑 on that span))/2. Otherwise it is a sampled
/// upper bound on the minimum.
pub fn min_orthogonal_bisectional(r: &KahlerCurvature, trials: usize, seed: u64) -> Result<BisectionalMinimum> {
    if r.n == 1 {
        return Err(Error::UnsupportedDimension(1));
    }
    if r.n == 2 {
        let plus = lie::LieElement::xi_n2(1, true)?;
        let minus: Vec<_> = [(1, false), (2, false), (3, false)]
            .iter()
            .map(|&(i, s)| lie::LieElement::xi_n2(i, s))
            .collect::<Result<_>>()?;
        let op = r.operator();
        let q = |a: &lie::LieElement, b: &lie::LieElement| {
            let (x, y) = (nalgebra::DVector::from_column_slice(a.u_part()), nalgebra::DVector::from_column_slice(b.u_part()));
            x.dot(&(op * y))
        };
        let block = DMatrix::from_fn(3, 3, |i, j| q(&minus[i], &minus[j]));
        let top = SymmetricEigen::new(block).eigenvalues.max();
        return Ok(BisectionalMinimum {
            value: 0.5 * (q(&plus, &plus) - top),
            exact: true,
        });
    }
    Ok(BisectionalMinimum {
        value: sampled_min_orthogonal_bisectional(r, trials, seed)?,
        exact: false,
    })
}

/// Smallest sampled R(X,JX,Y,JY) over random orthonormal complex pairs.
pub fn sampled_min_orthogonal_bisectional(r: &KahlerCurvature, trials: usize, seed: u64) -> Result<f64> {
    let n = r.n;
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let mut g = rng::from_seed(seed);
    let mut best = f64::INFINITY;
    for _ in 0..trials {
        let x = normalize(rng::complex_normal_vec(&mut g, n));
        let mut y = rng::complex_normal_vec(&mut g, n);
        let overlap: C64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi -= xi * overlap;
        }
        let y = normalize(y);
        let real = |v: &[C64]| -> Vec<f64> { v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect() };
        best = best.min(r.bisectional(&real(&x), &real(&y)));
    }
    Ok(best)
}

fn normalize(v: Vec<C64>) -> Vec<C64> {
    let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{action_norm_sq_eigen, hat_norm_sq_curvature_direct, LieElement};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn cpn_normalisation() {
        for n in 1..=5 {
            let r = model_cpn(n).unwrap();
            let sp = r.spectrum();
            for (i, v) in sp.values().iter().enumerate() {
                let want = if i + 1 == n * n { 2.0 * (n + 1) as f64 } else { 2.0 };
                assert!((v - want).abs() < 1e-12, "n={n}: {:?}", sp.values());
            }
            let ric = r.ricci();
            let d = 2 * n;
            assert!((ric - DMatrix::identity(d, d) * (2.0 * (n + 1) as f64)).abs().max() < 1e-12);
            assert!((r.scalar() - 4.0 * (n * (n + 1)) as f64).abs() < 1e-10);
            assert!(r.bianchi_defect() < 1e-12);
            assert!(r.tensor().symmetry_defect() < 1e-12);
        }
    }

    #[test]
    fn tensor_norm_matches_spectrum() {
        for n in 1..=4 {
            let r = random_kahler(n, 40 + n as u64).unwrap();
            let s: f64 = r.spectrum().values().iter().map(|l| l * l).sum();
            assert!(rel(r.norm_sq(), s) < 1e-10);
            assert!(r.bianchi_defect() < 1e-12);
            assert!(r.tensor().symmetry_defect() < 1e-12);
            let j = crate::exterior::ComplexModel::new(n).unwrap().complex_structure();
            assert!(r.tensor().j_invariance_defect(&j) < 1e-12);
            // J-invariant Ricci
            let ric = r.ricci();
            assert!((j.transpose() * &ric * &j - &ric).abs().max() < 1e-12);
        }
    }

    #[test]
    fn operator_round_trip() {
        for n in 1..=4 {
            let r = random_kahler(n, n as u64).unwrap();
            let back = KahlerCurvature::from_operator_matrix(n, r.operator()).unwrap();
            assert!((back.herm() - r.herm()).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
        }
        let zero = KahlerCurvature::zero(3).unwrap();
        assert_eq!(zero.operator().abs().max(), 0.0);
        let p = pair_count(3);
        let id = KahlerCurvature::from_hermitian(3, DMatrix::identity(p, p)).unwrap();
        assert!(id.is_einstein(1e-12));
        let back = KahlerCurvature::from_operator_matrix(3, id.operator()).unwrap();
        assert!((back.operator() - id.operator()).abs().max() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut g = rng::from_seed(9);
        let m = DMatrix::from_fn(4, 4, |_, _| rng::normal(&mut g));
        let m = &m + m.transpose();
        assert!(matches!(
            KahlerCurvature::from_operator_matrix(2, &m),
            Err(Error::BianchiViolation { defect }) if defect > 0.0
        ));
        let mut asym = DMatrix::zeros(4, 4);
        asym[(0, 1)] = 1.0;
        assert!(matches!(
            KahlerCurvature::from_operator_matrix(2, &asym),
            Err(Error::NonSymmetricInput { .. })
        ));
        let mut h = DMatrix::zeros(3, 3);
        h[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            KahlerCurvature::from_hermitian(2, h),
            Err(Error::NonHermitianInput { .. })
        ));
        assert!(model_n2_from_mu([1.0, 1.0, 0.0], [1.0, 1.0, 0.0]).is_err());
        assert!(matches!(
            model_n2_from_mu([1.0, 0.0, 0.0], [1.0, 1.0, 0.0]),
            Err(Error::BianchiViolation { .. })
        ));
    }

    #[test]
    fn cp_k_flat_block_spectrum() {
        for n in 1..=5 {
            for k in 0..=n {
                let sp = model_cp_k_flat(n, k).unwrap().spectrum();
                let mut want = vec![0.0; n * n - k * k];
                want.extend(std::iter::repeat_n(2.0, (k * k).saturating_sub(1)));
                if k > 0 {
                    want.push(2.0 * (k + 1) as f64);
                }
                for (a, b) in sp.values().iter().zip(&want) {
                    assert!((a - b).abs() < 1e-12, "n={n} k={k}");
                }
                let ric = model_cp_k_flat(n, k).unwrap().ricci();
                let want_sq = 8.0 * (k * (k + 1) * (k + 1)) as f64;
                assert!(rel(ric.norm_squared(), want_sq) < 1e-12);
            }
        }
    }

    #[test]
    fn example_family_n2() {
        let eps = 1.0;
        let r = model_n2_from_mu([6.0, 0.0, 0.0], [6.0 + 2.0 * eps, -eps, -eps]).unwrap();
        let sp = r.spectrum();
        for (a, b) in sp.values().iter().zip([-1.0, -1.0, 6.0, 8.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(r.is_einstein(1e-12));
        let iso = isotropic_curvatures_n2(&r).unwrap();
        for v in [iso.r1313, iso.r1414, iso.r2323, iso.r2424] {
            assert!((v + 0.5).abs() < 1e-12);
        }
        assert!((iso.r1234 + 1.0).abs() < 1e-12);
        assert!((iso.combinations[0] + 4.0).abs() < 1e-12);
        let bis = min_orthogonal_bisectional(&r, 0, 0).unwrap();
        assert!(bis.exact && bis.value < 0.0);
        assert!(isotropic_curvatures_n2(&model_cpn(3).unwrap()).is_err());
    }

    #[test]
    fn bisectional_exact_matches_sampling() {
        for seed in 0..5 {
            let r = random_kahler(2, 100 + seed).unwrap();
            let exact = min_orthogonal_bisectional(&r, 0, 0).unwrap().value;
            let sampled = sampled_min_orthogonal_bisectional(&r, 4000, seed).unwrap();
            assert!(sampled >= exact - 1e-10);
            assert!(sampled - exact < 0.05 * r.operator().abs().max());
        }
        let cp2 = model_cpn(2).unwrap();
        assert!((min_orthogonal_bisectional(&cp2, 0, 0).unwrap().value - 2.0).abs() < 1e-12);
        assert!(sampled_min_orthogonal_bisectional(&model_cpn(3).unwrap(), 200, 1).unwrap() > 0.0);
        let z = KahlerCurvature::zero(2).unwrap();
        assert_eq!(min_orthogonal_bisectional(&z, 0, 0).unwrap().value, 0.0);
    }

    #[test]
    fn optimality_example() {
        let r = model_n2_from_mu([3.0, 0.0, 0.0], [-1.0, 1.0, 3.0]).unwrap();
        assert!(r.is_einstein(1e-12));
        let dec = decompose(&r).unwrap();
        assert!((dec.r_ring_norm_sq - 8.0).abs() < 1e-10);
        assert!((r.hat_norm_sq() - 96.0).abs() < 1e-10);
        let expect = [((1, true), 0.0), ((1, false), 16.0), ((2, false), 64.0), ((3, false), 16.0)];
        for ((i, s), v) in expect {
            let l = LieElement::xi_n2(i, s).unwrap();
            assert!((action_norm_sq_eigen(&l, &r).unwrap() - v).abs() < 1e-10);
            let direct = lie::act_on_curvature(&l, &r).unwrap().norm_sq();
            assert!((direct - v).abs() < 1e-10);
        }
    }

    #[test]
    fn decomposition_properties() {
        for n in 2..=4 {
            let r = random_kahler(n, 7 * n as u64).unwrap();
            let dec = decompose(&r).unwrap();
            let recon = dec.cpn_part.axpy(1.0, &dec.r0).unwrap().axpy(1.0, &dec.bochner).unwrap();
            assert!((recon.operator() - r.operator()).abs().max() < 1e-10);
            assert!(dec.bochner.ricci().abs().max() < 1e-10);
            assert!(dec.r0.tensor().inner(dec.bochner.tensor()).abs() < 1e-9);
            assert!(dec.cpn_part.tensor().inner(dec.r_ring.tensor()).abs() < 1e-9);
            assert!(rel(dec.r0_norm_sq, 2.0 / (n + 2) as f64 * dec.ric0_norm_sq) < 1e-9);
            let total = dec.cpn_part.norm_sq() + dec.r0_norm_sq + dec.bochner_norm_sq;
            assert!(rel(total, r.norm_sq()) < 1e-9);
            assert!(rel(r_ring(&r).unwrap().norm_sq(), dec.r_ring_norm_sq) < 1e-12);
        }
        let cp = decompose(&model_cpn(3).unwrap()).unwrap();
        assert!(cp.r_ring_norm_sq < 1e-20 && cp.bochner_norm_sq < 1e-20);
        let e = random_einstein(3, 5).unwrap();
        let de = decompose(&e).unwrap();
        assert!(de.ric0_norm_sq < 1e-20 && de.r0_norm_sq < 1e-20);
    }

    #[test]
    fn hat_norm_two_paths() {
        for n in 1..=4 {
            let r = random_kahler(n, 3 + n as u64).unwrap();
            assert!(rel(r.hat_norm_sq(), hat_norm_sq_curvature_direct(&r).unwrap()) < 1e-9);
        }
    }
}
