//! The complex exterior algebra of V = ℝ²ⁿ with its compatible complex structure.
//!
//! A [`PQForm`] stores complex coefficients on the basis dz^I ∧ dz̄^J with all
//! holomorphic factors first and each index list increasing. Basis forms are
//! mutually orthogonal for the Hermitian inner product ⟨a, b⟩ = g(a, b̄), which
//! is the determinant inner product on Λ^r extended sesquilinearly; with this
//! convention |dz^I ∧ dz̄^J|² = 2^{p+q}.

mod projector;
pub mod real;

pub use projector::{component_projector, ComponentProjector};

use nalgebra::DMatrix;

use crate::index::{binomial, members, merge_sign, subsets, MAX_N};
use crate::{Error, Result, C64};

/// ℂⁿ = ℝ²ⁿ with orthonormal real basis e_1..e_n, f_1..f_n and J e_i = f_i.
///
/// Real coordinates are ordered (x_1..x_n, y_1..y_n), so e_i has zero-based
/// index `i - 1` and f_i has index `n + i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexModel {
    n: usize,
}

impl ComplexModel {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    /// Zero-based real index of e_i (i is one-based).
    pub fn e(&self, i: usize) -> usize {
        i - 1
    }

    /// Zero-based real index of f_i = J e_i (i is one-based).
    pub fn f(&self, i: usize) -> usize {
        self.n + i - 1
    }

    /// Matrix of J on ℝ²ⁿ.
    pub fn complex_structure(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut j = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(n + i, i)] = 1.0;
            j[(i, n + i)] = -1.0;
        }
        j
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        binomial(self.n, p) * binomial(self.n, q)
    }

    pub fn basis(&self, p: usize, q: usize) -> Result<Vec<MultiIndexPair>> {
        basis_enumeration(self.n, p, q)
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

pub(crate) fn check_degree(n: usize, p: usize, q: usize) -> Result<()> {
    check_n(n)?;
    if p > n || q > n {
        return Err(Error::DegreeOutOfRange { n, p, q });
    }
    Ok(())
}

/// The index pair (I, J) of a basis form dz^I ∧ dz̄^J.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndexPair {
    holo: u32,
    anti: u32,
}

impl MultiIndexPair {
    /// Builds a pair from strictly increasing one-based index lists.
    pub fn new(holo: &[usize], anti: &[usize]) -> Result<Self> {
        Ok(Self {
            holo: increasing_mask(holo)?,
            anti: increasing_mask(anti)?,
        })
    }

    pub(crate) fn from_masks(holo: u32, anti: u32) -> Self {
        Self { holo, anti }
    }

    pub fn holo(&self) -> Vec<usize> {
        members(self.holo).map(|i| i + 1).collect()
    }

    pub fn anti(&self) -> Vec<usize> {
        members(self.anti).map(|i| i + 1).collect()
    }

    pub fn holo_mask(&self) -> u32 {
        self.holo
    }

    pub fn anti_mask(&self) -> u32 {
        self.anti
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.holo.count_ones() as usize, self.anti.count_ones() as usize)
    }
}

fn increasing_mask(indices: &[usize]) -> Result<u32> {
    let mut mask = 0u32;
    let mut prev = 0usize;
    for &i in indices {
        if i == 0 || i > MAX_N || i <= prev {
            return Err(Error::InvalidArgument(format!(
                "multi-index {indices:?} is not strictly increasing in 1..={MAX_N}"
            )));
        }
        mask |= 1 << (i - 1);
        prev = i;
    }
    Ok(mask)
}

/// Basis of Λ^{p,q}, lexicographic in I and then in J.
pub fn basis_enumeration(n: usize, p: usize, q: usize) -> Result<Vec<MultiIndexPair>> {
    check_degree(n, p, q)?;
    let t = subsets(n);
    let mut out = Vec::with_capacity(binomial(n, p) * binomial(n, q));
    for &i in t.of_size(p) {
        for &j in t.of_size(q) {
            out.push(MultiIndexPair::from_masks(i, j));
        }
    }
    Ok(out)
}

/// A (p,q)-form on ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct PQForm {
    n: usize,
    p: usize,
    q: usize,
    coeffs: Vec<C64>,
}

impl PQForm {
    pub fn zeros(n: usize, p: usize, q: usize) -> Result<Self> {
        check_degree(n, p, q)?;
        Ok(Self {
            n,
            p,
            q,
            coeffs: vec![C64::new(0.0, 0.0); binomial(n, p) * binomial(n, q)],
        })
    }

    pub fn from_coeffs(n: usize, p: usize, q: usize, coeffs: Vec<C64>) -> Result<Self> {
        check_degree(n, p, q)?;
        let expected = binomial(n, p) * binomial(n, q);
        if coeffs.len() != expected {
            return Err(Error::SizeMismatch {
                field: format!("Λ^{{{p},{q}}} coefficients"),
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { n, p, q, coeffs })
    }

    /// The constant function 1 ∈ Λ^{0,0}.
    pub fn one(n: usize) -> Result<Self> {
        Self::from_coeffs(n, 0, 0, vec![C64::new(1.0, 0.0)])
    }

    pub fn basis_element(n: usize, pair: MultiIndexPair) -> Result<Self> {
        let (p, q) = pair.bidegree();
        let mut out = Self::zeros(n, p, q)?;
        if (pair.holo | pair.anti) >> n != 0 {
            return Err(Error::DegreeOutOfRange { n, p, q });
        }
        let idx = out.index_of(pair.holo, pair.anti);
        out.coeffs[idx] = C64::new(1.0, 0.0);
        Ok(out)
    }

    /// dz^i (one-based).
    pub fn dz(n: usize, i: usize) -> Result<Self> {
        Self::basis_element(n, MultiIndexPair::new(&[i], &[])?)
    }

    /// dz̄^i (one-based).
    pub fn dzbar(n: usize, i: usize) -> Result<Self> {
        Self::basis_element(n, MultiIndexPair::new(&[], &[i])?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub(crate) fn index_of(&self, holo: u32, anti: u32) -> usize {
        let t = subsets(self.n);
        t.rank(holo) * binomial(self.n, self.q) + t.rank(anti)
    }

    pub fn coeff(&self, pair: MultiIndexPair) -> C64 {
        if pair.bidegree() != (self.p, self.q) {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[self.index_of(pair.holo, pair.anti)]
    }

    /// Nonzero terms with their basis labels.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndexPair, C64)> + '_ {
        let t = subsets(self.n);
        let cols = binomial(self.n, self.q);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(move |(idx, &c)| {
                let i = t.of_size(self.p)[idx / cols];
                let j = t.of_size(self.q)[idx % cols];
                (MultiIndexPair::from_masks(i, j), c)
            })
    }

    /// Squared norm of a basis form of this bidegree.
    pub fn basis_norm_sq(&self) -> f64 {
        (1u64 << (self.p + self.q)) as f64
    }

    pub fn norm_sq(&self) -> f64 {
        self.basis_norm_sq() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        hermitian_inner(self, other)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.n, self.p, self.q) != (other.n, other.p, other.q) {
            return Err(Error::DimensionMismatch(format!(
                "forms of type (n={}, {},{}) and (n={}, {},{})",
                self.n, self.p, self.q, other.n, other.p, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// self + a·other
    pub fn axpy(&self, a: C64, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + a * y)
            .collect();
        Ok(Self { coeffs, ..*self })
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            ..*self
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// ⟨a, b⟩ = g(a, b̄), linear in `a` and conjugate-linear in `b`.
pub fn hermitian_inner(a: &PQForm, b: &PQForm) -> Result<C64> {
    a.same_shape(b)?;
    let s: C64 = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y.conj()).sum();
    Ok(s * a.basis_norm_sq())
}

/// Exterior product. Signs come from reordering dz^{I₁} dz̄^{J₁} dz^{I₂} dz̄^{J₂}
/// into the canonical layout dz^{I₁∪I₂} dz̄^{J₁∪J₂}.
pub fn wedge(a: &PQForm, b: &PQForm) -> Result<PQForm> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(format!(
            "wedge of forms over ℂ^{} and ℂ^{}",
            a.n, b.n
        )));
    }
    let n = a.n;
    let mut out = PQForm::zeros(n, a.p + b.p, a.q + b.q)?;
    let cross = if (a.q * b.p).is_multiple_of(2) { 1.0 } else { -1.0 };
    for (x, cx) in a.terms() {
        for (y, cy) in b.terms() {
            if x.holo & y.holo != 0 || x.anti & y.anti != 0 {
                continue;
            }
            let sign = cross * merge_sign(x.holo, y.holo) * merge_sign(x.anti, y.anti);
            let idx = out.index_of(x.holo | y.holo, x.anti | y.anti);
            out.coeffs[idx] += cx * cy * sign;
        }
    }
    Ok(out)
}

/// ω^k = (√−1)^k k!/2^k Σ_K dz^{k₁}∧dz̄^{k₁}∧…∧dz^{k_k}∧dz̄^{k_k}.
///
/// Reordering each interleaved product into dz^K ∧ dz̄^K contributes (−1)^{k(k−1)/2}.
pub fn kahler_power(n: usize, k: usize) -> Result<PQForm> {
    check_n(n)?;
    if k > n {
        return Err(Error::DegreeOutOfRange { n, p: k, q: k });
    }
    let mut out = PQForm::zeros(n, k, k)?;
    let factorial: f64 = (1..=k).map(|v| v as f64).product();
    let reorder = if (k * k.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = C64::i().powu(k as u32) * (factorial / (1u64 << k) as f64) * reorder;
    for &m in subsets(n).of_size(k) {
        let idx = out.index_of(m, m);
        out.coeffs[idx] = c;
    }
    Ok(out)
}

/// ω = (√−1/2) Σ_i dz^i ∧ dz̄^i.
pub fn kahler_form(n: usize) -> Result<PQForm> {
    kahler_power(n, 1)
}

/// Terms of ω ∧ (dz^I ∧ dz̄^J): target masks and coefficients.
fn lefschetz_terms(n: usize, holo: u32, anti: u32) -> impl Iterator<Item = (u32, u32, C64)> {
    let p = holo.count_ones();
    let past = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    (0..n).filter_map(move |m| {
        let bit = 1u32 << m;
        if holo & bit != 0 || anti & bit != 0 {
            return None;
        }
        let sign = past * merge_sign(bit, holo) * merge_sign(bit, anti);
        Some((holo | bit, anti | bit, C64::new(0.0, 0.5 * sign)))
    })
}

/// ℒφ = ω ∧ φ.
pub fn lefschetz(phi: &PQForm) -> Result<PQForm> {
    let n = phi.n;
    if phi.p + 1 > n || phi.q + 1 > n {
        return Err(Error::DegreeOutOfRange {
            n,
            p: phi.p + 1,
            q: phi.q + 1,
        });
    }
    let mut out = PQForm::zeros(n, phi.p + 1, phi.q + 1)?;
    for (x, c) in phi.terms() {
        for (h, a, w) in lefschetz_terms(n, x.holo, x.anti) {
            let idx = out.index_of(h, a);
            out.coeffs[idx] += w * c;
        }
    }
    Ok(out)
}

/// The adjoint Λ of ℒ under the Hermitian inner product.
///
/// Basis norms in degree (p,q) and (p−1,q−1) differ by a factor 4, so in
/// coefficient space Λ = 4 ℒᴴ.
pub fn lefschetz_dual(phi: &PQForm) -> Result<PQForm> {
    let n = phi.n;
    if phi.p == 0 || phi.q == 0 {
        return Err(Error::DegreeOutOfRange { n, p: phi.p, q: phi.q });
    }
    let mut out = PQForm::zeros(n, phi.p - 1, phi.q - 1)?;
    let t = subsets(n);
    for &h in t.of_size(phi.p - 1) {
        for &a in t.of_size(phi.q - 1) {
            let mut acc = C64::new(0.0, 0.0);
            for (th, ta, w) in lefschetz_terms(n, h, a) {
                acc += w.conj() * phi.coeffs[phi.index_of(th, ta)];
            }
            let idx = out.index_of(h, a);
            out.coeffs[idx] = acc * 4.0;
        }
    }
    Ok(out)
}

/// Coefficient matrix of ℒ: Λ^{p−1,q−1} → Λ^{p,q}.
pub fn lefschetz_matrix(n: usize, p: usize, q: usize) -> Result<DMatrix<C64>> {
    check_degree(n, p, q)?;
    if p == 0 || q == 0 {
        return Err(Error::DegreeOutOfRange { n, p, q });
    }
    let src = basis_enumeration(n, p - 1, q - 1)?;
    let target = PQForm::zeros(n, p, q)?;
    let mut m = DMatrix::zeros(target.dim(), src.len());
    for (col, x) in src.iter().enumerate() {
        for (h, a, w) in lefschetz_terms(n, x.holo, x.anti) {
            m[(target.index_of(h, a), col)] += w;
        }
    }
    Ok(m)
}

/// φ̊: removes the ω^p-component when p = q, identity otherwise.
pub fn ring_reduce(phi: &PQForm) -> Result<PQForm> {
    if phi.p != phi.q {
        return Ok(phi.clone());
    }
    let wp = kahler_power(phi.n, phi.p)?;
    let c = hermitian_inner(phi, &wp)? / wp.norm_sq();
    phi.axpy(-c, &wp)
}

/// dz^I ∧ ω^k ∧ dz̄^J, the spanning forms of V^{p,q}_k with |I| = p−k, |J| = q−k.
pub fn flag_generator(n: usize, k: usize, holo: &[usize], anti: &[usize]) -> Result<PQForm> {
    let pair = MultiIndexPair::new(holo, anti)?;
    let dz_i = PQForm::basis_element(n, MultiIndexPair::new(holo, &[])?)?;
    let dzbar_j = PQForm::basis_element(n, MultiIndexPair::new(&[], anti)?)?;
    let (p, q) = pair.bidegree();
    if p + k > n || q + k > n {
        return Err(Error::DegreeOutOfRange { n, p: p + k, q: q + k });
    }
    wedge(&wedge(&dz_i, &kahler_power(n, k)?)?, &dzbar_j)
}

/// All generators dz^I ∧ ω^k ∧ dz̄^J of V^{p,q}_k, including those that vanish.
pub fn flag_generators(n: usize, p: usize, q: usize, k: usize) -> Result<Vec<PQForm>> {
    check_degree(n, p, q)?;
    if k > p.min(q) {
        return Err(Error::LefschetzIndexOutOfRange { p, q, k });
    }
    let t = subsets(n);
    let mut out = Vec::new();
    for &h in t.of_size(p - k) {
        for &a in t.of_size(q - k) {
            let hi: Vec<usize> = members(h).map(|i| i + 1).collect();
            let ai: Vec<usize> = members(a).map(|i| i + 1).collect();
            out.push(flag_generator(n, k, &hi, &ai)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_ordering() {
        let b = basis_enumeration(2, 1, 1).unwrap();
        let labels: Vec<(Vec<usize>, Vec<usize>)> = b.iter().map(|x| (x.holo(), x.anti())).collect();
        assert_eq!(
            labels,
            vec![
                (vec![1], vec![1]),
                (vec![1], vec![2]),
                (vec![2], vec![1]),
                (vec![2], vec![2])
            ]
        );
        assert_eq!(basis_enumeration(3, 2, 1).unwrap().len(), 9);
        let empty = basis_enumeration(4, 0, 0).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].holo().is_empty() && empty[0].anti().is_empty());
        assert!(basis_enumeration(2, 3, 0).is_err());
    }

    #[test]
    fn wedge_basics() {
        let dz1 = PQForm::dz(2, 1).unwrap();
        let dzb1 = PQForm::dzbar(2, 1).unwrap();
        assert_eq!(wedge(&dz1, &dz1).unwrap().max_abs(), 0.0);
        let w = wedge(&dz1, &dzb1).unwrap();
        assert_eq!(w.coeff(MultiIndexPair::new(&[1], &[1]).unwrap()), c(1.0, 0.0));
        // dz̄¹ ∧ dz¹ = −dz¹ ∧ dz̄¹
        let w2 = wedge(&dzb1, &dz1).unwrap();
        assert_eq!(w2.coeff(MultiIndexPair::new(&[1], &[1]).unwrap()), c(-1.0, 0.0));
    }

    #[test]
    fn omega_squared_is_second_power() {
        let n = 3;
        let w = kahler_form(n).unwrap();
        let w2 = wedge(&w, &w).unwrap();
        let diff = w2.sub(&kahler_power(n, 2).unwrap()).unwrap();
        assert!(diff.max_abs() < 1e-14);
    }

    #[test]
    fn kahler_form_values() {
        let w = kahler_form(3).unwrap();
        for i in 1..=3 {
            assert_eq!(w.coeff(MultiIndexPair::new(&[i], &[i]).unwrap()), c(0.0, 0.5));
        }
        assert!((w.norm_sq() - 3.0).abs() < 1e-14);
        assert!(kahler_power(3, 4).is_err());
    }

    #[test]
    fn inner_product_normalisation() {
        let dz1 = PQForm::dz(2, 1).unwrap();
        assert_eq!(hermitian_inner(&dz1, &dz1).unwrap(), c(2.0, 0.0));
        let a = PQForm::basis_element(3, MultiIndexPair::new(&[1, 3], &[2]).unwrap()).unwrap();
        assert_eq!(a.norm_sq(), 8.0);
        let x = PQForm::basis_element(2, MultiIndexPair::new(&[1], &[2]).unwrap()).unwrap();
        let y = PQForm::basis_element(2, MultiIndexPair::new(&[2], &[1]).unwrap()).unwrap();
        assert_eq!(hermitian_inner(&x, &y).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn lefschetz_examples() {
        let n = 3;
        let one = PQForm::one(n).unwrap();
        assert_eq!(lefschetz(&one).unwrap(), kahler_form(n).unwrap());
        let dual = lefschetz_dual(&kahler_form(n).unwrap()).unwrap();
        assert!((dual.coeffs()[0] - c(n as f64, 0.0)).norm() < 1e-14);
        let off = PQForm::basis_element(n, MultiIndexPair::new(&[1], &[2]).unwrap()).unwrap();
        assert_eq!(lefschetz_dual(&off).unwrap().max_abs(), 0.0);
        assert!(lefschetz_dual(&PQForm::dz(n, 1).unwrap()).is_err());
        assert!(lefschetz(&kahler_power(n, 3).unwrap()).is_err());
    }

    #[test]
    fn lefschetz_matches_wedge_with_omega() {
        let n = 4;
        let mut rng = crate::rng::from_seed(7);
        for (p, q) in [(0, 1), (1, 1), (2, 1), (1, 3)] {
            let phi = PQForm::from_coeffs(
                n,
                p,
                q,
                crate::rng::complex_normal_vec(&mut rng, binomial(n, p) * binomial(n, q)),
            )
            .unwrap();
            let a = lefschetz(&phi).unwrap();
            let b = wedge(&kahler_form(n).unwrap(), &phi).unwrap();
            assert!(a.sub(&b).unwrap().max_abs() < 1e-13);
            let m = lefschetz_matrix(n, p + 1, q + 1).unwrap();
            let v = nalgebra::DVector::from_vec(phi.coeffs().to_vec());
            let mv = &m * v;
            for (x, y) in mv.iter().zip(a.coeffs()) {
                assert!((x - y).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn ring_reduce_examples() {
        let n = 3;
        let w = kahler_form(n).unwrap();
        assert!(ring_reduce(&w).unwrap().max_abs() < 1e-15);
        let dz = PQForm::dz(n, 2).unwrap();
        assert_eq!(ring_reduce(&dz).unwrap(), dz);
        let eta = PQForm::basis_element(n, MultiIndexPair::new(&[1], &[2]).unwrap()).unwrap();
        let reduced = ring_reduce(&w.add(&eta).unwrap()).unwrap();
        assert!(reduced.sub(&eta).unwrap().max_abs() < 1e-15);
    }
}
