//! Torus characters of Λ^{p,q} and the determinant identities relating them to
//! Weyl characters of U(n).

use nalgebra::DMatrix;

use crate::index::{binomial, members, subsets};
use crate::rng;
use crate::tolerances::TORUS_SEPARATION;
use crate::{Error, Result, C64};

/// A point diag(ε₁, …, ε_n) of the maximal torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    eps: Vec<C64>,
}

impl TorusPoint {
    pub fn new(eps: Vec<C64>) -> Result<Self> {
        if eps.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        for (index, e) in eps.iter().enumerate() {
            if (e.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotOnTorus {
                    index,
                    modulus: e.norm(),
                });
            }
        }
        Ok(Self { eps })
    }

    /// Uniform random phases, resampled until pairwise separation is at least 1e−3.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        crate::exterior::check_n(n)?;
        let mut g = rng::from_seed(seed);
        loop {
            let eps: Vec<C64> = (0..n).map(|_| rng::phase(&mut g)).collect();
            let t = Self { eps };
            if t.min_separation() >= TORUS_SEPARATION {
                return Ok(t);
            }
        }
    }

    /// ε_j = exp(√−1·j·h), j = 1..n.
    pub fn near_identity(n: usize, h: f64) -> Self {
        Self {
            eps: (1..=n).map(|j| C64::from_polar(1.0, j as f64 * h)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            eps: vec![C64::new(1.0, 0.0); n],
        }
    }

    pub fn n(&self) -> usize {
        self.eps.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.eps
    }

    pub fn min_separation(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.eps.len() {
            for j in i + 1..self.eps.len() {
                m = m.min((self.eps[i] - self.eps[j]).norm());
            }
        }
        m
    }

    /// The point with every entry swapped for its conjugate (the inverse).
    pub fn inverse(&self) -> Self {
        Self {
            eps: self.eps.iter().map(|e| e.conj()).collect(),
        }
    }

    /// Swaps entries i and j.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut eps = self.eps.clone();
        eps.swap(i, j);
        Self { eps }
    }

    fn require_separated(&self) -> Result<()> {
        let separation = self.min_separation();
        if separation < TORUS_SEPARATION {
            return Err(Error::NearSingularTorusPoint { separation });
        }
        Ok(())
    }
}

/// σ_k(ε); zero for k < 0 or k > n.
pub fn elementary_symmetric(eps: &TorusPoint, k: i64) -> C64 {
    let n = eps.n();
    if k < 0 || k as usize > n {
        return C64::new(0.0, 0.0);
    }
    let mut e = vec![C64::new(0.0, 0.0); n + 1];
    e[0] = C64::new(1.0, 0.0);
    for (m, &x) in eps.entries().iter().enumerate() {
        for j in (1..=m + 1).rev() {
            let prev = e[j - 1];
            e[j] += x * prev;
        }
    }
    e[k as usize]
}

/// χ^{p,q}(ε) = σ_p(ε)·conj(σ_q(ε)).
pub fn chi_pq(eps: &TorusPoint, p: i64, q: i64) -> C64 {
    elementary_symmetric(eps, p) * elementary_symmetric(eps, q).conj()
}

/// χ^{p,q}_k = χ^{p−k,q−k} − χ^{p−k−1,q−k−1}.
pub fn chi_pq_k(eps: &TorusPoint, p: i64, q: i64, k: i64) -> C64 {
    chi_pq(eps, p - k, q - k) - chi_pq(eps, p - k - 1, q - k - 1)
}

/// Σ_k C(n−(p+q−2k), k) Σ_{I∩J=∅, |I|=p−k, |J|=q−k} ε_I ε̄_J, with the inner sum
/// evaluated by enumerating index sets.
pub fn chi_pq_disjoint_expansion(eps: &TorusPoint, p: usize, q: usize) -> C64 {
    let n = eps.n();
    if p > n || q > n {
        return C64::new(0.0, 0.0);
    }
    let t = subsets(n);
    let prod = |mask: u32| -> C64 { members(mask).map(|i| eps.entries()[i]).product() };
    let mut total = C64::new(0.0, 0.0);
    for k in 0..=p.min(q) {
        let free = n as i64 - (p + q - 2 * k) as i64;
        if free < 0 {
            continue;
        }
        let weight = binomial(free as usize, k) as f64;
        if weight == 0.0 {
            continue;
        }
        let mut inner = C64::new(0.0, 0.0);
        for &i in t.of_size(p - k) {
            for &j in t.of_size(q - k) {
                if i & j == 0 {
                    inner += prod(i) * prod(j).conj();
                }
            }
        }
        total += inner * weight;
    }
    total
}

fn power(e: C64, l: i64) -> C64 {
    if l >= 0 {
        e.powu(l as u32)
    } else {
        e.conj().powu((-l) as u32)
    }
}

/// det(ε_i^{l_j}) with LU elimination (partial pivoting).
pub fn alternant(exponents: &[i64], eps: &TorusPoint) -> Result<C64> {
    let n = eps.n();
    if exponents.len() != n {
        return Err(Error::SizeMismatch {
            field: "alternant exponents".into(),
            expected: n,
            found: exponents.len(),
        });
    }
    let m = DMatrix::from_fn(n, n, |i, j| power(eps.entries()[i], exponents[j]));
    Ok(m.determinant())
}

/// Δ = det(ε_i^{n−j}), j = 1..n.
pub fn vandermonde(eps: &TorusPoint) -> C64 {
    let n = eps.n() as i64;
    let exps: Vec<i64> = (0..n).map(|j| n - 1 - j).collect();
    alternant(&exps, eps).expect("exponent count matches")
}

/// Π_{i<j}(ε_i − ε_j)
pub fn vandermonde_product(eps: &TorusPoint) -> C64 {
    let e = eps.entries();
    let mut acc = C64::new(1.0, 0.0);
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            acc *= e[i] - e[j];
        }
    }
    acc
}

/// χ_f = det(ε_i^{f_j+n−j}) / Δ for f₁ ≥ … ≥ f_n.
pub fn weyl_character(f: &[i64], eps: &TorusPoint) -> Result<C64> {
    let n = eps.n();
    if f.len() != n {
        return Err(Error::SizeMismatch {
            field: "highest weight".into(),
            expected: n,
            found: f.len(),
        });
    }
    if f.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(format!("weight {f:?} is not non-increasing")));
    }
    eps.require_separated()?;
    let exps: Vec<i64> = f.iter().enumerate().map(|(j, fj)| fj + (n - 1 - j) as i64).collect();
    Ok(alternant(&exps, eps)? / vandermonde(eps))
}

/// f = (1^{p−k}, 0, …, 0, (−1)^{q−k}), the highest weight of Λ^{p,q}_k.
pub fn lemma_weight(n: usize, p: usize, q: usize, k: usize) -> Result<Vec<i64>> {
    if k > p.min(q) || p > n || q > n {
        return Err(Error::LefschetzIndexOutOfRange { p, q, k });
    }
    let (a, b) = (p - k, q - k);
    if a + b > n {
        return Err(Error::InvalidArgument(format!(
            "({p},{q},{k}) has (p−k)+(q−k) > n = {n}"
        )));
    }
    let mut f = vec![1i64; a];
    f.extend(std::iter::repeat_n(0, n - a - b));
    f.extend(std::iter::repeat_n(-1, b));
    Ok(f)
}

/// τ_{a,b} = σ_{n−a+1}σ_{n−b} − σ_{n−a}σ_{n−b+1}.
pub fn tau(eps: &TorusPoint, a: usize, b: usize) -> C64 {
    let n = eps.n() as i64;
    let (a, b) = (a as i64, b as i64);
    let s = |k: i64| elementary_symmetric(eps, k);
    s(n - a + 1) * s(n - b) - s(n - a) * s(n - b + 1)
}

/// τ from the two-row Laplace expansion: for x > y,
/// τ_{x,y} = (1/Δ)|ε^{n+1}, …, ε̂^x, …, ε̂^y, …, ε, 1|, and τ_{y,x} = −τ_{x,y}.
pub fn tau_alternant(eps: &TorusPoint, a: usize, b: usize) -> Result<C64> {
    let n = eps.n();
    if a > n + 1 || b > n + 1 {
        return Err(Error::InvalidArgument(format!("τ indices ({a},{b}) exceed n+1 = {}", n + 1)));
    }
    if a == b {
        return Ok(C64::new(0.0, 0.0));
    }
    eps.require_separated()?;
    let (hi, lo, sign) = if a > b { (a, b, 1.0) } else { (b, a, -1.0) };
    let exps: Vec<i64> = (0..=n + 1).rev().filter(|&e| e != hi && e != lo).map(|e| e as i64).collect();
    Ok(alternant(&exps, eps)? / vandermonde(eps) * sign)
}

/// |σ-form − alternant form| of τ_{a,b}.
pub fn verify_tau_identity(eps: &TorusPoint, a: usize, b: usize) -> Result<f64> {
    Ok((tau(eps, a, b) - tau_alternant(eps, a, b)?).norm())
}

/// C(n,a)C(n,b) − C(n,a−1)C(n,b−1) for a+b ≤ n, else 0: primitive (a,b)-forms.
pub fn dim_primitive(n: usize, a: usize, b: usize) -> usize {
    if a + b > n {
        return 0;
    }
    let lower = if a >= 1 && b >= 1 { binomial(n, a - 1) * binomial(n, b - 1) } else { 0 };
    binomial(n, a) * binomial(n, b) - lower
}

/// dim Λ^{p,q}_k: primitive (p−k,q−k)-forms survive ℒ^k exactly when p+q−k ≤ n.
pub fn dim_pqk(n: usize, p: usize, q: usize, k: usize) -> usize {
    if k > p.min(q) || p > n || q > n || p + q > n + k {
        return 0;
    }
    dim_primitive(n, p - k, q - k)
}
