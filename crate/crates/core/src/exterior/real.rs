//! Complex-valued forms on ℝ^d in the real coframe e^1..e^d, stored densely
//! over all 2^d index subsets. Used as an independent oracle for the (p,q)
//! machinery and for the frame-sum Weitzenböck evaluation.

use nalgebra::DMatrix;

use super::PQForm;
use crate::index::merge_sign;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct RealForm {
    dim: usize,
    coeffs: Vec<C64>,
}

fn below(mask: usize, bit: usize) -> u32 {
    (mask & ((1usize << bit) - 1)).count_ones()
}

fn parity(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl RealForm {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            coeffs: vec![C64::new(0.0, 0.0); 1 << dim],
        }
    }

    pub fn scalar(dim: usize, c: C64) -> Self {
        let mut out = Self::zero(dim);
        out.coeffs[0] = c;
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficients indexed by subset bitmask.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Expands dz^I ∧ dz̄^J with dz^j = e^{x_j} + √−1 e^{y_j}.
    pub fn from_pq(phi: &PQForm) -> Self {
        let n = phi.n();
        let dim = 2 * n;
        let mut out = Self::zero(dim);
        for (pair, c) in phi.terms() {
            let mut term = Self::scalar(dim, c);
            for i in pair.holo() {
                term = term.wedge_one(&Self::complex_coframe(n, i, 1.0));
            }
            for j in pair.anti() {
                term = term.wedge_one(&Self::complex_coframe(n, j, -1.0));
            }
            out.add_assign(&term);
        }
        out
    }

    /// dz^i (sign = 1) or dz̄^i (sign = −1) as a real 1-form (one-based i).
    fn complex_coframe(n: usize, i: usize, sign: f64) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); 2 * n];
        v[i - 1] = C64::new(1.0, 0.0);
        v[n + i - 1] = C64::new(0.0, sign);
        v
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// v ∧ self for a 1-form v given by its coframe coefficients.
    pub fn wedge_one(&self, v: &[C64]) -> Self {
        let mut out = Self::zero(self.dim);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (a, &va) in v.iter().enumerate() {
                if va.norm_sqr() == 0.0 || mask & (1 << a) != 0 {
                    continue;
                }
                out.coeffs[mask | (1 << a)] += c * va * parity(below(mask, a));
            }
        }
        out
    }

    /// self ∧ other
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca.norm_sqr() == 0.0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if a & b != 0 || cb.norm_sqr() == 0.0 {
                    continue;
                }
                out.coeffs[a | b] += ca * cb * merge_sign(a as u32, b as u32);
            }
        }
        out
    }

    /// e^a ∧ self
    pub fn wedge_basis(&self, a: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if mask & (1 << a) == 0 && c.norm_sqr() != 0.0 {
                out.coeffs[mask | (1 << a)] += c * parity(below(mask, a));
            }
        }
        out
    }

    /// Interior product ι_{e_a}.
    pub fn interior(&self, a: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if mask & (1 << a) != 0 && c.norm_sqr() != 0.0 {
                out.coeffs[mask & !(1 << a)] += c * parity(below(mask, a));
            }
        }
        out
    }

    /// Derivation action of an endomorphism E on forms: (Eα)(X,…) = −Σ α(…, EX_i, …).
    pub fn derivation(&self, e: &DMatrix<f64>) -> Result<Self> {
        if e.nrows() != self.dim || e.ncols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} endomorphism acting on forms over ℝ^{}",
                e.nrows(),
                e.ncols(),
                self.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for b in 0..self.dim {
            let inner = self.interior(b);
            for c in 0..self.dim {
                let w = e[(b, c)];
                if w != 0.0 {
                    let mut t = inner.wedge_basis(c);
                    t.scale_assign(-w);
                    out.add_assign(&t);
                }
            }
        }
        Ok(out)
    }

    pub fn scale_assign(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }

    /// Σ_A a_A conj(b_A): the determinant inner product in an orthonormal coframe.
    pub fn inner(&self, other: &Self) -> C64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}
