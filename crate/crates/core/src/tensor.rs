//! Dense real (0,4)-tensors on ℝ^d in an orthonormal frame.

use nalgebra::DMatrix;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(dim);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        let o = t.offset(a, b, c, d);
                        t.data[o] = f(a, b, c, d);
                    }
                }
            }
        }
        t
    }

    /// Tensor with R(x,y,z,w) = (pairs)[(x∧y),(z∧w)] for a matrix on pairs a<b
    /// indexed lexicographically, extended by antisymmetry.
    pub fn from_pair_matrix(dim: usize, m: &DMatrix<f64>) -> Result<Self> {
        let pairs = dim * dim.saturating_sub(1) / 2;
        if m.nrows() != pairs || m.ncols() != pairs {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} pair matrix for ℝ^{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        let idx = pair_lookup(dim);
        Ok(Self::from_fn(dim, |a, b, c, d| {
            if a == b || c == d {
                return 0.0;
            }
            let (s1, p1) = if a < b { (1.0, idx[a][b]) } else { (-1.0, idx[b][a]) };
            let (s2, p2) = if c < d { (1.0, idx[c][d]) } else { (-1.0, idx[d][c]) };
            s1 * s2 * m[(p1, p2)]
        }))
    }

    /// Matrix on lexicographic pairs a<b.
    pub fn to_pair_matrix(&self) -> DMatrix<f64> {
        let d = self.dim;
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
        DMatrix::from_fn(pairs.len(), pairs.len(), |i, j| {
            let (a, b) = pairs[i];
            let (c, e) = pairs[j];
            self.get(a, b, c, e)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[self.offset(a, b, c, d)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let o = self.offset(a, b, c, d);
        self.data[o] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// ⟨S, T⟩ = ¼ Σ S_abcd T_abcd, the inner product of Sym²(Λ²) with an
    /// orthonormal basis {e_a∧e_b : a<b}.
    pub fn inner(&self, other: &Self) -> f64 {
        0.25 * self.data.iter().zip(&other.data).map(|(x, y)| x * y).sum::<f64>()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// self + s·other
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "tensor dimensions differ");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x + s * y).collect(),
        }
    }

    /// sqrt Σ (R_abcd + R_bcad + R_cabd)² over all index quadruples.
    pub fn bianchi_defect(&self) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let s = self.get(a, b, c, e) + self.get(b, c, a, e) + self.get(c, a, b, e);
                        acc += s * s;
                    }
                }
            }
        }
        acc.sqrt()
    }

    /// Largest violation of R_abcd = −R_bacd = −R_abdc = R_cdab.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let r = self.get(a, b, c, e);
                        worst = worst
                            .max((r + self.get(b, a, c, e)).abs())
                            .max((r + self.get(a, b, e, c)).abs())
                            .max((r - self.get(c, e, a, b)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of R(Jx,Jy,z,w) = R(x,y,z,w) for an orthogonal J.
    pub fn j_invariance_defect(&self, j: &DMatrix<f64>) -> f64 {
        let d = self.dim;
        // J sends e_a to Σ_b J[b][a] e_b; each column of J has one nonzero entry
        // for the standard complex structure, but the general sum is cheap enough.
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut s = 0.0;
                        for x in 0..d {
                            let jxa = j[(x, a)];
                            if jxa == 0.0 {
                                continue;
                            }
                            for y in 0..d {
                                s += jxa * j[(y, b)] * self.get(x, y, c, e);
                            }
                        }
                        worst = worst.max((s - self.get(a, b, c, e)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Ric_ab = Σ_c R(e_a, e_c, e_b, e_c).
    pub fn ricci(&self) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |a, b| (0..d).map(|c| self.get(a, c, b, c)).sum())
    }

    /// Derivation action (LR)(x,y,z,w) = −R(Lx,y,z,w) − … − R(x,y,z,Lw) of an
    /// endomorphism L.
    pub fn derivation(&self, l: &DMatrix<f64>) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut s = 0.0;
                        for x in 0..d {
                            s += l[(x, a)] * self.get(x, b, c, e)
                                + l[(x, b)] * self.get(a, x, c, e)
                                + l[(x, c)] * self.get(a, b, x, e)
                                + l[(x, e)] * self.get(a, b, c, x);
                        }
                        let o = out.offset(a, b, c, e);
                        out.data[o] = -s;
                    }
                }
            }
        }
        out
    }
}

fn pair_lookup(dim: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; dim]; dim];
    let mut k = 0;
    for a in 0..dim {
        for b in a + 1..dim {
            idx[a][b] = k;
            k += 1;
        }
    }
    idx
}

/// Lexicographic index of the pair (a, b), a < b, among pairs from 0..dim.
pub fn pair_position(dim: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < dim);
    a * (2 * dim - a - 1) / 2 + (b - a - 1)
}
