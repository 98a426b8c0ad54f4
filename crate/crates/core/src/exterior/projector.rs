use nalgebra::DMatrix;

use super::{check_degree, lefschetz_matrix, PQForm};
use crate::index::binomial;
use crate::tolerances::RANK;
use crate::{Error, Result, C64};

/// Orthogonal projector onto Λ^{p,q}_k = ℒ^k(primitive (p−k,q−k)-forms).
#[derive(Debug, Clone)]
pub struct ComponentProjector {
    n: usize,
    p: usize,
    q: usize,
    k: usize,
    /// Orthonormal (in coefficient space) basis of the image, one column per vector.
    basis: DMatrix<C64>,
    matrix: DMatrix<C64>,
}

impl ComponentProjector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> (usize, usize, usize) {
        (self.p, self.q, self.k)
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// The projector as a matrix on coefficient vectors.
    ///
    /// Basis forms of a fixed bidegree share one norm, so orthogonality in
    /// coefficient space and under the Hermitian inner product coincide.
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Columns form an orthonormal basis of the image in coefficient space.
    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    pub fn apply(&self, phi: &PQForm) -> Result<PQForm> {
        if (phi.n, phi.p, phi.q) != (self.n, self.p, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "projector on Λ^{{{},{}}}(ℂ^{}) applied to a ({},{})-form over ℂ^{}",
                self.p, self.q, self.n, phi.p, phi.q, phi.n
            )));
        }
        let v = nalgebra::DVector::from_column_slice(phi.coeffs());
        let out = &self.matrix * v;
        PQForm::from_coeffs(self.n, self.p, self.q, out.as_slice().to_vec())
    }

    /// The form with coefficient vector `basis · c`.
    pub fn combine(&self, c: &[C64]) -> Result<PQForm> {
        if c.len() != self.rank() {
            return Err(Error::SizeMismatch {
                field: "component coordinates".into(),
                expected: self.rank(),
                found: c.len(),
            });
        }
        let v = &self.basis * nalgebra::DVector::from_column_slice(c);
        PQForm::from_coeffs(self.n, self.p, self.q, v.as_slice().to_vec())
    }
}

/// Builds the projector onto Λ^{p,q}_k numerically: kernel of Λ at degree
/// (p−k, q−k), pushed forward by ℒ^k and orthonormalized.
pub fn component_projector(n: usize, p: usize, q: usize, k: usize) -> Result<ComponentProjector> {
    check_degree(n, p, q)?;
    if k > p.min(q) {
        return Err(Error::LefschetzIndexOutOfRange { p, q, k });
    }
    let (a, b) = (p - k, q - k);
    let mut span = primitive_basis(n, a, b)?;
    for step in 1..=k {
        span = lefschetz_matrix(n, a + step, b + step)? * span;
    }
    let basis = orthonormal_columns(&span);
    let matrix = &basis * basis.adjoint();
    Ok(ComponentProjector {
        n,
        p,
        q,
        k,
        basis,
        matrix,
    })
}

/// Columns spanning ker Λ ⊂ Λ^{a,b}.
fn primitive_basis(n: usize, a: usize, b: usize) -> Result<DMatrix<C64>> {
    let dim = binomial(n, a) * binomial(n, b);
    if a == 0 || b == 0 {
        return Ok(DMatrix::identity(dim, dim));
    }
    // Λ = 4ℒᴴ; pad to a square matrix so the SVD returns a full right basis.
    let dual = lefschetz_matrix(n, a, b)?.adjoint() * C64::new(4.0, 0.0);
    let rows = dual.nrows().max(dim);
    let mut padded = DMatrix::zeros(rows, dim);
    padded.view_mut((0, 0), (dual.nrows(), dim)).copy_from(&dual);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= RANK)
        .collect();
    let mut out = DMatrix::zeros(dim, keep.len());
    for (col, &i) in keep.iter().enumerate() {
        for r in 0..dim {
            out[(r, col)] = v_t[(i, r)].conj();
        }
    }
    Ok(out)
}

/// Orthonormal basis of the column span, dropping directions with singular value ≤ RANK.
fn orthonormal_columns(m: &DMatrix<C64>) -> DMatrix<C64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK)
        .collect();
    let mut out = DMatrix::zeros(m.nrows(), keep.len());
    for (col, &i) in keep.iter().enumerate() {
        out.set_column(col, &u.column(i));
    }
    out
}
