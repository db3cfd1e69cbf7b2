//! Dense symmetric matrices.
//!
//! [`SymMatrix`] keeps a full row-major copy and mirrors every write, so `m[(i,j)]`
//! and `m[(j,i)]` are always bit-identical. Eigendecompositions use `faer`;
//! Cholesky and dense products use `nalgebra`.

mod decomp;

use std::ops::Index;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use decomp::{Cholesky, EigenDecomposition};

/// Default tolerance for [`SymMatrix::is_psd`].
pub const PSD_TOL: f64 = 1e-8;
/// Largest dimension accepted by [`SymMatrix::eig`].
pub const MAX_EIG_DIM: usize = 5000;
/// Diagonal entries at or below this are treated as zero by
/// [`SymMatrix::diag_pseudo_inv_sqrt`].
pub const PINV_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("entry ({0},{1}) is off the diagonal but nonzero")]
    NotDiagonal(usize, usize),
    #[error("diagonal entry {0} is negative ({1})")]
    NegativeDiagonal(usize, f64),
    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("entries ({0},{1}) and ({1},{0}) differ")]
    NotSymmetric(usize, usize),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension {0} exceeds the limit {1}")]
    TooLarge(usize, usize),
    #[error("eigendecomposition did not converge")]
    NoConvergence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![1.0; dim * dim],
        }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// Evaluates `f` on the upper triangle and mirrors.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Row-major data that must already be exactly symmetric and finite.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != dim * dim {
            return Err(LinalgError::DimensionMismatch(data.len(), dim * dim));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if data[i * dim + j] != data[j * dim + i] {
                    return Err(LinalgError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(LinalgError::DimensionMismatch(r.len(), dim));
        }
        Self::from_row_major(dim, rows.concat())
    }

    /// Symmetrizes an arbitrary square matrix as `(A + Aᵀ)/2`.
    pub fn symmetrized(dim: usize, data: &[f64]) -> Self {
        Self::from_fn(dim, |i, j| 0.5 * (data[i * dim + j] + data[j * dim + i]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both `(i,j)` and `(j,i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Sum of all entries, `⟨M, J⟩`.
    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), LinalgError> {
        if self.dim != other.dim {
            Err(LinalgError::DimensionMismatch(self.dim, other.dim))
        } else {
            Ok(())
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self, LinalgError> {
        self.check_same(other)?;
        Ok(SymMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip(other, |a, b| a - b)
    }

    /// Adds `c` to every diagonal entry.
    pub fn shift_diag(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += c;
        }
        m
    }

    /// Entrywise (Schur–Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip(other, |a, b| a * b)
    }

    /// Hilbert–Schmidt inner product `Σ a_ij b_ij`.
    pub fn hs_inner(&self, other: &Self) -> Result<f64, LinalgError> {
        self.check_same(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// Kronecker product; entry `(i·q + k, j·q + l)` is `a_ij b_kl`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.dim, other.dim);
        let n = p * q;
        let mut data = vec![0.0; n * n];
        for i in 0..p {
            for j in 0..p {
                let a = self.get(i, j);
                if a == 0.0 {
                    continue;
                }
                for k in 0..q {
                    let dst = (i * q + k) * n + j * q;
                    for (d, &b) in data[dst..dst + q].iter_mut().zip(other.row(k)) {
                        *d = a * b;
                    }
                }
            }
        }
        SymMatrix { dim: n, data }
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if x.len() != self.dim {
            return Err(LinalgError::DimensionMismatch(x.len(), self.dim));
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &[f64]) -> Result<f64, LinalgError> {
        Ok(self.matvec(x)?.iter().zip(x).map(|(a, b)| a * b).sum())
    }

    /// Largest singular value, which for a symmetric matrix is the largest
    /// absolute eigenvalue.
    pub fn opnorm(&self) -> Result<f64, LinalgError> {
        let ev = self.eigenvalues()?;
        Ok(ev.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
    }

    /// `diag(m_ii^{-1/2})` with the convention `1/0 = 0`.
    pub fn diag_pseudo_inv_sqrt(&self) -> Result<Self, LinalgError> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && self.get(i, j).abs() > PINV_THRESHOLD {
                    return Err(LinalgError::NotDiagonal(i.min(j), i.max(j)));
                }
            }
            let d = self.get(i, i);
            if d < -PINV_THRESHOLD {
                return Err(LinalgError::NegativeDiagonal(i, d));
            }
        }
        let diag: Vec<f64> = self
            .diag()
            .into_iter()
            .map(|d| if d <= PINV_THRESHOLD { 0.0 } else { d.sqrt().recip() })
            .collect();
        Ok(Self::diagonal(&diag))
    }

    /// `P M P` for a diagonal `P` given by its diagonal.
    pub fn diag_congruence(&self, p: &[f64]) -> Result<Self, LinalgError> {
        if p.len() != self.dim {
            return Err(LinalgError::DimensionMismatch(p.len(), self.dim));
        }
        Ok(Self::from_fn(self.dim, |i, j| p[i] * self.get(i, j) * p[j]))
    }

    /// `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j])
    }

    /// Principal submatrix on the given indices, in order.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, LinalgError> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<f64> {
        // Symmetric, so row-major and column-major coincide.
        DMatrix::from_vec(self.dim, self.dim, self.data.clone())
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<f64> {
        faer::Mat::from_fn(self.dim, self.dim, |i, j| self.data[i * self.dim + j])
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        let dim = m.nrows();
        Self::symmetrized(dim, m.as_slice())
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SymMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Dense adjacency matrix of a graph as `0/1` reals.
pub fn adjacency(g: &crate::graph::Graph) -> SymMatrix {
    let mut m = SymMatrix::zeros(g.vertex_count());
    for (u, v) in g.edges() {
        m.set(u, v, 1.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identity_and_ones_is_block_diagonal() {
        let k = SymMatrix::identity(2).kron(&SymMatrix::ones(2));
        let expected = SymMatrix::from_rows(&[
            vec![1.0, 1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_block_order() {
        let a = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let b = SymMatrix::from_rows(&[vec![5.0, 7.0], vec![7.0, 11.0]]).unwrap();
        let k = a.kron(&b);
        // Row (i,k) = i*2+k, column (j,l) = j*2+l.
        assert_eq!(k[(1, 2)], 2.0 * 7.0);
        assert_eq!(k[(0, 3)], 2.0 * 7.0);
        assert_eq!(k[(3, 3)], 3.0 * 11.0);
        assert_eq!(k[(2, 1)], 2.0 * 7.0);
    }

    #[test]
    fn opnorm_of_triangle_plus_identity() {
        let m = SymMatrix::ones(3);
        assert!((m.opnorm().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_sqrt() {
        let m = SymMatrix::diagonal(&[4.0, 0.0]);
        assert_eq!(m.diag_pseudo_inv_sqrt().unwrap(), SymMatrix::diagonal(&[0.5, 0.0]));
        assert_eq!(
            SymMatrix::identity(3).diag_pseudo_inv_sqrt().unwrap(),
            SymMatrix::identity(3)
        );
        let nine = SymMatrix::diagonal(&[9.0]).diag_pseudo_inv_sqrt().unwrap();
        assert!((nine[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            SymMatrix::ones(2).diag_pseudo_inv_sqrt(),
            Err(LinalgError::NotDiagonal(0, 1))
        );
        assert!(matches!(
            SymMatrix::diagonal(&[1.0, -1.0]).diag_pseudo_inv_sqrt(),
            Err(LinalgError::NegativeDiagonal(1, _))
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            SymMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]]),
            Err(LinalgError::NotSymmetric(0, 1))
        );
        assert_eq!(
            SymMatrix::from_rows(&[vec![f64::NAN]]),
            Err(LinalgError::NonFinite)
        );
        assert!(SymMatrix::identity(2)
            .hadamard(&SymMatrix::identity(3))
            .is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = SymMatrix::from_rows(&[vec![1.0, -0.5], vec![-0.5, 2.0]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1.0,-0.5],[-0.5,2.0]]");
        let back: SymMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SymMatrix>("[[1.0,2.0],[3.0,1.0]]").is_err());
    }

    #[test]
    fn hs_inner_and_trace() {
        let a = SymMatrix::ones(3);
        let b = SymMatrix::identity(3);
        assert_eq!(a.hs_inner(&b).unwrap(), 3.0);
        assert_eq!(a.sum(), 9.0);
        assert_eq!(a.shift_diag(1.0).trace(), 6.0);
    }
}
