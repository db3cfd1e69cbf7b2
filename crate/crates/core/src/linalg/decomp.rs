use faer::Side;
use nalgebra::{DMatrix, DVector};

use super::{LinalgError, SymMatrix, MAX_EIG_DIM};

/// Eigenvalues in ascending order with orthonormal eigenvectors.
///
/// Each eigenvector is normalized so that its first component with magnitude
/// above `1e-12` is positive.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    dim: usize,
    /// Eigenvector `k` is `vectors[k*dim .. (k+1)*dim]`.
    vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(|v| v)
    }

    /// `V f(Λ) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.dim;
        let mut scaled = DMatrix::<f64>::zeros(n, n);
        let v = DMatrix::from_column_slice(n, n, &self.vectors);
        for k in 0..n {
            let w = f(self.values[k]);
            scaled.column_mut(k).copy_from(&(v.column(k) * w));
        }
        SymMatrix::from_nalgebra(&(scaled * v.transpose()))
    }
}

impl SymMatrix {
    pub fn eig(&self) -> Result<EigenDecomposition, LinalgError> {
        let n = self.dim();
        if n > MAX_EIG_DIM {
            return Err(LinalgError::TooLarge(n, MAX_EIG_DIM));
        }
        if !self.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let m = self.to_faer();
        let se = m.self_adjoint_eigen(Side::Lower).map_err(|_| LinalgError::NoConvergence)?;
        let (s, u) = (se.S(), se.U());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
        let mut values = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n * n);
        for &k in &order {
            values.push(s[k]);
            let col = u.col(k);
            let flip = col
                .iter()
                .find(|c| c.abs() > 1e-12)
                .is_some_and(|&c| c < 0.0);
            vectors.extend(col.iter().map(|&c| if flip { -c } else { c }));
        }
        if !values.iter().chain(&vectors).all(|v| v.is_finite()) {
            return Err(LinalgError::NoConvergence);
        }
        Ok(EigenDecomposition {
            values,
            dim: n,
            vectors,
        })
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        if !self.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let mut ev = self
            .to_faer()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| LinalgError::NoConvergence)?;
        ev.sort_by(f64::total_cmp);
        if !ev.iter().all(|v| v.is_finite()) {
            return Err(LinalgError::NoConvergence);
        }
        Ok(ev)
    }

    pub fn min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    pub fn max_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self.eigenvalues()?.last().copied().unwrap_or(0.0))
    }

    /// `λ_min / max(1, λ_max)`; the matrix passes [`SymMatrix::is_psd`] at `tol`
    /// iff this is at least `-tol`. Non-finite matrices give `-inf`.
    pub fn psd_margin(&self) -> f64 {
        match self.eigenvalues() {
            Ok(ev) if !ev.is_empty() => ev[0] / ev[ev.len() - 1].max(1.0),
            Ok(_) => 0.0,
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// `λ_min ≥ −tol·max(1, λ_max)`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.psd_margin() >= -tol
    }

    /// Vectors `w_i` (rows of the result) with `⟨w_i, w_j⟩ ≈ m_ij`. The vector
    /// length is the number of eigenvalues above `tol·max(1, λ_max)`.
    pub fn gram_factor(&self, tol: f64) -> Result<Vec<Vec<f64>>, LinalgError> {
        let e = self.eig()?;
        let n = self.dim();
        let top = e.values.last().copied().unwrap_or(0.0).max(1.0);
        if e.values.first().is_some_and(|&v| v < -tol * top) {
            return Err(LinalgError::NotPsd(e.values[0]));
        }
        let kept: Vec<usize> = (0..n).filter(|&k| e.values[k] > tol * top).collect();
        Ok((0..n)
            .map(|i| {
                kept.iter()
                    .rev()
                    .map(|&k| e.vector(k)[i] * e.values[k].sqrt())
                    .collect()
            })
            .collect())
    }

    /// Largest eigenvalue and a unit eigenvector for it.
    pub fn top_eigenpair(&self) -> Result<(f64, Vec<f64>), LinalgError> {
        let e = self.eig()?;
        let k = self.dim() - 1;
        Ok((e.values[k], e.vector(k).to_vec()))
    }

    /// Perron eigenpair of a matrix with nonnegative off-diagonal entries.
    ///
    /// The support of the off-diagonal part is split into connected components
    /// and the top eigenpair is taken on the component with the largest
    /// eigenvalue, so the vector is entrywise nonnegative even when the matrix is
    /// reducible.
    pub fn perron_eigenpair(&self) -> Result<(f64, Vec<f64>), LinalgError> {
        let n = self.dim();
        let mut comp = vec![usize::MAX; n];
        let mut best: Option<(f64, Vec<f64>)> = None;
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let mut members = vec![root];
            comp[root] = root;
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for v in 0..n {
                    if comp[v] == usize::MAX && self.get(u, v) != 0.0 {
                        comp[v] = root;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            let (val, vec) = self.submatrix(&members).top_eigenpair()?;
            if best.as_ref().is_none_or(|(b, _)| val > *b) {
                let mut full = vec![0.0; n];
                for (&i, &x) in members.iter().zip(&vec) {
                    full[i] = x.abs();
                }
                best = Some((val, full));
            }
        }
        Ok(best.unwrap_or((0.0, Vec::new())))
    }

    pub fn cholesky(&self) -> Result<Cholesky, LinalgError> {
        if !self.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        nalgebra::Cholesky::new(self.to_nalgebra())
            .map(|inner| Cholesky { inner })
            .ok_or(LinalgError::NotPositiveDefinite)
    }
}

/// `M = L Lᵀ` for a positive definite `M`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    inner: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl Cholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let x = self.inner.solve(&DVector::from_column_slice(b));
        x.iter().copied().collect()
    }

    pub fn inverse(&self) -> SymMatrix {
        SymMatrix::from_nalgebra(&self.inner.inverse())
    }

    /// Row-major lower factor.
    pub fn lower(&self) -> Vec<f64> {
        let l = self.inner.l();
        let n = l.nrows();
        (0..n * n).map(|k| l[(k / n, k % n)]).collect()
    }
}
