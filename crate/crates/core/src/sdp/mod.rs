//! Semidefinite programs with a single PSD matrix variable.
//!
//! ```text
//! max / min  ⟨C, X⟩
//! s.t.       ⟨A_i, X⟩ = b_i
//!            ⟨B_j, X⟩ ≥ d_j
//!            X ⪰ 0
//! ```
//!
//! The objective is dense; constraint matrices are sparse because every
//! formulation used here touches one or two entries per constraint.

mod rank;
mod solver;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, SymMatrix};

pub use solver::solve;

/// Largest PSD variable accepted by [`solve`].
pub const MAX_DIM: usize = 400;
/// Largest total number of constraints accepted by [`solve`].
pub const MAX_CONSTRAINTS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("problem data contains a non-finite value")]
    NonFinite,
    #[error("the PSD variable needs dimension at least 1")]
    EmptyVariable,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Sparse symmetric matrix stored as upper-triangular triplets `(i, j, v)`,
/// `i <= j`. An off-diagonal triplet stands for both `(i,j)` and `(j,i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSym {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn new(dim: usize) -> Self {
        SparseSym {
            dim,
            entries: Vec::new(),
        }
    }

    /// Adds `v` at `(i,j)` and `(j,i)`.
    pub fn push(&mut self, i: usize, j: usize, v: f64) -> &mut Self {
        self.entries.push((i.min(j), i.max(j), v));
        self
    }

    pub fn with(mut self, i: usize, j: usize, v: f64) -> Self {
        self.push(i, j, v);
        self
    }

    /// The matrix `E` with `⟨E, X⟩ = X_ij` for symmetric `X`.
    pub fn entry(dim: usize, i: usize, j: usize) -> Self {
        let v = if i == j { 1.0 } else { 0.5 };
        SparseSym::new(dim).with(i, j, v)
    }

    pub fn identity(dim: usize) -> Self {
        SparseSym {
            dim,
            entries: (0..dim).map(|i| (i, i, 1.0)).collect(),
        }
    }

    pub fn from_dense(m: &SymMatrix) -> Self {
        let mut s = SparseSym::new(m.dim());
        for i in 0..m.dim() {
            for j in i..m.dim() {
                let v = m.get(i, j);
                if v != 0.0 {
                    s.push(i, j, v);
                }
            }
        }
        s
    }

    pub fn to_dense(&self) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.dim);
        for &(i, j, v) in &self.entries {
            let cur = m.get(i, j);
            m.set(i, j, cur + v);
        }
        m
    }

    pub fn scaled(&self, c: f64) -> Self {
        SparseSym {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (i, j, c * v)).collect(),
        }
    }

    /// `⟨A, X⟩`.
    pub fn inner(&self, x: &SymMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| if i == j { v * x.get(i, i) } else { 2.0 * v * x.get(i, j) })
            .sum()
    }

    /// Both orientations of every off-diagonal triplet.
    pub(crate) fn full_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(2 * self.entries.len());
        for &(i, j, v) in &self.entries {
            out.push((i, j, v));
            if i != j {
                out.push((j, i, v));
            }
        }
        out
    }

    fn validate(&self, dim: usize, what: &str) -> Result<(), SdpError> {
        if self.dim != dim {
            return Err(SdpError::DimensionMismatch(format!(
                "{what} has dimension {}, variable has {dim}",
                self.dim
            )));
        }
        for &(i, j, v) in &self.entries {
            if i >= dim || j >= dim {
                return Err(SdpError::DimensionMismatch(format!(
                    "{what} has entry ({i},{j}) outside dimension {dim}"
                )));
            }
            if !v.is_finite() {
                return Err(SdpError::NonFinite);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub matrix: SparseSym,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub dim: usize,
    pub sense: Sense,
    pub objective: SymMatrix,
    /// `⟨A, X⟩ = rhs`.
    pub equalities: Vec<LinearConstraint>,
    /// `⟨B, X⟩ ≥ rhs`.
    pub inequalities: Vec<LinearConstraint>,
}

impl SdpProblem {
    pub fn new(sense: Sense, objective: SymMatrix) -> Self {
        SdpProblem {
            dim: objective.dim(),
            sense,
            objective,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn equal(&mut self, matrix: SparseSym, rhs: f64) -> &mut Self {
        self.equalities.push(LinearConstraint { matrix, rhs });
        self
    }

    pub fn at_least(&mut self, matrix: SparseSym, rhs: f64) -> &mut Self {
        self.inequalities.push(LinearConstraint { matrix, rhs });
        self
    }

    pub fn at_most(&mut self, matrix: SparseSym, rhs: f64) -> &mut Self {
        self.at_least(matrix.scaled(-1.0), -rhs)
    }

    pub fn constraint_count(&self) -> usize {
        self.equalities.len() + self.inequalities.len()
    }

    pub fn objective_value(&self, x: &SymMatrix) -> f64 {
        self.objective.hs_inner(x).unwrap_or(f64::NAN)
    }

    pub fn validate(&self) -> Result<(), SdpError> {
        if self.dim == 0 {
            return Err(SdpError::EmptyVariable);
        }
        if self.objective.dim() != self.dim {
            return Err(SdpError::DimensionMismatch(format!(
                "objective has dimension {}, variable has {}",
                self.objective.dim(),
                self.dim
            )));
        }
        if !self.objective.is_finite() {
            return Err(SdpError::NonFinite);
        }
        for (k, c) in self.equalities.iter().enumerate() {
            c.matrix.validate(self.dim, &format!("equality {k}"))?;
            if !c.rhs.is_finite() {
                return Err(SdpError::NonFinite);
            }
        }
        for (k, c) in self.inequalities.iter().enumerate() {
            c.matrix.validate(self.dim, &format!("inequality {k}"))?;
            if !c.rhs.is_finite() {
                return Err(SdpError::NonFinite);
            }
        }
        Ok(())
    }

    fn check_limits(&self) -> Result<(), SdpError> {
        if self.dim > MAX_DIM {
            return Err(SdpError::TooLarge(format!(
                "PSD dimension {} exceeds {MAX_DIM}",
                self.dim
            )));
        }
        if self.constraint_count() > MAX_CONSTRAINTS {
            return Err(SdpError::TooLarge(format!(
                "{} constraints exceed {MAX_CONSTRAINTS}",
                self.constraint_count()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Relative duality gap `|p − d| / (1 + |p|)` at termination.
    pub gap_tol: f64,
    /// Relative primal and dual infeasibility at termination.
    pub feas_tol: f64,
    pub max_iter: usize,
    pub predictor_corrector: bool,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            max_iter: 200,
            predictor_corrector: true,
            step_fraction: 0.98,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    NumericalTrouble,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖b − A(X) + s‖ / (1 + ‖b‖)`.
    pub primal: f64,
    /// `‖C − Aᵀ(y) − S‖_F / (1 + ‖C‖_F)`.
    pub dual: f64,
    /// `|p − d| / (1 + |p|)`.
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpSolution {
    pub status: SolveStatus,
    /// `⟨C, X⟩` in the problem's own sense.
    pub primal_value: f64,
    /// Dual objective in the problem's own sense.
    pub dual_value: f64,
    pub x: SymMatrix,
    /// Dual slack of the minimization form `min ⟨±C, X⟩`, where the sign is `−`
    /// for maximization problems. It is PSD and complementary to `x`.
    pub dual_slack: SymMatrix,
    pub y_eq: Vec<f64>,
    /// Nonnegative multipliers of the inequalities.
    pub y_ineq: Vec<f64>,
    pub iterations: usize,
    pub residuals: Residuals,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// `|⟨A_i, X⟩ − b_i|` per equality.
    pub equality_residuals: Vec<f64>,
    /// `max(0, d_j − ⟨B_j, X⟩)` per inequality.
    pub inequality_violations: Vec<f64>,
    /// `λ_min(X) / max(1, λ_max(X))`.
    pub psd_margin: f64,
    pub tol: f64,
    pub passed: bool,
}

impl FeasibilityReport {
    pub fn worst_residual(&self) -> f64 {
        self.equality_residuals
            .iter()
            .chain(&self.inequality_violations)
            .fold(0.0, |m: f64, &v| m.max(v))
    }
}

/// Evaluates every constraint at `x` without solving.
pub fn check_feasible(p: &SdpProblem, x: &SymMatrix, tol: f64) -> Result<FeasibilityReport, SdpError> {
    p.validate()?;
    if x.dim() != p.dim {
        return Err(SdpError::DimensionMismatch(format!(
            "candidate has dimension {}, variable has {}",
            x.dim(),
            p.dim
        )));
    }
    let equality_residuals: Vec<f64> = p
        .equalities
        .iter()
        .map(|c| (c.matrix.inner(x) - c.rhs).abs())
        .collect();
    let inequality_violations: Vec<f64> = p
        .inequalities
        .iter()
        .map(|c| (c.rhs - c.matrix.inner(x)).max(0.0))
        .collect();
    let psd_margin = x.psd_margin();
    let mut report = FeasibilityReport {
        equality_residuals,
        inequality_violations,
        psd_margin,
        tol,
        passed: false,
    };
    report.passed = report.worst_residual() <= tol && psd_margin >= -tol;
    Ok(report)
}
