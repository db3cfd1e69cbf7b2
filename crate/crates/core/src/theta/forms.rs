//! Constraint emitters for the theta programs and witness checks.
//!
//! All programs are stated for the argument graph `g` and evaluate the
//! complement-convention numbers ϑ̄(g) = ϑ(ḡ), ϑ⁻̄(g) and ϑ⁺̄(g).

use super::{ThetaError, ThetaKind};
use crate::graph::Graph;
use crate::linalg::SymMatrix;
use crate::sdp::{SdpProblem, Sense, SparseSym};

/// `min λ` over `Z ⪰ 0`, `Z_ii = λ − 1`, with the edge rule of `kind`.
///
/// `λ` is not a separate variable: the diagonal is tied to `Z_00` by the
/// equalities `Z_ii − Z_00 = 0` and the objective is `Z_00`, so the optimum is
/// `λ − 1`.
pub fn min_form_problem(g: &Graph, kind: ThetaKind) -> SdpProblem {
    let n = g.vertex_count();
    let mut objective = SymMatrix::zeros(n);
    objective.set(0, 0, 1.0);
    let mut p = SdpProblem::new(Sense::Min, objective);
    for i in 1..n {
        p.equal(SparseSym::new(n).with(i, i, 1.0).with(0, 0, -1.0), 0.0);
    }
    for (i, j) in g.edges() {
        let e = SparseSym::entry(n, i, j);
        match kind {
            ThetaKind::Lovasz | ThetaKind::Szegedy => p.equal(e, -1.0),
            ThetaKind::Schrijver => p.at_most(e, -1.0),
        };
    }
    if kind == ThetaKind::Szegedy {
        for i in 0..n {
            for j in (i + 1)..n {
                if !g.has_edge(i, j) {
                    p.at_least(SparseSym::entry(n, i, j), -1.0);
                }
            }
        }
    }
    p
}

/// `max ⟨B, J⟩` over `B ⪰ 0`, `Tr B = 1`, `B_ij = 0` for non-adjacent `i ≠ j`,
/// and for Schrijver additionally `B ≥ 0` (only edge entries can be nonzero).
pub fn max_form_problem(g: &Graph, kind: ThetaKind) -> Result<SdpProblem, ThetaError> {
    if kind == ThetaKind::Szegedy {
        return Err(ThetaError::UnsupportedForm(kind));
    }
    let n = g.vertex_count();
    let mut p = SdpProblem::new(Sense::Max, SymMatrix::ones(n));
    p.equal(SparseSym::identity(n), 1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if !g.has_edge(i, j) {
                p.equal(SparseSym::entry(n, i, j), 0.0);
            } else if kind == ThetaKind::Schrijver {
                p.at_least(SparseSym::entry(n, i, j), 0.0);
            }
        }
    }
    Ok(p)
}

/// Rounds a numerical `Z` onto the feasible set of the min form: the edge rule is
/// enforced exactly, the diagonal is made constant, and a multiple of the
/// identity restores positive semidefiniteness. The diagonal of the result is
/// `λ − 1` for the returned `λ`.
pub(crate) fn polish_min(g: &Graph, kind: ThetaKind, z: &SymMatrix) -> Result<(SymMatrix, f64), ThetaError> {
    let n = g.vertex_count();
    let mut out = z.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = z.get(i, j);
            let adjacent = g.has_edge(i, j);
            let fixed = match kind {
                ThetaKind::Lovasz if adjacent => -1.0,
                ThetaKind::Schrijver if adjacent => v.min(-1.0),
                ThetaKind::Szegedy if adjacent => -1.0,
                ThetaKind::Szegedy => v.max(-1.0),
                _ => v,
            };
            out.set(i, j, fixed);
        }
    }
    let d = (0..n).fold(f64::NEG_INFINITY, |m, i| m.max(z.get(i, i)));
    for i in 0..n {
        out.set(i, i, d);
    }
    let lmin = out.min_eigenvalue()?;
    let shift = if lmin < 0.0 { -lmin * (1.0 + 1e-12) } else { 0.0 };
    let out = out.shift_diag(shift);
    Ok((out.clone(), out.get(0, 0) + 1.0))
}

/// Rounds a numerical `B` onto the feasible set of the max form.
pub(crate) fn polish_max(g: &Graph, kind: ThetaKind, b: &SymMatrix) -> Result<SymMatrix, ThetaError> {
    let n = g.vertex_count();
    let mut out = b.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = if !g.has_edge(i, j) {
                0.0
            } else if kind == ThetaKind::Schrijver {
                b.get(i, j).max(0.0)
            } else {
                b.get(i, j)
            };
            out.set(i, j, v);
        }
    }
    for i in 0..n {
        let v = out.get(i, i).max(0.0);
        out.set(i, i, v);
    }
    let lmin = out.min_eigenvalue()?;
    if lmin < 0.0 {
        out = out.shift_diag(-lmin * (1.0 + 1e-12));
    }
    let tr = out.trace();
    if tr <= 0.0 {
        return Err(ThetaError::Numerical("B-form witness has zero trace".into()));
    }
    Ok(out.scale(1.0 / tr))
}

/// Largest violation of the min-form constraints of `kind` at `z` for value `λ`,
/// together with the relative PSD margin.
pub fn min_witness_violation(g: &Graph, kind: ThetaKind, z: &SymMatrix, lambda: f64) -> (f64, f64) {
    let n = g.vertex_count();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        worst = worst.max((z.get(i, i) - (lambda - 1.0)).abs());
        for j in (i + 1)..n {
            let v = z.get(i, j);
            let adjacent = g.has_edge(i, j);
            let viol = match kind {
                ThetaKind::Lovasz if adjacent => (v + 1.0).abs(),
                ThetaKind::Schrijver if adjacent => (v + 1.0).max(0.0),
                ThetaKind::Szegedy if adjacent => (v + 1.0).abs(),
                ThetaKind::Szegedy => (-1.0 - v).max(0.0),
                _ => 0.0,
            };
            worst = worst.max(viol);
        }
    }
    (worst, z.psd_margin())
}

/// Largest violation of the B-form constraints and the relative PSD margin.
pub fn b_witness_violation(g: &Graph, kind: ThetaKind, b: &SymMatrix) -> (f64, f64) {
    let n = g.vertex_count();
    let mut worst = (b.trace() - 1.0).abs();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = b.get(i, j);
            if !g.has_edge(i, j) {
                worst = worst.max(v.abs());
            } else if kind == ThetaKind::Schrijver {
                worst = worst.max((-v).max(0.0));
            }
        }
    }
    (worst, b.psd_margin())
}

/// Largest violation of the T-form constraints (`T_ij = 0` off the edge set and
/// on the diagonal; `T ≥ 0` for Schrijver) and the PSD margin of `I + T`.
pub fn t_witness_violation(g: &Graph, kind: ThetaKind, t: &SymMatrix) -> (f64, f64) {
    let n = g.vertex_count();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        worst = worst.max(t.get(i, i).abs());
        for j in (i + 1)..n {
            let v = t.get(i, j);
            if !g.has_edge(i, j) {
                worst = worst.max(v.abs());
            } else if kind == ThetaKind::Schrijver {
                worst = worst.max((-v).max(0.0));
            }
        }
    }
    (worst, t.shift_diag(1.0).psd_margin())
}
