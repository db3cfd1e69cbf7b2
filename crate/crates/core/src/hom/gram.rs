//! Direct search for a certificate by semidefinite feasibility.

use super::{Answer, HomDecision, HomError, HomVariant, PartialTriple, Reason};
use crate::graph::Graph;
use crate::linalg::SymMatrix;
use crate::sdp::{self, SdpProblem, Sense, SolveOptions, SolveStatus, SparseSym};
use crate::theta::ThetaError;

/// Largest certificate dimension `|V(g)|·|V(h)|` accepted by [`gram_feasibility`].
pub const GRAM_MAX_DIM: usize = 150;
/// The constraints are declared feasible when the optimal shift is at most this.
pub const GRAM_TAU_TOL: f64 = 1e-6;

/// Looks for `C` directly: minimises `τ ≥ 0` such that `C + τI ⪰ 0` and `C`
/// satisfies the linear conditions of `variant`. The answer is `Yes` iff the
/// optimum is at most [`GRAM_TAU_TOL`].
pub fn gram_feasibility(g: &Graph, h: &Graph, variant: HomVariant, opts: &SolveOptions) -> Result<HomDecision, HomError> {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    let n = ng * nh;
    if n > GRAM_MAX_DIM {
        return Err(HomError::TooLarge(format!(
            "certificate dimension {ng}·{nh} = {n} exceeds {GRAM_MAX_DIM}"
        )));
    }
    let mut decision = HomDecision {
        variant,
        answer: Answer::No,
        reason: Reason::EdgeIntoEdgeless,
        g_values: PartialTriple::default(),
        h_values: PartialTriple::default(),
        tol: GRAM_TAU_TOL,
    };
    if !g.is_edgeless() && h.is_edgeless() {
        return Ok(decision);
    }

    // The variable is diag-block [C + τI, ·; ·, τ] of dimension n + 1.
    let tau = n;
    let mut objective = SymMatrix::zeros(n + 1);
    objective.set(tau, tau, 1.0);
    let mut p = SdpProblem::new(Sense::Min, objective);
    for x in 0..ng {
        for y in x..ng {
            let mut row = SparseSym::new(n + 1);
            for s in 0..nh {
                for t in 0..nh {
                    let (i, j) = (x * nh + s, y * nh + t);
                    if x < y {
                        row.push(i, j, 0.5);
                    } else if s == t {
                        row.push(i, i, 1.0);
                    } else if s < t {
                        row.push(i, j, 1.0);
                    }
                }
            }
            if x == y {
                row.push(tau, tau, -(nh as f64));
            }
            p.equal(row, 1.0);
        }
    }
    let same_vertex = matches!(variant, HomVariant::B | HomVariant::V);
    let nonneg = matches!(variant, HomVariant::Plus | HomVariant::V);
    for i in 0..n {
        for j in (i + 1)..n {
            let (x, s, y, t) = (i / nh, i % nh, j / nh, j % nh);
            let zero = (g.has_edge(x, y) && !h.has_edge(s, t)) || (same_vertex && x == y);
            if zero {
                p.equal(SparseSym::entry(n + 1, i, j), 0.0);
            } else if nonneg {
                p.at_least(SparseSym::entry(n + 1, i, j), 0.0);
            }
        }
    }

    let sol = sdp::solve(&p, opts).map_err(ThetaError::from)?;
    if sol.status != SolveStatus::Optimal {
        return Err(ThetaError::SolverFailure {
            status: sol.status,
            primal: sol.residuals.primal,
            dual: sol.residuals.dual,
            gap: sol.residuals.gap,
        }
        .into());
    }
    let t = sol.primal_value.max(0.0);
    decision.answer = if t <= GRAM_TAU_TOL { Answer::Yes } else { Answer::No };
    decision.reason = Reason::GramSearch { tau: t };
    Ok(decision)
}
