//! Conversions between the B-form and the T-form of the max programs.

use super::forms::{b_witness_violation, t_witness_violation};
use super::{ThetaError, ThetaKind};
use crate::graph::Graph;
use crate::linalg::{SymMatrix, PINV_THRESHOLD};

/// Tolerance applied to the input witness of a conversion.
pub const CONVERSION_TOL: f64 = 1e-7;

fn check_dims(g: &Graph, m: &SymMatrix) -> Result<(), ThetaError> {
    if m.dim() != g.vertex_count() {
        return Err(ThetaError::DimensionMismatch {
            expected: g.vertex_count(),
            found: m.dim(),
        });
    }
    if !m.is_finite() {
        return Err(ThetaError::Infeasible("witness has a non-finite entry".into()));
    }
    Ok(())
}

/// `T = D^{-1/2} (B − D) D^{-1/2}` with `D = B ∘ I` and `1/0 = 0`.
///
/// `‖I + T‖ ≥ ⟨B, J⟩`, so the objective can only improve.
pub fn convert_b_to_t(b: &SymMatrix, g: &Graph, kind: ThetaKind) -> Result<SymMatrix, ThetaError> {
    if kind == ThetaKind::Szegedy {
        return Err(ThetaError::UnsupportedForm(kind));
    }
    check_dims(g, b)?;
    let (viol, margin) = b_witness_violation(g, kind, b);
    if viol > CONVERSION_TOL || margin < -CONVERSION_TOL {
        return Err(ThetaError::Infeasible(format!(
            "B is not a feasible witness (violation {viol:e}, PSD margin {margin:e})"
        )));
    }
    let p: Vec<f64> = b
        .diag()
        .iter()
        .map(|&d| if d > PINV_THRESHOLD { 1.0 / d.sqrt() } else { 0.0 })
        .collect();
    Ok(SymMatrix::from_fn(b.dim(), |i, j| {
        if i == j {
            0.0
        } else {
            p[i] * p[j] * b.get(i, j)
        }
    }))
}

/// `B = ψψᵀ ∘ (I + T)` where `ψ` is a unit top eigenvector of `I + T`, taken
/// nonnegative (Perron) for the Schrijver form.
///
/// `⟨B, J⟩ = ‖I + T‖` and `Tr B = 1`.
pub fn convert_t_to_b(t: &SymMatrix, g: &Graph, kind: ThetaKind) -> Result<SymMatrix, ThetaError> {
    if kind == ThetaKind::Szegedy {
        return Err(ThetaError::UnsupportedForm(kind));
    }
    check_dims(g, t)?;
    let (viol, margin) = t_witness_violation(g, kind, t);
    if viol > CONVERSION_TOL || margin < -CONVERSION_TOL {
        return Err(ThetaError::Infeasible(format!(
            "T is not a feasible witness (violation {viol:e}, PSD margin of I+T {margin:e})"
        )));
    }
    let m = t.shift_diag(1.0);
    let (_, mut psi) = match kind {
        ThetaKind::Schrijver => m.perron_eigenpair()?,
        _ => m.top_eigenpair()?,
    };
    let norm = psi.iter().map(|v| v * v).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
    Ok(SymMatrix::from_fn(m.dim(), |i, j| psi[i] * psi[j] * m.get(i, j)))
}

/// `‖I + T‖`, the T-form objective.
pub fn t_objective(t: &SymMatrix) -> Result<f64, ThetaError> {
    Ok(t.shift_diag(1.0).opnorm()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedFamily};

    #[test]
    fn uniform_b_on_complete_graph() {
        let n = 5;
        let g = make_named(&NamedFamily::Complete(n)).unwrap();
        let b = SymMatrix::ones(n).scale(1.0 / n as f64);
        for kind in [ThetaKind::Lovasz, ThetaKind::Schrijver] {
            let t = convert_b_to_t(&b, &g, kind).unwrap();
            let expect = SymMatrix::ones(n).shift_diag(-1.0);
            assert!(t.max_abs_diff(&expect).unwrap() < 1e-12);
            assert!((t_objective(&t).unwrap() - n as f64).abs() < 1e-10);
            let back = convert_t_to_b(&t, &g, kind).unwrap();
            assert!(back.max_abs_diff(&b).unwrap() < 1e-10);
        }
    }

    #[test]
    fn zero_t_gives_unit_objective() {
        let g = make_named(&NamedFamily::Cycle(5)).unwrap();
        let b = convert_t_to_b(&SymMatrix::zeros(5), &g, ThetaKind::Lovasz).unwrap();
        assert!((b.trace() - 1.0).abs() < 1e-12);
        assert!((b.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_diagonal_rows_map_to_zero() {
        let g = make_named(&NamedFamily::Complete(3)).unwrap();
        let b = SymMatrix::diagonal(&[0.5, 0.5, 0.0]).add(&SymMatrix::from_fn(3, |i, j| {
            if i != j && i < 2 && j < 2 { 0.5 } else { 0.0 }
        }))
        .unwrap();
        let t = convert_b_to_t(&b, &g, ThetaKind::Schrijver).unwrap();
        assert_eq!(t.row(2), &[0.0, 0.0, 0.0]);
        assert!((t.get(0, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_infeasible_inputs() {
        let g = make_named(&NamedFamily::Cycle(5)).unwrap();
        // Nonzero on the non-edge {0, 2}.
        let mut b = SymMatrix::identity(5).scale(0.2);
        b.set(0, 2, 0.05);
        assert!(matches!(convert_b_to_t(&b, &g, ThetaKind::Lovasz), Err(ThetaError::Infeasible(_))));
        // Negative entry on an edge is fine for Lovász but not for Schrijver.
        let mut t = SymMatrix::zeros(5);
        t.set(0, 1, -0.3);
        assert!(convert_t_to_b(&t, &g, ThetaKind::Lovasz).is_ok());
        assert!(matches!(convert_t_to_b(&t, &g, ThetaKind::Schrijver), Err(ThetaError::Infeasible(_))));
        assert_eq!(
            convert_t_to_b(&t, &g, ThetaKind::Szegedy).unwrap_err(),
            ThetaError::UnsupportedForm(ThetaKind::Szegedy)
        );
        assert!(matches!(
            convert_b_to_t(&SymMatrix::identity(4), &g, ThetaKind::Lovasz),
            Err(ThetaError::DimensionMismatch { .. })
        ));
    }
}
