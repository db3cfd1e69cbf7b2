mod common;

use common::graph;
use proptest::prelude::*;
use proptest::sample::Index;
use theta_forge::graph::Graph;
use theta_forge::sdp::{check_feasible, solve, SdpProblem, Sense, SolveOptions, SolveStatus};
use theta_forge::theta::{self, max_form_problem, min_form_problem, Form, ThetaKind, ThetaOptions};

fn problems(g: &Graph) -> Vec<SdpProblem> {
    let mut out = Vec::new();
    for kind in [ThetaKind::Lovasz, ThetaKind::Schrijver] {
        out.push(max_form_problem(g, kind).unwrap());
        out.push(min_form_problem(g, kind));
    }
    out.push(min_form_problem(g, ThetaKind::Szegedy));
    out
}

fn non_trivial(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    graph(lo, hi).prop_filter("needs an edge", |g| !g.is_edgeless())
}

fn permute<T: Clone>(items: &[T], keys: &[Index]) -> Vec<T> {
    let mut v: Vec<T> = items.to_vec();
    // Fisher-Yates driven by the proptest indices.
    for i in (1..v.len()).rev() {
        let j = keys[i % keys.len()].index(i + 1);
        v.swap(i, j);
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Infeasible-start iterates are not dual pairs; the bound is asserted at
    /// every iterate that is primal and dual feasible to `feas_tol`.
    #[test]
    fn weak_duality_along_the_path(g in non_trivial(2, 8)) {
        let mut checked = 0;
        let base = SolveOptions::default();
        for p in problems(&g) {
            let full = solve(&p, &base).unwrap();
            for k in 1..=full.iterations {
                let s = solve(&p, &SolveOptions { max_iter: k, ..base }).unwrap();
                if s.residuals.primal > base.feas_tol || s.residuals.dual > base.feas_tol {
                    continue;
                }
                let excess = match p.sense {
                    Sense::Max => s.primal_value - s.dual_value,
                    Sense::Min => s.dual_value - s.primal_value,
                };
                prop_assert!(excess <= base.gap_tol * (1.0 + s.primal_value.abs()), "iteration {k}: {excess:e}");
                checked += 1;
            }
        }
        prop_assert!(checked > 0);
    }

    #[test]
    fn optimal_solutions_meet_the_contract(g in non_trivial(2, 9)) {
        let o = SolveOptions::default();
        for p in problems(&g) {
            let s = solve(&p, &o).unwrap();
            prop_assert_eq!(s.status, SolveStatus::Optimal);
            prop_assert!((s.primal_value - s.dual_value).abs() <= o.gap_tol * (1.0 + s.primal_value.abs()));
            prop_assert!(s.residuals.primal <= o.feas_tol);
            prop_assert!(s.x.is_psd(o.feas_tol));
            prop_assert!(check_feasible(&p, &s.x, 1e-6).unwrap().passed);
        }
    }

    #[test]
    fn min_and_max_forms_agree(g in non_trivial(2, 10)) {
        let o = ThetaOptions::default();
        for kind in [ThetaKind::Lovasz, ThetaKind::Schrijver] {
            let a = theta::theta_bar(&g, kind, Form::Min, &o).unwrap().value;
            let b = theta::theta_bar(&g, kind, Form::Max, &o).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-5, "{kind}: {a} vs {b}");
        }
    }

    #[test]
    fn objective_scaling(g in non_trivial(2, 9)) {
        let o = SolveOptions::default();
        for p in problems(&g) {
            let base = solve(&p, &o).unwrap().primal_value;
            for c in [2.0, 10.0] {
                let mut q = p.clone();
                q.objective = q.objective.scale(c);
                let v = solve(&q, &o).unwrap().primal_value;
                prop_assert!((v - c * base).abs() <= 1e-7 * c * (1.0 + base.abs()), "c = {c}: {v} vs {}", c * base);
            }
        }
    }

    #[test]
    fn constraint_order(g in non_trivial(2, 8), keys in proptest::collection::vec(any::<Index>(), 1..40)) {
        let o = SolveOptions::default();
        for p in problems(&g) {
            let base = solve(&p, &o).unwrap();
            let mut q = p.clone();
            q.equalities = permute(&p.equalities, &keys);
            q.inequalities = permute(&p.inequalities, &keys);
            let s = solve(&q, &o).unwrap();
            prop_assert!((s.primal_value - base.primal_value).abs() <= 1e-9, "{} vs {}", s.primal_value, base.primal_value);
        }
    }
}
