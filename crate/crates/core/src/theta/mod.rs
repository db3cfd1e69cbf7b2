//! Lovász theta and its Schrijver (ϑ⁻) and Szegedy (ϑ⁺) variants.
//!
//! Everything here is in the complement convention: [`theta_bar`] of `g`
//! returns `ϑ̄(g) = ϑ(ḡ)` by solving a program stated directly on `g`.
//! [`theta`] gives the plain number `ϑ(g) = ϑ̄(ḡ)`.
//!
//! The min form yields an upper bound through a feasible `Z`; the max form a
//! lower bound through a feasible `B` (or `T`). A single interior-point solve
//! of either form produces both, because the dual slack of one form is a
//! witness for the other.

mod convert;
mod forms;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Graph, GraphError};
use crate::linalg::{LinalgError, SymMatrix};
use crate::sdp::{self, SdpError, SolveOptions, SolveStatus};

pub use convert::{convert_b_to_t, convert_t_to_b, t_objective, CONVERSION_TOL};
pub use forms::{
    b_witness_violation, max_form_problem, min_form_problem, min_witness_violation,
    t_witness_violation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaKind {
    /// ϑ
    Lovasz,
    /// ϑ⁻, edge entries of `Z` at most −1.
    Schrijver,
    /// ϑ⁺, every off-diagonal entry of `Z` at least −1.
    Szegedy,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 3] = [ThetaKind::Schrijver, ThetaKind::Lovasz, ThetaKind::Szegedy];
}

impl std::fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThetaKind::Lovasz => "lovasz",
            ThetaKind::Schrijver => "schrijver",
            ThetaKind::Szegedy => "szegedy",
        })
    }
}

impl std::str::FromStr for ThetaKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lovasz" | "theta" => Ok(ThetaKind::Lovasz),
            "schrijver" | "minus" => Ok(ThetaKind::Schrijver),
            "szegedy" | "plus" => Ok(ThetaKind::Szegedy),
            other => Err(format!("unknown theta kind '{other}' (lovasz, schrijver, szegedy)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Min,
    Max,
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Form::Min => "min",
            Form::Max => "max",
        })
    }
}

impl std::str::FromStr for Form {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(Form::Min),
            "max" => Ok(Form::Max),
            other => Err(format!("unknown form '{other}' (min, max)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("the {0} number has no max form")]
    UnsupportedForm(ThetaKind),
    #[error("witness has dimension {found}, graph has {expected} vertices")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("infeasible witness: {0}")]
    Infeasible(String),
    #[error("solver did not converge ({status:?}, residuals {primal:e}/{dual:e}, gap {gap:e})")]
    SolverFailure {
        status: SolveStatus,
        primal: f64,
        dual: f64,
        gap: f64,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaOptions {
    pub solve: SolveOptions,
    /// A solve that stalls is still accepted when the polished witnesses bound
    /// the value to within this relative gap.
    pub accept_gap: f64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions {
            solve: SolveOptions {
                gap_tol: 1e-9,
                feas_tol: 1e-9,
                ..SolveOptions::default()
            },
            accept_gap: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaResult {
    pub kind: ThetaKind,
    pub form: Form,
    /// `ϑ̄`-type value of the argument graph. For the min form this is the
    /// upper bound certified by `z`; for the max form the lower bound `‖I+T‖`.
    pub value: f64,
    /// Witness in the requested form: `Z` for the min form, `I + T` for the max form.
    pub witness: SymMatrix,
    /// Feasible min-form matrix with constant diagonal `z_value − 1`.
    pub z: SymMatrix,
    pub z_value: f64,
    /// Feasible B-form matrix, absent for the Szegedy kind.
    pub b: Option<SymMatrix>,
    /// Certified lower bound: `⟨B, J⟩`, or the solver's dual value for Szegedy.
    pub lower: f64,
    /// `z_value − lower`.
    pub gap: f64,
    pub iterations: usize,
}

impl ThetaResult {
    /// Min-form witness and its value, as consumed by certificate construction.
    pub fn z_witness(&self) -> (&SymMatrix, f64) {
        (&self.z, self.z_value)
    }

    fn edgeless(n: usize, kind: ThetaKind, form: Form) -> ThetaResult {
        let mut b = SymMatrix::zeros(n);
        b.set(0, 0, 1.0);
        let witness = match form {
            Form::Min => SymMatrix::zeros(n),
            Form::Max => SymMatrix::identity(n),
        };
        ThetaResult {
            kind,
            form,
            value: 1.0,
            witness,
            z: SymMatrix::zeros(n),
            z_value: 1.0,
            b: (kind != ThetaKind::Szegedy).then_some(b),
            lower: 1.0,
            gap: 0.0,
            iterations: 0,
        }
    }
}

/// `ϑ̄(g)`, `ϑ⁻̄(g)` or `ϑ⁺̄(g)` according to `kind`.
pub fn theta_bar(g: &Graph, kind: ThetaKind, form: Form, opts: &ThetaOptions) -> Result<ThetaResult, ThetaError> {
    if form == Form::Max && kind == ThetaKind::Szegedy {
        return Err(ThetaError::UnsupportedForm(kind));
    }
    let n = g.vertex_count();
    if g.is_edgeless() {
        return Ok(ThetaResult::edgeless(n, kind, form));
    }
    let problem = match form {
        Form::Min => min_form_problem(g, kind),
        Form::Max => max_form_problem(g, kind)?,
    };
    let sol = sdp::solve(&problem, &opts.solve)?;
    let failure = || ThetaError::SolverFailure {
        status: sol.status,
        primal: sol.residuals.primal,
        dual: sol.residuals.dual,
        gap: sol.residuals.gap,
    };
    if sol.status == SolveStatus::Infeasible {
        return Err(failure());
    }
    let (z_raw, b_raw) = match form {
        Form::Min => (&sol.x, &sol.dual_slack),
        Form::Max => (&sol.dual_slack, &sol.x),
    };
    let (z, z_value) = forms::polish_min(g, kind, z_raw)?;
    let (b, lower) = if kind == ThetaKind::Szegedy {
        (None, sol.dual_value + 1.0)
    } else {
        let b = forms::polish_max(g, kind, b_raw)?;
        let lower = b.sum();
        (Some(b), lower)
    };
    let gap = z_value - lower;
    if sol.status != SolveStatus::Optimal && gap > opts.accept_gap * (1.0 + z_value.abs()) {
        return Err(failure());
    }
    let (value, witness) = match form {
        Form::Min => (z_value, z.clone()),
        Form::Max => {
            let b = b.as_ref().expect("max form is Lovász or Schrijver");
            let t = convert_b_to_t(b, g, kind)?;
            (t_objective(&t)?, t.shift_diag(1.0))
        }
    };
    Ok(ThetaResult {
        kind,
        form,
        value,
        witness,
        z,
        z_value,
        b,
        lower,
        gap,
        iterations: sol.iterations,
    })
}

/// Plain `ϑ(g)`, `ϑ⁻(g)` or `ϑ⁺(g)`: the complement-convention number of `ḡ`.
pub fn theta(g: &Graph, kind: ThetaKind, form: Form, opts: &ThetaOptions) -> Result<ThetaResult, ThetaError> {
    theta_bar(&g.complement(), kind, form, opts)
}

/// Values of all three variants of one graph in one convention.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaTriple {
    pub schrijver: f64,
    pub lovasz: f64,
    pub szegedy: f64,
}

impl ThetaTriple {
    pub fn get(&self, kind: ThetaKind) -> f64 {
        match kind {
            ThetaKind::Schrijver => self.schrijver,
            ThetaKind::Lovasz => self.lovasz,
            ThetaKind::Szegedy => self.szegedy,
        }
    }

    /// `schrijver ≤ lovasz ≤ szegedy` up to `tol`.
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.schrijver <= self.lovasz + tol && self.lovasz <= self.szegedy + tol
    }
}

/// All three complement-convention values of `g` from min-form solves.
pub fn theta_bar_all(g: &Graph, opts: &ThetaOptions) -> Result<ThetaTriple, ThetaError> {
    let v = |kind| theta_bar(g, kind, Form::Min, opts).map(|r| r.value);
    Ok(ThetaTriple {
        schrijver: v(ThetaKind::Schrijver)?,
        lovasz: v(ThetaKind::Lovasz)?,
        szegedy: v(ThetaKind::Szegedy)?,
    })
}

/// `α(g) ≤ ϑ⁻(g) ≤ ϑ(g) ≤ ϑ⁺(g) ≤ χ(ḡ)` for the plain numbers of `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub alpha: Option<usize>,
    pub theta: ThetaTriple,
    /// Chromatic number of the complement (clique cover number of `g`).
    pub chi_complement: Option<usize>,
    pub holds: bool,
}

pub fn sandwich_report(g: &Graph, opts: &ThetaOptions, tol: f64) -> Result<SandwichReport, ThetaError> {
    let gc = g.complement();
    let theta = theta_bar_all(&gc, opts)?;
    let alpha = graph::independence_number(g).ok();
    let chi_complement = graph::chromatic_number(&gc).ok();
    let holds = theta.is_ordered(tol)
        && alpha.is_none_or(|a| a as f64 <= theta.schrijver + tol)
        && chi_complement.is_none_or(|c| theta.szegedy <= c as f64 + tol);
    Ok(SandwichReport {
        alpha,
        theta,
        chi_complement,
        holds,
    })
}

/// The products `ϑ(g)ϑ(ḡ)` and `ϑ⁻(g)ϑ⁺(ḡ)`, both at least `|V|` and equal to
/// it for vertex-transitive graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub n: usize,
    pub lovasz_product: f64,
    pub schrijver_szegedy_product: f64,
    pub vertex_transitive: Option<bool>,
}

impl ReciprocityReport {
    /// Both products are at least `n`, and equal to `n` when the graph is known
    /// to be vertex transitive, within relative tolerance `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        let n = self.n as f64;
        let lower = |p: f64| p >= n * (1.0 - tol);
        let equal = |p: f64| (p - n).abs() <= n * tol;
        let ok = lower(self.lovasz_product) && lower(self.schrijver_szegedy_product);
        match self.vertex_transitive {
            Some(true) => ok && equal(self.lovasz_product) && equal(self.schrijver_szegedy_product),
            _ => ok,
        }
    }
}

pub fn reciprocity_check(g: &Graph, opts: &ThetaOptions) -> Result<ReciprocityReport, ThetaError> {
    let gc = g.complement();
    let v = |h: &Graph, kind| theta_bar(h, kind, Form::Min, opts).map(|r| r.value);
    // ϑ(g) = ϑ̄(ḡ), ϑ(ḡ) = ϑ̄(g), ϑ⁻(g) = ϑ⁻̄(ḡ), ϑ⁺(ḡ) = ϑ⁺̄(g).
    let lovasz_product = v(&gc, ThetaKind::Lovasz)? * v(g, ThetaKind::Lovasz)?;
    let schrijver_szegedy_product = v(&gc, ThetaKind::Schrijver)? * v(g, ThetaKind::Szegedy)?;
    Ok(ReciprocityReport {
        n: g.vertex_count(),
        lovasz_product,
        schrijver_szegedy_product,
        vertex_transitive: graph::is_vertex_transitive(g).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedFamily};

    fn named(s: &str) -> Graph {
        make_named(&s.parse::<NamedFamily>().unwrap()).unwrap()
    }

    fn check_witnesses(g: &Graph, r: &ThetaResult) {
        let (viol, margin) = min_witness_violation(g, r.kind, &r.z, r.z_value);
        assert!(viol < 1e-9 && margin > -1e-9, "Z: {viol:e} {margin:e}");
        if let Some(b) = &r.b {
            let (viol, margin) = b_witness_violation(g, r.kind, b);
            assert!(viol < 1e-9 && margin > -1e-9, "B: {viol:e} {margin:e}");
        }
        assert!(r.gap > -1e-9 && r.gap < 1e-6, "gap {}", r.gap);
    }

    #[test]
    fn pentagon_all_kinds_both_forms() {
        let c5 = named("C5");
        let s5 = 5f64.sqrt();
        for kind in ThetaKind::ALL {
            let r = theta_bar(&c5, kind, Form::Min, &ThetaOptions::default()).unwrap();
            assert!((r.value - s5).abs() < 1e-6, "{kind}: {}", r.value);
            check_witnesses(&c5, &r);
            if kind != ThetaKind::Szegedy {
                let r = theta_bar(&c5, kind, Form::Max, &ThetaOptions::default()).unwrap();
                assert!((r.value - s5).abs() < 1e-6, "{kind} max: {}", r.value);
                let t = r.witness.shift_diag(-1.0);
                let (viol, margin) = t_witness_violation(&c5, kind, &t);
                assert!(viol < 1e-9 && margin > -1e-9);
            }
        }
    }

    #[test]
    fn complete_and_empty() {
        let opts = ThetaOptions::default();
        for n in 1..6 {
            let k = make_named(&NamedFamily::Complete(n)).unwrap();
            let e = make_named(&NamedFamily::Empty(n)).unwrap();
            for kind in ThetaKind::ALL {
                let v = theta_bar(&k, kind, Form::Min, &opts).unwrap().value;
                assert!((v - n as f64).abs() < 1e-6, "K{n} {kind}: {v}");
                assert_eq!(theta_bar(&e, kind, Form::Min, &opts).unwrap().value, 1.0);
                let v = theta(&e, kind, Form::Min, &opts).unwrap().value;
                assert!((v - n as f64).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn petersen_plain_values() {
        // Petersen is vertex transitive with 10 vertices, α = 4, and spectrum
        // 3, 1, −2; Hoffman's bound 10·2/(3+2) = 4 is tight for ϑ.
        let p = named("petersen");
        let opts = ThetaOptions::default();
        let r = theta(&p, ThetaKind::Lovasz, Form::Min, &opts).unwrap();
        assert!((r.value - 4.0).abs() < 1e-6);
        let rc = theta_bar(&p, ThetaKind::Lovasz, Form::Min, &opts).unwrap();
        assert!((rc.value - 2.5).abs() < 1e-6);
    }

    #[test]
    fn pentagon_reciprocity() {
        // C5 is self-complementary and vertex transitive, so every variant is √5.
        let rep = reciprocity_check(&named("C5"), &ThetaOptions::default()).unwrap();
        assert!(rep.holds(1e-6), "{rep:?}");
    }

    #[test]
    fn sandwich_on_small_graphs() {
        for s in ["C5", "C7", "petersen", "K:4", "e:3"] {
            let rep = sandwich_report(&named(s), &ThetaOptions::default(), 1e-6).unwrap();
            assert!(rep.holds, "{s}: {rep:?}");
        }
    }

    #[test]
    fn max_form_rejects_szegedy() {
        assert_eq!(
            theta_bar(&named("C5"), ThetaKind::Szegedy, Form::Max, &ThetaOptions::default()).unwrap_err(),
            ThetaError::UnsupportedForm(ThetaKind::Szegedy)
        );
    }

    #[test]
    fn kind_and_form_parse() {
        for k in ThetaKind::ALL {
            assert_eq!(k.to_string().parse::<ThetaKind>().unwrap(), k);
        }
        assert_eq!("max".parse::<Form>().unwrap(), Form::Max);
        assert!("mid".parse::<Form>().is_err());
    }
}
