//! Semidefinite relaxations of graph homomorphisms.
//!
//! `G →_B H`, `G →_+ H` and `G →_v H` ask for a PSD certificate `C` (see
//! [`cert`]) satisfying progressively more conditions. The B relaxation is
//! decided exactly by comparing `ϑ̄`; for the other two only a sufficient and
//! a necessary condition are available, leaving an undecided window.

mod cert;
mod gram;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Graph, GraphError, ProductKind};
use crate::linalg::{LinalgError, SymMatrix};
use crate::theta::{self, Form, ThetaError, ThetaKind, ThetaOptions, ThetaResult, ThetaTriple};

pub use cert::{
    assemble, construct_y, extract_vectors, from_homomorphism, verify_certificate,
    verify_schrijver_certificate, witness_kinds, CertificateFile, ConditionResult, HomCertificate,
    HomVectors, SchrijverCertificate, VerificationReport,
};
pub use gram::{gram_feasibility, GRAM_MAX_DIM, GRAM_TAU_TOL};

/// Default comparison tolerance for theta values.
pub const DECISION_TOL: f64 = 1e-6;
/// Default tolerance for certificate verification.
pub const VERIFY_TOL: f64 = 1e-8;
/// Values within this distance of an integer are snapped before floor/ceil.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HomVariant {
    B,
    Plus,
    V,
}

impl std::fmt::Display for HomVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HomVariant::B => "B",
            HomVariant::Plus => "plus",
            HomVariant::V => "V",
        })
    }
}

impl std::str::FromStr for HomVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(HomVariant::B),
            "plus" | "+" => Ok(HomVariant::Plus),
            "v" => Ok(HomVariant::V),
            other => Err(format!("unknown variant '{other}' (B, plus, V)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("certificate not verified:\n{0}")]
    NotVerified(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0}")]
    TooLarge(String),
    #[error("malformed certificate: {0}")]
    Format(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Reason {
    /// `g` and `h` are the same graph; the identity map is a homomorphism.
    Identity,
    /// `ϑ̄(g) ≤ ϑ̄(h)` decides the B relaxation exactly.
    LovaszComparison,
    /// `ϑ⁺̄(g) ≤ ϑ⁻̄(h)` is sufficient for the V (hence Plus) relaxation.
    SzegedyBelowSchrijver,
    /// A Plus homomorphism forces `ϑ̄, ϑ⁻̄, ϑ⁺̄` of `g` to be at most those of `h`;
    /// `kind` is a variant for which this fails.
    MonotonicityFails { kind: ThetaKind },
    /// Neither rule applies.
    Undecided,
    /// Direct search for a certificate; `tau` is the smallest identity shift
    /// making the constraints PSD-feasible.
    GramSearch { tau: f64 },
    /// `g` has an edge but `h` has none.
    EdgeIntoEdgeless,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomDecision {
    pub variant: HomVariant,
    pub answer: Answer,
    pub reason: Reason,
    /// Complement-convention values of `g` that were computed.
    pub g_values: PartialTriple,
    pub h_values: PartialTriple,
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PartialTriple {
    pub schrijver: Option<f64>,
    pub lovasz: Option<f64>,
    pub szegedy: Option<f64>,
}

impl From<ThetaTriple> for PartialTriple {
    fn from(t: ThetaTriple) -> Self {
        PartialTriple {
            schrijver: Some(t.schrijver),
            lovasz: Some(t.lovasz),
            szegedy: Some(t.szegedy),
        }
    }
}

fn theta_value(g: &Graph, kind: ThetaKind, opts: &ThetaOptions) -> Result<f64, HomError> {
    Ok(theta::theta_bar(g, kind, Form::Min, opts)?.value)
}

/// Decides `g → h` for `variant`.
///
/// B: `Yes` iff `ϑ̄(g) ≤ ϑ̄(h) + tol`. Plus and V: `Yes` when
/// `ϑ⁺̄(g) ≤ ϑ⁻̄(h) + tol`, `No` when one of `ϑ̄, ϑ⁻̄, ϑ⁺̄` of `g` exceeds that of
/// `h` by more than `tol`, `Unknown` otherwise. Identical graphs are `Yes`.
pub fn decide(g: &Graph, h: &Graph, variant: HomVariant, tol: f64, opts: &ThetaOptions) -> Result<HomDecision, HomError> {
    let mut d = HomDecision {
        variant,
        answer: Answer::Yes,
        reason: Reason::Identity,
        g_values: PartialTriple::default(),
        h_values: PartialTriple::default(),
        tol,
    };
    if g == h {
        return Ok(d);
    }
    if variant == HomVariant::B {
        let (a, b) = (theta_value(g, ThetaKind::Lovasz, opts)?, theta_value(h, ThetaKind::Lovasz, opts)?);
        d.g_values.lovasz = Some(a);
        d.h_values.lovasz = Some(b);
        d.reason = Reason::LovaszComparison;
        d.answer = if a <= b + tol { Answer::Yes } else { Answer::No };
        return Ok(d);
    }
    let gv = theta::theta_bar_all(g, opts)?;
    let hv = theta::theta_bar_all(h, opts)?;
    d.g_values = gv.into();
    d.h_values = hv.into();
    if gv.szegedy <= hv.schrijver + tol {
        d.reason = Reason::SzegedyBelowSchrijver;
    } else if let Some(kind) = ThetaKind::ALL.into_iter().find(|&k| gv.get(k) > hv.get(k) + tol) {
        d.answer = Answer::No;
        d.reason = Reason::MonotonicityFails { kind };
    } else {
        d.answer = Answer::Unknown;
        d.reason = Reason::Undecided;
    }
    Ok(d)
}

/// A feasible max-form matrix `B = ψψᵀ ∘ (I + T)` for `h` with `λ = ⟨B, J⟩ = ‖I + T‖`.
pub fn h_side_witness(h: &Graph, kind: ThetaKind, r: &ThetaResult) -> Result<SymMatrix, HomError> {
    let b = r
        .b
        .as_ref()
        .ok_or_else(|| HomError::PreconditionFailed(format!("no max-form witness for {kind}")))?;
    let t = theta::convert_b_to_t(b, h, kind)?;
    Ok(theta::convert_t_to_b(&t, h, kind)?)
}

/// Builds `C` from a min-form matrix `z_g` for `g` (value `z_value`) and a
/// max-form matrix `b_h` for `h`. The diagonal of `z_g` is moved to `λ − 1`.
pub fn certificate_from_witnesses(z_g: &SymMatrix, z_value: f64, b_h: &SymMatrix, tol: f64) -> Result<SymMatrix, HomError> {
    let (ng, nh) = (z_g.dim(), b_h.dim());
    let lambda = b_h.sum();
    if z_value > lambda + tol {
        return Err(HomError::PreconditionFailed(format!(
            "source value {z_value} exceeds target value {lambda}"
        )));
    }
    if lambda <= 1.0 + 1e-9 {
        // Only reachable when both sides have value 1, i.e. g is edgeless.
        return Ok(cert::degenerate(ng, nh));
    }
    let z = z_g.shift_diag(lambda - z_value);
    Ok(assemble(&z, b_h))
}

fn construct(g: &Graph, h: &Graph, variant: HomVariant, opts: &ThetaOptions) -> Result<HomCertificate, HomError> {
    let (kg, kh) = witness_kinds(variant);
    let rg = theta::theta_bar(g, kg, Form::Min, opts)?;
    let rh = theta::theta_bar(h, kh, Form::Min, opts)?;
    let b = h_side_witness(h, kh, &rh)?;
    let c = certificate_from_witnesses(&rg.z, rg.z_value, &b, DECISION_TOL)?;
    Ok(HomCertificate {
        variant,
        g_size: g.vertex_count(),
        h_size: h.vertex_count(),
        c,
    })
}

/// Certificate for `g →_B h`; requires `ϑ̄(g) ≤ ϑ̄(h) + 1e−6`.
pub fn construct_certificate_b(g: &Graph, h: &Graph, opts: &ThetaOptions) -> Result<HomCertificate, HomError> {
    construct(g, h, HomVariant::B, opts)
}

/// Certificate for `g →_v h` (hence also B and Plus); requires
/// `ϑ⁺̄(g) ≤ ϑ⁻̄(h) + 1e−6`. Built from a Szegedy matrix for `g` and a
/// nonnegative Schrijver matrix with Perron vector for `h`.
pub fn construct_certificate_v(g: &Graph, h: &Graph, opts: &ThetaOptions) -> Result<HomCertificate, HomError> {
    construct(g, h, HomVariant::V, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchrijverOutcome {
    pub holds: bool,
    pub g_value: f64,
    pub h_value: f64,
    pub certificate: Option<SchrijverCertificate>,
}

/// Decides `ϑ⁻̄(g) ≤ ϑ⁻̄(h)` and, when it holds, builds the Gram certificate
/// from Schrijver witnesses on both sides.
pub fn schrijver_iff(g: &Graph, h: &Graph, opts: &ThetaOptions) -> Result<SchrijverOutcome, HomError> {
    let rg = theta::theta_bar(g, ThetaKind::Schrijver, Form::Min, opts)?;
    let rh = theta::theta_bar(h, ThetaKind::Schrijver, Form::Min, opts)?;
    let holds = rg.value <= rh.value + DECISION_TOL;
    let certificate = if holds {
        let b = h_side_witness(h, ThetaKind::Schrijver, &rh)?;
        let c = certificate_from_witnesses(&rg.z, rg.z_value, &b, DECISION_TOL)?;
        Some(SchrijverCertificate {
            g_size: g.vertex_count(),
            h_size: h.vertex_count(),
            c,
        })
    } else {
        None
    };
    Ok(SchrijverOutcome {
        holds,
        g_value: rg.value,
        h_value: rh.value,
        certificate,
    })
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= SNAP_TOL {
        r
    } else {
        v
    }
}

/// `⌊v⌋` after snapping values within [`SNAP_TOL`] of an integer.
pub fn floor_snapped(v: f64) -> usize {
    snap(v).floor().max(0.0) as usize
}

/// `⌈v⌉` after snapping values within [`SNAP_TOL`] of an integer.
pub fn ceil_snapped(v: f64) -> usize {
    snap(v).ceil().max(0.0) as usize
}

/// Integer quantities read off the complement-convention values of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub values: ThetaTriple,
    /// `⌊ϑ̄⌋`: largest `n` with `K_n →_B` this graph.
    pub beta: usize,
    /// `⌈ϑ̄⌉`: smallest `n` with this graph `→_B K_n`.
    pub beta_chi: usize,
    /// `⌈ϑ⁺̄⌉`: smallest `n` with this graph `→_v K_n`.
    pub chi_vect: usize,
    /// `⌊ϑ⁻̄⌋`: largest `n` with `K_n →_v` this graph.
    pub omega_vect: usize,
    /// `⌊ϑ⁻̄⌋`: Schrijver analogue of `beta`.
    pub beta_minus: usize,
    /// Upper bound on the entanglement-assisted independence number.
    pub alpha_star_upper: usize,
    /// Lower bound on the entanglement-assisted chromatic number.
    pub chi_star_lower: usize,
}

pub fn derived_quantities(g: &Graph, opts: &ThetaOptions) -> Result<DerivedQuantities, HomError> {
    let values = theta::theta_bar_all(g, opts)?;
    Ok(DerivedQuantities {
        values,
        beta: floor_snapped(values.lovasz),
        beta_chi: ceil_snapped(values.lovasz),
        chi_vect: ceil_snapped(values.szegedy),
        omega_vect: floor_snapped(values.schrijver),
        beta_minus: floor_snapped(values.schrijver),
        alpha_star_upper: floor_snapped(values.schrijver),
        chi_star_lower: ceil_snapped(values.szegedy),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomProductCheck {
    pub n_g: usize,
    /// `ϑ̄(g ∘ h)`.
    pub theta_of_homprod: f64,
    /// `ϑ⁻̄(g ∘ h)`.
    pub schrijver_of_homprod: f64,
    pub decide_b: Answer,
    pub g_values: ThetaTriple,
    pub h_values: ThetaTriple,
    pub consistent: bool,
}

/// Compares the hom-product characterisations `g →_B h ⟺ ϑ̄(g∘h) = |V(g)|`
/// and `g →_v h ⟺ ϑ⁻̄(g∘h) = |V(g)|` with the theta comparisons.
pub fn hom_product_check(g: &Graph, h: &Graph, tol: f64, opts: &ThetaOptions) -> Result<HomProductCheck, HomError> {
    let gh = graph::product(g, h, ProductKind::Hom)?;
    let n = g.vertex_count() as f64;
    let theta_of_homprod = theta_value(&gh, ThetaKind::Lovasz, opts)?;
    let schrijver_of_homprod = theta_value(&gh, ThetaKind::Schrijver, opts)?;
    let g_values = theta::theta_bar_all(g, opts)?;
    let h_values = theta::theta_bar_all(h, opts)?;
    let decide_b = if g_values.lovasz <= h_values.lovasz + DECISION_TOL {
        Answer::Yes
    } else {
        Answer::No
    };
    let b_equal = (theta_of_homprod - n).abs() <= tol;
    let v_equal = (schrijver_of_homprod - n).abs() <= tol;
    let sufficient = g_values.szegedy <= h_values.schrijver + DECISION_TOL;
    let monotone = ThetaKind::ALL.iter().all(|&k| g_values.get(k) <= h_values.get(k) + tol);
    let consistent = b_equal == (decide_b == Answer::Yes) && (!sufficient || v_equal) && (!v_equal || monotone);
    Ok(HomProductCheck {
        n_g: g.vertex_count(),
        theta_of_homprod,
        schrijver_of_homprod,
        decide_b,
        g_values,
        h_values,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{find_homomorphism, make_named, NamedFamily};

    fn named(s: &str) -> Graph {
        make_named(&s.parse::<NamedFamily>().unwrap()).unwrap()
    }

    fn opts() -> ThetaOptions {
        ThetaOptions::default()
    }

    #[test]
    fn b_certificate_small_pairs() {
        for (g, h) in [("K:2", "K:3"), ("C5", "C5"), ("K:2", "C5"), ("C5", "K:3"), ("e:3", "K:2")] {
            let (g, h) = (named(g), named(h));
            let cert = construct_certificate_b(&g, &h, &opts()).unwrap();
            let rep = verify_certificate(&cert, &g, &h, VERIFY_TOL).unwrap();
            assert!(rep.passed, "{rep}");
            let v = extract_vectors(&cert, &g, &h, VERIFY_TOL).unwrap();
            assert!(v.violation(&g, &h, HomVariant::B) < 1e-6);
            assert!(v.gram().max_abs_diff(&cert.c).unwrap() < 1e-6);
        }
        let err = construct_certificate_b(&named("K:3"), &named("K:2"), &opts()).unwrap_err();
        assert!(matches!(err, HomError::PreconditionFailed(_)));
    }

    #[test]
    fn v_certificate_pentagon() {
        let c5 = named("C5");
        let cert = construct_certificate_v(&c5, &c5, &opts()).unwrap();
        let rep = verify_certificate(&cert, &c5, &c5, VERIFY_TOL).unwrap();
        assert!(rep.passed, "{rep}");
        for variant in [HomVariant::B, HomVariant::Plus] {
            let relabeled = HomCertificate { variant, ..cert.clone() };
            assert!(verify_certificate(&relabeled, &c5, &c5, VERIFY_TOL).unwrap().passed);
        }
        let v = extract_vectors(&cert, &c5, &c5, VERIFY_TOL).unwrap();
        assert!(v.violation(&c5, &c5, HomVariant::V) < 1e-6);
    }

    #[test]
    fn pulled_back_matrix_is_feasible() {
        let (k2, k3) = (named("K:2"), named("K:3"));
        let cert = construct_certificate_b(&k2, &k3, &opts()).unwrap();
        let rh = theta::theta_bar(&k3, ThetaKind::Lovasz, Form::Min, &opts()).unwrap();
        let y = construct_y(&cert.c, 2, &rh.z).unwrap();
        let (viol, margin) = theta::min_witness_violation(&k2, ThetaKind::Lovasz, &y, rh.z_value);
        assert!(viol < 1e-6 && margin > -1e-8, "{viol} {margin}");

        let c5 = named("C5");
        let cert = construct_certificate_v(&c5, &c5, &opts()).unwrap();
        let rh = theta::theta_bar(&c5, ThetaKind::Schrijver, Form::Min, &opts()).unwrap();
        let y = construct_y(&cert.c, 5, &rh.z).unwrap();
        let (viol, margin) = theta::min_witness_violation(&c5, ThetaKind::Schrijver, &y, rh.z_value);
        assert!(viol < 1e-6 && margin > -1e-8, "{viol} {margin}");
    }

    #[test]
    fn identity_certificate_pulls_back_exactly() {
        let k2 = named("K:2");
        let cert = from_homomorphism(&k2, &k2, &[0, 1], HomVariant::V).unwrap();
        let z = SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let y = construct_y(&cert.c, 2, &z).unwrap();
        assert_eq!(y, z);
        let v = extract_vectors(&cert, &k2, &k2, VERIFY_TOL).unwrap();
        assert!(v.violation(&k2, &k2, HomVariant::V) < 1e-12);
    }

    #[test]
    fn classical_homomorphisms_give_certificates() {
        for (g, h, exists) in [("C5", "K:3", true), ("petersen", "K:3", true), ("K:3", "C5", false), ("C7", "C5", true)] {
            let (g, h) = (named(g), named(h));
            let f = find_homomorphism(&g, &h).unwrap();
            assert_eq!(f.is_some(), exists);
            let Some(f) = f else { continue };
            for variant in [HomVariant::B, HomVariant::Plus, HomVariant::V] {
                let cert = from_homomorphism(&g, &h, &f, variant).unwrap();
                assert!(verify_certificate(&cert, &g, &h, VERIFY_TOL).unwrap().passed);
            }
        }
    }

    #[test]
    fn violation_is_located() {
        let (k2, k3) = (named("K:2"), named("K:3"));
        let mut cert = construct_certificate_b(&k2, &k3, &opts()).unwrap();
        // (x,s) = (0,1), (y,t) = (1,1): x ~ y but s = t is a non-edge of K3.
        cert.c.set(1, 4, cert.c.get(1, 4) + 1e-3);
        let rep = verify_certificate(&cert, &k2, &k3, VERIFY_TOL).unwrap();
        let fail: Vec<_> = rep.failures().collect();
        let adj = fail.iter().find(|c| c.name.starts_with("zero on x~y")).unwrap();
        assert_eq!(adj.at, Some([0, 1, 1, 1]));
        assert!((adj.worst - 1e-3).abs() < 1e-9);
    }

    #[test]
    fn decide_rules() {
        let o = opts();
        let (k2, k3, c5, c7) = (named("K:2"), named("K:3"), named("C5"), named("C7"));
        assert_eq!(decide(&k3, &c5, HomVariant::B, DECISION_TOL, &o).unwrap().answer, Answer::No);
        assert_eq!(decide(&k2, &c5, HomVariant::B, DECISION_TOL, &o).unwrap().answer, Answer::Yes);
        let d = decide(&c5, &c5, HomVariant::V, DECISION_TOL, &o).unwrap();
        assert_eq!((d.answer, d.reason), (Answer::Yes, Reason::Identity));
        let d = decide(&c5, &k3, HomVariant::Plus, DECISION_TOL, &o).unwrap();
        assert_eq!(d.answer, Answer::Yes);
        let d = decide(&k3, &k2, HomVariant::Plus, DECISION_TOL, &o).unwrap();
        assert_eq!(d.answer, Answer::No);
        // ϑ̄(C7) = 7/ϑ(C7) ≈ 2.11 < √5, so C5 → C7 fails monotonicity and
        // C7 → C5 meets the sufficient condition.
        let d = decide(&c5, &c7, HomVariant::Plus, DECISION_TOL, &o).unwrap();
        assert_eq!(d.answer, Answer::No);
        assert_eq!(decide(&c7, &c5, HomVariant::V, DECISION_TOL, &o).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn derived_for_pentagon() {
        let d = derived_quantities(&named("C5"), &opts()).unwrap();
        assert_eq!((d.beta_chi, d.chi_vect, d.omega_vect, d.beta), (3, 3, 2, 2));
    }

    #[test]
    fn snapping() {
        assert_eq!(floor_snapped(3.9999999), 4);
        assert_eq!(ceil_snapped(4.0000001), 4);
        assert_eq!(floor_snapped(3.99), 3);
        assert_eq!(ceil_snapped(2.2360679), 3);
    }

    #[test]
    fn schrijver_construction_on_pentagon() {
        let c5 = named("C5");
        let out = schrijver_iff(&c5, &c5, &opts()).unwrap();
        assert!(out.holds);
        let rep = verify_schrijver_certificate(out.certificate.as_ref().unwrap(), &c5, &c5, VERIFY_TOL).unwrap();
        assert!(rep.passed, "{rep}");
        let k3 = named("K:3");
        assert!(!schrijver_iff(&k3, &c5, &opts()).unwrap().holds);
    }

    #[test]
    fn hom_product_small() {
        let (k2, k3) = (named("K:2"), named("K:3"));
        let a = hom_product_check(&k2, &k3, 1e-4, &opts()).unwrap();
        assert!((a.theta_of_homprod - 2.0).abs() < 1e-4 && a.consistent, "{a:?}");
        let b = hom_product_check(&k3, &k2, 1e-4, &opts()).unwrap();
        assert!(b.theta_of_homprod < 3.0 - 1e-3 && b.consistent, "{b:?}");
    }

    #[test]
    fn certificate_json_round_trip() {
        let (k2, k3) = (named("K:2"), named("K:3"));
        let cert = construct_certificate_b(&k2, &k3, &opts()).unwrap();
        let text = cert.to_json();
        let back = HomCertificate::from_json(&text, &k2, &k3, VERIFY_TOL).unwrap();
        assert!(back.c.max_abs_diff(&cert.c).unwrap() == 0.0);
        assert!(matches!(
            HomCertificate::from_json(&text, &k2, &named("C5"), VERIFY_TOL),
            Err(HomError::DimensionMismatch(_))
        ));
        let mut file = cert.to_file();
        file.entries[0] += 0.5;
        let bad = serde_json::to_string(&file).unwrap();
        assert!(matches!(HomCertificate::from_json(&bad, &k2, &k3, VERIFY_TOL), Err(HomError::NotVerified(_))));
    }
}
