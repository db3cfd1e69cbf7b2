mod common;

use common::{graph, named};
use proptest::prelude::*;
use theta_forge::graph::{find_homomorphism, Graph};
use theta_forge::hom::{
    construct_certificate_b, construct_certificate_v, decide, extract_vectors, from_homomorphism, gram_feasibility,
    schrijver_iff, verify_certificate, verify_schrijver_certificate, Answer, HomVariant, Reason, DECISION_TOL,
    VERIFY_TOL,
};
use theta_forge::sdp::SolveOptions;
use theta_forge::theta::{self, Form, ThetaKind, ThetaOptions};

const VARIANTS: [HomVariant; 3] = [HomVariant::B, HomVariant::Plus, HomVariant::V];

fn lovasz_bar(g: &Graph) -> f64 {
    theta::theta_bar(g, ThetaKind::Lovasz, Form::Min, &ThetaOptions::default()).unwrap().value
}

fn gram(g: &Graph, h: &Graph, variant: HomVariant) -> Answer {
    gram_feasibility(g, h, variant, &SolveOptions::default()).unwrap().answer
}

fn zoo() -> Vec<(&'static str, Graph)> {
    ["K:2", "K:3", "K:4", "K:5", "K:6", "C5", "C7", "petersen"]
        .into_iter()
        .map(|s| (s, named(s)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn b_decision_matches_lovasz_and_gram(g in graph(1, 6), h in graph(1, 6)) {
        let d = decide(&g, &h, HomVariant::B, DECISION_TOL, &ThetaOptions::default()).unwrap();
        let (a, b) = (lovasz_bar(&g), lovasz_bar(&h));
        let expected = if a <= b + DECISION_TOL { Answer::Yes } else { Answer::No };
        prop_assert_eq!(d.answer, expected, "{} vs {}", a, b);
        // Near ties the two tolerances need not agree.
        if (a - b).abs() > 1e-4 {
            prop_assert_eq!(gram(&g, &h, HomVariant::B), expected);
        }
    }

    #[test]
    fn gram_v_implies_plus_and_b(g in graph(1, 5), h in graph(1, 5)) {
        if gram(&g, &h, HomVariant::V) == Answer::Yes {
            prop_assert_eq!(gram(&g, &h, HomVariant::Plus), Answer::Yes);
            prop_assert_eq!(gram(&g, &h, HomVariant::B), Answer::Yes);
        }
    }

    #[test]
    fn homomorphisms_are_never_refuted(g in graph(1, 8), h in graph(1, 8)) {
        if let Some(f) = find_homomorphism(&g, &h).unwrap() {
            for variant in VARIANTS {
                let d = decide(&g, &h, variant, DECISION_TOL, &ThetaOptions::default()).unwrap();
                prop_assert_ne!(d.answer, Answer::No, "{}: {:?}", variant, d.reason);
                let cert = from_homomorphism(&g, &h, &f, variant).unwrap();
                let r = verify_certificate(&cert, &g, &h, VERIFY_TOL).unwrap(); prop_assert!(r.passed, "{} {:?}\n{}", variant, f, r);
            }
        }
    }

    #[test]
    fn plus_and_v_decisions_are_consistent(g in graph(1, 8), h in graph(1, 8)) {
        let o = ThetaOptions::default();
        let plus = decide(&g, &h, HomVariant::Plus, DECISION_TOL, &o).unwrap();
        let v = decide(&g, &h, HomVariant::V, DECISION_TOL, &o).unwrap();
        let b = decide(&g, &h, HomVariant::B, DECISION_TOL, &o).unwrap();
        if v.answer == Answer::Yes {
            prop_assert_eq!(plus.answer, Answer::Yes);
            prop_assert_eq!(b.answer, Answer::Yes);
        }
        if b.answer == Answer::No {
            prop_assert_ne!(plus.answer, Answer::Yes);
        }
    }
}

#[test]
fn b_decisions_on_named_graphs() {
    let o = ThetaOptions::default();
    for (a, g) in zoo() {
        for (b, h) in zoo() {
            let d = decide(&g, &h, HomVariant::B, DECISION_TOL, &o).unwrap();
            let expected = if lovasz_bar(&g) <= lovasz_bar(&h) + DECISION_TOL { Answer::Yes } else { Answer::No };
            assert_eq!(d.answer, expected, "{a} → {b}");
            if g.vertex_count() * h.vertex_count() <= 100 && (lovasz_bar(&g) - lovasz_bar(&h)).abs() > 1e-4 {
                assert_eq!(gram(&g, &h, HomVariant::B), expected, "gram {a} → {b}");
            }
        }
    }
}

#[test]
fn constructed_certificates_verify_and_factor() {
    let o = ThetaOptions::default();
    for (a, g) in zoo() {
        for (b, h) in zoo() {
            if a == b || g.vertex_count() * h.vertex_count() > 60 {
                continue;
            }
            for variant in [HomVariant::B, HomVariant::V] {
                let d = decide(&g, &h, variant, DECISION_TOL, &o).unwrap();
                let expected_reason = match variant {
                    HomVariant::B => Reason::LovaszComparison,
                    _ => Reason::SzegedyBelowSchrijver,
                };
                if d.answer != Answer::Yes || d.reason != expected_reason {
                    continue;
                }
                let cert = match variant {
                    HomVariant::B => construct_certificate_b(&g, &h, &o),
                    _ => construct_certificate_v(&g, &h, &o),
                }
                .unwrap();
                let report = verify_certificate(&cert, &g, &h, VERIFY_TOL).unwrap();
                assert!(report.passed, "{variant} {a} → {b}\n{report}");
                let vecs = extract_vectors(&cert, &g, &h, VERIFY_TOL).unwrap();
                let diff = vecs.gram().sub(&cert.c).unwrap();
                let worst = (0..diff.dim())
                    .flat_map(|i| (0..diff.dim()).map(move |j| (i, j)))
                    .map(|(i, j)| diff.get(i, j).abs())
                    .fold(0.0, f64::max);
                assert!(worst <= 1e-6, "{variant} {a} → {b}: {worst:e}");
                assert!(vecs.violation(&g, &h, variant) <= 1e-6, "{variant} {a} → {b}");
            }
        }
    }
}

#[test]
fn schrijver_certificates_round_trip() {
    let o = ThetaOptions::default();
    for (a, g) in zoo() {
        for (b, h) in zoo() {
            if g.vertex_count() * h.vertex_count() > 60 {
                continue;
            }
            let out = schrijver_iff(&g, &h, &o).unwrap();
            assert_eq!(out.holds, out.g_value <= out.h_value + DECISION_TOL, "{a} → {b}");
            if let Some(cert) = &out.certificate {
                let report = verify_schrijver_certificate(cert, &g, &h, VERIFY_TOL).unwrap();
                assert!(report.passed, "{a} → {b}\n{report}");
            }
        }
    }
}

#[test]
fn schrijver_comparison_examples() {
    let o = ThetaOptions::default();
    let target = named("hamming:6:1,2,3").complement();
    assert!(schrijver_iff(&named("K:4"), &target, &o).unwrap().holds);
    assert!(!schrijver_iff(&named("K:5"), &target, &o).unwrap().holds);
    let c5 = named("C5");
    let out = schrijver_iff(&c5, &c5, &o).unwrap();
    assert!(out.holds);
    assert!(verify_schrijver_certificate(out.certificate.as_ref().unwrap(), &c5, &c5, VERIFY_TOL).unwrap().passed);
}
