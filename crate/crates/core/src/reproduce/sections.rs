use std::error::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Check, Section};
use crate::graph::{self, make_named, product, Graph, NamedFamily, ProductKind};
use crate::hom::{self, Answer, HomVariant, VERIFY_TOL};
use crate::projrank;
use crate::sdp;
use crate::theta::{self, Form, ThetaKind, ThetaOptions};

type Outcome = Result<(), Box<dyn Error>>;

pub static SECTIONS: &[Section] = &[
    Section {
        tag: "pentagon",
        title: "pentagon values in both forms",
        run: pentagon,
        time_limit: Some(1.0),
    },
    Section {
        tag: "complete",
        title: "complete graphs",
        run: complete,
        time_limit: None,
    },
    Section {
        tag: "separation-values",
        title: "Schrijver separation on the Hamming complement",
        run: separation_values,
        time_limit: Some(300.0),
    },
    Section {
        tag: "separation-certificate",
        title: "K5 into the Hamming complement: B yes with certificate, Plus no",
        run: separation_certificate,
        time_limit: Some(30.0),
    },
    Section {
        tag: "round-trip",
        title: "B certificates and pulled-back min-form matrices on random pairs",
        run: round_trip,
        time_limit: None,
    },
    Section {
        tag: "reciprocity",
        title: "products with the complement",
        run: reciprocity,
        time_limit: None,
    },
    Section {
        tag: "multiplicativity",
        title: "multiplicativity under graph products",
        run: multiplicativity,
        time_limit: None,
    },
    Section {
        tag: "strong-product-gap",
        title: "Schrijver theta is not multiplicative under the strong product",
        run: strong_product_gap,
        time_limit: None,
    },
    Section {
        tag: "projective-gap",
        title: "vector chromatic number against projective rank on C5 * K3",
        run: projective_gap,
        time_limit: None,
    },
    Section {
        tag: "form-conversion",
        title: "B/T conversions and Schrijver certificates",
        run: form_conversion,
        time_limit: None,
    },
    Section {
        tag: "hom-product",
        title: "hom-product characterisation",
        run: hom_product,
        time_limit: None,
    },
    Section {
        tag: "properties",
        title: "sandwich chain and classical homomorphisms on random graphs",
        run: properties,
        time_limit: None,
    },
];

fn guarded(f: impl FnOnce(&mut Vec<Check>) -> Outcome) -> Vec<Check> {
    let mut checks = Vec::new();
    if let Err(e) = f(&mut checks) {
        checks.push(Check::error("section completed", e));
    }
    checks
}

fn named(s: &str) -> Graph {
    make_named(&s.parse::<NamedFamily>().expect("built-in family")).expect("built-in family")
}

fn hamming() -> Graph {
    make_named(&NamedFamily::schrijver_graph()).expect("built-in family")
}

fn bar(g: &Graph, kind: ThetaKind, o: &ThetaOptions) -> Result<f64, Box<dyn Error>> {
    Ok(theta::theta_bar(g, kind, Form::Min, o)?.value)
}

fn plain(g: &Graph, kind: ThetaKind, o: &ThetaOptions) -> Result<f64, Box<dyn Error>> {
    Ok(theta::theta(g, kind, Form::Min, o)?.value)
}

fn random_graph(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> Graph {
    let n = rng.gen_range(min_n..=max_n);
    let p = rng.gen_range(0.15..0.85);
    Graph::random(n, p, rng).expect("small random graph")
}

fn pentagon(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let c5 = named("C5");
        let s5 = 5f64.sqrt();
        for (kind, form, label) in [
            (ThetaKind::Lovasz, Form::Max, "ϑ̄(C5), max form"),
            (ThetaKind::Lovasz, Form::Min, "ϑ̄(C5), min form"),
            (ThetaKind::Schrijver, Form::Min, "ϑ⁻̄(C5)"),
            (ThetaKind::Szegedy, Form::Min, "ϑ⁺̄(C5)"),
        ] {
            let v = theta::theta_bar(&c5, kind, form, o)?.value;
            c.push(Check::approx(label, v, s5, 1e-5));
        }
        Ok(())
    })
}

fn complete(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        for (kind, label) in [
            (ThetaKind::Lovasz, "max_n |ϑ̄(K_n) − n|, n = 1..8"),
            (ThetaKind::Schrijver, "max_n |ϑ⁻̄(K_n) − n|, n = 1..8"),
            (ThetaKind::Szegedy, "max_n |ϑ⁺̄(K_n) − n|, n = 1..8"),
        ] {
            let mut worst: f64 = 0.0;
            for n in 1..=8 {
                let v = bar(&named(&format!("K:{n}")), kind, o)?;
                worst = worst.max((v - n as f64).abs());
            }
            c.push(Check::at_most(label, worst, 0.0, 1e-6));
        }
        Ok(())
    })
}

fn separation_values(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let h = hamming().complement();
        let d = hom::derived_quantities(&h, o)?;
        c.push(Check::approx("ϑ⁻̄(H), H = complement of Hamming(6,{1,2,3})", d.values.schrijver, 4.0, 1e-3));
        c.push(Check::approx("ϑ̄(H)", d.values.lovasz, 16.0 / 3.0, 1e-3));
        c.push(Check::exact("β = ⌊ϑ̄(H)⌋", d.beta, 5));
        c.push(Check::exact("ω_vect = ⌊ϑ⁻̄(H)⌋", d.omega_vect, 4));
        Ok(())
    })
}

fn separation_certificate(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let (k5, h) = (named("K:5"), hamming().complement());
        let d = hom::decide(&k5, &h, HomVariant::B, hom::DECISION_TOL, o)?;
        c.push(Check::holds("decide(K5, H, B) = Yes", d.answer == Answer::Yes, format!("{:?}", d.reason)));
        let cert = hom::construct_certificate_b(&k5, &h, o)?;
        c.push(Check::exact("certificate dimension", cert.c.dim(), 320));
        let rep = hom::verify_certificate(&cert, &k5, &h, VERIFY_TOL)?;
        let worst = rep.conditions.iter().map(|x| x.worst).fold(0.0, f64::max);
        c.push(Check::holds("certificate verifies", rep.passed, format!("worst violation {worst:.2e}, tol {VERIFY_TOL:e}")));
        let d = hom::decide(&k5, &h, HomVariant::Plus, hom::DECISION_TOL, o)?;
        c.push(Check::holds("decide(K5, H, Plus) = No", d.answer == Answer::No, format!("{:?}", d.reason)));
        Ok(())
    })
}

fn round_trip(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
        let pairs = 20;
        let (mut cert_ok, mut y_ok) = (0, 0);
        let (mut worst_cert, mut worst_y): (f64, f64) = (0.0, 0.0);
        for _ in 0..pairs {
            let (mut g, mut h) = (random_graph(&mut rng, 1, 8), random_graph(&mut rng, 1, 8));
            let (mut rg, mut rh) = (
                theta::theta_bar(&g, ThetaKind::Lovasz, Form::Min, o)?,
                theta::theta_bar(&h, ThetaKind::Lovasz, Form::Min, o)?,
            );
            if rg.value > rh.value {
                std::mem::swap(&mut g, &mut h);
                std::mem::swap(&mut rg, &mut rh);
            }
            let cert = hom::construct_certificate_b(&g, &h, o)?;
            let rep = hom::verify_certificate(&cert, &g, &h, VERIFY_TOL)?;
            worst_cert = worst_cert.max(rep.conditions.iter().map(|x| x.worst).fold(0.0, f64::max));
            cert_ok += rep.passed as usize;

            let y = hom::construct_y(&cert.c, g.vertex_count(), &rh.z)?;
            let feas = sdp::check_feasible(&theta::min_form_problem(&g, ThetaKind::Lovasz), &y, 1e-6)?;
            let value_gap = (y.get(0, 0) + 1.0 - rh.z_value).abs();
            worst_y = worst_y.max(feas.worst_residual()).max(value_gap).max(-feas.psd_margin);
            y_ok += (feas.passed && value_gap <= 1e-6) as usize;
        }
        c.push(
            Check::exact("B certificates verifying", cert_ok, pairs)
                .with_detail(format!("worst violation {worst_cert:.2e}, tol {VERIFY_TOL:e}")),
        );
        c.push(
            Check::exact("pulled-back Y feasible at ϑ̄(h)", y_ok, pairs)
                .with_detail(format!("worst residual {worst_y:.2e}, tol 1e-6")),
        );
        Ok(())
    })
}

fn reciprocity(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        for s in ["C5", "C7", "petersen"] {
            let g = named(s);
            let r = theta::reciprocity_check(&g, o)?;
            let n = g.vertex_count() as f64;
            c.push(Check::approx(format!("ϑ(G)ϑ(Ḡ), G = {s}"), r.lovasz_product, n, 1e-4));
            c.push(Check::approx(format!("ϑ⁻(G)ϑ⁺(Ḡ), G = {s}"), r.schrijver_szegedy_product, n, 1e-4));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
        let (mut worst_l, mut worst_s) = (f64::INFINITY, f64::INFINITY);
        for _ in 0..20 {
            let g = random_graph(&mut rng, 1, 10);
            let r = theta::reciprocity_check(&g, o)?;
            let n = g.vertex_count() as f64;
            worst_l = worst_l.min(r.lovasz_product - n);
            worst_s = worst_s.min(r.schrijver_szegedy_product - n);
        }
        c.push(Check::at_least("min (ϑ(G)ϑ(Ḡ) − |V|), 20 random graphs", worst_l, 0.0, 1e-6));
        c.push(Check::at_least("min (ϑ⁻(G)ϑ⁺(Ḡ) − |V|), 20 random graphs", worst_s, 0.0, 1e-6));
        Ok(())
    })
}

fn multiplicativity(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let c5 = named("C5");
        let disj = product(&c5, &c5, ProductKind::Disjunctive)?;
        let lex = product(&c5, &c5, ProductKind::Lexicographic)?;
        let strong = product(&c5, &c5, ProductKind::Strong)?;
        c.push(Check::approx("ϑ⁻(C5 * C5)", plain(&disj, ThetaKind::Schrijver, o)?, 5.0, 1e-4));
        c.push(Check::approx("ϑ⁻(C5[C5])", plain(&lex, ThetaKind::Schrijver, o)?, 5.0, 1e-4));
        c.push(Check::approx("ϑ̄(C5 ⊠ C5)", bar(&strong, ThetaKind::Lovasz, o)?, 5.0, 1e-4));
        c.push(Check::approx("ϑ⁺(C5 ⊠ C5)", plain(&strong, ThetaKind::Szegedy, o)?, 5.0, 1e-4));
        Ok(())
    })
}

fn strong_product_gap(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let g = hamming();
        let gc = g.complement();
        let a = plain(&g, ThetaKind::Schrijver, o)?;
        let b = plain(&gc, ThetaKind::Schrijver, o)?;
        c.push(Check::approx("ϑ⁻(G_S)", a, 4.0, 1e-3));
        c.push(Check::below("ϑ⁻(G_S)·ϑ⁻(Ḡ_S)", a * b, 64.0, 1e-3).with_detail(format!("ϑ⁻(Ḡ_S) = {b}")));
        let p = product(&g, &gc, ProductKind::Strong)?;
        let n = g.vertex_count();
        let diag: Vec<usize> = (0..n).map(|x| x * n + x).collect();
        let independent = graph::is_independent_set(&p, &diag)?;
        c.push(Check::holds(
            "diagonal of G_S ⊠ Ḡ_S is independent of size 64",
            independent && diag.len() == 64,
            format!("{} vertices, {} edges in the product", p.vertex_count(), p.edge_count()),
        ));
        Ok(())
    })
}

fn projective_gap(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let (c5, k3) = (named("C5"), named("K:3"));
        let g = product(&c5, &k3, ProductKind::Disjunctive)?;
        let v = bar(&g, ThetaKind::Szegedy, o)?;
        c.push(Check::at_most("ϑ⁺̄(C5 * K3)", v, 3.0 * 5f64.sqrt(), 1e-6));
        let chi_vect = hom::ceil_snapped(v);
        c.push(Check::exact("χ_vect(C5 * K3) = ⌈ϑ⁺̄⌉", chi_vect, 7));
        let rep = projrank::tensor_representation(&projrank::c5_representation(), &projrank::basis_representation(3))?;
        let report = projrank::verify_representation(&g, &rep, projrank::REP_TOL)?;
        c.push(Check::holds("C5 ⊗ K3 projectors represent C5 * K3", report.passed, format!("d/r = {}", report.ratio)));
        c.push(Check::approx("witnessed d/r", report.ratio, 7.5, 0.0));
        c.push(Check::holds(
            "χ_vect < d/r",
            (chi_vect as f64) < report.ratio,
            format!("{chi_vect} < {}", report.ratio),
        ));
        Ok(())
    })
}

fn form_conversion(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        for (label, g) in [("C5", named("C5")), ("C7", named("C7")), ("Petersen", named("petersen")), ("G_S", hamming())] {
            let mut worst: f64 = 0.0;
            for kind in [ThetaKind::Lovasz, ThetaKind::Schrijver] {
                let r = theta::theta_bar(&g, kind, Form::Min, o)?;
                let b = r.b.as_ref().ok_or("missing B witness")?;
                let t = theta::convert_b_to_t(b, &g, kind)?;
                let t_obj = theta::t_objective(&t)?;
                let b2 = theta::convert_t_to_b(&t, &g, kind)?;
                worst = worst.max((t_obj - b.sum()).abs()).max((b2.sum() - t_obj).abs()).max((t_obj - r.value).abs());
            }
            c.push(Check::at_most(format!("B→T→B objective drift, {label}"), worst, 0.0, 1e-5));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
        let pairs = 10;
        let (mut cert_ok, mut y_ok, mut worst) = (0, 0, 0.0f64);
        for _ in 0..pairs {
            let (mut g, mut h) = (random_graph(&mut rng, 2, 7), random_graph(&mut rng, 2, 7));
            if bar(&g, ThetaKind::Schrijver, o)? > bar(&h, ThetaKind::Schrijver, o)? {
                std::mem::swap(&mut g, &mut h);
            }
            let out = hom::schrijver_iff(&g, &h, o)?;
            let Some(cert) = out.certificate.filter(|_| out.holds) else {
                continue;
            };
            let rep = hom::verify_schrijver_certificate(&cert, &g, &h, VERIFY_TOL)?;
            worst = worst.max(rep.conditions.iter().map(|x| x.worst).fold(0.0, f64::max));
            cert_ok += rep.passed as usize;
            let rh = theta::theta_bar(&h, ThetaKind::Schrijver, Form::Min, o)?;
            let y = hom::construct_y(&cert.c, g.vertex_count(), &rh.z)?;
            let feas = sdp::check_feasible(&theta::min_form_problem(&g, ThetaKind::Schrijver), &y, 1e-6)?;
            y_ok += (feas.passed && (y.get(0, 0) + 1.0 - rh.z_value).abs() <= 1e-6) as usize;
        }
        c.push(
            Check::exact("Schrijver certificates verifying (five conditions)", cert_ok, pairs)
                .with_detail(format!("worst violation {worst:.2e}, tol {VERIFY_TOL:e}")),
        );
        c.push(Check::exact("pulled-back Y feasible for ϑ⁻̄(g) at ϑ⁻̄(h)", y_ok, pairs));

        let v = bar(&hamming().complement(), ThetaKind::Schrijver, o)?;
        c.push(Check::exact("β⁻ = ⌊ϑ⁻̄(H)⌋ for the Hamming complement", hom::floor_snapped(v), 4));
        Ok(())
    })
}

fn hom_product(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let (k2, k3, c5) = (named("K:2"), named("K:3"), named("C5"));
        let a = hom::hom_product_check(&k2, &k3, 1e-4, o)?;
        c.push(Check::approx("ϑ̄(K2 ∘ K3)", a.theta_of_homprod, 2.0, 1e-4));
        c.push(Check::holds("K2 ∘ K3 agrees with decide(K2, K3, B)", a.consistent, format!("decide: {}", a.decide_b)));
        let b = hom::hom_product_check(&k3, &k2, 1e-4, o)?;
        c.push(Check::below("ϑ̄(K3 ∘ K2)", b.theta_of_homprod, 3.0, 1e-3));
        c.push(Check::holds("K3 ∘ K2 agrees with decide(K3, K2, B)", b.consistent, format!("decide: {}", b.decide_b)));

        let hp = bar(&product(&c5, &k3, ProductKind::Hom)?, ThetaKind::Lovasz, o)?;
        let cart = plain(&product(&c5, &k3, ProductKind::Cartesian)?, ThetaKind::Lovasz, o)?;
        c.push(Check::approx("ϑ̄(C5 ∘ K3) = ϑ(C5 □ K3)", hp, cart, 1e-6));
        c.push(Check::approx("ϑ̄(C5 ∘ K3)", hp, 5.0, 1e-4));
        let small = bar(&c5, ThetaKind::Lovasz, o)? <= 3.0 + hom::DECISION_TOL;
        let full = (hp - 5.0).abs() <= 1e-4;
        c.push(Check::holds(
            "ϑ̄(C5 ∘ K3) = 5 exactly when ϑ̄(C5) ≤ 3",
            small == full,
            format!("ϑ̄(C5) ≤ 3: {small}"),
        ));
        Ok(())
    })
}

fn properties(o: &ThetaOptions) -> Vec<Check> {
    guarded(|c| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0012);
        let graphs = 50;
        let mut ok = 0;
        for _ in 0..graphs {
            let g = random_graph(&mut rng, 1, 10);
            ok += theta::sandwich_report(&g, o, 1e-6)?.holds as usize;
        }
        c.push(Check::exact("α ≤ ϑ⁻ ≤ ϑ ≤ ϑ⁺ ≤ χ(Ḡ) on random graphs", ok, graphs));

        let (mut found, mut passed, mut tried) = (0, 0, 0);
        while found < 20 && tried < 500 {
            tried += 1;
            let g = random_graph(&mut rng, 1, 6);
            let n = rng.gen_range(1..=6);
            let h = Graph::random(n, rng.gen_range(0.4..1.0), &mut rng)?;
            let Some(f) = graph::find_homomorphism(&g, &h)? else {
                continue;
            };
            found += 1;
            let mut all = true;
            for variant in [HomVariant::B, HomVariant::Plus, HomVariant::V] {
                let cert = hom::from_homomorphism(&g, &h, &f, variant)?;
                all &= hom::verify_certificate(&cert, &g, &h, VERIFY_TOL)?.passed;
            }
            passed += all as usize;
        }
        c.push(
            Check::exact("homomorphism certificates passing B, Plus and V", passed, found)
                .with_detail(format!("{found} homomorphisms in {tried} random pairs")),
        );
        c.push(Check::at_least("homomorphisms found", found as f64, 20.0, 0.0));
        Ok(())
    })
}
