use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use theta_forge::coding::{self, Channel, DualSource};
use theta_forge::graph::{self, serialize_graph, Graph, CHROMATIC_LIMIT, CLIQUE_LIMIT, TRANSITIVITY_SEARCH_LIMIT};
use theta_forge::hom::{self, Answer, CertificateFile, HomCertificate, HomVariant, Reason};
use theta_forge::projrank::{self, ProjectiveRepresentation};
use theta_forge::reproduce;
use theta_forge::theta::{self, Form, ThetaKind, ThetaOptions};

use crate::report::{to_value, CliError, RunReport, EXIT_CERTIFICATE, EXIT_REPRODUCE};
use crate::source::{read_file, GraphArgs, GraphSpec, PairArgs};

fn summary(g: &Graph) -> serde_json::Value {
    json!({ "vertices": g.vertex_count(), "edges": g.edge_count() })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn add_solver_tols(r: &mut RunReport, opts: &ThetaOptions) {
    r.tol("solver_gap", opts.solve.gap_tol)
        .tol("solver_feasibility", opts.solve.feas_tol)
        .tol("accept_gap", opts.accept_gap);
}

#[derive(Args, Debug)]
pub struct ThetaCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// lovasz, schrijver, szegedy, or all.
    #[arg(long, default_value = "lovasz")]
    pub kind: String,
    /// min or max.
    #[arg(long, default_value = "min")]
    pub form: String,
    /// Report ϑ(G) instead of the default ϑ̄(G) = ϑ(Ḡ).
    #[arg(long)]
    pub plain: bool,
    /// Also report the integer quantities derived from the three values.
    #[arg(long)]
    pub derived: bool,
    /// Write the witness matrices as JSON.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

pub fn theta_cmd(cmd: &ThetaCmd, opts: &ThetaOptions) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("theta");
    let (g, label) = GraphSpec::from(&cmd.graph).load()?;
    let kinds: Vec<ThetaKind> = if cmd.kind.eq_ignore_ascii_case("all") {
        ThetaKind::ALL.to_vec()
    } else {
        vec![cmd.kind.parse().map_err(CliError::input)?]
    };
    let form: Form = cmd.form.parse().map_err(CliError::input)?;
    r.input("graph", &label).input("kind", &cmd.kind).input("form", form.to_string());
    r.input("quantity", if cmd.plain { "theta" } else { "theta_bar" });
    add_solver_tols(&mut r, opts);

    let mut values = Vec::new();
    let mut witnesses = Vec::new();
    for kind in kinds {
        let start = Instant::now();
        let res = if cmd.plain {
            theta::theta(&g, kind, form, opts)?
        } else {
            theta::theta_bar(&g, kind, form, opts)?
        };
        r.timing(&kind.to_string(), start.elapsed().as_secs_f64());
        let symbol = match (kind, cmd.plain) {
            (ThetaKind::Lovasz, false) => "ϑ̄",
            (ThetaKind::Lovasz, true) => "ϑ",
            (ThetaKind::Schrijver, false) => "ϑ⁻̄",
            (ThetaKind::Schrijver, true) => "ϑ⁻",
            (ThetaKind::Szegedy, false) => "ϑ⁺̄",
            (ThetaKind::Szegedy, true) => "ϑ⁺",
        };
        r.line(format!("{symbol}({label}) = {}  [{kind}, {form} form, gap {:.1e}]", res.value, res.gap));
        values.push(json!({
            "kind": kind,
            "form": form,
            "value": res.value,
            "lower": res.lower,
            "gap": res.gap,
            "iterations": res.iterations,
        }));
        witnesses.push(json!({ "kind": kind, "form": form, "value": res.value, "witness": res.witness }));
    }
    let mut results = json!({ "graph": summary(&g), "values": values });
    if cmd.derived {
        let target = if cmd.plain { g.complement() } else { g.clone() };
        let d = hom::derived_quantities(&target, opts)?;
        r.line(format!(
            "β = {}, ⌈ϑ̄⌉ = {}, χ_vect = {}, ω_vect = {}, β⁻ = {}",
            d.beta, d.beta_chi, d.chi_vect, d.omega_vect, d.beta_minus
        ));
        r.tol("snap", hom::SNAP_TOL);
        results["derived"] = to_value(&d);
    }
    if let Some(path) = &cmd.witness_out {
        write_file(path, &serde_json::to_string(&witnesses)?)?;
        r.input("witness_out", path.display().to_string());
        r.line(format!("witness written to {}", path.display()));
    }
    r.results = results;
    Ok(r)
}

#[derive(Args, Debug)]
pub struct HomCmd {
    #[command(flatten)]
    pub pair: PairArgs,
    /// B, plus or V.
    #[arg(long, default_value = "B")]
    pub variant: String,
    /// Tolerance of the theta comparisons.
    #[arg(long, default_value_t = hom::DECISION_TOL)]
    pub tol: f64,
    /// When the theta comparisons are inconclusive, search for a certificate
    /// directly (small pairs only).
    #[arg(long)]
    pub search: bool,
    /// Build, write and verify a certificate when the answer is Yes.
    #[arg(long)]
    pub certify: bool,
    /// Where --certify writes the certificate.
    #[arg(long, default_value = "certificate.json")]
    pub cert_out: PathBuf,
}

fn build_certificate(
    g: &Graph,
    h: &Graph,
    variant: HomVariant,
    reason: &Reason,
    opts: &ThetaOptions,
) -> Result<Option<HomCertificate>, CliError> {
    Ok(match reason {
        Reason::Identity => Some(hom::from_homomorphism(g, h, &(0..g.vertex_count()).collect::<Vec<_>>(), variant)?),
        Reason::LovaszComparison => Some(hom::construct_certificate_b(g, h, opts)?),
        Reason::SzegedyBelowSchrijver => Some(hom::construct_certificate_v(g, h, opts)?),
        _ => None,
    })
}

pub fn hom_cmd(cmd: &HomCmd, opts: &ThetaOptions) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("hom");
    let (gs, hs) = cmd.pair.specs();
    let (g, gl) = gs.load()?;
    let (h, hl) = hs.load()?;
    let variant: HomVariant = cmd.variant.parse().map_err(CliError::input)?;
    r.input("g", &gl).input("h", &hl).input("variant", variant.to_string());
    r.tol("decision", cmd.tol);
    add_solver_tols(&mut r, opts);

    let start = Instant::now();
    let mut d = hom::decide(&g, &h, variant, cmd.tol, opts)?;
    if cmd.search && d.answer == Answer::Unknown {
        let found = hom::gram_feasibility(&g, &h, variant, &opts.solve)?;
        r.tol("gram_tau", hom::GRAM_TAU_TOL);
        d.answer = found.answer;
        d.reason = found.reason;
    }
    r.timing("decide", start.elapsed().as_secs_f64());
    r.line(format!("{gl} →_{variant} {hl}: {}", d.answer));
    r.line(format!("reason: {:?}", d.reason));
    for (side, t) in [("g", &d.g_values), ("h", &d.h_values)] {
        let show = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
        r.line(format!(
            "{side}: ϑ̄ = {}, ϑ⁻̄ = {}, ϑ⁺̄ = {}",
            show(t.lovasz),
            show(t.schrijver),
            show(t.szegedy)
        ));
    }
    let mut results = json!({ "g": summary(&g), "h": summary(&h), "decision": to_value(&d) });

    if cmd.certify {
        if d.answer != Answer::Yes {
            r.line(format!("no certificate: the answer is {}", d.answer));
        } else if let Some(cert) = build_certificate(&g, &h, variant, &d.reason, opts)? {
            let start = Instant::now();
            let text = cert.to_json();
            write_file(&cmd.cert_out, &text)?;
            let report = hom::verify_certificate(&cert, &g, &h, hom::VERIFY_TOL)?;
            r.timing("certificate", start.elapsed().as_secs_f64());
            r.tol("verify", hom::VERIFY_TOL);
            r.input("cert_out", cmd.cert_out.display().to_string());
            r.line(format!(
                "certificate ({} variant, dimension {}) written to {}",
                cert.variant,
                cert.c.dim(),
                cmd.cert_out.display()
            ));
            r.line(report.to_string().trim_end());
            results["certificate"] = json!({ "variant": cert.variant, "dim": cert.c.dim(), "verification": to_value(&report) });
            if !report.passed {
                r.exit_code = EXIT_CERTIFICATE;
            }
        } else {
            r.line("no constructive certificate for this rule");
        }
    }
    r.results = results;
    Ok(r)
}

#[derive(Args, Debug)]
pub struct BoundsCmd {
    /// Source JSON: {x_size, u_size, entries: [[x,u,p],...]}.
    #[arg(long)]
    pub source: PathBuf,
    /// Channel JSON: {s_size, v_size, entries: [[s,v,p],...]}.
    #[arg(long)]
    pub channel: PathBuf,
    /// Logarithm base of the reported rates (2 gives bits).
    #[arg(long, default_value_t = 2.0)]
    pub log_base: f64,
}

pub fn bounds_cmd(cmd: &BoundsCmd, opts: &ThetaOptions) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("bounds");
    let src = DualSource::from_json(&read_file(&cmd.source)?)?;
    let ch = Channel::from_json(&read_file(&cmd.channel)?)?;
    r.input("source", cmd.source.display().to_string())
        .input("channel", cmd.channel.display().to_string())
        .input("log_base", cmd.log_base.to_string());
    r.tol("normalization", coding::NORMALIZATION_TOL);
    add_solver_tols(&mut r, opts);
    let g = coding::characteristic_graph(&src);
    let h = coding::distinguishability_graph(&ch);
    let start = Instant::now();
    let b = coding::cost_rate_bounds(&g, &h, cmd.log_base, opts)?;
    r.timing("bounds", start.elapsed().as_secs_f64());
    r.line(format!("characteristic graph G: {} vertices, {} edges", g.vertex_count(), g.edge_count()));
    r.line(format!("distinguishability graph H: {} vertices, {} edges", h.vertex_count(), h.edge_count()));
    r.line(format!("ϑ̄(G) = {}, ϑ̄(H) = {}", b.theta_g, b.theta_h));
    r.line(format!("classical cost rate ≥ {}", b.classical_bound));
    r.line(format!("entanglement-assisted cost rate ≥ {}", b.entangled_bound));
    r.results = json!({ "g": summary(&g), "h": summary(&h), "bounds": to_value(&b) });
    Ok(r)
}

#[derive(Args, Debug)]
pub struct ReproduceCmd {
    /// Section tag, or `all`.
    #[arg(default_value = "all")]
    pub section: String,
    /// List the section tags and exit.
    #[arg(long)]
    pub list: bool,
}

/// Worker count from `THETA_FORGE_THREADS`, default 1.
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var("THETA_FORGE_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::input(format!("THETA_FORGE_THREADS must be a positive integer, got '{v}'"))),
        },
    }
}

pub fn reproduce_cmd(cmd: &ReproduceCmd, opts: &ThetaOptions) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("reproduce");
    if cmd.list {
        for s in reproduce::SECTIONS {
            r.line(format!("{:<24} {}", s.tag, s.title));
        }
        r.results = json!(reproduce::section_tags());
        return Ok(r);
    }
    let sections = reproduce::resolve(&cmd.section).map_err(|e| CliError::input(e.to_string()))?;
    let threads = thread_count()?;
    r.input("section", &cmd.section).input("threads", threads.to_string());
    add_solver_tols(&mut r, opts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::input(format!("cannot start {threads} worker threads: {e}")))?;
    let reports: Vec<_> = pool.install(|| sections.par_iter().map(|s| reproduce::run_section(s, opts)).collect());

    let mut failed = Vec::new();
    let mut results = Vec::new();
    for rep in &reports {
        r.line(format!(
            "== {} [{}] {} ({:.2} s)",
            rep.tag,
            if rep.passed() { "PASS" } else { "FAIL" },
            rep.title,
            rep.seconds
        ));
        for c in &rep.checks {
            r.line(format!("  {c}"));
            if let Some(t) = c.tol {
                r.tol(&format!("{}: {}", rep.tag, c.name), t);
            }
            if !c.passed {
                failed.push(format!("{}: {}", rep.tag, c.name));
            }
        }
        r.timing(&rep.tag, rep.seconds);
        results.push(json!({ "tag": rep.tag, "title": rep.title, "passed": rep.passed(), "checks": rep.checks }));
    }
    if failed.is_empty() {
        r.line(format!("all {} sections passed", reports.len()));
    } else {
        r.line(format!("{} failed checks:", failed.len()));
        for f in &failed {
            r.line(format!("  {f}"));
        }
        r.exit_code = EXIT_REPRODUCE;
    }
    r.results = json!({ "sections": results, "failed": failed });
    Ok(r)
}

#[derive(Args, Debug)]
pub struct GraphCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Write the graph as an edge list.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the edge list.
    #[arg(long)]
    pub edges: bool,
}

pub fn graph_cmd(cmd: &GraphCmd) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("graph");
    let (g, label) = GraphSpec::from(&cmd.graph).load()?;
    r.input("graph", &label);
    let n = g.vertex_count();
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let (min_deg, max_deg) = (degrees.iter().min().copied().unwrap_or(0), degrees.iter().max().copied().unwrap_or(0));
    r.line(format!("{label}: {n} vertices, {} edges, degrees {min_deg}..{max_deg}", g.edge_count()));
    let mut results = json!({
        "vertices": n,
        "edges": g.edge_count(),
        "min_degree": min_deg,
        "max_degree": max_deg,
    });
    if n <= CLIQUE_LIMIT {
        let b = graph::brute_invariants(&g)?;
        let chi = b.chi.map_or(format!("not computed above {CHROMATIC_LIMIT} vertices"), |c| c.to_string());
        r.line(format!("α = {}, ω = {}, χ = {chi}", b.alpha, b.omega));
        results["invariants"] = to_value(&b);
    }
    if n <= TRANSITIVITY_SEARCH_LIMIT || g.declared_vertex_transitive().is_some() {
        let vt = graph::is_vertex_transitive(&g)?;
        r.line(format!("vertex transitive: {vt}"));
        results["vertex_transitive"] = json!(vt);
    }
    let text = serialize_graph(&g);
    if cmd.edges {
        r.line(text.trim_end());
    }
    if let Some(path) = &cmd.out {
        write_file(path, &text)?;
        r.input("out", path.display().to_string());
    }
    r.results = results;
    Ok(r)
}

#[derive(Args, Debug)]
pub struct CertVerifyCmd {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Certificate JSON as written by `hom --certify`.
    #[arg(long)]
    pub cert: PathBuf,
    /// Tolerance of every certificate condition.
    #[arg(long, default_value_t = hom::VERIFY_TOL)]
    pub tol: f64,
}

pub fn cert_verify_cmd(cmd: &CertVerifyCmd) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("cert-verify");
    let (gs, hs) = cmd.pair.specs();
    let (g, gl) = gs.load()?;
    let (h, hl) = hs.load()?;
    r.input("g", &gl).input("h", &hl).input("cert", cmd.cert.display().to_string());
    r.tol("verify", cmd.tol);
    let file: CertificateFile = serde_json::from_str(&read_file(&cmd.cert)?)?;
    let cert = HomCertificate::from_file(&file)?;
    let start = Instant::now();
    let report = hom::verify_certificate(&cert, &g, &h, cmd.tol)?;
    r.timing("verify", start.elapsed().as_secs_f64());
    r.line(format!("{} certificate for {gl} → {hl}: {}", cert.variant, if report.passed { "verified" } else { "REJECTED" }));
    r.line(report.to_string().trim_end());
    if !report.passed {
        r.exit_code = EXIT_CERTIFICATE;
    }
    r.results = json!({ "variant": cert.variant, "dim": cert.c.dim(), "verification": to_value(&report) });
    Ok(r)
}

#[derive(Args, Debug)]
pub struct RepVerifyCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Representation JSON: {d, r, projectors: [...]}.
    #[arg(long)]
    pub rep: PathBuf,
    /// Tolerance of the projector checks.
    #[arg(long, default_value_t = projrank::REP_TOL)]
    pub tol: f64,
}

pub fn rep_verify_cmd(cmd: &RepVerifyCmd) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("rep-verify");
    let (g, label) = GraphSpec::from(&cmd.graph).load()?;
    r.input("graph", &label).input("rep", cmd.rep.display().to_string());
    r.tol("representation", cmd.tol);
    let rep: ProjectiveRepresentation = serde_json::from_str(&read_file(&cmd.rep)?)?;
    let report = projrank::verify_representation(&g, &rep, cmd.tol)?;
    r.line(format!(
        "projective representation of {label}: {} (d/r = {}/{} = {})",
        if report.passed { "verified" } else { "REJECTED" },
        rep.d,
        rep.r,
        report.ratio
    ));
    r.line(report.to_string().trim_end());
    if !report.passed {
        r.exit_code = EXIT_CERTIFICATE;
    }
    r.results = to_value(&report);
    Ok(r)
}
