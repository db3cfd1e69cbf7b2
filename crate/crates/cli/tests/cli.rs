use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use theta_forge::projrank;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_theta-forge"))
        .args(args)
        .env_remove("THETA_FORGE_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {stdout}"));
    (out.status.code().unwrap(), v)
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn write(p: &str, text: &str) {
    fs::write(Path::new(p), text).unwrap();
}

#[test]
fn theta_pentagon() {
    let (c, v) = json(&["theta", "--family", "C5", "--kind", "lovasz"]);
    assert_eq!(c, 0);
    let value = v["results"]["values"][0]["value"].as_f64().unwrap();
    assert!((value - 5f64.sqrt()).abs() < 1e-6, "{value}");
    assert_eq!(v["command"], "theta");
    assert!(v["tolerances"]["accept_gap"].is_number());
    assert!(v["version"].is_string());
}

#[test]
fn theta_hamming_complement() {
    let (c, v) = json(&["theta", "--family", "hamming:6:1,2,3", "--kind", "schrijver", "--complement"]);
    assert_eq!(c, 0);
    let value = v["results"]["values"][0]["value"].as_f64().unwrap();
    assert!((value - 4.0).abs() < 1e-3, "{value}");
}

#[test]
fn theta_plain_and_product() {
    // ϑ(C5 ⊠ C5) = 5, and ϑ(K4) = 1 for all three kinds.
    let (_, v) = json(&["theta", "--family", "C5", "--product", "strong", "C5", "--plain"]);
    let value = v["results"]["values"][0]["value"].as_f64().unwrap();
    assert!((value - 5.0).abs() < 1e-4, "{value}");
    let (_, v) = json(&["theta", "--family", "K:4", "--plain", "--kind", "all"]);
    for x in v["results"]["values"].as_array().unwrap() {
        assert!((x["value"].as_f64().unwrap() - 1.0).abs() < 1e-6, "{x}");
    }
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(code(&["theta", "--family", "X9"]), 2);
    assert_eq!(code(&["theta", "--family", "C5", "--kind", "szegedy", "--form", "max"]), 2);
    assert_eq!(code(&["theta", "--family", "C5", "--kind", "nope"]), 2);
    assert_eq!(code(&["theta", "--file", "/nonexistent/g.txt"]), 2);
    assert_eq!(code(&["theta"]), 2);
    assert_eq!(code(&["hom", "--g", "K:2", "--h", "C5", "--variant", "Q"]), 2);
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.txt");
    write(&g, "n=3\n0 1\n1 5\n");
    let out = run(&["theta", "--file", &g]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn graph_export_round_trip() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "p.txt");
    let (c, v) = json(&["graph", "--family", "petersen", "--out", &file]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["invariants"]["alpha"], 4);
    assert_eq!(v["results"]["vertex_transitive"], true);
    let (_, a) = json(&["theta", "--file", &file, "--plain"]);
    let (_, b) = json(&["theta", "--family", "petersen", "--plain"]);
    assert_eq!(a["results"], b["results"]);
    let value = a["results"]["values"][0]["value"].as_f64().unwrap();
    assert!((value - 4.0).abs() < 1e-6);
}

#[test]
fn hom_decisions() {
    let (c, v) = json(&["hom", "--g", "C:7", "--h", "C:5", "--variant", "V"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["decision"]["answer"], "Yes");
    let (_, v) = json(&["hom", "--g", "C:5", "--h", "C:7", "--variant", "plus"]);
    assert_eq!(v["results"]["decision"]["answer"], "No");
    assert_eq!(v["results"]["decision"]["reason"]["rule"], "monotonicity-fails");
    let (_, v) = json(&["hom", "--g", "K:3", "--h", "C5", "--variant", "B"]);
    assert_eq!(v["results"]["decision"]["answer"], "No");
}

#[test]
fn certify_and_verify() {
    let dir = TempDir::new().unwrap();
    let cert = path(&dir, "c.json");
    let (c, v) = json(&["hom", "--g", "C:7", "--h", "C:5", "--variant", "V", "--certify", "--cert-out", &cert]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["certificate"]["verification"]["passed"], true);
    assert_eq!(v["results"]["certificate"]["dim"], 35);

    let (c, v) = json(&["cert-verify", "--g", "C:7", "--h", "C:5", "--cert", &cert]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["verification"]["passed"], true);

    // A perturbed entry breaks the certificate; a different target size is an
    // input error.
    let mut file: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    file["entries"][1] = Value::from(0.25);
    let bad = path(&dir, "bad.json");
    write(&bad, &file.to_string());
    assert_eq!(code(&["cert-verify", "--g", "C:7", "--h", "C:5", "--cert", &bad]), 4);
    assert_eq!(code(&["cert-verify", "--g", "C:7", "--h", "K:4", "--cert", &cert]), 2);
    write(&bad, "{\"variant\": \"B\"}");
    assert_eq!(code(&["cert-verify", "--g", "C:7", "--h", "C:5", "--cert", &bad]), 2);
}

#[test]
fn certify_separation_example() {
    let dir = TempDir::new().unwrap();
    let h = path(&dir, "h.txt");
    assert_eq!(code(&["graph", "--family", "hamming:6:1,2,3", "--complement", "--out", &h]), 0);
    let cert = path(&dir, "k5.json");
    let (c, v) = json(&["hom", "--g", "K:5", "--h-file", &h, "--variant", "B", "--certify", "--cert-out", &cert]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["decision"]["answer"], "Yes");
    assert_eq!(v["results"]["certificate"]["dim"], 320);
    assert_eq!(v["results"]["certificate"]["verification"]["passed"], true);
    let (_, v) = json(&["hom", "--g", "K:5", "--h-file", &h, "--variant", "plus"]);
    assert_eq!(v["results"]["decision"]["answer"], "No");
}

#[test]
fn bounds_from_files() {
    let dir = TempDir::new().unwrap();
    let src = path(&dir, "src.json");
    write(&src, r#"{"x_size": 5, "u_size": 1, "entries": [[0,0,0.2],[1,0,0.2],[2,0,0.2],[3,0,0.2],[4,0,0.2]]}"#);
    let entries: Vec<String> = (0..5).flat_map(|s| [format!("[{s},{s},0.5]"), format!("[{s},{},0.5]", (s + 1) % 5)]).collect();
    let typewriter = path(&dir, "tw.json");
    write(&typewriter, &format!(r#"{{"s_size": 5, "v_size": 5, "entries": [{}]}}"#, entries.join(",")));
    let (c, v) = json(&["bounds", "--source", &src, "--channel", &typewriter]);
    assert_eq!(c, 0);
    // log ϑ̄(K5) / log ϑ̄(C5) = log 5 / log √5.
    let b = v["results"]["bounds"]["entangled_bound"].as_f64().unwrap();
    assert!((b - 2.0).abs() < 1e-6, "{b}");

    let constant = path(&dir, "const.json");
    write(&constant, r#"{"s_size": 3, "v_size": 2, "entries": [[0,0,1],[1,0,1],[2,0,1]]}"#);
    let (c, v) = json(&["bounds", "--source", &src, "--channel", &constant]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["bounds"]["classical_bound"], "+inf");

    let bad = path(&dir, "bad.json");
    write(&bad, r#"{"s_size": 2, "v_size": 2, "entries": [[0,0,0.7],[1,1,1]]}"#);
    let out = run(&["bounds", "--source", &src, "--channel", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sums to 0.7"));
}

#[test]
fn representation_files() {
    let dir = TempDir::new().unwrap();
    let rep = projrank::tensor_representation(&projrank::c5_representation(), &projrank::basis_representation(3)).unwrap();
    let file = path(&dir, "rep.json");
    write(&file, &rep.to_json());
    let (c, v) = json(&["rep-verify", "--family", "C5", "--product", "disj", "K:3", "--rep", &file]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["ratio"], 7.5);
    // Not a representation of the complete graph on 15 vertices.
    assert_eq!(code(&["rep-verify", "--family", "K:15", "--rep", &file]), 4);
    assert_eq!(code(&["rep-verify", "--family", "K:3", "--rep", &file]), 2);
}

#[test]
fn reproduce_sections() {
    let (c, v) = json(&["reproduce", "pentagon"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["sections"][0]["passed"], true);
    assert!(v["tolerances"]["pentagon: ϑ̄(C5), max form"].is_number());
    let (_, again) = json(&["reproduce", "pentagon"]);
    assert_eq!(v["results"], again["results"]);
    assert_eq!(code(&["reproduce", "bogus"]), 2);
    let (_, list) = json(&["reproduce", "--list"]);
    assert_eq!(list["results"].as_array().unwrap().len(), 12);
}

#[test]
fn thread_variable() {
    let bin = env!("CARGO_BIN_EXE_theta-forge");
    let with = |v: &str| {
        Command::new(bin)
            .args(["reproduce", "complete"])
            .env("THETA_FORGE_THREADS", v)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(with("2"), Some(0));
    assert_eq!(with("0"), Some(2));
    assert_eq!(with("many"), Some(2));
}

#[test]
fn text_output() {
    let out = run(&["theta", "--family", "C5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("ϑ̄(C5) = 2.23606797"), "{text}");
}
