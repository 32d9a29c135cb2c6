use serde_json::Value;
use std::process::Command;

fn data(name: &str) -> String {
    format!("{}/../../data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pointed")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn build_reports_dimension() {
    let (code, out, _) = run(&["build", "--datum", &data("taft11.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("dim = 121"), "{out}");
    let (_, out, _) = run(&["--format", "json", "build", "--datum", &data("sl2_11.json")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dim"], "1331");
}

#[test]
fn enumerate_counts() {
    let (code, out, _) = run(&["enumerate", "--group", "Z/11"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("100 data\n"), "{out}");
}

#[test]
fn iso_between_groups_of_different_order_is_empty() {
    let (code, out, _) = run(&["iso", "--src", &data("taft11.json"), "--dst", &data("taft13.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("no isomorphism"), "{out}");
}

#[test]
fn iso_self_with_check() {
    let f = data("sl2_11.json");
    let (code, out, _) = run(&["iso", "--src", &f, "--dst", &f, "--check"]);
    assert_eq!(code, 0);
    assert!(out.contains("isomorphism: "), "{out}");
    assert!(!out.contains("relations preserved: false"), "{out}");
}

#[test]
fn inadmissible_input_exits_with_2() {
    let dir = std::env::temp_dir().join(format!("pointed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"group": "Z/11", "g": [[1]], "chi": [[0]], "cartan": [[2]]}"#).unwrap();
    let (code, _, err) = run(&["validate", "--datum", bad.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "{").unwrap();
    let (code, _, _) = run(&["validate", "--datum", garbage.to_str().unwrap()]);
    assert_eq!(code, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_output_round_trips_inputs() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let t = pointed_hopf::io::load_triple(path.to_str().unwrap()).unwrap();
        let json = pointed_hopf::io::triple_to_json(&t);
        let back = pointed_hopf::io::parse_triple(&json).unwrap();
        assert_eq!(t.datum, back.datum, "{}", path.display());
        assert_eq!(t.lambda, back.lambda);
        assert_eq!(t.mu, back.mu);
    }
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let f = data("taft11.json");
    let a = run(&["--seed", "3", "--format", "json", "verify", "--datum", &f, "--samples", "30"]);
    let b = run(&["--seed", "3", "--format", "json", "verify", "--datum", &f, "--samples", "30"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn twist_to_symmetric_braiding() {
    let (code, out, _) = run(&["twist", "--datum", &data("a2_asym_11.json"), "--max-degree", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn root_vector_parameters() {
    let (code, out, _) = run(&["ualpha", "--datum", &data("rank1_121.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("mu = 5"), "{out}");
}
