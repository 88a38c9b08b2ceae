use std::path::PathBuf;

use serde_json::Value;
use serreloc::cli::{run, EXIT_OK, EXIT_PARSE, EXIT_REQUIREMENT, EXIT_USAGE};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn serreloc(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("serreloc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let r = serreloc(&full);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    serde_json::from_str(&r.out).unwrap()
}

fn spec_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("serreloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn error_tag(r: &Run) -> &str {
    let line = r.err.trim();
    assert_eq!(line.lines().count(), 1, "expected one error line, got {line:?}");
    let rest = line.strip_prefix("error[").unwrap_or_else(|| panic!("bad error line {line:?}"));
    &rest[..rest.find(']').unwrap()]
}

#[test]
fn qhom_and_length_on_path_a2() {
    let v = json(&["qhom", "pathA2", "M12", "M12", "--serre", "S2"]);
    assert_eq!(v["dim"], 1);
    let v = json(&["length", "pathA2", "M12", "--serre", "S2"]);
    assert_eq!((v["length"].as_u64(), v["q_length"].as_u64()), (Some(2), Some(1)));
    let r = serreloc(&["length", "pathA2", "M12", "--serre", "S2"]);
    assert!(r.out.contains("length_A/C(M12) = 1"), "{}", r.out);
}

#[test]
fn qhom_with_zero_serre_is_plain_hom() {
    for (m, n) in [("M12", "M12"), ("M12", "S1"), ("S2", "M12"), ("M12", "S2")] {
        let v = json(&["qhom", "pathA2", m, n, "--serre", ""]);
        assert_eq!(v["dim"], v["hom_dim"], "{m} -> {n}");
    }
}

#[test]
fn closure_obstruction_and_ideals() {
    let v = json(&["closure", "repz2", "--simples", "W1"]);
    assert_eq!(v["closure"], serde_json::json!(["W1", "W2"]));
    let v = json(&["obstruction", "repz2", "--serre", "W1"]);
    assert_eq!(v["witness"], "W1");
    let v = json(&["obstruction", "repz2", "--serre", "W1,W2"]);
    assert!(v["witness"].is_null());
    let v = json(&["classify-ideals", "matvec:2,1"]);
    assert_eq!(v["ideals"].as_array().unwrap().len(), 4);
    let r = serreloc(&["analyze", "matvec:2,1"]);
    assert_eq!(r.code, EXIT_OK);
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["--format", "json", "verify", "matvec:2,1", "--suite", "all", "--trials", "5", "--seed", "11"];
    let a = serreloc(&args);
    let b = serreloc(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.err);
    assert_eq!(a.out, b.out);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(serreloc(&seq).out, a.out);
    let v: Value = serde_json::from_str(&a.out).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 13);
}

#[test]
fn zero_trials_pass_vacuously() {
    let v = json(&["verify", "pathA2", "--suite", "lemma_2_4", "--trials", "0"]);
    assert_eq!(v["reports"][0]["vacuous"], true);
    assert_eq!(v["pass"], true);
}

#[test]
fn usage_errors_exit_2() {
    let r = serreloc(&["verify", "pathA2", "--suite", "lemma_9_9"]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_USAGE, "unknown_suite"));
    let r = serreloc(&["qhom", "pathA2", "M12", "NOPE"]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_USAGE, "unknown_object"));
    let r = serreloc(&["frobnicate"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn parse_errors_exit_3() {
    let p = spec_file("syntax.json", "{\n  \"backend\": {\"preset\": \"repz2\"},\n  \"serre\": [W1]\n}");
    let r = serreloc(&["analyze", p.to_str().unwrap()]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_PARSE, "parse"));
    assert!(r.err.contains("line 3, column 13"), "{}", r.err);

    let p = spec_file("label.json", r#"{"backend": {"preset": "repz2"}, "serre": ["W7"]}"#);
    let r = serreloc(&["analyze", p.to_str().unwrap()]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_PARSE, "unresolved_label"));

    let r = serreloc(&["analyze", "pathA2", "--serre", "S9"]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_PARSE, "unresolved_label"));

    let p = spec_file("empty.json", r#"{"backend": {"kind": "matvec", "field": "Q", "blocks": []}}"#);
    let r = serreloc(&["analyze", p.to_str().unwrap()]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_PARSE, "empty_backend"));
    let r = serreloc(&["analyze", "matvec:"]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_PARSE, "empty_backend"));

    let p = spec_file("float.json", r#"{"backend": {"preset": "repz2"}, "objects": {"X": {"dims": [1], "actions": [[[0.5]]]}}}"#);
    let r = serreloc(&["analyze", p.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_PARSE);

    let r = serreloc(&["analyze", "/no/such/spec.json"]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_PARSE, "io"));
}

#[test]
fn explicit_spec_file_round_trip() {
    let p = spec_file(
        "path.json",
        r#"{
            "backend": {"kind": "path", "field": "GF(3)", "vertices": 2, "arrows": [[1, 2]]},
            "serre": ["S2"],
            "objects": {
                "M": {"dims": [1, 1], "actions": [[["2"]]]},
                "D": {"sum": ["M", "S1"]}
            }
        }"#,
    );
    let path = p.to_str().unwrap();
    let v = json(&["length", path, "D"]);
    assert_eq!((v["length"].as_u64(), v["q_length"].as_u64()), (Some(3), Some(2)));
    let v = json(&["qhom", path, "M", "S1"]);
    assert_eq!(v["dim"], 1);
    // the command-line override replaces the file's C
    let v = json(&["length", path, "D", "--serre", ""]);
    assert_eq!(v["q_length"], 3);
}

#[test]
fn requirement_errors_exit_4() {
    let r = serreloc(&["verify", "pathA2", "--suite", "prop_4_10", "--trials", "1"]);
    assert_eq!((r.code, error_tag(&r)), (EXIT_REQUIREMENT, "requirement_unmet"));
    // lift-independence needs C to be a tensor-ideal
    let r = serreloc(&["verify", "matvec:2,1", "--suite", "prop_4_5", "--serre", "E1_12", "--trials", "1"]);
    assert_eq!(r.code, EXIT_REQUIREMENT, "{}", r.err);
}
