use std::process::Command;

use serde_json::{json, Value};
use toric_nash_cli::{run, Outcome, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> Outcome {
    run(std::iter::once("toric-nash").chain(args.iter().copied()))
}

fn call_json(args: &[&str]) -> Value {
    let out = call(args);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn strings(items: &[&str]) -> Value {
    json!(items)
}

#[test]
fn expand_worked_example() {
    let doc = call_json(&["expand", "5/12"]);
    assert_eq!(doc["cf"], strings(&["1", "2", "4", "2"]));
    assert_eq!(
        doc["convergents"]["p"],
        strings(&["0", "1", "1", "1", "3", "5"])
    );
    assert_eq!(
        doc["convergents"]["q"],
        strings(&["0", "1", "2", "7", "12"])
    );
    assert_eq!(
        doc["convergents"]["v"],
        json!([["1", "0"], ["1", "1"], ["1", "2"], ["3", "7"], ["5", "12"]])
    );
    assert_eq!(doc["map"], json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn expand_cone_reports_its_normal_form() {
    let doc = call_json(&["expand", "--cone", "0,1;2,1"]);
    assert_eq!(
        (doc["p"].clone(), doc["q"].clone()),
        (json!("1"), json!("2"))
    );
    assert_eq!(doc["cf"], strings(&["1", "2"]));
}

#[test]
fn expand_smooth_surface() {
    let doc = call_json(&["expand", "--pq", "0/1"]);
    assert_eq!(doc["cf"], Value::Null);
    assert_eq!(doc["note"], json!("already smooth"));
}

#[test]
fn expand_keeps_large_integers_exact() {
    let terms = std::iter::once("1")
        .chain(std::iter::repeat_n("9", 30))
        .collect::<Vec<_>>()
        .join(",");
    let doc = call_json(&["expand", "--cf", &terms]);
    let q = doc["q"].as_str().unwrap();
    assert!(q.len() > 20);
    let doc2 = call_json(&[
        "expand",
        "--pq",
        &format!("{}/{q}", doc["p"].as_str().unwrap()),
    ]);
    assert_eq!(doc2["cf"], doc["cf"]);
}

#[test]
fn analyze_nash_worked_example() {
    let doc = call_json(&["analyze", "--cf", "1,2,4,2", "--mode", "nash"]);
    assert_eq!(doc["all_smooth"], json!(false));
    assert_eq!(doc["consistent"], json!(true));
    let failing = doc["failing_vertices"].as_array().unwrap();
    assert!(failing.contains(&json!(2)));
    let vertex2 = doc["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["index"] == json!(2))
        .unwrap();
    assert_eq!(vertex2["chart"]["witness"], json!(["1", "3"]));
    assert_eq!(vertex2["chart"]["witness_multiple"], json!("2"));
    assert_eq!(
        vertex2["chart"]["minimal_generators"],
        json!([["0", "-1"], ["1", "2"], ["2", "6"]])
    );
}

#[test]
fn analyze_normalized_worked_example() {
    let doc = call_json(&["analyze", "--cf", "1,2,4,2"]);
    assert_eq!(doc["all_smooth"], json!(true));
    assert_eq!(doc["failing_vertices"], json!([]));
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_is_independent_of_characteristic() {
    let base = call_json(&["analyze", "--pq", "7/30"]);
    for p in ["2", "3", "5", "7", "11"] {
        let mut other = call_json(&["analyze", "--pq", "7/30", "--char", p]);
        assert_eq!(other["char_p"], json!(p));
        other["char_p"] = base["char_p"].clone();
        assert_eq!(other, base, "characteristic {p}");
    }
}

#[test]
fn analyze_round_trips_byte_identically() {
    let inputs: Vec<Vec<&str>> = vec![
        vec!["--cf", "1,2,4,2"],
        vec!["--cf", "1,3,2,2,5"],
        vec!["--cone", "0,1;2,1"],
        vec!["--cone", "-1,2;3,4"],
        vec!["7/30"],
        vec!["--pq", "0/1"],
    ];
    for input in inputs {
        for mode in ["normalized", "nash"] {
            let mut args = vec!["analyze", "--mode", mode];
            args.extend(&input);
            let first = call(&args);
            assert_eq!(first.code, EXIT_OK, "{args:?}");
            let doc: Value = serde_json::from_str(&first.stdout).unwrap();
            let pq = format!(
                "{}/{}",
                doc["p"].as_str().unwrap(),
                doc["q"].as_str().unwrap()
            );
            let second = call(&["analyze", "--mode", mode, "--pq", &pq]);
            assert_eq!(first.stdout, second.stdout, "{args:?}");
        }
    }
}

#[test]
fn verify_small_range() {
    let doc = call_json(&[
        "verify",
        "--max-r",
        "5",
        "--max-a",
        "6",
        "--mode",
        "normalized",
        "--workers",
        "2",
    ]);
    assert_eq!(doc["mismatches"], json!([]));
    assert_eq!(doc["total_checked"], json!(781));
    assert_eq!(doc["passed"], json!(true));
    let doc = call_json(&["verify", "--max-r", "4", "--max-a", "5", "--mode", "nash"]);
    assert_eq!(doc["mismatches"], json!([]));
    assert_eq!(doc["cross_check_failures"], json!([]));
}

#[test]
fn iterate_reports_depth() {
    let doc = call_json(&["iterate", "--pq", "5/12"]);
    assert_eq!(doc["depth"], json!(1));
    assert_eq!(doc["complete"], json!(true));
    let doc = call_json(&["iterate", "--cf", "1,5"]);
    assert!(doc["depth"].as_u64().unwrap() > 1);
    let capped = call_json(&["iterate", "--cf", "1,5", "--max-steps", "1"]);
    assert_eq!(capped["complete"], json!(false));
}

#[test]
fn text_format() {
    let out = call(&[
        "analyze", "--cf", "1,2,4,2", "--mode", "nash", "--format", "text",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("missing (1,3), 2*(1,3) present"));
    let out = call(&["expand", "5/12", "--format", "text"]);
    assert!(out.stdout.contains("continued fraction [1,2,4,2]"));
}

#[test]
fn usage_errors_name_the_offending_token() {
    let cases: &[(&[&str], &str)] = &[
        (&["analyze", "--cf", "1,x,4"], "'x'"),
        (&["analyze", "--cf", "2,3"], "2,3"),
        (&["analyze", "--pq", "6/12"], "6/12"),
        (&["analyze", "--pq", "12/5"], "12/5"),
        (&["analyze", "--pq", "5"], "'5'"),
        (&["expand", "--cone", "1,2;2,4"], "1,2;2,4"),
        (&["expand", "--cone", "1,2;3"], "'3'"),
        (&["analyze", "--cf", "1,2", "--char", "4"], "'4'"),
        (&["analyze", "--cf", "1,2", "--char", "-3"], "'-3'"),
        (
            &["analyze", "--cf", "1,2", "--mode", "nash", "--char", "3"],
            "--char 3",
        ),
        (&["analyze", "--cf", "1,2", "--pq", "1/2"], "--cf, --pq"),
        (&["analyze"], "no input"),
        (&["verify", "--max-a", "1"], "--max-a 1"),
        (&["analyze", "--cf", "1,2", "--mode", "fancy"], "fancy"),
        (&["frobnicate"], "frobnicate"),
    ];
    for (args, token) in cases {
        let out = call(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(out.stderr.contains(token), "{args:?}: {}", out.stderr);
    }
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = call(&[flag]);
        assert_eq!(out.code, EXIT_OK);
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("toric-nash-out-{}.json", std::process::id()));
    let out = call(&["expand", "5/12", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, call(&["expand", "5/12"]).stdout);
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_toric-nash");
    let cases: &[&[&str]] = &[
        &["expand", "5/12"],
        &["analyze", "--cf", "1,2,4,2", "--mode", "nash"],
        &["analyze", "--pq", "6/12"],
    ];
    for args in cases {
        let output = Command::new(bin).args(*args).output().unwrap();
        let expected = call(args);
        assert_eq!(output.status.code(), Some(expected.code), "{args:?}");
        assert_eq!(String::from_utf8(output.stdout).unwrap(), expected.stdout);
        assert_eq!(String::from_utf8(output.stderr).unwrap(), expected.stderr);
    }
}
