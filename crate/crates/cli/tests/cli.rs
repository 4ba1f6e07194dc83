use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const X3: &str = r#"{"p":3,"r":1,"R":[0,1]}"#;
/// a = 2 + t is a nonsquare in F_{11^4}.
const P11_NONSQUARE: &str = r#"{"p":11,"r":4,"R":[[2,1,0,0]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aszeta"))
        .args(args)
        .env_remove("ASZETA_BUDGET")
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_aszeta"))
        .args(args)
        .env_remove("ASZETA_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn report_schema() -> jsonschema::Validator {
    let text = include_str!("../schemas/analysis_report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn count_examples() {
    let o = run(&["count", "--input", r#"{"p":3,"r":1,"R":[1]}"#, "--s", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(lines(&o)[0]["n"], 4);

    let o = run(&["count", "--input", X3, "--s", "1,4"]);
    let recs = lines(&o);
    assert_eq!(recs.len(), 2);
    assert_eq!((recs[0]["s"].as_u64(), recs[0]["n"].as_u64()), (Some(1), Some(4)));
    assert_eq!((recs[1]["s"].as_u64(), recs[1]["n"].as_u64()), (Some(4), Some(28)));
    assert_eq!(recs[1]["hasse_weil"], serde_json::json!([28, 136]));
}

#[test]
fn analyze_x_cubed_is_minimal_over_f81() {
    let o = run(&["analyze", "--input", X3, "--s", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep = json(&o);
    assert!(report_schema().is_valid(&rep));
    let row = &rep["per_s"][0];
    assert_eq!(row["classification"], "minimal");
    assert_eq!(row["n1"], 28);
    assert_eq!(row["oracle_count"], 28);
    assert_eq!(rep["genus"], 3);
    assert_eq!(rep["q_degree"], 4);
    assert_eq!(rep["w_dimension"], 2);
    assert_eq!(rep["group"]["p_order"], 27);
    assert_eq!(rep["group"]["extraspecial"], true);
    assert_eq!(rep["splitting_field"]["modulus"].as_array().unwrap().len(), 5);
    assert_eq!(rep["ok"], true);
}

#[test]
fn analyze_p11_nonsquare_is_maximal() {
    let o = run(&["analyze", "--input", P11_NONSQUARE, "--s", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rep = json(&o);
    assert!(report_schema().is_valid(&rep));
    let row = &rep["per_s"][0];
    assert_eq!(row["classification"], "maximal");
    assert_eq!(row["n1"], 15852);
    assert_eq!(row["oracle_count"], 15852);
    assert_eq!(row["a_square"], false);
    assert_eq!(rep["genus"], 5);
    // the top L-coefficient 11^40 is past 2^53
    let top = row["lpoly"]["coeffs"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(top, Value::String("672749994932560009201".into()));
}

#[test]
fn malformed_json_exits_2_with_position() {
    let o = run(&["analyze", "--input", "{\"p\":3,\n\"r\":1,\"R\":[0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2 column"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let o = run(&["count", "--input", r#"{"p":3,"r":2,"R":[[0,1],[1]]}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/R/1"), "{}", stderr(&o));

    let o = run(&["count", "--input", r#"{"p":4,"r":1,"R":[1]}"#, "--s", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn missing_file_and_bad_s_exit_2() {
    let o = run(&["count", "--input", "/nonexistent/curve.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["count", "--input", r#"{"p":3,"r":2,"R":[[0,1]]}"#, "--s", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stdin_input() {
    let o = run_stdin(&["count", "--input", "-", "--s", "4"], X3);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(lines(&o)[0]["n"], 28);
}

#[test]
fn budget_errors_exit_3() {
    let o = run(&["count", "--input", X3, "--s", "4", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = run(&["search", "--p", "7", "--r", "3", "--h", "3"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_aszeta"))
        .args(["count", "--input", X3, "--s", "4"])
        .env("ASZETA_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn lpoly_records() {
    let o = run(&["lpoly", "--input", X3, "--s", "1,4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let recs = lines(&o);
    assert_eq!(recs[0]["method"], "newton");
    assert_eq!(recs[0]["n1"], 4);
    assert_eq!(recs[1]["method"], "table");
    assert_eq!(recs[1]["form"], "(1 - p^(s/2) T)^(2g)");
    assert_eq!(recs[1]["classification"], "minimal");
    for r in &recs {
        assert_eq!(r["coeffs"].as_array().unwrap().len(), 7);
        assert_eq!(r["supersingular"], true);
    }
}

#[test]
fn search_finds_a1_x_cubed() {
    let o = run(&["search", "--p", "3", "--r", "2", "--h", "1", "--filter", "maximal"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let recs = lines(&o);
    assert!(recs.iter().all(|r| r["classification"] == "maximal"));
    let hit = recs
        .iter()
        .find(|r| r["curve"]["R"] == serde_json::json!([[0, 0], [0, 1]]))
        .expect("a1 X^3 with a1^2 = -1");
    assert_eq!(hit["n1"], 28);
    // a1 = -t is the other square root of -1
    assert!(recs.iter().any(|r| r["curve"]["R"] == serde_json::json!([[0, 0], [0, 2]])));
}

#[test]
fn search_h0_keeps_one_curve_per_twist_class() {
    // every a in F_5 is a square in F_25, so nothing is maximal
    let o = run(&["search", "--p", "5", "--r", "1", "--h", "0", "--s", "2", "--filter", "maximal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    let o = run(&["search", "--p", "5", "--r", "2", "--h", "0", "--s", "2", "--filter", "maximal"]);
    let recs = lines(&o);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["n1"], 25 + 1 + 2 * 2 * 5);

    let o = run(&["search", "--p", "5", "--r", "2", "--h", "0", "--s", "2"]);
    assert_eq!(lines(&o).len(), 2);
}

#[test]
fn search_odd_s_maximal_is_empty() {
    let o = run(&["search", "--p", "3", "--r", "1", "--h", "1", "--s", "1,3", "--filter", "maximal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn verify_presets_pass() {
    for preset in ["paper-examples", "kani-rosen"] {
        let o = run(&["verify", "--preset", preset]);
        assert_eq!(o.status.code(), Some(0), "{preset}: {}", stdout(&o));
        let rec = json(&o);
        assert_eq!(rec["ok"], true);
        assert_eq!(rec["failed"], 0);
        assert!(rec["results"].as_array().unwrap().iter().any(|r| r["status"] == "pass"));
    }
}

#[test]
fn corrupted_b_fails_verify() {
    let o = run(&["verify", "--input", X3, "--corrupt-b"]);
    assert_eq!(o.status.code(), Some(1));
    let rec = json(&o);
    assert_eq!(rec["ok"], false);
    assert_eq!(rec["first_failure"]["check"], "b_identity");
    assert!(rec["first_failure"]["detail"].as_str().unwrap().contains("residual"));

    let o = run(&["verify", "--input", X3]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn every_record_is_versioned() {
    let outs = [
        run(&["count", "--input", X3, "--s", "1,2"]),
        run(&["lpoly", "--input", X3, "--s", "4"]),
        run(&["search", "--p", "3", "--r", "1", "--h", "1"]),
    ];
    for o in &outs {
        for r in lines(o) {
            assert_eq!(r["schema_version"], 1);
        }
    }
    assert_eq!(json(&run(&["verify", "--preset", "kani-rosen"]))["schema_version"], 1);
    assert_eq!(json(&run(&["analyze", "--input", X3]))["schema_version"], 1);
}

#[test]
fn csv_headers() {
    let cases: [(&[&str], &str); 5] = [
        (
            &["analyze", "--input", X3, "--s", "4"],
            "name,p,r,R,genus,h,q_degree,s,method,classification,n1,oracle_count,a_square,lform,lpoly,supersingular,ok",
        ),
        (&["count", "--input", X3, "--s", "4"], "p,r,R,s,n,hasse_weil_low,hasse_weil_high"),
        (&["lpoly", "--input", X3, "--s", "4"], "p,r,R,s,method,form,coeffs,n1,classification,supersingular"),
        (
            &["search", "--p", "3", "--r", "1", "--h", "0"],
            "p,r,R,genus,h,q_degree,s,classification,n1,method,lform,a_constant",
        ),
        (&["verify", "--preset", "kani-rosen"], "curve,check,status,detail"),
    ];
    for (args, header) in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "csv"]);
        let o = run(&a);
        assert!(o.status.success(), "{a:?}: {}", stderr(&o));
        let text = stdout(&o);
        assert_eq!(text.lines().next(), Some(header));
        assert!(text.lines().count() >= 2, "{a:?}");
    }
    let o = run(&["count", "--input", X3, "--s", "4", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("3,1,0;1,4,28,28,136"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = run(&["analyze", "--input", X3, "--s", "2,4"]);
    let b = run(&["analyze", "--input", X3, "--s", "2,4"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["search", "--p", "3", "--r", "2", "--h", "1", "--jobs", "1"]);
    let b = run(&["search", "--p", "3", "--r", "2", "--h", "1", "--jobs", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn warm_cache_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("results.jsonl");
    let cache = cache.to_str().unwrap();
    let cold = run(&["analyze", "--input", X3, "--s", "4"]);
    let first = run(&["analyze", "--input", X3, "--s", "4", "--cache", cache]);
    let warm = run(&["analyze", "--input", X3, "--s", "4", "--cache", cache]);
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(std::fs::read_to_string(cache).unwrap().lines().count(), 1);

    let cold_csv = run(&["analyze", "--input", X3, "--s", "4", "--format", "csv"]);
    let warm_csv = run(&["analyze", "--input", X3, "--s", "4", "--format", "csv", "--cache", cache]);
    assert_eq!(cold_csv.stdout, warm_csv.stdout);

    // a failing verify replays its exit status
    let v1 = run(&["verify", "--input", X3, "--corrupt-b", "--cache", cache]);
    let v2 = run(&["verify", "--input", X3, "--corrupt-b", "--cache", cache]);
    assert_eq!(v1.status.code(), Some(1));
    assert_eq!(v2.status.code(), Some(1));
    assert_eq!(v1.stdout, v2.stdout);

    // different s is a different entry
    run(&["analyze", "--input", X3, "--s", "2", "--cache", cache]);
    assert_eq!(std::fs::read_to_string(cache).unwrap().lines().count(), 3);
    for line in std::fs::read_to_string(cache).unwrap().lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["key"].as_str().unwrap().len(), 64);
    }
}
