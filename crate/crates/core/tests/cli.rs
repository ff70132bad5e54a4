use std::process::{Command, Output};

use cyclewalk::cli::{ItemResult, ResultEnvelope};
use serde_json::Value;

fn cyclewalk(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclewalk"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("CYCLEWALK_THREADS", t),
        None => cmd.env_remove("CYCLEWALK_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cyclewalk(args, None);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> Option<i32> {
    cyclewalk(args, None).status.code()
}

#[test]
fn period_json_reports_finite_six() {
    let out = stdout(&["period", "--family", "M", "--states", "3", "--vertices", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let r = &v["results"][0];
    assert_eq!(r["verdict"], "finite");
    assert_eq!(r["T"], 6);
    assert_eq!(v["config"]["command"], "period");
}

#[test]
fn f_type_square_period_is_four() {
    let out = stdout(&["period", "--family", "F", "--states", "5", "--vertices", "5", "--format", "csv"]);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("F,5,5,finite,4,cyclotomic,"), "{row}");
}

#[test]
fn sweep_csv_grid() {
    let out = stdout(&["sweep", "--family", "both", "--states", "3", "--vertices", "2..8", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "family,L,N,verdict,T,certificate_kind,certificate_detail");
    assert_eq!(lines.len(), 15);
    assert!(lines.contains(&"M,3,2,infinite,,non_integer_coeff,deg=1 val=2/3"));
    assert!(lines.contains(&"M,3,3,finite,6,cyclotomic,{1:3;2:2;3:2}"));
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        match (cells[0], cells[2]) {
            ("M", "3") => assert_eq!(cells[4], "6"),
            ("F", "3") => assert_eq!(cells[4], "4"),
            _ => assert_eq!(cells[3], "infinite", "{line}"),
        }
    }
}

#[test]
fn sweep_output_is_independent_of_worker_count() {
    let args = ["sweep", "--family", "both", "--states", "3,5", "--vertices", "2..9"];
    for format in ["csv", "text"] {
        let mut a = args.to_vec();
        a.extend(["--format", format]);
        let one = cyclewalk(&a, Some("1"));
        let four = cyclewalk(&a, Some("4"));
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout, "{format}");
    }
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        let obj = v.as_object_mut().unwrap();
        obj.remove("timings");
        obj["config"].as_object_mut().unwrap().remove("parallelism");
        v
    };
    assert_eq!(strip(cyclewalk(&a, Some("1"))), strip(cyclewalk(&a, Some("3"))));
}

#[test]
fn json_round_trips_for_every_result_kind() {
    let runs: [&[&str]; 8] = [
        &["dump-u", "--family", "F", "--states", "3", "--vertices", "2"],
        &["charpoly", "--family", "M", "--states", "5", "--vertices", "6"],
        &["charpoly", "--family", "M", "--states", "5", "--vertices", "6", "--sector", "1"],
        &["sweep", "--states", "3", "--vertices", "2..6"],
        &["zeta", "--family", "M", "--states", "3", "--vertices", "3"],
        &["abszeta", "--states", "5"],
        &["abszeta", "--states", "3", "--verify-mellin", "--w", "6", "--s", "1", "--tol", "1e-4"],
        &["verify", "--check", "cyclotomic_product", "--check", "fourth_power"],
    ];
    let mut kinds = std::collections::BTreeSet::new();
    for args in runs {
        let mut a = args.to_vec();
        a.extend(["--format", "json"]);
        let text = stdout(&a);
        let envelope: ResultEnvelope = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&envelope).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        for r in &envelope.results {
            kinds.insert(serde_json::to_value(r).unwrap()["kind"].as_str().unwrap().to_string());
        }
        let reparsed: ResultEnvelope = serde_json::from_str(&again).unwrap();
        assert_eq!(reparsed, envelope);
    }
    assert_eq!(kinds.len(), 8, "{kinds:?}");
}

#[test]
fn dump_u_emits_fraction_strings() {
    let out = stdout(&["dump-u", "--family", "M", "--states", "3", "--vertices", "2", "--format", "json"]);
    let env: ResultEnvelope = serde_json::from_str(&out).unwrap();
    let ItemResult::Operator { dimension, .. } = &env.results[0] else {
        panic!("operator expected");
    };
    assert_eq!(*dimension, 6);
    let v: Value = serde_json::from_str(&out).unwrap();
    let row: Vec<&str> = v["results"][0]["matrix"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e.as_str().unwrap())
        .collect();
    // Vertex 0 receives chirality 0 (jump -1) from vertex 1.
    assert_eq!(row, ["0", "0", "0", "-1/3", "2/3", "2/3"]);
}

#[test]
fn mellin_check_passes_from_the_command_line() {
    let out = stdout(&["abszeta", "--states", "3", "--verify-mellin", "--w", "6", "--s", "1", "--tol", "1e-4"]);
    assert!(out.contains("PASS"), "{out}");
    assert!(out.contains("-zeta_4(w, s+9, (2,2,3,3)) + zeta_4(w, s+10, (2,2,3,3))"), "{out}");
}

#[test]
fn zeta_text_shows_the_kurokawa_form() {
    let out = stdout(&["zeta", "--family", "M", "--states", "3", "--vertices", "3"]);
    assert!(out.contains("-(u-1) / (u^2-1)(u^2-1)(u^3-1)(u^3-1)"), "{out}");
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("cyclewalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("period.csv");
    let p = path.to_str().unwrap();
    let out = cyclewalk(
        &["period", "--family", "M", "--states", "3", "--vertices", "2", "--format", "csv", "--output", p],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("M,3,2,infinite"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["period", "--family", "M", "--states", "4", "--vertices", "3"]), Some(1));
    assert_eq!(code(&["period", "--family", "M", "--states", "3", "--vertices", "1"]), Some(1));
    assert_eq!(code(&["sweep", "--states", "3,6", "--vertices", "2..4"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(64));
    assert_eq!(code(&["sweep", "--states", "3", "--vertices", "8..2"]), Some(64));
    assert_eq!(code(&["sweep", "--states", "3", "--vertices", "2..x"]), Some(64));
    assert_eq!(code(&["period", "--family", "Q", "--states", "3", "--vertices", "3"]), Some(64));
    assert_eq!(code(&["zeta", "--family", "M", "--states", "3", "--vertices", "3", "--format", "csv"]), Some(64));
    assert_eq!(code(&["charpoly", "--family", "M", "--states", "3", "--vertices", "3", "--sector", "3"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
    let bad_threads = cyclewalk(&["period", "--family", "M", "--states", "3", "--vertices", "3"], Some("zero"));
    assert_eq!(bad_threads.status.code(), Some(64));
}
