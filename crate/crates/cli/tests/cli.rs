use std::path::PathBuf;
use std::process::{Command, Output};

use linset_core::{L2SearchReport, LpTable, ScatterReport};

fn linset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linset")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn check_exit_codes() {
    let ok = linset(&["check", "--p", "2", "--e", "1", "--n", "3", "--s", "1", "--poly", "a1=g^0"]);
    assert_eq!(code(&ok), 0);
    let id = linset(&["check", "--p", "2", "--e", "1", "--n", "3", "--s", "1", "--poly", "a0=g^0"]);
    assert_eq!(code(&id), 10);
    let small = linset(&["check", "--p", "2", "--n", "2", "--poly", "a1=g^0"]);
    assert_eq!(code(&small), 2);
    let garbage = linset(&["check", "--p", "2", "--n", "3", "--poly", "a1=h^2"]);
    assert_eq!(code(&garbage), 2);
    let not_coprime = linset(&["check", "--p", "2", "--n", "4", "--s", "2", "--poly", "a1=g^0"]);
    assert_eq!(code(&not_coprime), 2);
    let missing = linset(&["check", "--p", "2", "--n", "3"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn every_method_gives_the_same_exit_code() {
    for poly in ["a1=g^0", "a1=g^0; a2=g^3", "a0=g^2; a1=g^0"] {
        let codes: Vec<i32> = ["definition", "kernel", "minor", "all"]
            .iter()
            .map(|m| {
                code(&linset(&["check", "--p", "3", "--n", "4", "--poly", poly, "--method", m, "--verify"]))
            })
            .collect();
        assert!(codes.iter().all(|&c| c == codes[0]), "{poly}: {codes:?}");
    }
}

#[test]
fn search_l2_expectations() {
    for (p, n) in [("5", "5"), ("2", "7")] {
        let out =
            linset(&["search-l2", "--p", p, "--e", "1", "--n", n, "--s", "1", "--expect", "none-scattered"]);
        assert_eq!(code(&out), 0, "q={p} n={n}");
    }
    let some = linset(&["search-l2", "--p", "5", "--n", "4", "--expect", "some-scattered"]);
    assert_eq!(code(&some), 0);
    let wrong = linset(&["search-l2", "--p", "5", "--n", "4", "--expect", "none-scattered"]);
    assert_eq!(code(&wrong), 1);
    let big = linset(&["search-l2", "--p", "11", "--n", "3"]);
    assert_eq!(code(&big), 2);
}

#[test]
fn golden_reports() {
    let cases: [(&[&str], &str); 3] = [
        (&["search-l2", "--p", "5", "--n", "4", "--s", "1", "--no-timing"], "search_l2_q5_n4_s1.json"),
        (&["check", "--p", "3", "--n", "4", "--s", "1", "--b2", "g^0", "--no-timing"], "check_b2_q3_n4.json"),
        (&["classify-lp", "--p", "2", "--e", "2", "--n", "3", "--no-timing"], "classify_lp_q4_n3.json"),
    ];
    for (args, file) in cases {
        let out = linset(args);
        assert_eq!(stdout(&out), golden(file), "{file}");
    }
}

#[test]
fn reports_reparse_into_library_types() {
    let r: L2SearchReport = serde_json::from_str(&golden("search_l2_q5_n4_s1.json")).unwrap();
    assert_eq!(r.scattered_classes, 1);
    assert_eq!(r.scattered_bs().iter().map(|b| b.to_string()).collect::<Vec<_>>(), ["g^3"]);
    let c: ScatterReport = serde_json::from_str(&golden("check_b2_q3_n4.json")).unwrap();
    assert!(c.witness.is_some());
    let t: LpTable = serde_json::from_str(&golden("classify_lp_q4_n3.json")).unwrap();
    assert_eq!(t.not_scattered, 21);

    let timed = linset(&["search-l2", "--p", "3", "--n", "5", "--s", "2"]);
    let r: L2SearchReport = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(r.elapsed_ms.is_some());
}

#[test]
fn output_is_independent_of_jobs() {
    for args in [
        &["search-l2", "--p", "2", "--e", "2", "--n", "4", "--s", "3", "--no-timing"][..],
        &["classify-lp", "--p", "3", "--n", "4", "--method", "all", "--no-timing"][..],
        &["check", "--p", "7", "--n", "3", "--lp", "g^1", "--no-timing"][..],
        &["curve-test", "--p", "2", "--n", "6", "--format", "csv"][..],
    ] {
        let outputs: Vec<(i32, String)> = ["1", "2", "8"]
            .iter()
            .map(|j| {
                let mut a = args.to_vec();
                a.extend(["--jobs", j]);
                let out = linset(&a);
                (code(&out), stdout(&out))
            })
            .collect();
        assert!(outputs.iter().all(|o| *o == outputs[0]), "{args:?}");
    }
}

#[test]
fn classify_lp_counts() {
    for (p, e, n, scattered, not) in
        [("2", "1", "5", 0, 31), ("3", "1", "4", 40, 40), ("2", "2", "3", 42, 21)]
    {
        let out = linset(&["classify-lp", "--p", p, "--e", e, "--n", n]);
        assert_eq!(code(&out), 0);
        let t: LpTable = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!((t.scattered, t.not_scattered), (scattered, not), "p={p} e={e} n={n}");
        assert!(t.norm_criterion_holds);
    }
}

#[test]
fn rank_examples() {
    let id = linset(&["rank", "--p", "3", "--n", "4", "--poly", "a0=g^0", "--format", "csv"]);
    assert_eq!(stdout(&id).lines().nth(1).unwrap(), "s=1; a[0]=g^0; a[1]=0; a[2]=0; a[3]=0,4,4,0");
    let trace = linset(&["rank", "--p", "3", "--n", "4", "--poly", r#"["g^0","g^0","g^0","g^0"]"#]);
    let v: serde_json::Value = serde_json::from_slice(&trace.stdout).unwrap();
    assert_eq!(v["nested_minor_rank"], 1);
    assert_eq!(v["image_rank"], 1);
}

#[test]
fn text_and_csv_formats() {
    let info = linset(&["field-info", "--p", "2", "--e", "2", "--n", "3", "--format", "csv"]);
    let lines: Vec<String> = stdout(&info).lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "p,e,q,n,size,theta,modulus,generator");
    assert!(lines[1].starts_with("2,2,4,3,64,21,"));

    let text = linset(&["check", "--p", "2", "--n", "3", "--poly", "a0=g^0", "--format", "text"]);
    assert!(stdout(&text).contains("not_scattered"));
    assert!(stdout(&text).contains("witness: x = "));
}

#[test]
fn verify_passes_on_searches_with_witnesses() {
    let out = linset(&["search-l2", "--p", "3", "--n", "4", "--verify"]);
    assert_eq!(code(&out), 0);
    let out = linset(&["curve-test", "--p", "3", "--n", "5", "--s", "2", "--b", "g^7"]);
    assert_eq!(code(&out), 0);
}
