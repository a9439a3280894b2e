use std::path::PathBuf;
use std::process::Command;

use scpkit_cli::report::Num;
use scpkit_cli::{format_report, parse_report, run_bytes, Format, COMMANDS};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scpkit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_scpkit")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn input(name: &str) -> Vec<u8> {
    std::fs::read(data(name)).unwrap()
}

#[test]
fn complete_three_atoms() {
    let path = data("quadratic_rank3.json");
    let (code, out) = scpkit(&["complete", "--input", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let r = parse_report(&out).unwrap();
    let atoms = r.measure.unwrap();
    let densities: Vec<String> = atoms.iter().map(|a| a.density.to_string()).collect();
    assert_eq!(densities, ["1/3", "1/6", "1/2"]);
    assert_eq!(r.case.as_deref(), Some("rank3_e_lt_c"));
    assert!(out.contains(r#""density":"1/6""#));
}

#[test]
fn obstruct_translated_example() {
    let path = data("translated.json");
    let (code, out) = scpkit(&["obstruct", "--input", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 1);
    assert!(out.contains(r#""witness":["7376","7375"]"#), "{out}");
}

#[test]
fn check_decreasing_weights_is_negative() {
    let path = data("decreasing.json");
    assert_eq!(scpkit(&["check", "--input", path.to_str().unwrap()]).0, 1);
}

#[test]
fn stdin_and_out_file() {
    let dir = std::env::temp_dir().join(format!("scpkit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_scpkit"))
        .args(["complete", "--out", out.to_str().unwrap()])
        .stdin(std::fs::File::open(data("quadratic_rank1.json")).unwrap())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("μ = δ_{(1,1)}"), "{text}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn input_errors_exit_two() {
    let (code, out) = scpkit(&["complete", "--input", "/nonexistent/file.json"]);
    assert_eq!(code, 2);
    assert!(out.contains("input_error"));
    let r = run_bytes("complete", br#"{"kind":"scp2d-quadratic","a":"0","b":"1","c":"2","d":"2","e":"1"}"#, None);
    assert_eq!((r.status.as_str(), r.exit_code()), ("input_error", 2));
    assert_eq!(scpkit(&["bogus"]).0, 2);
}

#[test]
fn depth_flag_controls_completion_weights() {
    let path = data("quadratic_rank3.json");
    let (_, out) = scpkit(&["complete", "--input", path.to_str().unwrap(), "--format", "json", "--depth", "3"]);
    let r = parse_report(&out).unwrap();
    assert_eq!(r.weights.unwrap().len(), 2 * 10);
}

#[test]
fn singular_family_and_abc() {
    let r = run_bytes("complete", &input("singular.json"), None);
    assert_eq!(r.case.as_deref(), Some("singular_rank2"));
    let r = run_bytes("complete", &input("abc.json"), None);
    let xs: Vec<Num> = r.measure.unwrap().into_iter().map(|a| a.x).collect();
    assert_eq!(xs, [Num::Rational(1.into()), Num::Rational(2.into())]);
}

#[test]
fn translate_reproduces_table() {
    let r = run_bytes("translate", &input("original.json"), None);
    let table: Vec<String> = r.moments.unwrap().iter().map(ToString::to_string).collect();
    assert_eq!(table.join(","), "1,4,5,17,19,27,76,77,97,157,354,331,371,535,972");
}

#[test]
fn every_report_round_trips_without_floats() {
    let files = [
        "quadratic_rank3.json",
        "quadratic_rank1.json",
        "quadratic_not_psd.json",
        "translated.json",
        "original.json",
        "abc.json",
        "decreasing.json",
        "singular.json",
    ];
    let float = |s: &str| {
        let b = s.as_bytes();
        (1..b.len().saturating_sub(1)).any(|i| b[i] == b'.' && b[i - 1].is_ascii_digit() && b[i + 1].is_ascii_digit())
    };
    for f in files {
        for c in COMMANDS {
            let r = run_bytes(c, &input(f), None);
            assert_ne!(r.exit_code(), 3, "{c} {f}: {:?}", r.message);
            let json = format_report(&r, Format::Json);
            let back = parse_report(&json).unwrap();
            assert_eq!(back, r, "{c} {f}");
            assert_eq!(format_report(&back, Format::Json), json);
            let text = format_report(&r, Format::Text);
            assert!(!float(&json) && !float(&text), "{c} {f}");
        }
    }
}
