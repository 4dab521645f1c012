use std::process::Command;

use ksba::replacement::{limit_stable_pair, DegenerationSpec, StablePairModel};
use ksba_cli::dot::check_dot;

const TYPE_A: &str = r#"{"kind":"a","partition":[1,2,5,6],"lambda":["1","2","3","4","5","6","7","8"]}"#;
const TYPE_B: &str = r#"{"kind":"b","partition":[1,2,3,5],"lambda":["1","2","3","4","5","6","7","8"]}"#;
const TYPE_C: &str = r#"{"kind":"c","partition":[1,2,3,4],"lambda":["1","2","3","4","5","6","7","8"]}"#;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn ksba(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ksba")).args(args).env("KSBA_COLOR", "0").output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

#[test]
fn singularity_reports_type_and_milnor_number() {
    let r = ksba(&["singularity", "--inline", "y*(x^3+y^2)"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "E7 (mu=7)"));
    assert_eq!(ksba(&["singularity", "--inline", "y*(x^2+y^2)"]).stdout.trim(), "D4 (mu=4)");
}

#[test]
fn classify_distinct_points() {
    let r = ksba(&["classify", "--inline", "1,2,3,4,5,6,7,8"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "Stable"));
    let r = ksba(&["classify", "--inline", "0 0 0 0 inf inf inf inf"]);
    assert_eq!(r.stdout.trim(), "StrictlySemistable (type c I={1,2,3,4})");
    let json = ksba(&["classify", "--format", "json", "--inline", r#"[["0","1"],["0","1"],["0","1"],["0","1"],["0","1"],["1","1"],["2","1"],["1","0"]]"#]);
    assert!(json.stdout.contains("\"Unstable\""), "{}", json.stdout);
}

#[test]
fn weights_and_orbits() {
    assert_eq!(ksba(&["weights", "--inline", "0,3,0,3,3,0,3,0"]).stdout.trim(), "2 2 2 -2 -2 -2");
    let r = ksba(&["same-orbit", "--group", "h", "--mod-sl2", "--inline", "1,2,3,4,5,6,7,8; 5,6,7,8,1,2,3,4"]);
    assert_eq!(r.stdout.trim(), "true");
    let r = ksba(&["orbit", "--group", "h", "--inline", "0,0,0,0,1,1,1,1"]);
    assert_eq!(r.stdout.lines().next(), Some("orbit size 2"));
}

#[test]
fn type_c_limit_embeds_the_tables() {
    let r = ksba(&["degenerate", "--inline", TYPE_C]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.matches("\ncomponent ").count() + usize::from(r.stdout.starts_with("component ")), 2);
    for needle in ["Ex5.7-Y1", "Ex5.7-Y2", "M0  -1/2", "N1     0  1/2", "contracted Y1 on Ex5.8-Y1"] {
        assert!(r.stdout.contains(needle), "missing {needle:?} in\n{}", r.stdout);
    }
}

#[test]
fn json_models_round_trip() {
    for spec in [TYPE_A, TYPE_B, TYPE_C] {
        let r = ksba(&["degenerate", "--format", "json", "--inline", spec]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let m: StablePairModel = serde_json::from_str(&r.stdout).unwrap();
        let s: DegenerationSpec = serde_json::from_str(spec).unwrap();
        assert_eq!(m, limit_stable_pair(&s).unwrap());
        assert_eq!(serde_json::to_string_pretty(&m).unwrap() + "\n", r.stdout);
    }
}

#[test]
fn dot_output_is_well_formed() {
    for spec in [TYPE_A, TYPE_B, TYPE_C] {
        let r = ksba(&["degenerate", "--format", "dot", "--inline", spec]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        check_dot(&r.stdout).unwrap();
        assert!(r.stdout.contains("ample, lc"), "{}", r.stdout);
    }
}

#[test]
fn identical_requests_give_identical_bytes() {
    let cases: [&[&str]; 4] = [
        &["degenerate", "--format", "json", "--inline", TYPE_B],
        &["check-s8", "--seed", "7"],
        &["orbit", "--group", "h", "--mod-sl2", "--inline", "1,2,3,4,5,6,7,8"],
        &["tables", "--format", "json"],
    ];
    for args in cases {
        let (a, b) = (ksba(args), ksba(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn verify_accepts_models_and_flags_tampering() {
    let r = ksba(&["verify", "--inline", TYPE_A]);
    assert_eq!((r.code, r.stdout.trim()), (0, "PASS stable pair"));
    let json = ksba(&["degenerate", "--format", "json", "--inline", TYPE_A]).stdout;
    let mut m: StablePairModel = serde_json::from_str(&json).unwrap();
    m.components[0].branch[0].poly = None;
    let tampered = serde_json::to_string(&m).unwrap();
    let r = ksba(&["verify", "--inline", &tampered]);
    assert_eq!(r.code, 4);
    assert!(r.stdout.starts_with("FAIL"));
    assert!(r.stderr.contains("audit failure in E0"), "{}", r.stderr);
}

#[test]
fn exit_codes_distinguish_error_kinds() {
    assert_eq!(ksba(&["singularity", "--inline", "x^+"]).code, 2);
    assert_eq!(ksba(&["classify", "--inline", "1,2"]).code, 2);
    assert_eq!(ksba(&["classify"]).code, 2);
    let bad = r#"{"kind":"a","partition":[1,2,5,6],"lambda":["1","2","0","4","5","6","7","8"]}"#;
    let r = ksba(&["degenerate", "--inline", bad]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.is_empty() && r.stderr.contains("precondition"));
    assert_eq!(ksba(&["weights", "--inline", "1,2,3,4,5,6,7,8"]).code, 3);
    assert_eq!(ksba(&["tables", "--format", "dot"]).code, 3);
    assert_eq!(ksba(&["classify", "--input", "/nonexistent/config"]).code, 2);
}

#[test]
fn color_is_off_when_disabled() {
    let r = ksba(&["check-s8", "--seed", "1"]);
    assert!(!r.stdout.contains('\x1b'));
    assert_eq!(r.stdout.lines().count(), 10);
    assert!(r.stdout.lines().all(|l| l.starts_with("PASS") && l.ends_with("16/16 identities hold")));
}

#[test]
fn input_files_are_read() {
    let dir = std::env::temp_dir().join(format!("ksba-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(&path, TYPE_C).unwrap();
    let r = ksba(&["verify", "--input", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(r.code, 0, "{}", r.stderr);
}
