use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use immerse::devices::Transport;
use immerse_cli::{replay_check, run, verify, RunConfig, SerialChoice, EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_RUNTIME};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
const BIN: &str = env!("CARGO_BIN_EXE_immerse");

fn fixture(name: &str) -> PathBuf {
    Path::new(FIXTURES).join(name)
}

fn config(dir: &Path, trace: &str) -> RunConfig {
    RunConfig {
        scene: fixture("demo.scene"),
        scenario: fixture("demo.scn"),
        trace: dir.join(trace),
        serial: Transport::Virtual,
        sample_stride: 9,
    }
}

fn call(f: impl FnOnce(&mut Vec<u8>, &mut Vec<u8>) -> i32) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = f(&mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn demo_run_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "demo.trace");
    let (code, out, err) = call(|o, e| run(&cfg, o, e));
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("ok ticks=1170 time=13.000000 records="), "{out}");
    let trace = fs::read_to_string(&cfg.trace).unwrap();
    assert!(trace.lines().all(|l| l.starts_with("tick=")));
    assert!(trace.contains("kind=SerialTx byte=0x68"));
}

#[test]
fn demo_trace_satisfies_fixture_assertions() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "demo.trace");
    assert_eq!(call(|o, e| run(&cfg, o, e)).0, EXIT_OK);
    let (code, out, _) = call(|o, e| verify(&cfg.trace, &fixture("demo.assert"), o, e));
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn verify_reports_first_failing_predicate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "demo.trace");
    assert_eq!(call(|o, e| run(&cfg, o, e)).0, EXIT_OK);
    let asserts = dir.path().join("bad.assert");
    fs::write(&asserts, "expect count kind=Impulse == 5\nexpect count kind=SerialTx == 3\nexpect count kind=Warning == 1\n")
        .unwrap();
    let (code, out, _) = call(|o, e| verify(&cfg.trace, &asserts, o, e));
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains(":2: expect count kind=SerialTx == 3 (found 2)"), "{out}");
    assert!(!out.contains("Warning"));
}

#[test]
fn verify_rejects_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t");
    fs::write(&trace, "tick=1 t=0.011111 kind=Warning code=X\n").unwrap();
    let asserts = dir.path().join("a");
    fs::write(&asserts, "expect count kind=Warning ?? 1\n").unwrap();
    let (code, _, err) = call(|o, e| verify(&trace, &asserts, o, e));
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains(":1:"), "{err}");
    fs::write(&trace, "garbage\n").unwrap();
    fs::write(&asserts, "expect count == 0\n").unwrap();
    assert_eq!(call(|o, e| verify(&trace, &asserts, o, e)).0, EXIT_INPUT);
    assert_eq!(call(|o, e| verify(&dir.path().join("missing"), &asserts, o, e)).0, EXIT_INPUT);
}

#[test]
fn replay_check_shows_first_difference() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    fs::write(&a, "one\ntwo\nthree\n").unwrap();
    fs::write(&b, "one\ntwo\nthree\n").unwrap();
    assert_eq!(call(|o, e| replay_check(&a, &b, o, e)).0, EXIT_OK);
    fs::write(&b, "one\nTWO\nthree\n").unwrap();
    let (code, out, _) = call(|o, e| replay_check(&a, &b, o, e));
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("line 2") && out.contains("< two") && out.contains("> TWO"), "{out}");
    fs::write(&b, "one\ntwo\n").unwrap();
    let (code, out, _) = call(|o, e| replay_check(&a, &b, o, e));
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("line 3"), "{out}");
    assert_eq!(call(|o, e| replay_check(&a, &dir.path().join("nope"), o, e)).0, EXIT_INPUT);
}

#[test]
fn bad_scene_is_input_error_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "t");
    cfg.scene = dir.path().join("bad.scene");
    fs::write(&cfg.scene, "version 1\nnode Spatial \"A\"\nnode Spatial \"A\"\n").unwrap();
    let (code, out, err) = call(|o, e| run(&cfg, o, e));
    assert_eq!(code, EXIT_INPUT);
    assert!(out.is_empty());
    assert!(err.contains("bad.scene:3:"), "{err}");
}

#[test]
fn missing_node_reference_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "t");
    cfg.scene = dir.path().join("s.scene");
    fs::write(&cfg.scene, "node KinematicBody \"Plate\" behavior=footplate shape=box 1,0.1,1\n").unwrap();
    cfg.scenario = dir.path().join("s.scn");
    fs::write(&cfg.scenario, "run_until 1\n").unwrap();
    let (code, _, err) = call(|o, e| run(&cfg, o, e));
    assert_eq!(code, EXIT_INPUT, "{err}");
    assert!(err.contains("UpperFloor1"), "{err}");
}

#[test]
fn unreachable_device_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "t");
    cfg.serial = Transport::Passthrough(dir.path().join("no-such-tty"));
    assert_eq!(call(|o, e| run(&cfg, o, e)).0, EXIT_RUNTIME);
}

#[test]
fn passthrough_receives_haptic_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let dev = dir.path().join("tty");
    fs::write(&dev, b"").unwrap();
    let mut cfg = config(dir.path(), "t");
    cfg.serial = Transport::Passthrough(dev.clone());
    assert_eq!(call(|o, e| run(&cfg, o, e)).0, EXIT_OK);
    assert_eq!(fs::read(&dev).unwrap(), b"hl");
}

#[test]
fn serial_choice_parsing() {
    assert_eq!("virtual".parse::<SerialChoice>().unwrap().0, Transport::Virtual);
    assert_eq!(
        "passthrough:/dev/ttyACM0".parse::<SerialChoice>().unwrap().0,
        Transport::Passthrough("/dev/ttyACM0".into())
    );
    assert!("passthrough:".parse::<SerialChoice>().is_err());
    assert!("usb".parse::<SerialChoice>().is_err());
}

#[test]
fn binary_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<PathBuf> = ["a.trace", "b.trace"].iter().map(|n| dir.path().join(n)).collect();
    for t in &runs {
        let st = Command::new(BIN)
            .args(["run", "--scene"])
            .arg(fixture("demo.scene"))
            .arg("--scenario")
            .arg(fixture("demo.scn"))
            .arg("--trace")
            .arg(t)
            .args(["--sample-stride", "30"])
            .output()
            .unwrap();
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    }
    let st = Command::new(BIN).arg("replay-check").args(&runs).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let st = Command::new(BIN).arg("verify").arg("--trace").arg(&runs[0]).arg("--assertions").arg(fixture("demo.assert")).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let st = Command::new(BIN).args(["run", "--scene", "x"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn run_until_ten_ends_on_tick_nine_hundred() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "t");
    cfg.scenario = dir.path().join("s.scn");
    fs::write(&cfg.scenario, "at 1 press Environment/Button\nrun_until 10\n").unwrap();
    assert_eq!(call(|o, e| run(&cfg, o, e)).0, EXIT_OK);
    let trace = fs::read_to_string(&cfg.trace).unwrap();
    assert!(trace.lines().last().unwrap().starts_with("tick=900 t=10.000000 "), "{}", trace.lines().last().unwrap());
}

#[test]
fn stride_is_part_of_run_identity() {
    let dir = tempfile::tempdir().unwrap();
    let a = config(dir.path(), "a");
    let mut b = config(dir.path(), "b");
    b.sample_stride = 10;
    assert_eq!(call(|o, e| run(&a, o, e)).0, EXIT_OK);
    assert_eq!(call(|o, e| run(&b, o, e)).0, EXIT_OK);
    let (code, out, _) = call(|o, e| replay_check(&a.trace, &b.trace, o, e));
    assert_eq!(code, EXIT_FAILED);
    assert!(out.starts_with("differ at line "), "{out}");
}
