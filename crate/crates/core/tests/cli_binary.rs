use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cachenet(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cachenet"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

const NET44: [&str; 10] = ["--kt", "4", "--kr", "4", "--n", "4", "--mt", "2", "--mr", "1"];

#[test]
fn exit_codes() {
    let ok = cachenet(&[&["sdof"], &NET44[..]].concat(), "");
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("proposed=24/7 baseline=3"));

    let missing = cachenet(&["sdof", "--kt", "4"], "");
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());

    let infeasible = cachenet(&["sdof", "--kt", "2", "--kr", "3", "--n", "3", "--mt", "1", "--mr", "0"], "");
    assert_eq!(infeasible.status.code(), Some(2));
}

#[test]
fn plan_piped_into_verify() {
    let plan = cachenet(&[&["plan"], &NET44[..]].concat(), "");
    let text = String::from_utf8(plan.stdout).unwrap();
    let good = cachenet(&[&["verify", "-", "--channel-seeds", "100"], &NET44[..]].concat(), &text);
    assert_eq!(good.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&good.stdout).contains("channels=100"));

    // Null the wrong receiver in one line.
    let corrupted = text.replacen("cachedRx={2} zf={3} dest=1", "cachedRx={2} zf={2} dest=1", 1);
    let bad = cachenet(&[&["verify"], &NET44[..]].concat(), &corrupted);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("violation"));

    let garbage = cachenet(&[&["verify"], &NET44[..]].concat(), "block=one\n");
    assert_eq!(garbage.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let args =
        ["ndt", "--kt", "3", "--kr", "3", "--n", "3", "--mt", "2", "--mr", "1", "--file-bits", "30000", "--seeds", "5"];
    let a = cachenet(&args, "");
    let b = cachenet(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let sweep_a = cachenet(&["sweep", "--figure", "fig4"], "");
    let sweep_b = cachenet(&["sweep", "--figure", "fig4"], "");
    assert_eq!(sweep_a.stdout, sweep_b.stdout);
}
