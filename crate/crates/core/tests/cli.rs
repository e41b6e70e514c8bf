use std::process::{Command, Output};

fn pga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pga")).args(args).output().expect("pga runs")
}

#[test]
fn potts_all_agrees() {
    let out = pga(&["potts", "--p", "2", "--sites", "3", "--x", "2", "--method", "all", "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["results"]["values"]["integral"]["exact"], "66/1");
    assert_eq!(doc["params"]["sites"], 3);
}

#[test]
fn verify_exits_zero() {
    let out = pga(&["verify", "--p", "3", "--modes", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--p", "0"][..],
        &["potts", "--p", "1", "--sites", "1", "--x", "2"],
        &["potts", "--p", "1", "--sites", "3", "--x", "abc"],
        &["verify", "--p", "4", "--modes", "5", "--cap", "100"],
        &["qgroup", "--p", "2", "--alpha", "0", "--beta", "0", "--sl"],
        &["heat", "--p", "2", "--h", "0,1", "--time", "1", "--steps", "0"],
        &["nonsense"],
    ] {
        let out = pga(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn csv_output() {
    let out = pga(&["potts", "--p", "1", "--sites", "4", "--x", "3", "--method", "closed", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // (3 + 1)^4 + (3 - 1)^4
    assert_eq!(text, "p,N,x,method,value_re,value_im\n1,4,3,closed,272,0\n");
}

#[test]
fn seed_is_respected() {
    let a = pga(&["verify", "--p", "2", "--seed", "1"]);
    let b = pga(&["verify", "--p", "2", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["params"]["seed"], 1);
}
