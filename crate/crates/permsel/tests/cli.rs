use std::path::Path;
use std::process::{Command, Output};

fn permsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permsel"))
        .args(args)
        .env_remove("PERMSEL_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn gen_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sel = path(dir.path(), "sel.txt");
    let o = permsel(&[
        "gen",
        "-k",
        "2",
        "-N",
        "4",
        "--target",
        "permutation",
        "--mode",
        "up_to",
        "--seed",
        "7",
        "--out",
        &sel,
    ]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("attempts="));
    let head = std::fs::read_to_string(&sel).unwrap();
    assert!(head.starts_with("4 2 "));

    let v = permsel(&["verify", &sel]);
    assert_eq!((code(&v), stdout(&v).trim()), (0, "OK"));
    let v = permsel(&["verify", &sel, "--target", "strong", "--mode", "exact"]);
    assert_eq!(stdout(&v).trim(), "OK");
}

#[test]
fn verify_reports_smallest_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let sel = path(dir.path(), "sel.txt");
    std::fs::write(&sel, "3 2 2\n0\n1 2\n").unwrap();
    let v = permsel(&["verify", &sel, "--target", "strong"]);
    assert_eq!(code(&v), 1);
    assert_eq!(stdout(&v).trim(), "FAIL X={1,2} x=1");
    let v = permsel(&["verify", &sel]);
    assert_eq!((code(&v), stdout(&v).trim()), (1, "FAIL X={0,1} pi=(1,0)"));
}

#[test]
fn malformed_selector_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let sel = path(dir.path(), "bad.txt");
    std::fs::write(&sel, "3 2 2\n0 5\n1\n").unwrap();
    assert_eq!(code(&permsel(&["verify", &sel])), 2);
    std::fs::write(&sel, "3 2 3\n0\n1\n").unwrap();
    assert_eq!(code(&permsel(&["verify", &sel])), 2);
    assert_eq!(
        code(&permsel(&["verify", &path(dir.path(), "missing.txt")])),
        2
    );
}

#[test]
fn budget_refusal_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let sel = path(dir.path(), "sel.txt");
    assert_eq!(
        code(&permsel(&[
            "gen", "-k", "2", "-N", "6", "-m", "40", "--out", &sel
        ])),
        0
    );
    let o = Command::new(env!("CARGO_BIN_EXE_permsel"))
        .args(["verify", &sel])
        .env("PERMSEL_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn gen_parameter_errors() {
    assert_eq!(code(&permsel(&["gen", "-k", "5", "-N", "4"])), 2);
    assert_eq!(code(&permsel(&["gen", "-k", "2", "-N", "4", "-m", "0"])), 1);
    assert_eq!(
        code(&permsel(&["gen", "-k", "2", "-N", "4", "--target", "kq"])),
        2
    );
    assert_eq!(code(&permsel(&["gen", "-k", "2"])), 2);
}

#[test]
fn prob_outputs() {
    let o = permsel(&["prob", "--ell", "3", "-k", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("p_exact=1/2 p_bound="));
    let o = permsel(&["prob", "--ell", "6", "-k", "4", "-q", "2", "--brute"]);
    assert!(stdout(&o).contains("p_exact=7/64") && stdout(&o).contains("p_bruteforce=7/64"));
    assert_eq!(
        code(&permsel(&["prob", "--ell", "3", "-k", "4", "-q", "3"])),
        2
    );
    let o = permsel(&["prob", "--ell", "3", "-k", "3"]);
    assert!(stdout(&o).starts_with("p_exact=26/27"));
}

#[test]
fn sweep_csv_header_and_rows() {
    let o = permsel(&["sweep", "-k", "2", "--ell-max", "4"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "ell,k,q,exact_num,exact_den,bound");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,2,,3,4,"));
}

#[test]
fn bound_and_minsize() {
    let o = permsel(&["bound", "-k", "2", "-N", "16"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("k=2 N=16 q=- gamma=0.5 "));
    assert!(s.contains("existence_certified=true"));
    let o = permsel(&[
        "minsize", "-k", "2", "-N", "2", "--mode", "exact", "--trials", "256",
    ]);
    assert_eq!(stdout(&o).trim(), "m=3");
    let o = permsel(&["minsize", "-k", "1", "-N", "4", "--target", "strong"]);
    assert_eq!(stdout(&o).trim(), "m=1");
}

#[test]
fn simulate_random_network() {
    let dir = tempfile::tempdir().unwrap();
    let trace = path(dir.path(), "trace.txt");
    let o = permsel(&[
        "simulate", "--random", "8", "0.2", "3", "--auto", "--trace", &trace,
    ]);
    assert_eq!(code(&o), 0, "{o:?}");
    let s = stdout(&o);
    assert!(s.contains("rounds_total=") && s.trim_end().ends_with("audit=pass"));
    let t = std::fs::read_to_string(&trace).unwrap();
    assert!(t.starts_with("round=0 tx={0} "));
}

#[test]
fn simulate_with_selector_file() {
    let dir = tempfile::tempdir().unwrap();
    let net = path(dir.path(), "net.txt");
    let sel = path(dir.path(), "sel.txt");
    std::fs::write(&net, "4\n0: 1\n1: 2\n2: 3\n3: 0\n").unwrap();
    assert_eq!(
        code(&permsel(&[
            "gen", "-k", "2", "-N", "4", "-m", "40", "--seed", "1", "--out", &sel
        ])),
        0
    );
    let o = permsel(&["simulate", "--network", &net, "--selector", &sel]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("selector_check=OK"));
    // Size mismatch between selector and network.
    let o = permsel(&[
        "simulate",
        "--network",
        &net,
        "--selector",
        &sel,
        "--kappa",
        "3",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn simulate_rejects_disconnected_network() {
    let dir = tempfile::tempdir().unwrap();
    let net = path(dir.path(), "net.txt");
    std::fs::write(&net, "3\n0: 1\n1:\n2: 0\n").unwrap();
    let o = permsel(&["simulate", "--network", &net, "--auto"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&permsel(&["simulate", "--auto"])), 2);
}
