use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn randcirc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randcirc"))
        .args(args)
        .current_dir(dir)
        .env_remove("RANDCIRC_SEED")
        .output()
        .expect("spawn randcirc")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&randcirc(&["reduce", "--frobnicate", "1"], dir.path())), 1);
    assert_eq!(code(&randcirc(&["no-such-command"], dir.path())), 1);
    assert_eq!(code(&randcirc(&["--help"], dir.path())), 0);
}

#[test]
fn bad_values_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["reduce", "--n", "x"][..],
        &["reduce", "--eta", "0.3"],
        &["hiding-check", "--family", "HAAR"],
        &["simulate", "--circuit", "missing.txt"],
    ] {
        let o = randcirc(args, dir.path());
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn noiseless_reduce_on_constant_sign() {
    let dir = tempfile::tempdir().unwrap();
    let args =
        ["reduce", "--n", "2", "--m", "4", "--delta", "0", "--eta", "0", "--sign", "constant", "--out", "ledger.csv"];
    let o = randcirc(&args, dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = randcirc(
        &["reduce", "--n", "2", "--m", "4", "--delta", "0", "--sign", "balanced", "--out", "ledger.csv"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ledger = std::fs::read_to_string(dir.path().join("ledger.csv")).unwrap();
    let lines: Vec<&str> = ledger.lines().collect();
    assert_eq!(lines.len(), 3, "header written once:\n{ledger}");
    assert!(lines[0].starts_with("seed,family,sum,verdict"));
    assert!(lines[1].contains(",AT_LEAST_THRESHOLD,AT_LEAST_THRESHOLD,"));
    assert!(lines[2].contains(",ZERO,ZERO,"));
    assert!(dir.path().join("ledger.csv.meta").exists());
}

#[test]
fn p_theta_scan_has_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = randcirc(&["p-theta-scan", "--n", "2", "--m", "4", "--grid", "50", "--seed", "3"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert_eq!(text.lines().next(), Some("θ,p_theta,path_sum"));
}

#[test]
fn outputs_are_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["p-theta-scan", "robust-fit-trials", "sample-draw"] {
        let a = randcirc(&[cmd, "--n", "2", "--trials", "5", "--seed", "17"], dir.path());
        let b = randcirc(&[cmd, "--n", "2", "--trials", "5", "--seed", "17"], dir.path());
        assert_eq!(code(&a), 0, "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let a = randcirc(&["robust-fit-trials", "--trials", "5", "--seed", "1"], dir.path());
    let b = randcirc(&["robust-fit-trials", "--trials", "5", "--seed", "2"], dir.path());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn env_seed_is_used_when_no_flag_given() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_randcirc"));
        c.args(["sample-draw", "--n", "2"]).current_dir(dir.path()).env_remove("RANDCIRC_SEED");
        if let Some(v) = env {
            c.env("RANDCIRC_SEED", v);
        }
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("9")), randcirc(&["sample-draw", "--n", "2", "--seed", "9"], dir.path()).stdout);
    assert_ne!(run(Some("9")), run(None));
}

#[test]
fn manifest_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "# scan\nn = 2\nm = 4\ngrid = 7\nout = scan.csv\n").unwrap();
    let o = randcirc(&["p-theta-scan", "--config", "run.cfg", "--grid", "9"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert_eq!(text.lines().count(), 10);
    std::fs::write(dir.path().join("bad.cfg"), "colour = blue\n").unwrap();
    assert_eq!(code(&randcirc(&["p-theta-scan", "--config", "bad.cfg"], dir.path())), 1);
}

#[test]
fn simulate_reads_circuit_files() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = randcirc::sim::textfmt::write_circuit(&{
        let mut c = randcirc::Circuit::new(2, randcirc::InitialState::AllZero);
        c.push(randcirc::Gate::h(0)).unwrap();
        c.push(randcirc::Gate::cz(0, 1).unwrap()).unwrap();
        c
    });
    std::fs::write(dir.path().join("c.txt"), circuit).unwrap();
    let o = randcirc(&["simulate", "--circuit", "c.txt"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("00,5.0000000000000"));
}

#[test]
fn every_subcommand_smoke_runs_quickly() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["simulate", "--n", "3", "--family", "IQP"],
        &["sample-draw", "--n", "2", "--family", "HAAR"],
        &["p-theta-scan", "--n", "2", "--family", "IQP", "--grid", "10"],
        &["polyfit-check", "--n", "2", "--grid", "20"],
        &["robust-fit-trials", "--d", "2", "--eta", "0", "--trials", "10"],
        &["reduce", "--n", "2", "--m", "4", "--family", "HAAR", "--out", "l.csv"],
        &["hiding-check", "--n", "2", "--trials", "20", "--family", "IQP"],
        &["tvd-report", "--count", "5000", "--bootstrap", "20", "--tvd-cap", "0.3"],
        &["ising-check", "--n", "3", "--trials", "10"],
    ];
    for args in runs {
        let start = Instant::now();
        let o = randcirc(args, dir.path());
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(start.elapsed() < Duration::from_secs(60), "{args:?} too slow");
        assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
    }
}
