//! End-to-end tests of the `binpr` binary: file formats, exit codes and
//! bitwise reproducibility of seeded runs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binpr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_binpr"))
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("binpr-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("spawn binpr");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstdout: {}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn measure_then_solve_roundtrip() {
    let dir = tempdir("solve");
    let truth = dir.join("x.txt");
    std::fs::write(&truth, "0100100000\n").unwrap();
    let b = dir.join("b.csv");
    run_ok(binpr()
        .args(["measure", "--scheme", "classic"])
        .arg("--input")
        .arg(&truth)
        .arg("--out")
        .arg(&b));
    let csv = read(&b);
    assert!(csv.starts_with("index,value\n"));
    assert_eq!(csv.lines().count(), 11);
    // lag-0 measurement is the support count
    assert!(csv.lines().nth(1).unwrap().starts_with("0,2"));

    let out = run_ok(binpr()
        .args(["solve", "--n", "10", "--rho1", "1e-2", "--rho2", "1e-2", "--restarts", "5"])
        .arg("--measurements")
        .arg(&b));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(json["x_star"].as_array().unwrap().len(), 10);
}

#[test]
fn denoise_reports_an_outcome_row() {
    let dir = tempdir("denoise");
    let truth = dir.join("x.txt");
    std::fs::write(&truth, "00101000000000000000\n").unwrap();
    let recovered = dir.join("rec.txt");
    let out = run_ok(binpr()
        .args(["denoise", "--scheme", "rounding", "--snr-db", "24", "--seed", "5"])
        .arg("--truth")
        .arg(&truth)
        .arg("--out-recovered")
        .arg(&recovered));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("scheme,n,m,support,snr_db,trial,success,residual,iters"));
    assert!(stdout.contains("rounding,20,20,2,24,0,1,"));
    let rec = read(&recovered);
    assert_eq!(rec.trim().len(), 20);
    assert_eq!(rec.trim().matches('1').count(), 2);
}

#[test]
fn grid_runs_are_bitwise_reproducible_and_isolated() {
    let dir = tempdir("grid");
    let args = |out: &Path, per_trial: &Path, schemes: &str| {
        let mut cmd = binpr();
        cmd.args([
            "grid",
            "--n",
            "16",
            "--supports",
            "1,2",
            "--snrs",
            "inf,20",
            "--trials",
            "6",
            "--seed",
            "11",
            "--schemes",
            schemes,
        ])
        .arg("--out")
        .arg(out)
        .arg("--per-trial")
        .arg(per_trial);
        cmd
    };
    let a = dir.join("a.csv");
    let at = dir.join("a_trials.csv");
    let b = dir.join("b.csv");
    let bt = dir.join("b_trials.csv");
    run_ok(&mut args(&a, &at, "rounding,naive"));
    run_ok(&mut args(&b, &bt, "rounding,naive"));
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&at), read(&bt));
    assert!(read(&a).starts_with("support,snr_db,scheme,rate,trials\n"));
    // 2 schemes x 2 supports x 2 snrs
    assert_eq!(read(&a).lines().count(), 9);

    // dropping a scheme leaves the other scheme's per-trial rows unchanged
    let c = dir.join("c.csv");
    let ct = dir.join("c_trials.csv");
    run_ok(&mut args(&c, &ct, "naive"));
    let full = read(&at);
    for line in read(&ct).lines().skip(1) {
        assert!(full.contains(line), "missing row: {line}");
    }
}

#[test]
fn gnuplot_matrix_emission() {
    let dir = tempdir("gnuplot");
    let out = dir.join("rates.csv");
    let prefix = dir.join("matrix");
    run_ok(binpr()
        .args([
            "grid",
            "--n",
            "12",
            "--supports",
            "1,2,3",
            "--snrs",
            "inf",
            "--trials",
            "4",
            "--seed",
            "2",
            "--schemes",
            "naive",
        ])
        .arg("--out")
        .arg(&out)
        .arg("--emit-gnuplot")
        .arg(&prefix));
    let matrix = read(&dir.join("matrix.naive.dat"));
    assert_eq!(matrix.lines().count(), 3);
    for line in matrix.lines() {
        assert_eq!(line.split_whitespace().count(), 1);
    }
}

#[test]
fn ambiguities_csv_matches_known_structure() {
    let out = run_ok(binpr().args(["ambiguities", "--n", "10", "--mode", "classic"]));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "support_count,num_classes,num_unique_classes,example_nonunique_canonical"
    );
    // supports 0..=3 fully unique at N=10
    for s in 0..=3usize {
        let row: Vec<&str> = lines[1 + s].split(',').collect();
        assert_eq!(row[0], s.to_string());
        assert_eq!(row[1], row[2], "support {s} should be fully unique");
        assert!(row[3].is_empty());
    }
}

#[test]
fn ambiguities_respects_the_cap() {
    let out = binpr()
        .args(["ambiguities", "--n", "24", "--mode", "classic"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn check_suite_passes_and_writes_json() {
    let dir = tempdir("check");
    let report = dir.join("report.json");
    run_ok(binpr()
        .args(["check", "--all", "--n-max", "6", "--restarts", "40", "--seed", "3"])
        .arg("--out")
        .arg(&report));
    let json: serde_json::Value = serde_json::from_str(&read(&report)).unwrap();
    let reports = json.as_array().unwrap();
    assert_eq!(reports.len(), 7);
    for r in reports {
        assert_eq!(r["counterexamples"].as_u64(), Some(0), "{r}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let out = binpr().args(["grid", "--n", "not-a-number"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = binpr().args(["no-such-subcommand"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stft_and_frog_measurements_flatten() {
    let dir = tempdir("stft");
    let truth = dir.join("x.txt");
    std::fs::write(&truth, "10110010\n").unwrap();
    let out = run_ok(binpr()
        .args(["measure", "--scheme", "stft", "--window-len", "3", "--hop", "2"])
        .arg("--input")
        .arg(&truth));
    let csv = String::from_utf8(out.stdout).unwrap();
    // R = ceil((8+3-1)/2) = 5 sections, 8 frequencies each
    assert_eq!(csv.lines().count(), 1 + 5 * 8);
    let out = run_ok(binpr()
        .args(["measure", "--scheme", "frog", "--hop", "2"])
        .arg("--input")
        .arg(&truth));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4 * 8);
}
