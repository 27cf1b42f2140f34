use std::process::{Command, Output};

fn symmoments(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symmoments"))
        .args(args)
        .env("SYMMOMENTS_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kostka_prints_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let o = symmoments(&["kostka", "--d", "2", "--l", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0:1 2:1 4:1\n");
}

#[test]
fn theta_table_matches_printed_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = symmoments(&["theta-table", "--d", "2", "--l", "3..8", "--format", "csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let thetas: Vec<&str> = out.lines().skip(1).map(|r| r.split(',').nth(3).unwrap()).collect();
    assert_eq!(
        thetas,
        ["0.918287938", "0.973534972", "0.991304348", "0.997132910", "0.999051362", "0.999685565"]
    );
    assert!(out.lines().nth(1).unwrap().contains("236/257"));
}

#[test]
fn theta_table_outside_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let o = symmoments(&["theta-table", "--d", "4", "--l", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("HypothesisViolated"));
    let o = symmoments(&["theta-table", "--d", "4", "--l", "1", "--unchecked"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not a proven exponent"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["kostka", "--d", "2"][..],
        &["unknown-command"],
        &["kostka", "--d", "2", "--l", "2", "--nope"],
        &["verify", "--suite", "no-such-suite"],
        &["coeffs", "--N", "0"],
        &["bqf", "--limit", "5"],
    ] {
        assert_eq!(symmoments(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cache_round_trip_and_thread_independence() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = symmoments(&["sympow", "--d", "2", "--N", "300"], dir.path());
    assert_eq!(fresh.status.code(), Some(0));
    let o = symmoments(&["coeffs", "--N", "500"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("delta_N500.csv").exists());
    let cached = symmoments(&["sympow", "--d", "2", "--N", "300"], dir.path());
    let single = symmoments(&["sympow", "--d", "2", "--N", "300", "--threads", "1"], dir.path());
    assert_eq!(stdout(&fresh), stdout(&cached));
    assert_eq!(stdout(&fresh), stdout(&single));
    let out = stdout(&fresh);
    assert_eq!(out.lines().next(), Some("n,lambda_sym_d"));
    assert_eq!(out.lines().nth(2), Some("2,-7.1875000000000000e-1"));
}

#[test]
fn moments_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["moments", "--d", "1", "--l", "2", "--x", "2e4", "--format", "csv"];
    let a = symmoments(&args, dir.path());
    let b = symmoments(&[&args[..], &["--threads", "1"]].concat(), dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let out = stdout(&a);
    assert_eq!(out.lines().next(), Some("x,S,fit,residual"));
    assert_eq!(out.lines().count(), 14);
}

#[test]
fn bqf_counts_theta_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = symmoments(&["bqf", "--form", "2,2,3", "--limit", "3"], dir.path());
    assert_eq!(stdout(&o), "n,r\n1,0\n2,2\n3,4\n");
    let o = symmoments(&["bqf", "--disc", "-20", "--chi", "1", "--limit", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows[0], "n,a_chi_re,a_chi_im");
    assert_eq!(rows.len(), 4);
    let o = symmoments(&["bqf", "--disc", "-23", "--form", "2,1,3", "--limit", "2000", "--verify"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let o = symmoments(&["bqf", "--disc", "-20", "--form", "1,1,1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_single_suite_and_failure_naming() {
    let dir = tempfile::tempdir().unwrap();
    let o = symmoments(&["verify", "--suite", "combinat"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("6 checks, 0 failed\n"));
    // Too few coefficients for the first 25 primes: a genuine failure.
    let o = symmoments(&["verify", "--suite", "local-u-factor", "--N", "50"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("check local-u-factor failed"));
}

#[test]
fn verify_all_at_default_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = symmoments(&["verify", "--suite", "all", "--N", "10000"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
