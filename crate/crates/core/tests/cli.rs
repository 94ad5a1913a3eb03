use std::sync::Mutex;

use cusp_torsion::cli::{
    self, EXIT_CONSISTENCY, EXIT_INPUT, EXIT_OK, EXIT_OUTPUT, EXIT_USAGE, EXIT_VALIDATION,
};

// the precision variable is process-wide
static ENV: Mutex<()> = Mutex::new(());

fn run(args: &[&str]) -> (i32, String, String) {
    let _g = ENV.lock().unwrap_or_else(|e| e.into_inner());
    run_unlocked(args)
}

fn run_unlocked(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cusp-torsion").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn csv_rows(s: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(s.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn ladder_output() {
    let (code, out, _) = run(&["--format", "csv", "ladder", "--d", "5", "--k", "2,1,1"]);
    assert_eq!(code, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(&rows[0][1], "4,2,1,-2,-4");
    assert_eq!(&rows[0][6], "45");
    let (code, out, _) = run(&["ladder", "--d", "3", "--flavor", "Spin", "--k", "1/2,1/2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("acyclic      true"));
    assert_eq!(run(&["ladder", "--d", "5", "--k", "3,2,1/2"]).0, EXIT_VALIDATION);
    assert_eq!(run(&["ladder", "--d", "5", "--k", "2,x"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["ladder", "--d", "5", "--flavor", "Pin", "--k", "1,1"]).0,
        EXIT_USAGE
    );
}

#[test]
fn defect_report_and_rep_file() {
    let (code, out, _) = run(&["--format", "structured", "defect", "--m", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("totalDefect=-1.8675061861794940663"));
    assert!(out.contains("consistent=true"));
    let (code, out, _) = run(&["--format", "structured", "defect", "--m", "2", "--kappa", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("totalDefect=0"));
    assert_eq!(run(&["defect", "--d", "5", "--m", "2"]).0, EXIT_VALIDATION);
    assert_eq!(run(&["defect", "--m", "0"]).0, EXIT_VALIDATION);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sym3.rep");
    let (code, rep, _) = run(&["rep", "--m", "3"]);
    assert_eq!(code, EXIT_OK);
    std::fs::write(&path, &rep).unwrap();
    let p = path.to_str().unwrap();
    let (code, echo, _) = run(&["rep", "--file", p]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(echo, rep);
    let by_m = run(&["--format", "structured", "defect", "--m", "3"]).1;
    let by_file = run(&["--format", "structured", "defect", "--rep-file", p]).1;
    let pick = |s: &str| {
        s.lines()
            .find(|l| l.starts_with("totalDefect="))
            .unwrap()
            .to_string()
    };
    assert_eq!(pick(&by_m), pick(&by_file));

    std::fs::write(&path, "n=1\ndimV=2\nN[1]=oops\n").unwrap();
    assert_eq!(run(&["rep", "--file", p]).0, EXIT_VALIDATION);
    let missing = dir.path().join("absent.rep");
    assert_eq!(run(&["rep", "--file", missing.to_str().unwrap()]).0, EXIT_INPUT);
}

#[test]
fn tables_have_expected_rows() {
    let (code, out, _) = run(&["--format", "csv", "table", "dim3-defect", "--m", "1..50"]);
    assert_eq!(code, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 50);
    assert!(!out.contains('\r'));
    for r in &rows {
        let total: f64 = r[4].parse().unwrap();
        let defect: f64 = r[3].parse().unwrap();
        assert!((total + defect).abs() < 1e-12);
    }
    let (code, out, _) = run(&["--format", "csv", "table", "bc-ratio", "--lmax", "20"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv_rows(&out).len(), 19);
    let (code, out, err) = run(&["--format", "csv", "table", "growth", "--m", "0..4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv_rows(&out).len(), 4);
    assert!(!err.is_empty());
    assert_eq!(
        run(&["table", "dim3-defect", "--m", "1..5", "--stride", "0"]).0,
        EXIT_USAGE
    );
}

#[test]
fn table_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let (code, out, _) = run(&[
        "--format",
        "csv",
        "table",
        "dim3-defect",
        "--m",
        "1..4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(csv_rows(&std::fs::read_to_string(&path).unwrap()).len(), 4);
    let bad = dir.path().join("no/such/dir/t.csv");
    assert_eq!(
        run(&[
            "table",
            "dim3-defect",
            "--m",
            "1..4",
            "--out",
            bad.to_str().unwrap()
        ])
        .0,
        EXIT_OUTPUT
    );
}

#[test]
fn parallel_and_serial_agree() {
    for args in [
        &["--format", "csv", "table", "growth", "--m", "1..12"][..],
        &["--format", "csv", "table", "bc-ratio", "--lmax", "40"][..],
        &["--format", "csv", "verify", "mv", "--seeds", "20", "--seed", "7"][..],
    ] {
        let par = run(args);
        let mut serial: Vec<&str> = vec!["--no-parallel"];
        serial.extend_from_slice(args);
        assert_eq!(par, run(&serial));
    }
}

#[test]
fn verify_suites_pass() {
    for suite in ["int6b", "cb", "vanest", "consistency"] {
        let (code, out, _) = run(&["--format", "csv", "verify", suite, "--lmax", "24", "--mmax", "5"]);
        assert_eq!(code, EXIT_OK, "{suite}: {out}");
        let rows = csv_rows(&out);
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| &r[4] == "PASS"), "{out}");
    }
    assert_eq!(run(&["verify", "nonsense"]).0, EXIT_USAGE);
}

#[test]
fn detline_values() {
    let (code, out, _) = run(&["--format", "csv", "detline", "shifted", "--a", "3", "--b", "4"]);
    assert_eq!(code, EXIT_OK);
    let v: f64 = csv_rows(&out)[0][2].parse().unwrap();
    assert!((v + 2.0 * 2f64.ln()).abs() < 1e-14);
    let (code, out, _) = run(&["--format", "csv", "detline", "cb", "--b", "1/2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("3.14159265358979"));
    assert_eq!(run(&["detline", "logdet", "--a", "0"]).0, EXIT_VALIDATION);
}

#[test]
fn torsion_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cx");
    std::fs::write(&path, "dims=1,1\nd[0]=3/2\n").unwrap();
    let (code, out, _) = run(&["--format", "csv", "torsion", "--file", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("3/2"));
}

#[test]
fn precision_handling() {
    assert_eq!(
        run(&["--precision", "10", "defect", "--m", "2"]).0,
        EXIT_VALIDATION
    );
    let _g = ENV.lock().unwrap_or_else(|e| e.into_inner());
    let explicit = run_unlocked(&[
        "--format",
        "structured",
        "--precision",
        "30",
        "defect",
        "--m",
        "2",
    ]);
    std::env::set_var(cli::PRECISION_ENV, "30");
    let from_env = run_unlocked(&["--format", "structured", "defect", "--m", "2"]);
    std::env::set_var(cli::PRECISION_ENV, "abc");
    let bad = run_unlocked(&["defect", "--m", "2"]).0;
    std::env::remove_var(cli::PRECISION_ENV);
    assert_eq!(explicit, from_env);
    assert_eq!(bad, EXIT_USAGE);
    let default = run_unlocked(&["--format", "structured", "defect", "--m", "2"]).1;
    assert!(default.len() > explicit.1.len());
}

#[test]
fn consistency_exit_code_is_distinct() {
    assert_ne!(EXIT_CONSISTENCY, EXIT_VALIDATION);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
}
