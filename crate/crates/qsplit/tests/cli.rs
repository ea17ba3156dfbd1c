use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsplit"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("QSPLIT_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn split_blowup_passes_divisibility() {
    let o = qsplit(&["split", "--conn", "examples/blowup.conn", "--prime", "3", "--order", "60", "--alpha", "1", "--beta", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("\ndivisibility: pass\n"));
    assert!(text.contains("\nverdict: pass\n"));
}

#[test]
fn split_blowup_fails_divisibility_at_five() {
    let o = qsplit(&["split", "--conn", "examples/blowup.conn", "--prime", "5", "--order", "12", "--alpha", "1", "--beta", "2"]);
    assert_eq!(code(&o), 2);
    let text = stdout(&o);
    assert!(text.contains("\ndivisibility: fail\n"));
    assert!(text.contains("divisibility.location: E"), "{text}");
}

#[test]
fn extend_non_existence_is_obstructed() {
    let o = qsplit(&["extend", "--conn", "examples/non_existence.conn", "--e0", "examples/diag10.mat"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("obstructed at order 1"));
}

#[test]
fn extend_non_uniqueness_reports_the_kernel() {
    let o = qsplit(&["extend", "--conn", "examples/non_uniqueness.conn", "--e0", "examples/diag1100.mat", "--order", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("non-unique at order 1 (kernel dimension 3)"));
    assert!(text.contains("\nflatness: pass\n"));
    assert!(text.contains("\nidempotent: pass\n"));
}

#[test]
fn usage_errors_exit_one() {
    let o = qsplit(&["frobnicate"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(code(&qsplit(&[])), 1);
    assert_eq!(code(&qsplit(&["split"])), 1);
    assert_eq!(code(&qsplit(&["split", "--conn", "examples/cp1.conn", "--alpha", "1"])), 1);
    assert_eq!(code(&qsplit(&["--help"])), 0);
    assert_eq!(code(&qsplit(&["--version"])), 0);
}

#[test]
fn defaults_appear_in_the_report() {
    let o = qsplit(&["extend", "--conn", "examples/non_uniqueness.conn", "--e0", "examples/diag1100.mat"]);
    let text = stdout(&o);
    assert!(text.contains("\n[parameters]\norder: 64\nprime: 3\n"), "{text}");
    let o = qsplit(&["verify", "--reference", "blowup_E23"]);
    assert!(stdout(&o).contains("\norder: 64\nprime: 3\n"));
}

#[test]
fn reports_are_reproducible() {
    let args = ["split", "--conn", "examples/cp1.conn", "--order", "12"];
    let a = qsplit(&args);
    let b = qsplit(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let timed = qsplit(&["split", "--conn", "examples/cp1.conn", "--order", "12", "--timing"]);
    let (plain, timed) = (stdout(&a), stdout(&timed));
    let digest = |s: &str| s.lines().find(|l| l.starts_with("digest: ")).unwrap().to_string();
    assert_eq!(digest(&plain), digest(&timed));
    assert!(timed.contains("\nelapsed_ms: "));
    assert!(!plain.contains("elapsed_ms"));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    qsplit(&["split", "--conn", "examples/cp1.conn", "--out", out.to_str().unwrap(), "--order", "12"]);
    assert_eq!(std::fs::read_to_string(out).unwrap(), plain);
}

#[test]
fn inputs_are_digested() {
    let o = qsplit(&["split", "--conn", "examples/cp1.conn", "--order", "4"]);
    let text = stdout(&o);
    let bytes = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/cp1.conn")).unwrap();
    assert!(text.contains(&format!("examples/cp1.conn: sha256={}", qsplit::report::sha256_hex(&bytes))));
}

#[test]
fn file_errors_name_path_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conn");
    std::fs::write(&path, "size = 2\nconvention = \"minus\"\n\n[[coefficient]]\nindex = 0\nrows = [[\"1\", \"one\"], [\"0\", \"1\"]]\n").unwrap();
    let o = qsplit(&["split", "--conn", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains(&format!("{}:6: not a rational number", path.display())), "{}", stderr(&o));
    let o = qsplit(&["split", "--conn", "examples/missing.conn"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("examples/missing.conn"));
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = qsplit(&["ring", "validate", "examples/cp1.ring", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\nvalidation: pass\nidempotents: pass\n"));
}

#[test]
fn plots_are_named_from_the_digest() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qsplit"))
        .args(["verify", "--series", "examples/h21.series", "--plot"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("QSPLIT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let digest = text.lines().find_map(|l| l.strip_prefix("digest: sha256=")).unwrap();
    let expected: PathBuf = dir.path().join(format!("{}-series.svg", &digest[..16]));
    assert!(text.contains(&format!("plot: {}", expected.display())));
    let svg = std::fs::read_to_string(expected).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn ring_and_slice_commands() {
    let o = qsplit(&["ring", "validate", "examples/blowup.ring"]);
    assert_eq!(code(&o), 0);
    let dir = tempfile::tempdir().unwrap();
    let conn = dir.path().join("slice.conn");
    let o = qsplit(&["conn", "build", "examples/blowup.ring", "--degree", "2", "--write", conn.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("\n[slice]\n0: q^1*1\n1: e\n2: q^-1*pt\n"), "{}", stdout(&o));
    let o = qsplit(&["split", "--conn", conn.to_str().unwrap(), "--order", "20", "--alpha", "1", "--beta", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("divisibility: pass"));
}

#[test]
fn broken_ring_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ring");
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/cp1.ring")).unwrap();
    std::fs::write(&path, text.replace("{ class = \"1\", q = 2, coeff = \"1\" }", "{ class = \"1\", q = 1, coeff = \"1\" }")).unwrap();
    let o = qsplit(&["ring", "validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("validation: fail"));
}

#[test]
fn verify_decay_and_slope() {
    let o = qsplit(&["verify", "--reference", "blowup_E13", "--prime", "5", "--order", "10", "--alpha", "1", "--beta", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("log_decay.location: k = 8 needs val >= 1 has 0"));
    let o = qsplit(&["verify", "--reference", "blowup_E12", "--order", "30", "--slope", "1/2", "--gamma", "3", "--k-min", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("slope_floor: pass"));
    let o = qsplit(&["verify", "--reference", "blowup_E12", "--order", "30", "--slope", "1/2", "--gamma", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("slope_floor.location: k = 17 has val 6 below 13/2"), "{}", stdout(&o));
}

#[test]
fn bgamma_commands() {
    let o = qsplit(&["bgamma", "cohomology", "--p", "2", "--m", "3", "--to", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("H^0: R\nH^1: 0\nH^2: R/8\nH^3: 0\nH^4: R/8\n"));
    let o = qsplit(&["bgamma", "cup", "--p", "3", "--m", "1", "--a", "2", "--b", "2"]);
    assert!(stdout(&o).contains("product: 1 t^2\n"));
    assert!(stdout(&o).contains("leibniz: pass"));
    let o = qsplit(&["bgamma", "restrict", "--p", "3", "--m", "1", "--degree", "2"]);
    assert!(stdout(&o).contains("image: 1 t^1 over Z/3^1\n"));
    assert!(stdout(&o).contains("chain_map: pass"));
    assert_eq!(code(&qsplit(&["bgamma", "cohomology", "--p", "4", "--m", "1"])), 1);
}

#[test]
fn diag_class_invariance() {
    let o = qsplit(&["diag-class", "--complex", "examples/cone.complex", "--p", "3", "--m", "1", "--trials", "10", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("invariance: pass"));
    assert!(text.contains("cocycle: pass"));
    let o = qsplit(&["diag-class", "--complex", "examples/swap.complex", "--p", "2", "--m", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no [cocycle] section"));
}

#[test]
fn reference_writes_a_series_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h21.series");
    let o = qsplit(&["reference", "cp1_H21", "--order", "4", "--write", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let s = qsplit::format::parse_series(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(s, qsplit_core::reference::reference_series(qsplit_core::reference::ReferenceSeries::Cp1H21, 4));
    assert_eq!(code(&qsplit(&["reference", "nonsense"])), 1);
}
