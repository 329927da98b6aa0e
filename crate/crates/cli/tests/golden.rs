//! Reports of the shipped examples against checked-in expectations.
//! `UPDATE_GOLDEN=1 cargo test -p excon-cli --test golden` rewrites them.

use std::path::{Path, PathBuf};
use std::process::Command;

use excon_cli::report::Report;

fn corpus(file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(file).display().to_string()
}

fn data(file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(file).display().to_string()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn excon(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_excon")).args(args).output().expect("runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn golden(name: &str, args: &[&str], code: i32) {
    let (got, stdout, stderr) = excon(args);
    assert_eq!(got, code, "{name}: stderr {stderr}");
    let text = if stdout.is_empty() { stderr } else { stdout };
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(text, want, "{name} differs from its golden file");
}

#[test]
fn check_reports() {
    golden("check_trivial.json", &["check", &corpus("trivial.exc"), "path_a3", "--json"], 0);
    golden("check_morita_ii.json", &["check", &corpus("morita_ii.exc"), "morita_ii", "--json"], 0);
    golden("check_six.json", &["check", &corpus("six.exc"), "six", "--json"], 0);
}

#[test]
fn nct_reports() {
    golden("nct_morita_i.json", &["nct", &corpus("morita_i.exc"), "morita_i", "--oracle", "morita", "--json"], 0);
    golden("nct_morita_ii.json", &["nct", &corpus("morita_ii.exc"), "morita_ii", "--oracle", "morita", "--json"], 0);
    golden("nct_pure_cubic.json", &["nct", &corpus("pure.exc"), "pure_cubic", "--oracle", "pure", "--json"], 0);
    golden("nct_trivial.json", &["nct", &corpus("trivial.exc"), "matrices", "--json"], 0);
}

#[test]
fn tor_reports() {
    golden("tor_six.json", &["tor", &corpus("six.exc"), "lambda", "lambda", "--max-degree", "3", "--json"], 0);
    golden(
        "tor_six_f101.json",
        &["tor", &corpus("six.exc"), "lambda", "lambda", "--max-degree", "3", "--field", "Fp:101", "--json"],
        0,
    );
    golden("tor_field.json", &["tor", &corpus("trivial.exc"), "K", "K", "--json"], 0);
    golden("tor_degree_zero.json", &["tor", &corpus("trivial.exc"), "D", "D", "--max-degree", "0", "--json"], 0);
}

#[test]
fn theorem1_reports() {
    golden("theorem1_morita_ii.json", &["theorem1", &corpus("morita_ii.exc"), "morita_ii", "--json"], 0);
    golden("theorem1_augmentation.json", &["theorem1", &corpus("augmentation.exc"), "augmentation", "--json"], 0);
    golden("theorem1_six.json", &["theorem1", &corpus("six.exc"), "six", "--max-degree", "4", "--json"], 0);
}

#[test]
fn pd_and_rigid_reports() {
    golden("pd_six.json", &["pd", &corpus("six.exc"), "six", "--max-degree", "8", "--json"], 0);
    golden("pd_module.json", &["pd", &corpus("six.exc"), "lambda:left", "--json"], 0);
    golden("rigid_unit.json", &["rigid", &corpus("extension.exc"), "unit2", "--json"], 0);
    golden("rigid_x.json", &["rigid", &corpus("extension.exc"), "x", "--json"], 0);
}

#[test]
fn text_report() {
    golden("nct_morita_ii.txt", &["nct", &corpus("morita_ii.exc"), "morita_ii", "--oracle", "morita"], 0);
}

#[test]
fn input_errors_exit_with_two() {
    golden("malformed.err", &["check", &data("malformed.exc"), "A", "--json"], 2);
    let (code, _, err) = excon(&["check", &data("malformed.exc"), "A"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"]["kind"], "SyntaxError");
    assert_eq!((v["error"]["line"].as_u64(), v["error"]["col"].as_u64()), (Some(3), Some(1)));

    let (code, _, err) = excon(&["theorem1", &corpus("morita_ii.exc"), "nowhere"]);
    assert_eq!(code, 2);
    assert!(err.contains("UsageError"), "{err}");

    let (code, _, err) = excon(&["nct", &corpus("trivial.exc"), "path_a3", "--oracle", "morita"]);
    assert_eq!(code, 2);
    assert!(err.contains("OracleMismatch"), "{err}");

    let (code, _, _) = excon(&["check", &data("no_such_file.exc"), "x"]);
    assert_eq!(code, 2);
    let (code, _, _) = excon(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn dimension_cap_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_excon"))
        .args(["check", &corpus("six.exc"), "six"])
        .env("EXCON_MAX_DIM", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the limit"));
}

#[test]
fn expect_pass_turns_negative_answers_into_failures() {
    let args = ["theorem1", &corpus("augmentation.exc"), "augmentation"];
    assert_eq!(excon(&args).0, 0);
    let mut strict = args.to_vec();
    strict.extend(["--expect", "pass"]);
    assert_eq!(excon(&strict).0, 1);
    assert_eq!(excon(&["check", &corpus("trivial.exc"), "field_itself", "--expect", "pass"]).0, 0);
}

#[test]
fn emitted_algebra_loads_back() {
    let dir = std::env::temp_dir().join(format!("excon-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nct.exc");
    let (code, _, err) = excon(&[
        "nct",
        &corpus("morita_ii.exc"),
        "morita_ii",
        "--emit-algebra",
        &path.display().to_string(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&path).unwrap();
    let env = excon::corpus::load(&text, excon::field::Rationals).unwrap();
    assert_eq!(env.algebra("morita_ii_nct").unwrap().dim(), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_round_trip_through_json() {
    for name in ["theorem1_six.json", "rigid_x.json", "pd_six.json", "nct_morita_ii.json", "tor_six_f101.json"] {
        let text = std::fs::read_to_string(golden_path(name)).unwrap();
        let report: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(report.to_json(), text, "{name}");
    }
}
