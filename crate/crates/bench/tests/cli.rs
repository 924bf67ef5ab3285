use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qae-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QAE_LAB_WORKERS")
        .output()
        .unwrap()
}

fn plan(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("plans")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn shipped_plans_parse() {
    for name in ["default.json", "smoke.json"] {
        qae_lab::Plan::load(Path::new(&plan(name))).unwrap();
    }
    let shipped = qae_lab::Plan::load(Path::new(&plan("default.json"))).unwrap();
    assert_eq!(shipped, qae_lab::Plan::default());
}

#[test]
fn bounds_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["bounds", "--plan", &plan("smoke.json")], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "epsilon,alpha,mlae_lower,cp_upper,iqae_upper,fae_upper,cmc"
    );
    assert_eq!(csv.lines().count(), 4);

    let o = lab(&["plot"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("bounds.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn sweep_plot_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["sweep", "--plan", &plan("smoke.json"), "--workers", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = dir.path().join("sweep.csv");
    let rows = qae_lab::sweep::read_csv(&csv).unwrap();
    assert_eq!(rows.len(), 2 * 2 * (2 + 3 + 2));
    assert!(rows.iter().all(|r| !r.is_error()));

    let o = lab(&["plot", "--csv", csv.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let svgs = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("sweep_"))
        .count();
    assert_eq!(svgs, 2);

    let o = lab(
        &["replay", "--plan", &plan("smoke.json"), "--csv", csv.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn replay_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    lab(&["sweep", "--plan", &plan("smoke.json")], dir.path());
    let csv = dir.path().join("sweep.csv");
    let mut rows = qae_lab::sweep::read_csv(&csv).unwrap();
    rows[3].estimate = Some(rows[3].estimate.unwrap() + 1e-3);
    std::fs::write(&csv, qae_lab::sweep::to_csv(&rows).unwrap()).unwrap();
    let o = lab(
        &["replay", "--plan", &plan("smoke.json"), "--csv", csv.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("MISMATCH"));
}

#[test]
fn seed_flag_changes_rows() {
    let dir = tempfile::tempdir().unwrap();
    lab(&["sweep", "--plan", &plan("smoke.json")], &dir.path().join("a"));
    lab(
        &["sweep", "--plan", &plan("smoke.json"), "--seed", "8"],
        &dir.path().join("b"),
    );
    let a = std::fs::read(dir.path().join("a/sweep.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/sweep.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn error_rows_set_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plan.json");
    // 10 distribution qubits, the objective qubit and 10 ancillas exceed the simulator limit.
    std::fs::write(
        &path,
        r#"{"repetitions": 1,
            "distributions": [{"kind": "normal", "mu": 0.1, "sigma": 0.05, "n_qubits": 10}],
            "sweep": {"statistic": "mean",
                      "series": [{"algorithm": "cmc", "samples": [100], "alpha": 0.05},
                                 {"algorithm": "canonical", "ancillas": [10], "shots": 10}]}}"#,
    )
    .unwrap();
    let o = lab(&["sweep", "--plan", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = qae_lab::sweep::read_csv(&dir.path().join("sweep.csv")).unwrap();
    assert!(!rows[0].is_error());
    assert!(rows[1].is_error());
    assert!(rows[1].estimate.is_none());
}

#[test]
fn empty_csv_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    std::fs::write(&csv, "").unwrap();
    let o = lab(&["plot", "--csv", csv.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let svgs = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"))
        .count();
    assert_eq!(svgs, 0);
}

#[test]
fn bad_plan_and_row_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plan.json");
    std::fs::write(&path, r#"{"repetitons": 3}"#).unwrap();
    assert_eq!(
        lab(&["bounds", "--plan", path.to_str().unwrap()], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["replay", "--row", "d9-s0-p0-r0"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(lab(&["replay", "--row", "nonsense"], dir.path()).status.code(), Some(2));
}
