use std::fs;
use std::process::{Command, Output};

fn pcasim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcasim")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_presets_prints_forty_names() {
    let o = pcasim(&["list-presets"]);
    assert!(o.status.success());
    let names: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(names.len(), 40);
    assert!(names.contains(&"aggressive/low-uptake/combined".to_owned()));
}

#[test]
fn validate_reports_supply_check() {
    let o = pcasim(&["validate", "--preset", "aggressive/reference/antiangiogenic"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("supply s <= S_c: pass")), "{text}");
}

#[test]
fn run_writes_timeseries_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = pcasim(&[
        "run", "--preset", "mild/reference/none", "--nel", "16", "--horizon", "2", "--snapshot-every", "1", "--out",
        out.to_str().unwrap(), "--quiet",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("timeseries.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("t_day,V_c_mm2"));
    assert_eq!(lines.len(), 1 + 3);
    for name in ["fields_t0000.0.vtk", "fields_t0001.0.vtk", "fields_t0002.0.vtk", "scenario.toml"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("r{k}"));
        let o = pcasim(&[
            "run", "--preset", "aggressive/reference/cytotoxic", "--nel", "8", "--horizon", "1", "--out",
            out.to_str().unwrap(), "--quiet",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        files.push(fs::read(out.join("timeseries.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn config_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let o = pcasim(&["show-config", "--preset", "mild/poor-supply/combined"]);
    assert!(o.status.success());
    let path = dir.path().join("s.toml");
    fs::write(&path, stdout(&o)).unwrap();
    let again = pcasim(&["show-config", "--config", path.to_str().unwrap()]);
    assert!(again.status.success(), "{}", stderr(&again));
    assert_eq!(stdout(&o), stdout(&again));
}

#[test]
fn config_errors_exit_with_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let o = pcasim(&["show-config", "--preset", "mild/reference/none"]);
    let text = stdout(&o).replace("lambda =", "lamda =");
    let path = dir.path().join("bad.toml");
    fs::write(&path, text).unwrap();
    let o = pcasim(&["run", "--config", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("lamda") && err.contains("line"), "{err}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pcasim(&["run"]).status.code(), Some(2));
    assert_eq!(pcasim(&["validate", "--preset", "benign/reference/none"]).status.code(), Some(2));
    let o = pcasim(&["run", "--preset", "mild/reference/none", "--nel", "2", "--out", "/tmp/unused"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_with_one_and_reports_time() {
    let dir = tempfile::tempdir().unwrap();
    let o = pcasim(&["show-config", "--preset", "mild/reference/none"]);
    // a single Newton iteration cannot meet a 1e-14 tolerance on the first step
    let text = stdout(&o)
        .replace("newton_max_iterations = 20", "newton_max_iterations = 1")
        .replace("newton_tolerance = 0.001", "newton_tolerance = 1e-14")
        .replace("elements = 256", "elements = 8");
    let path = dir.path().join("hard.toml");
    fs::write(&path, text).unwrap();
    let out = dir.path().join("out");
    let o = pcasim(&["run", "--config", path.to_str().unwrap(), "--horizon", "1", "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("t = 0"), "{}", stderr(&o));
    // the rows observed before the failure are kept
    assert!(out.join("timeseries.csv").exists());
}

#[test]
fn quick_verification_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let o = pcasim(&["verify", "--quick", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}\n{}", stdout(&o), stderr(&o));
    let csv = fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("check,quantity,value,acceptance,passed\n"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")), "{csv}");
}
