use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_systole-lab"));
    c.arg("--quiet");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("systole-lab-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a single JSON report")
}

#[test]
fn broken_off_exits_3_with_line_number() {
    let p = scratch("broken.off", "OFF\n3 1 0\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n");
    let o = run(&["analyze", path(&p)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    assert!(o.stdout.is_empty());
}

#[test]
fn asymmetric_mesh_exits_4() {
    let p = scratch("tet.off", "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
    assert_eq!(run(&["analyze", path(&p)]).status.code(), Some(4));
}

#[test]
fn flat_pillow_exits_5() {
    let p = scratch("flat.off", "OFF\n4 4 0\n1 0 0\n0 1 0\n-1 0 0\n0 -1 0\n3 0 1 2\n3 0 2 3\n3 1 0 3\n3 1 3 2\n");
    assert_eq!(run(&["analyze", path(&p)]).status.code(), Some(5));
}

#[test]
fn atom_of_mass_two_pi_exits_4() {
    let tau = std::f64::consts::TAU;
    let p = scratch(
        "heavy.json",
        &format!(r#"{{"atoms": [[0,0,1,{tau}], [0,0,-1,{tau}], [1,0,0,{m}], [-1,0,0,{m}]]}}"#, m = -tau),
    );
    let o = run(&["santalo", path(&p)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2π"));
}

#[test]
fn odd_metric_exits_4() {
    let p = scratch("odd.json", r#"{"harmonics": [[1, 0, 0.3]]}"#);
    assert_eq!(run(&["conformal", path(&p), "--level", "1"]).status.code(), Some(4));
}

#[test]
fn malformed_metric_exits_3() {
    let p = scratch("junk.json", r#"{"harmonics": [[2, 0]], "colour": 1}"#);
    assert_eq!(run(&["santalo", path(&p)]).status.code(), Some(3));
}

#[test]
fn round_sphere_analysis() {
    let off = run(&["generate", "icosphere", "--level", "3"]);
    assert!(off.status.success());
    let p = scratch("sphere.off", &String::from_utf8(off.stdout).unwrap());
    let o = run(&["analyze", path(&p), "--steiner", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert!(r["deficit"].as_f64().unwrap().abs() < 0.02);
    assert!(r["t"].as_f64().unwrap() < 0.01);
    assert_eq!(r["schema"], 1);
    assert!(r["tolerances"]["tau_pu"].as_f64().unwrap() > 0.0);
    assert_eq!(r["discretization"]["steiner"], 3);
}

#[test]
fn spheroid_analysis_writes_loop() {
    let off = run(&["generate", "ellipsoid", "--axes", "1,1,3", "--max-edge", "0.2"]);
    let p = scratch("e113.off", &String::from_utf8(off.stdout).unwrap());
    let lp = p.with_extension("obj");
    let o = run(&["analyze", path(&p), "--loop-obj", path(&lp)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert!(r["deficit"].as_f64().unwrap() > 0.5);
    assert!(r["sandwich"]["holds"].as_bool().unwrap());
    let obj = fs::read_to_string(&lp).unwrap();
    assert!(obj.lines().filter(|l| l.starts_with("v ")).count() > 10);
}

#[test]
fn constant_metric_santalo_equalities() {
    let p = scratch("round.json", "{}");
    let o = run(&["santalo", path(&p), "--level", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    for s in r["sides"].as_array().unwrap() {
        assert!(s["relative_error"].as_f64().unwrap() < 1e-12, "{s}");
    }
    let four_pi = 4.0 * std::f64::consts::PI;
    assert!((r["sides"][0]["lhs"].as_f64().unwrap() - four_pi).abs() < 1e-12);
    assert!(r["chain"]["holds"].as_bool().unwrap());
    assert!(r["variance"]["variance"].as_f64().unwrap() < 1e-24);
}

#[test]
fn ellipsoid_sweep_rows_and_determinism() {
    let spec = scratch(
        "ell.json",
        r#"{"name": "ell", "kind": "ellipsoid", "axes": [[1,1,1],[1,1,2],[1,1,3],[1,1,4],[1,1,5]], "edge_factor": 8}"#,
    );
    let a = run(&["sweep", path(&spec)]);
    let b = run(&["sweep", path(&spec), "--threads", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8(a.stdout).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.starts_with("family,param,sys,area,R,r,a,b,c,deficit,t,L,D,diam,status\n"));
}

#[test]
fn envelope_from_saved_rows() {
    let spec = scratch(
        "mixed.json",
        r#"[{"name": "ell", "kind": "ellipsoid", "axes": [[1,1,1],[1,1,1.5],[1,1,2],[1,1,3],[1,1,4]], "edge_factor": 8},
            {"name": "cap", "kind": "capped_cylinder", "aspects": [2, 4, 8], "edge_factor": 8}]"#,
    );
    let rows = spec.with_file_name("rows.json");
    assert!(run(&["sweep", path(&spec), "--format", "json", "-o", path(&rows)]).status.success());
    let o = run(&["envelope", "--rows", path(&rows), "--bins", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["envelope"]["bound"], "upper_bound");
    let bins = r["envelope"]["bins"].as_array().unwrap();
    let t_min = 0.1;
    for b in bins.iter().filter(|b| b["lo"].as_f64().unwrap() >= t_min) {
        assert!(b["lambda"].as_f64().unwrap() > 0.0, "{b}");
    }
}

#[test]
fn collapse_csv_shape() {
    let o = run(&["collapse", "--thickness", "0.4,0.2", "--edge-factor", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",ok")));
}

#[test]
fn missing_output_directory_is_rejected_before_work() {
    let p = scratch("round2.json", "{}");
    let o = run(&["santalo", path(&p), "-o", "/nonexistent/dir/out.json"]);
    assert_eq!(o.status.code(), Some(1));
}
