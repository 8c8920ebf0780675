use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn l2cox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l2cox")).args(args).env_remove("L2COX_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn growth_of_infinite_dihedral() {
    let o = l2cox(&["growth", config("dinfty.json").to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(1+t)/(1-t)"), "{out}");
    assert!(out.contains("rho = 1"), "{out}");
}

#[test]
fn formal_euler_characteristic_of_the_square() {
    let o = l2cox(&["euler", config("square.json").to_str().unwrap(), "--formal"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(1-t)^2/(1+t)^2"), "{out}");
    assert!(out.contains("identity check: PASS"), "{out}");
}

#[test]
fn betti_estimate_for_infinite_dihedral() {
    let sys = config("dinfty.json");
    let o = l2cox(&["betti", sys.to_str().unwrap(), "--i", "0", "--t", "1/2", "--cellulation", "dual", "--radius", "10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let value: f64 = out.split("estimate = ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 1.0 / 3.0).abs() < 1e-2, "{out}");
    assert!(out.contains("residual") && out.contains("scheme interior"), "{out}");
}

#[test]
fn sweep_is_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let sys = config("square.json");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = l2cox(&["sweep", sys.to_str().unwrap(), "--i", "0", "--t", "1/2,2", "--radius", "4", "-o", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "system_hash,cellulation,scheme,radius,i,t,estimate,residual,c_i_t,chi_t");
    assert_eq!(lines.len(), 3);
}

#[test]
fn cache_directory_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let sys = config("square.json");
    let args = ["betti", sys.to_str().unwrap(), "--i", "2", "--t", "2", "--radius", "4", "--cache-dir", dir.path().to_str().unwrap()];
    let first = stdout(&l2cox(&args));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(first, stdout(&l2cox(&args)));
}

#[test]
fn verify_and_duality_run() {
    let o = l2cox(&["verify", "--cases", "20", "--radius", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all identities hold"));
    let o = l2cox(&["duality", config("square.json").to_str().unwrap(), "--t", "2", "--radius", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn building_checks_pass() {
    let o = l2cox(&["building", config("dinfty.json").to_str().unwrap(), "--q", "2", "--radius", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("chambers: 253"), "{out}");
    assert!(out.contains("0 irregular") && out.contains("0 mismatches"), "{out}");
}

#[test]
fn validation_errors_exit_with_one() {
    let sys = config("dinfty.json");
    for t in ["-1/2", "0", "abc"] {
        let o = l2cox(&["betti", sys.to_str().unwrap(), "--i", "0", "--t", t]);
        assert_eq!(o.status.code(), Some(1), "t = {t}");
    }
    assert_eq!(l2cox(&["building", config("a2.json").to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(l2cox(&["growth", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(l2cox(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn solver_failures_exit_with_two() {
    let sys = config("square.json");
    let o = l2cox(&["betti", sys.to_str().unwrap(), "--i", "1", "--t", "1/2", "--radius", "6", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn warns_near_the_radius_of_convergence() {
    let o = l2cox(&["betti", config("pentagon.json").to_str().unwrap(), "--i", "0", "--t", "19/50", "--radius", "2"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
