use std::path::Path;
use std::process::{Command, Output};

fn isogonal(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isogonal"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const ENNEPER_TRACE: [&str; 9] = [
    "trace", "--surface", "enneper", "--mode", "isogonal", "--phi", "0.5236", "--start", "0,1",
];

#[test]
fn verify_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = isogonal(&["verify", "all"], dir.path());
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    for id in ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "algebraic_identities"] {
        assert!(text.contains(&format!("PASS {id}:")), "missing {id}");
    }
    assert!(text.ends_with("all checks passed\n"));
}

#[test]
fn verify_writes_one_report_per_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let o = isogonal(&["verify", "S2", "--out", "reports"], dir.path());
    assert!(o.status.success());
    let report = std::fs::read_to_string(dir.path().join("reports/verify_S2.txt")).unwrap();
    assert!(report.starts_with("PASS S2:"));
    assert!(report.contains("deg)"));
}

#[test]
fn trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = isogonal(&ENNEPER_TRACE, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("s,t,z,x,y,z_pos,kg,kn,taug,phi,theta,kappa,tau"));
    assert_eq!(lines.count(), 1001);
    assert!(!csv.contains('\r'));
}

#[test]
fn trace_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = ENNEPER_TRACE.to_vec();
    a.extend(["--name", "a.csv"]);
    let mut b = ENNEPER_TRACE.to_vec();
    b.extend(["--name", "b.csv"]);
    assert!(isogonal(&a, dir.path()).status.success());
    assert!(isogonal(&b, dir.path()).status.success());
    let ra = std::fs::read(dir.path().join("a.csv")).unwrap();
    let rb = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(ra, rb);
}

fn verdicts(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| {
            let (name, rest) = l.split_once(": ")?;
            let word = rest.split_whitespace().next()?;
            matches!(word, "true" | "false").then(|| format!("{name}={word}"))
        })
        .collect()
}

#[test]
fn csv_round_trip_keeps_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    for (surface, start, phi) in [("enneper", "0,1", "0.5235987755982988"), ("bonnet", "0,0.3", "0.5235987755982988")] {
        let trace_args = ["--surface", surface, "--mode", "isogonal", "--phi", phi, "--start", start];
        let mut t = vec!["trace"];
        t.extend(trace_args);
        assert!(isogonal(&t, dir.path()).status.success());
        let mut direct = vec!["classify"];
        direct.extend(trace_args);
        let direct = stdout(&isogonal(&direct, dir.path()));
        let reread = isogonal(&["classify", "--surface", surface, "--input", "trace.csv"], dir.path());
        assert!(reread.status.success(), "{}", String::from_utf8_lossy(&reread.stderr));
        let v = verdicts(&direct);
        assert_eq!(v.len(), 7, "{direct}");
        assert_eq!(v, verdicts(&stdout(&reread)));
    }
}

#[test]
fn export_writes_mesh_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let o = isogonal(
        &[
            "export", "--surface", "enneper", "--mode", "geodesic", "--start", "0,0", "--dir", "1,0.5", "--dir",
            "1,-0.5", "--span", "-1,1", "--grid", "50", "--out", "fig",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let obj = std::fs::read_to_string(dir.path().join("fig/enneper.obj")).unwrap();
    let objects: Vec<&str> = obj.lines().filter(|l| l.starts_with("o ")).collect();
    assert_eq!(objects, ["o enneper", "o curve_0", "o curve_1"]);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2 * 49 * 49);
    assert_eq!(obj.lines().filter(|l| l.starts_with("l ")).count(), 2);
}

#[test]
fn config_file_supplies_the_curve() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# helix surface isogonal\nsurface = helix_surface\nr_beta = 1\nstart_t = 0\nstart_z = 0.1\nphi = 0.3\n",
    )
    .unwrap();
    let o = isogonal(&["classify", "--config", "run.cfg", "--frame", "principal"], dir.path());
    let text = stdout(&o);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(text.contains("pseudo-geodesic: true"), "{text}");
    assert!(text.contains("generalized helix: true"), "{text}");
}

#[test]
fn usage_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["verify", "S9"],
        vec!["trace", "--surface", "enneper", "--start", "0,1"],
        vec!["trace", "--surface", "torus", "--phi", "0.1", "--start", "0,1"],
        vec!["trace", "--surface", "enneper", "--mode", "pseudo-geodesic", "--theta", "2", "--phi", "0", "--start", "0,1"],
        vec!["verify", "all", "--config", "missing.cfg"],
    ] {
        let o = isogonal(&args, dir.path());
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(!o.stderr.is_empty(), "{args:?} should explain itself");
    }
    assert!(!dir.path().join("trace.csv").exists());
}

#[test]
fn tolerance_override_changes_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["classify", "--surface", "bonnet", "--mode", "isogonal", "--phi", "0.5235987755982988", "--start", "0,0.3"];
    let strict = stdout(&isogonal(&base, dir.path()));
    assert!(strict.contains("pseudo-geodesic: false"), "{strict}");
    let mut loose = base.to_vec();
    loose.extend(["--tol-abs", "1"]);
    let loose = stdout(&isogonal(&loose, dir.path()));
    assert!(loose.contains("pseudo-geodesic: true"), "{loose}");
}
