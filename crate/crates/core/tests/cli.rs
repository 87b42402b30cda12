use std::fs;
use std::path::Path;
use std::process::Command;

use imbilliard::cli::{run, Format, Outcome, RunConfig, RunOptions, Verb};

fn go(verb: Verb, toml: &str, dir: &Path, tol: Option<f64>, grid: Option<usize>) -> imbilliard::Result<Outcome> {
    let cfg = RunConfig::parse(toml)?;
    let opts = RunOptions { out: Some(dir.to_path_buf()), tol, grid, format: Some(Format::Both) };
    run(verb, &cfg, &opts)
}

fn svg_paths(path: &Path) -> usize {
    let text = fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("valid XML");
    let root = doc.root_element();
    assert_eq!(root.attribute("viewBox"), Some("0 0 1000 1000"));
    doc.descendants().filter(|n| n.has_tag_name("path")).count()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const ELLIPSE_MAJOR: &str = r#"
[family]
family = "two_ellipse"
a = 2
b = 1
axis = "major"
[orbit]
param = 0.5
"#;

#[test]
fn orbit_ellipse_major_is_hyperbolic_with_trace_194() {
    let dir = tempfile::tempdir().unwrap();
    go(Verb::Orbit, ELLIPSE_MAJOR, dir.path(), None, None).unwrap();
    let rows = csv_rows(&dir.path().join("orbit_summary.csv"));
    assert_eq!(rows[0][7], "trace");
    let trace: f64 = rows[1][7].parse().unwrap();
    assert!((trace - 194.0).abs() < 1e-9);
    assert_eq!(rows[1][10], "hyperbolic");
    let steps = csv_rows(&dir.path().join("orbit.csv"));
    assert_eq!(steps.len(), 3);
    // Boundary plus one chord and one arc per step.
    assert_eq!(svg_paths(&dir.path().join("orbit.svg")), 5);
}

#[test]
fn orbit_circle_three_is_parabolic() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[family]\nfamily = \"three_circle\"\nr = 1\nrot = \"1/3\"\n[orbit]\nparam = 0.4\n";
    go(Verb::Orbit, toml, dir.path(), None, None).unwrap();
    let rows = csv_rows(&dir.path().join("orbit_summary.csv"));
    assert_eq!(rows[1][10], "parabolic");
}

#[test]
fn too_large_mu_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let e = go(Verb::Orbit, &ELLIPSE_MAJOR.replace("0.5", "1.0"), dir.path(), None, None).unwrap_err();
    assert_eq!(e.tag(), "MuTooLarge");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn scan_superellipse_axis_finds_both_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[family]\nfamily = \"two_superellipse_axis\"\nk = 2\n";
    go(Verb::Scan, toml, dir.path(), None, Some(500)).unwrap();
    let rows = csv_rows(&dir.path().join("thresholds.csv"));
    let at: Vec<f64> = rows[1..].iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(at.len(), 2, "{at:?}");
    assert!((at[0] - 5f64.powf(-0.25)).abs() < 1e-6);
    assert!((at[1] - 2f64.powf(-0.25)).abs() < 1e-6);
    assert_eq!(csv_rows(&dir.path().join("scan.csv")).len(), 501);
    assert!(svg_paths(&dir.path().join("stability.svg")) > 5);
}

#[test]
fn scan_ellipse_four_emits_printed_value_table() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[family]\nfamily = \"four_ellipse\"\na = 3\nb = 2\n";
    let out = go(Verb::Scan, toml, dir.path(), None, None).unwrap();
    let rows = csv_rows(&dir.path().join("reference.csv"));
    assert_eq!(rows[0], ["label", "value", "in_interval", "nearest_threshold", "difference"]);
    let star = rows.iter().find(|r| r[0] == "printed x0*").unwrap();
    assert_eq!(star[2], "false");
    for label in ["printed x0**", "printed x0***"] {
        let r = rows.iter().find(|r| r[0] == label).unwrap();
        assert_eq!(r[2], "true");
        let d: f64 = r[4].parse().unwrap();
        assert!(d.abs() < 1e-5, "{label}: {d}");
    }
    assert!(out.lines.iter().any(|l| l.contains("outside")));
}

#[test]
fn empty_grid_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[family]\nfamily = \"two_circle\"\nr = 1\n";
    assert_eq!(go(Verb::Scan, toml, dir.path(), None, Some(0)).unwrap_err().tag(), "Validation");
    assert_eq!(RunConfig::parse("[scan]\nn = 0").unwrap_err().tag(), "Validation");
}

#[test]
fn scan_output_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let toml = "[family]\nfamily = \"four_superellipse\"\nk = 2\ncenters = \"axis\"\nrot = \"3/4\"\n";
    go(Verb::Scan, toml, a.path(), None, Some(300)).unwrap();
    go(Verb::Scan, toml, b.path(), None, Some(300)).unwrap();
    for f in ["scan.csv", "thresholds.csv", "stability.svg"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn trace_single_step_draws_one_chord_and_one_arc() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[curve]\nkind = \"ellipse\"\na = 2\nb = 1\n[seed]\nmu = 0.4\ns = 0.5\ntheta = 1.2\n";
    go(Verb::Trace, toml, dir.path(), None, None).unwrap();
    assert_eq!(svg_paths(&dir.path().join("trace.svg")), 3);
    let text = fs::read_to_string(dir.path().join("trace.svg")).unwrap();
    assert_eq!(text.matches("stroke-dasharray").count(), 1);
    assert_eq!(csv_rows(&dir.path().join("trace.csv")).len(), 2);
}

#[test]
fn trace_geometry_matches_iterate() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[curve]\nkind = \"stadium\"\nside = 2\nr = 1\n[seed]\nmu = 0.4\ns = 0.3\ntheta = 1.1\nsteps = 7\n";
    go(Verb::Trace, toml, dir.path(), None, None).unwrap();
    let curve = imbilliard::Curve::stadium(2.0, 1.0).unwrap();
    let o = imbilliard::imb_map::iterate(&curve, 0.4, imbilliard::PhasePoint::new(0.3, 1.1), 7);
    let rows = csv_rows(&dir.path().join("trace.csv"));
    assert_eq!(rows.len(), 8);
    for (row, (_, d)) in rows[1..].iter().zip(&o.steps) {
        let x1: f64 = row[5].parse().unwrap();
        let y1: f64 = row[6].parse().unwrap();
        assert_eq!((x1, y1), (d.p1.x, d.p1.y));
    }
    assert_eq!(svg_paths(&dir.path().join("trace.svg")), 15);
}

#[test]
fn trace_overlays_ellipse_dual_pair() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[family]\nfamily = \"four_ellipse\"\na = 3\nb = 2\n[orbit]\nparam = 2.7\ndual = true\n";
    go(Verb::Trace, toml, dir.path(), None, None).unwrap();
    assert_eq!(svg_paths(&dir.path().join("trace.svg")), 1 + 8 + 8);
    let a = csv_rows(&dir.path().join("trace.csv"));
    let b = csv_rows(&dir.path().join("dual.csv"));
    // The dual visits the same boundary points.
    let points = |rows: &[Vec<String>]| -> Vec<(f64, f64)> {
        rows[1..]
            .iter()
            .flat_map(|r| [(r[3].parse().unwrap(), r[4].parse().unwrap()), (r[5].parse().unwrap(), r[6].parse().unwrap())])
            .collect()
    };
    let (pa, pb) = (points(&a), points(&b));
    assert_eq!(pb.len(), 8);
    for q in pb {
        assert!(pa.iter().any(|p| (p.0 - q.0).abs() + (p.1 - q.1).abs() < 1e-9), "{q:?} not on the original orbit");
    }
}

#[test]
fn check_passes_on_circle_and_fails_with_corrupted_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[curve]\nkind = \"circle\"\nr = 1\n[check]\nsamples = 200\njacobian_points = 30\n";
    let ok = go(Verb::Check, toml, dir.path(), None, None).unwrap();
    assert!(ok.passed, "{:#?}", ok.lines);
    let bad = go(Verb::Check, toml, dir.path(), Some(1e-30), None).unwrap();
    assert!(!bad.passed);
    assert_eq!(bad.exit_code(), 1);
    assert!(bad.lines.iter().any(|l| l.starts_with("FAIL")));
}

#[test]
fn rot_writes_both_branches() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "[rot]\na = 2\nb = 1\nn = 20\n";
    let out = go(Verb::Rot, toml, dir.path(), None, None).unwrap();
    let rows = csv_rows(&dir.path().join("rot.csv"));
    assert_eq!(rows.len(), 41);
    assert_eq!(rows[1][3], "ellipse");
    assert_eq!(rows[40][3], "hyperbola");
    assert_eq!(svg_paths(&dir.path().join("rot.svg")), 3);
    assert!(out.lines[1].contains("limit at a^2"));
}

#[test]
fn binary_maps_errors_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_imb");
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, ELLIPSE_MAJOR.replace("0.5", "1.5")).unwrap();
    let o = Command::new(bin).args(["orbit", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[MuTooLarge]"));

    fs::write(&cfg, "nonsense = 1").unwrap();
    let o = Command::new(bin).args(["scan", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));

    fs::write(&cfg, ELLIPSE_MAJOR).unwrap();
    let o = Command::new(bin)
        .args(["orbit", "--format", "csv", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("orbit.csv").exists());
    assert!(!dir.path().join("orbit.svg").exists());
}
