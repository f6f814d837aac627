mod common;

use kleinian_spectra::formulas::{mu_assouad_spectrum, mu_lower_spectrum, SpectralParameters};
use std::collections::BTreeMap;
use std::sync::OnceLock;

fn suite() -> &'static BTreeMap<String, Vec<u8>> {
    static FILES: OnceLock<BTreeMap<String, Vec<u8>>> = OnceLock::new();
    FILES.get_or_init(|| common::run_suite("commands", None).unwrap())
}

fn text(name: &str) -> String {
    String::from_utf8(suite()[name].clone()).unwrap()
}

/// Data rows of a CSV file: no comments, no column line.
fn rows(name: &str) -> Vec<Vec<String>> {
    text(name)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn values(name: &str) -> Vec<(f64, f64)> {
    rows(name).iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect()
}

#[test]
fn outputs_match_the_golden_files() {
    let bad = common::golden_mismatches(suite());
    assert!(bad.is_empty(), "differs from golden: {bad:?}");
}

#[test]
fn gen_writes_the_reciprocal_points() {
    let t = text("gen_reciprocal_3.csv");
    assert!(t.starts_with("# kleinian-spectra cloud v1\nx0\n"));
    let xs: Vec<String> = rows("gen_reciprocal_3.csv").into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(xs, ["0", "0.333333333333", "0.5", "1"]);
    assert!(t.contains("# provenance: "));
}

#[test]
fn two_parabolic_cloud_holds_the_declared_fixed_points() {
    let xs: Vec<f64> = rows("gen_two_parabolic.csv").iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(xs.len() > 100);
    assert!(xs.contains(&0.0));
    // ∞ is off the chart; its images 1/(4n) under the parabolic fixing 0 are
    // there up to the dedupe spacing of resolution/10
    for n in 1..=4 {
        let want = 1.0 / (4.0 * n as f64);
        assert!(xs.iter().any(|x| (x - want).abs() <= 0.03125 / 10.0), "missing {want}");
    }
}

#[test]
fn spectrum_examples() {
    let v = values("spectrum_reciprocal.csv");
    assert_eq!(v.len(), 3);
    assert!((v[1].1 - 1.0).abs() <= 0.1, "{v:?}");
    for (t, x) in values("spectrum_grid_lower.csv") {
        assert!((x - 1.0).abs() <= 0.05, "θ = {t}: {x}");
    }
}

#[test]
fn formula_examples() {
    let v = values("formula_set_assouad.csv");
    assert_eq!(v.len(), 1);
    assert!((v[0].0 - 1.0 / 3.0).abs() < 1e-12 && v[0].1 == 0.875);
    let r = rows("formula_mu_box.csv");
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "");
    assert!((r[0][1].parse::<f64>().unwrap() - 1.8).abs() < 1e-12);
    assert_eq!(values("formula_lattice.csv")[0].1, 0.666666666667);
}

#[test]
fn config_file_values_are_used_and_echoed() {
    let t = text("formula_config.csv");
    assert_eq!(rows("formula_config.csv").len(), 9);
    assert!(t.contains("delta=1.2") && t.contains("target=mu-assouad"));
}

#[test]
fn command_line_flags_beat_the_config_file() {
    let dir = common::golden_dir().join("inputs");
    let out = std::process::Command::new(common::bin())
        .args(["--config", "formula.conf", "formula", "--delta", "1.8", "--theta", "0.5"])
        .current_dir(dir)
        .output()
        .unwrap();
    let t = String::from_utf8(out.stdout).unwrap();
    assert!(t.contains("0.5,2.6,,mu_assouad"), "{t}");
    assert!(t.contains("delta=1.8"));
}

#[test]
fn delta_examples() {
    let r = rows("delta.csv");
    assert_eq!(r.len(), 3);
    let cyclic: f64 = r[0][2].parse().unwrap();
    assert!((cyclic - 0.5).abs() <= 0.05);
    assert_eq!(r[1][2], "0");
    let two: f64 = r[2][2].parse().unwrap();
    assert!(two > 0.5, "{two}");
    assert!(r[2][3].parse::<f64>().unwrap() > 0.0);
    assert_eq!(text("delta_stdout.txt").lines().count(), 3);
}

#[test]
fn compare_reports() {
    let ok = rows("compare_reciprocal.csv");
    assert_eq!(ok.len(), 3);
    let bad = text("compare_mismatch.csv");
    assert!(bad.contains("fail"), "{bad}");
}

#[test]
fn plots_draw_one_polyline_per_profile() {
    let one = text("plot_single.svg");
    assert!(one.starts_with("<svg") || one.starts_with("<?xml"));
    assert_eq!(one.matches("<polyline").count(), 1);
    let two = text("plot_overlay.svg");
    assert_eq!(two.matches("<polyline").count(), 2);
    let dashed = two.lines().filter(|l| l.starts_with("<polyline") && l.contains("stroke-dasharray")).count();
    assert_eq!(dashed, 1);
}

#[test]
fn measure_spectra_follow_the_closed_forms() {
    let p = SpectralParameters::new(1.2, 1, 2, 2).unwrap();
    for (t, v) in values("measure_assouad.csv") {
        let want = mu_assouad_spectrum(&p, t).unwrap();
        assert!((v - want).abs() <= 0.05, "θ = {t}: {v} vs {want}");
    }
    for (t, v) in values("measure_lower.csv") {
        let want = mu_lower_spectrum(&p, t).unwrap();
        assert!((v - want).abs() <= 0.05, "θ = {t}: {v} vs {want}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [&["frobnicate"][..], &["gen", "--preset", "nope"], &["formula", "--target", "mu-box", "--delta", "x"]] {
        let code = std::process::Command::new(common::bin()).args(args).output().unwrap().status.code();
        assert_eq!(code, Some(2), "{args:?}");
    }
}
