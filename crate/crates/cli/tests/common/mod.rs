//! The example commands behind the golden files, and a runner that replays
//! them in a scratch directory.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Step {
    pub args: &'static [&'static str],
    pub exit: i32,
    /// Files written by `--out` that become golden files.
    pub outputs: &'static [&'static str],
    /// Golden file that collects the step's stdout, if any.
    pub stdout: Option<&'static str>,
}

const fn step(args: &'static [&'static str], exit: i32, outputs: &'static [&'static str]) -> Step {
    Step { args, exit, outputs, stdout: None }
}

pub const STEPS: &[Step] = &[
    step(&["gen", "--preset", "reciprocal", "--n", "3", "--out", "gen_reciprocal_3.csv"], 0, &["gen_reciprocal_3.csv"]),
    step(
        &["gen", "--preset", "two-parabolic", "--lambda", "4", "--c", "4", "--max-word-len", "8", "--out", "gen_two_parabolic.csv"],
        0,
        &["gen_two_parabolic.csv"],
    ),
    step(&["gen", "--preset", "reciprocal", "--n", "20000", "--out", "reciprocal_2e4.csv"], 0, &["reciprocal_2e4.csv"]),
    step(
        &[
            "spectrum", "--cloud", "reciprocal_2e4.csv", "--kind", "assouad", "--theta", "0.25,0.5,0.75", "--r-min", "1e-6",
            "--r-max", "1e-3", "--out", "spectrum_reciprocal.csv",
        ],
        0,
        &["spectrum_reciprocal.csv"],
    ),
    step(
        &[
            "spectrum", "--cloud", "grid_1e4.csv", "--kind", "lower", "--theta", "0.2,0.25,0.4,0.5", "--r-min", "1e-3",
            "--r-max", "1e-2", "--centers", "all", "--out", "spectrum_grid_lower.csv",
        ],
        0,
        &["spectrum_grid_lower.csv"],
    ),
    step(&["spectrum", "--cloud", "reciprocal_2e4.csv", "--r-min", "1e-4", "--r-max", "2e-4"], 3, &[]),
    step(
        &[
            "formula", "--target", "set-assouad", "--delta", "0.75", "--k-min", "1", "--k-max", "1", "--theta",
            "0.3333333333333333", "--out", "formula_set_assouad.csv",
        ],
        0,
        &["formula_set_assouad.csv"],
    ),
    step(&["formula", "--target", "set-assouad", "--delta", "0.4", "--k-min", "1", "--k-max", "1"], 2, &[]),
    step(
        &["formula", "--target", "mu-box", "--delta", "1.4", "--k-min", "1", "--k-max", "2", "--out", "formula_mu_box.csv"],
        0,
        &["formula_mu_box.csv"],
    ),
    step(
        &["formula", "--target", "lattice", "--k", "1", "--theta", "0.25,0.5,0.75", "--out", "formula_lattice.csv"],
        0,
        &["formula_lattice.csv"],
    ),
    step(&["--config", "formula.conf", "formula", "--out", "formula_config.csv"], 0, &["formula_config.csv"]),
    Step {
        args: &["delta", "--preset", "cyclic-parabolic", "--out", "delta.csv"],
        exit: 0,
        outputs: &[],
        stdout: Some("delta_stdout.txt"),
    },
    Step {
        args: &["delta", "--preset", "identity", "--out", "delta.csv"],
        exit: 0,
        outputs: &[],
        stdout: Some("delta_stdout.txt"),
    },
    Step {
        args: &["delta", "--preset", "two-parabolic", "--lambda", "4", "--c", "4", "--max-word-len", "12", "--out", "delta.csv"],
        exit: 0,
        outputs: &["delta.csv"],
        stdout: Some("delta_stdout.txt"),
    },
    step(
        &[
            "compare", "--profile", "spectrum_reciprocal.csv", "--target", "lattice", "--k", "1", "--theta", "0.25,0.5,0.75",
            "--tolerance", "0.1", "--out", "compare_reciprocal.csv",
        ],
        0,
        &["compare_reciprocal.csv"],
    ),
    step(
        &[
            "compare", "--profile", "spectrum_reciprocal.csv", "--target", "set-assouad", "--delta", "0.9", "--k-min", "1",
            "--k-max", "1", "--theta", "0.25,0.5,0.75", "--tolerance", "0.1", "--out", "compare_mismatch.csv",
        ],
        1,
        &["compare_mismatch.csv"],
    ),
    step(
        &[
            "compare", "--profile", "spectrum_reciprocal.csv", "--target", "lattice", "--k", "1", "--theta", "0.2,0.5,0.8",
            "--tolerance", "0.1",
        ],
        2,
        &[],
    ),
    step(&["plot", "formula_lattice.csv", "--out", "plot_single.svg"], 0, &["plot_single.svg"]),
    step(&["plot", "formula_lattice.csv", "spectrum_reciprocal.csv", "--out", "plot_overlay.svg"], 0, &["plot_overlay.svg"]),
    step(&["plot", "empty_profile.csv", "--out", "plot_empty.svg"], 2, &[]),
    step(
        &[
            "spectrum", "--geometry", "geometry_mixed.csv", "--kind", "assouad", "--delta", "1.2", "--theta", "0.25,0.5,0.75",
            "--times", "40", "--out", "measure_assouad.csv",
        ],
        0,
        &["measure_assouad.csv"],
    ),
    step(
        &[
            "spectrum", "--geometry", "geometry_mixed.csv", "--kind", "lower", "--delta", "1.2", "--theta", "0.25,0.5,0.75",
            "--times", "40", "--out", "measure_lower.csv",
        ],
        0,
        &["measure_lower.csv"],
    ),
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_kleinian-spectra")
}

/// Replays every step in a fresh scratch directory holding copies of the
/// checked-in inputs and returns the produced golden files by name.
pub fn run_suite(tag: &str, threads: Option<usize>) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let dir = std::env::temp_dir().join(format!("kleinian-spectra-golden-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for entry in std::fs::read_dir(golden_dir().join("inputs")).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).map_err(|e| e.to_string())?;
    }
    let mut out = BTreeMap::new();
    for s in STEPS {
        let mut cmd = Command::new(bin());
        if let Some(n) = threads {
            cmd.arg("--threads").arg(n.to_string());
        }
        let res = cmd.args(s.args).current_dir(&dir).output().map_err(|e| e.to_string())?;
        let code = res.status.code().unwrap_or(-1);
        if code != s.exit {
            return Err(format!(
                "{:?} exited with {code}, expected {}: {}",
                s.args,
                s.exit,
                String::from_utf8_lossy(&res.stderr)
            ));
        }
        if let Some(name) = s.stdout {
            out.entry(name.to_string()).or_insert_with(Vec::new).extend_from_slice(&res.stdout);
        }
        for name in s.outputs {
            let bytes = std::fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
            out.insert(name.to_string(), bytes);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(out)
}

/// Names of files that differ from the checked-in goldens. With
/// `UPDATE_GOLDEN` set the goldens are rewritten instead.
pub fn golden_mismatches(files: &BTreeMap<String, Vec<u8>>) -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = vec![];
    for (name, bytes) in files {
        let path = golden_dir().join(name);
        if update {
            std::fs::write(&path, bytes).unwrap();
            continue;
        }
        match std::fs::read(&path) {
            Ok(want) if &want == bytes => {}
            _ => bad.push(name.clone()),
        }
    }
    bad
}
