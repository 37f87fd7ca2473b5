//! Shared by the golden-file tests and the acceptance runner.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn framekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framekit"))
        .args(args)
        .current_dir(data_dir())
        .env_remove("FRAMEKIT_LOG")
        .output()
        .expect("framekit binary runs")
}

pub fn close(value: &Value, expected: f64, tol: f64) -> bool {
    value.as_f64().is_some_and(|x| (x - expected).abs() <= tol)
}

pub fn matrix_entries(value: &Value) -> Vec<f64> {
    value["data"]
        .as_array()
        .expect("matrix data")
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
        .collect()
}

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    pub check: fn(&Value) -> bool,
}

const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Bounds of the infinite orbit of (1, 1) under diag(0.9, 0.5): eigenvalues of
/// `Σ_k (0.81^k, 0.45^k; 0.45^k, 0.25^k) = [[1/0.19, 1/0.55], [1/0.55, 1/0.75]]`.
fn diag_orbit_bounds() -> (f64, f64) {
    let (a, b, c): (f64, f64, f64) = (1.0 / 0.19, 1.0 / 0.55, 1.0 / 0.75);
    let mean = (a + c) / 2.0;
    let spread = (((a - c) / 2.0).powi(2) + b * b).sqrt();
    (mean - spread, mean + spread)
}

pub const CASES: &[Case] = &[
    Case {
        name: "analyze_standard_basis",
        args: &["analyze", "standard_basis.json"],
        exit: 0,
        check: |r| close(&r["A"], 1.0, 1e-12) && close(&r["B"], 1.0, 1e-12) && r["parseval"] == true,
    },
    Case {
        name: "analyze_repeated_e1",
        args: &["analyze", "repeated_e1.json"],
        exit: 0,
        check: |r| close(&r["A"], 1.0, 1e-12) && close(&r["B"], 2.0, 1e-12) && r["tight"] == false,
    },
    Case {
        name: "analyze_repeated_e1_csv",
        args: &["analyze", "repeated_e1.csv"],
        exit: 0,
        check: |r| close(&r["A"], 1.0, 1e-12) && close(&r["B"], 2.0, 1e-12),
    },
    Case {
        name: "analyze_mercedes",
        args: &["analyze", "mercedes.json"],
        exit: 0,
        check: |r| close(&r["A"], 1.5, 1e-12) && close(&r["B"], 1.5, 1e-12) && r["tight"] == true,
    },
    Case {
        name: "analyze_rank_deficient",
        args: &["analyze", "rank_deficient.json"],
        exit: 3,
        check: |r| r["not_a_frame"] == true && close(&r["lambda_min"], 0.0, 1e-12),
    },
    Case {
        name: "represent_e1_e2_sum",
        args: &["represent", "e1_e2_sum.json"],
        exit: 0,
        check: |r| {
            let t = matrix_entries(&r["operator"]);
            t.iter().zip([0.0, 1.0, 1.0, 1.0]).all(|(x, y)| (x - y).abs() <= 1e-12)
        },
    },
    Case {
        name: "represent_e1_zero_e2",
        args: &["represent", "e1_zero_e2.json"],
        exit: 4,
        check: |r| {
            r["operator"].is_null()
                && r["residual_witness"]["step"] == 2
                && close(&r["residual_witness"]["residual"], 1.0, 1e-12)
        },
    },
    Case {
        name: "orbit_diag_ones",
        args: &["orbit", "diag_09_05.json", "seed_11.json"],
        exit: 0,
        check: |r| {
            let (a, b) = diag_orbit_bounds();
            r["in_V"] == true && close(&r["A"], a, 1e-6) && close(&r["B"], b, 1e-6)
        },
    },
    Case {
        name: "orbit_diag_axis",
        args: &["orbit", "diag_09_05.json", "seed_10.json"],
        exit: 0,
        check: |r| r["in_V"] == false && r["reason"] == "rank",
    },
    Case {
        name: "orbit_identity_e1",
        args: &["orbit", "identity2.json", "seed_e1_row.json"],
        exit: 0,
        check: |r| r["in_V"] == false,
    },
    Case {
        name: "orbit_complex",
        args: &["orbit", "rotation_complex.json", "seed_11.json"],
        exit: 0,
        check: |r| r["in_V"] == true,
    },
    Case {
        name: "remove_repeated_e1_first",
        args: &["remove", "repeated_e1.json", "--index", "1"],
        exit: 0,
        check: |r| {
            r["removable"] == true
                && close(&r["post_removal"]["A"], 1.0, 1e-12)
                && close(&r["post_removal"]["B"], 1.0, 1e-12)
                && close(&r["certified_lower_bound"], 0.5, 1e-12)
        },
    },
    Case {
        name: "remove_repeated_e1_last",
        args: &["remove", "repeated_e1.json", "--index", "3"],
        exit: 5,
        check: |r| r["removable"] == false && r["post_removal"]["not_a_frame"] == true,
    },
    Case {
        name: "remove_five_vectors",
        args: &["remove", "five_vectors.json", "--index", "1"],
        exit: 0,
        check: |r| {
            close(&r["criterion_value"], 1.0 / 3f64.sqrt(), 1e-12)
                && close(&r["threshold"], (2.0f64 / 3.0).sqrt(), 1e-12)
                && close(&r["post_removal"]["A"], 2.0, 1e-12)
        },
    },
    Case {
        name: "remove_tight_frame",
        args: &["remove", "standard_basis.json", "--index", "1"],
        exit: 5,
        check: |r| r["tight_frame_excluded"] == true,
    },
    Case {
        name: "perturb_identical",
        args: &["perturb", "diag_09_05.json", "seed_11.json", "seed_11.json"],
        exit: 0,
        check: |r| {
            r["mu"] == 0.0
                && r["sufficient"] == true
                && close(&r["certified_lower_bound"], r["lower_bound_A"].as_f64().unwrap(), 1e-14)
        },
    },
    Case {
        name: "perturb_quarter",
        args: &["perturb", "diag_09_05.json", "seed_11.json", "seed_125_1.json"],
        exit: 0,
        check: |r| {
            // μ = 0.25 · √((1 − 0.81¹¹) / 0.19)
            let mu = 0.25 * ((1.0 - 0.81f64.powi(11)) / 0.19).sqrt();
            close(&r["mu"], mu, 1e-12)
                && r["sufficient"] == true
                && r["oracle_bounds"]["A"].as_f64().unwrap()
                    >= r["certified_lower_bound"].as_f64().unwrap()
        },
    },
    Case {
        name: "perturb_half",
        args: &["perturb", "diag_09_05.json", "seed_11.json", "seed_15_1.json"],
        exit: 0,
        check: |r| {
            let mu = 0.5 * ((1.0 - 0.81f64.powi(11)) / 0.19).sqrt();
            close(&r["mu"], mu, 1e-12) && r["sufficient"] == false
        },
    },
    Case {
        name: "perturb_two",
        args: &["perturb", "diag_09_05.json", "seed_11.json", "seed_3_1.json"],
        exit: 0,
        check: |r| {
            let mu = 2.0 * ((1.0 - 0.81f64.powi(11)) / 0.19).sqrt();
            close(&r["mu"], mu, 1e-12) && r["sufficient"] == false && r["oracle_bounds"]["not_a_frame"] == false
        },
    },
    Case {
        name: "perturb_base_not_a_frame",
        args: &["perturb", "diag_09_05.json", "seed_10.json", "seed_11.json"],
        exit: 3,
        check: |r| r["not_a_frame"] == true,
    },
    Case {
        name: "spectral_twice_identity",
        args: &["spectral", "twice_identity.json"],
        exit: 0,
        check: |r| {
            close(&r["norm"], 2.0, 1e-12)
                && close(&r["spectral_radius"], 2.0, 1e-12)
                && close(&r["neighborhood_radius"], 2.0, 1e-12)
        },
    },
    Case {
        name: "spectral_nilpotent",
        args: &["spectral", "nilpotent.json"],
        exit: 0,
        check: |r| {
            close(&r["norm"], 1.0, 1e-12) && close(&r["spectral_radius"], 0.0, 1e-12) && r["invertible"] == false
        },
    },
    Case {
        name: "spectral_fibonacci",
        args: &["spectral", "fibonacci.json"],
        exit: 0,
        check: |r| {
            close(&r["spectral_radius"], GOLDEN_RATIO, 1e-12)
                && close(&r["neighborhood_radius"], GOLDEN_RATIO - 1.0, 1e-12)
        },
    },
    Case {
        name: "vset_three_seeds",
        args: &["vset", "diag_09_05.json", "--seeds", "seeds_three.json", "--ks", "1,2,4"],
        exit: 0,
        check: |r| r["in_V_count"] == 3 && r["checks"] == 18,
    },
    Case {
        name: "vset_equal_seeds",
        args: &["vset", "diag_09_05.json", "--seeds", "seeds_equal.json", "--ks", "1,2,4"],
        exit: 0,
        check: |r| r["forward_inclusion_holds"] == true && r["in_V_count"] == 3,
    },
    Case {
        name: "vset_singular",
        args: &["vset", "diag_1_0.json", "--count", "5", "--seed", "3"],
        exit: 0,
        check: |r| r["vacuous"] == true && r["in_V_count"] == 0,
    },
    Case {
        name: "vset_random",
        args: &["vset", "diag_09_05.json", "--count", "4", "--seed", "11", "--ks", "1,2"],
        exit: 0,
        check: |r| r["seeds"].as_array().unwrap().len() == 4,
    },
];


pub const SUBCOMMANDS: [&str; 7] = ["analyze", "represent", "orbit", "remove", "perturb", "spectral", "vset"];

/// Runs every golden case; returns one message per mismatch. With `update`
/// the golden files are rewritten instead of compared.
pub fn check_golden_cases(update: bool) -> Vec<String> {
    let mut failures = Vec::new();
    for case in CASES {
        let output = framekit(case.args);
        let stdout = String::from_utf8(output.stdout).expect("utf-8 report");
        let code = output.status.code();
        if code != Some(case.exit) {
            failures.push(format!(
                "{}: exit {code:?}, expected {} ({})",
                case.name,
                case.exit,
                String::from_utf8_lossy(&output.stderr)
            ));
            continue;
        }
        let report: Value = match serde_json::from_str(&stdout) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{}: not JSON: {e}", case.name));
                continue;
            }
        };
        if !(case.check)(&report) {
            failures.push(format!("{}: value check failed:\n{stdout}", case.name));
        }
        let path = golden_dir().join(format!("{}.json", case.name));
        if update {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &stdout).unwrap();
        } else {
            match std::fs::read_to_string(&path) {
                Ok(expected) if expected == stdout => {}
                Ok(_) => failures.push(format!("{}: differs from {}", case.name, path.display())),
                Err(e) => failures.push(format!("{}: {e} (run with UPDATE_GOLDEN=1)", case.name)),
            }
        }
    }
    failures
}
