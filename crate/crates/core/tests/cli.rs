use std::path::{Path, PathBuf};
use std::process::Command;

use lpcut::cli::exit;
use lpcut::cli::generate::{clean_image, grid_denoise, GridParams};
use lpcut::cli::problem::{format_problem, parse_problem, read_problem, write_problem};
use lpcut::cli::run;
use lpcut::oracle::brute_force_minimax;
use lpcut::reduction::{solve, Policy};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn lpcut(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("lpcut").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn structured(args: &[&str]) -> Value {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let (code, out, err) = lpcut(&full);
    assert_eq!(code, exit::SUCCESS, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn two_vertex_solve() {
    let path = fixture("two_vertex.json");
    let report = structured(&["solve", "--p", "1", path.to_str().unwrap()]);
    let s = &report["solutions"][0];
    assert_eq!(s["labeling"], "01");
    assert_eq!(s["powered_energy"], 1.0);
}

#[test]
fn text_output_mentions_the_labeling() {
    let path = fixture("two_vertex.json");
    let (code, out, _) = lpcut(&["solve", "--p", "2", path.to_str().unwrap()]);
    assert_eq!(code, exit::SUCCESS);
    assert!(out.contains("01"), "{out}");
}

#[test]
fn generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let (code, _, err) = lpcut(&[
            "gen",
            "random",
            "--n",
            "9",
            "--seed",
            "5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, exit::SUCCESS, "{err}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let (_, first, _) = lpcut(&["gen", "grid_denoise", "--seed", "3"]);
    let (_, second, _) = lpcut(&["gen", "grid-denoise", "--seed", "3"]);
    let (_, other, _) = lpcut(&["gen", "grid_denoise", "--seed", "4"]);
    assert_eq!(first, second);
    assert_ne!(first, other);
}

#[test]
fn written_files_read_back_identically() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "grid_8x8.json",
        "random_certified_24.json",
        "footnote.json",
        "huge_values.json",
    ] {
        let problem = read_problem(&fixture(name)).unwrap();
        let copy = dir.path().join(name);
        write_problem(&copy, &problem).unwrap();
        let again = read_problem(&copy).unwrap();
        assert_eq!(again, problem, "{name}");
        assert_eq!(format_problem(&again), format_problem(&problem));
        assert_eq!(
            std::fs::read_to_string(&copy).unwrap(),
            std::fs::read_to_string(fixture(name)).unwrap()
        );
    }
}

#[test]
fn noiseless_small_grid_recovers_the_clean_image() {
    let params = GridParams {
        width: 2,
        height: 2,
        noise: 0.0,
        smoothness: 0.2,
        data_weight: 1.0,
    };
    let g = grid_denoise(&params, 0).unwrap();
    assert_eq!(g.observed, g.clean);
    assert_eq!(g.clean, clean_image(2, 2));
    for p in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0] {
        let s = solve(&g.problem.energy, p, Policy::RequireCertified).unwrap();
        assert_eq!(s.labeling, g.clean, "p = {p}");
    }
}

#[test]
fn sweep_max_term_does_not_increase() {
    let path = fixture("grid_8x8.json");
    let report = structured(&["sweep", path.to_str().unwrap()]);
    assert_eq!(report["sweep"]["max_term_non_increasing"], true);
    let terms: Vec<f64> = report["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["max_term"].as_f64().unwrap())
        .collect();
    assert_eq!(terms.len(), 7);
    assert!(terms.windows(2).all(|w| w[1] <= w[0] + 1e-9));

    let small = read_problem(&fixture("grid_3x3.json")).unwrap();
    let minimax = brute_force_minimax(&small.energy).unwrap().min_value;
    let path = fixture("grid_3x3.json");
    let report = structured(&["sweep", path.to_str().unwrap()]);
    let last = report["sweep"]["max_term_last"].as_f64().unwrap();
    assert_eq!(report["sweep"]["max_term_non_increasing"], true);
    assert!(last >= minimax);
    assert!(
        (last - minimax).abs() <= 1e-9 * minimax.max(1.0),
        "{last} vs {minimax}"
    );
}

#[test]
fn exit_codes() {
    let cases = [
        (vec!["check", "two_vertex.json"], exit::SUCCESS),
        (vec!["check", "footnote.json"], exit::CERTIFICATION),
        (vec!["check", "not_submodular.json"], exit::CERTIFICATION),
        (vec!["check", "malformed.json"], exit::PARSE),
        (vec!["check", "bad_version.json"], exit::PARSE),
        (vec!["check", "missing.json"], exit::IO),
        (
            vec!["solve", "--p", "2", "footnote.json"],
            exit::CERTIFICATION,
        ),
        (
            vec!["solve", "--p", "1", "--policy", "per-p", "footnote.json"],
            exit::SUCCESS,
        ),
        (
            vec!["solve", "--p", "2", "--policy", "per-p", "footnote.json"],
            exit::CERTIFICATION,
        ),
        (vec!["solve", "--p", "2", "huge_values.json"], exit::NUMERIC),
        (vec!["solve", "--p", "0.5", "two_vertex.json"], exit::USAGE),
        (vec!["solve", "--p", "nan", "two_vertex.json"], exit::USAGE),
        (vec!["solve", "two_vertex.json"], exit::USAGE),
        (vec!["oracle", "grid_8x8.json"], exit::SIZE),
        (vec!["oracle", "--p", "3", "footnote.json"], exit::SUCCESS),
        (vec!["frobnicate"], exit::USAGE),
        (vec!["--help"], exit::SUCCESS),
    ];
    for (args, expected) in cases {
        let resolved: Vec<String> = args
            .iter()
            .map(|a| {
                if a.ends_with(".json") {
                    fixture(a).to_string_lossy().into_owned()
                } else {
                    a.to_string()
                }
            })
            .collect();
        let refs: Vec<&str> = resolved.iter().map(String::as_str).collect();
        let (code, _, err) = lpcut(&refs);
        assert_eq!(code, expected, "{args:?}: {err}");
    }
}

#[test]
fn check_reports_grid_terms_as_certified() {
    for name in ["grid_3x3.json", "grid_8x8.json", "potts_edge.json"] {
        let report = structured(&["check", fixture(name).to_str().unwrap()]);
        let counts = &report["certificate_counts"];
        assert_eq!(counts["submodular_uncertified"], 0, "{name}");
        assert_eq!(counts["not_submodular"], 0, "{name}");
    }
}

#[test]
fn check_names_the_first_violating_exponent() {
    let mut out = Vec::new();
    let code = run(
        [
            "lpcut",
            "--format",
            "structured",
            "check",
            fixture("footnote.json").to_str().unwrap(),
        ],
        &mut out,
        &mut Vec::new(),
    );
    assert_eq!(code, exit::CERTIFICATION);
    let report: Value = serde_json::from_slice(&out).unwrap();
    let cert = &report["certificates"][0]["certificate"];
    assert_eq!(cert["status"], "SUBMODULAR_UNCERTIFIED");
    assert_eq!(cert["witness"], 2.0);
}

#[test]
fn solve_agrees_with_oracle_on_small_fixtures() {
    for name in [
        "two_vertex.json",
        "single_vertex.json",
        "potts_edge.json",
        "grid_3x3.json",
        "random_certified_12.json",
    ] {
        let path = fixture(name);
        let path = path.to_str().unwrap();
        for p in ["1", "2", "4", "8"] {
            let solved = structured(&["solve", "--p", p, path]);
            let oracle = structured(&["oracle", "--p", p, path]);
            let energy = solved["solutions"][0]["powered_energy"].as_f64().unwrap();
            let min = oracle["oracle"]["min_value"].as_f64().unwrap();
            assert!(
                (energy - min).abs() <= 1e-6 * min.abs().max(f64::MIN_POSITIVE) || energy == min,
                "{name} p={p}"
            );
            let minimizers: Vec<&str> = oracle["oracle"]["minimizers"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_str().unwrap())
                .collect();
            assert!(
                minimizers.contains(&solved["solutions"][0]["labeling"].as_str().unwrap()),
                "{name} p={p}"
            );
        }
    }
}

#[test]
fn binary_matches_library_entry_point() {
    let path = fixture("grid_3x3.json");
    let out = Command::new(env!("CARGO_BIN_EXE_lpcut"))
        .args([
            "--format",
            "structured",
            "oracle",
            "--p",
            "2",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(exit::SUCCESS));
    let binary: Value = serde_json::from_slice(&out.stdout).unwrap();
    let library = structured(&["oracle", "--p", "2", path.to_str().unwrap()]);
    assert_eq!(binary, library);

    let out = Command::new(env!("CARGO_BIN_EXE_lpcut"))
        .args(["check", fixture("malformed.json").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(exit::PARSE));
    assert!(!out.stderr.is_empty());
}

#[test]
fn parse_errors_carry_a_position() {
    let text = std::fs::read_to_string(fixture("malformed.json")).unwrap();
    let err = parse_problem(&text).unwrap_err().to_string();
    assert!(err.contains("line"), "{err}");
}
