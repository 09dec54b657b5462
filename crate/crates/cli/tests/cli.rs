use std::process::Command;

use aklt_cli::{run, Outcome};
use serde_json::Value;

fn aklt(args: &str) -> Outcome {
    run(std::iter::once("aklt").chain(args.split_whitespace()))
}

fn json(args: &str) -> Value {
    let out = aklt(args);
    assert_eq!(out.code, 0, "{args}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn spectrum_values(doc: &Value) -> Vec<(u64, String, u64)> {
    doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["J"].as_u64().unwrap(),
                r["lambda_exact"].as_str().unwrap().to_string(),
                r["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect()
}

#[test]
fn spin_one_pair_block() {
    let doc = json("spectrum --spin 1 --length 2 --method closed_form");
    assert_eq!(
        spectrum_values(&doc),
        vec![(0, "1/3".to_string(), 1), (1, "2/9".to_string(), 3)]
    );
    assert_eq!(doc["config"]["command"], "spectrum");
    assert_eq!(doc["checks"].as_array().unwrap().len(), 0);
    assert!(doc["version"].is_string());
}

#[test]
fn spin_two_routes_agree() {
    let doc = json("spectrum --spin 2 --length 2 --method recurrence,closed_form");
    let values: Vec<String> = spectrum_values(&doc)
        .into_iter()
        .map(|(_, v, _)| v)
        .collect();
    assert_eq!(values, ["1/5", "1/5", "3/20", "3/20", "7/100", "7/100"]);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "method_agreement");
    assert_eq!(checks[0]["passed"], true);
}

#[test]
fn floats_are_the_nearest_double() {
    let doc = json("spectrum --spin 3 --length 1..8 --method recurrence");
    for r in doc["results"].as_array().unwrap() {
        let (p, q) = r["lambda_exact"].as_str().unwrap().split_once('/').unwrap();
        let x = r["lambda_float"].as_f64().unwrap();
        let ratio = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
        assert!((x - ratio).abs() <= f64::EPSILON * ratio.abs(), "{r}");
    }
}

#[test]
fn oracles_agree_with_the_formula() {
    let doc = json("spectrum --spin 1 --length 2..5 --method closed_form,fock_oracle,pauli_oracle");
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c["passed"] == true));
    let oracle_rows = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["method"] != "closed_form")
        .count();
    assert_eq!(oracle_rows, 16);
    assert!(doc["results"][1]["lambda_exact"].is_null());
}

#[test]
fn spin_zero_is_a_usage_error() {
    let out = aklt("spectrum --spin 0 --length 2");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("bulk spin must be a positive integer"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_arguments() {
    assert_eq!(aklt("spectrum --spin 1 --length 5..2").code, 2);
    assert_eq!(aklt("spectrum --spin 1 --length 2 --method lanczos").code, 2);
    assert_eq!(aklt("spectrum --spin 2 --length 2 --method pauli_oracle").code, 2);
    assert_eq!(aklt("verify oracle --max-length 1").code, 2);
    assert_eq!(aklt("verify conjecture1 --max-length x").code, 2);
    assert_eq!(aklt("frobnicate").code, 2);
    assert_eq!(aklt("--help").code, 0);
}

#[test]
fn oversized_oracle_hits_the_cap() {
    let out = aklt("spectrum --spin 1 --length 8 --method fock_oracle --max-dim 1000");
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert!(out.stderr.contains("cap"));
}

#[test]
fn entropy_csv_rows() {
    let out = aklt("entropy --spin 1 --length 2 --alpha 0.5,2 --format csv");
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "S,L,alpha,value");
    assert_eq!(lines.len(), 4);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&first[..3], ["1", "2", "1.0000000000000000e0"]);
    let vn: f64 = first[3].parse().unwrap();
    assert!((vn - 1.368_922_360_740_219).abs() < 1e-14);
    assert!(lines[1..].iter().all(|l| {
        let mantissa = l.rsplit(',').next().unwrap().split('e').next().unwrap();
        mantissa.replace(['.', '-'], "").len() == 17
    }));
    assert!(!out.stdout.contains('\r'));
}

#[test]
fn alpha_one_is_the_von_neumann_row() {
    let doc = json("entropy --spin 2 --length 3 --alpha 1,2");
    let rows = doc["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["alpha"], 1.0);
    assert_eq!(rows[0]["measure"], "von_neumann");
    assert_eq!(rows[1]["alpha"], 2.0);
}

#[test]
fn entropy_saturates_at_length_24() {
    let doc = json("entropy --spin 1 --length 24");
    let vn = doc["results"][0]["value"].as_f64().unwrap();
    assert!((vn - 4f64.ln()).abs() < 1e-6);
    assert!(doc["results"][0]["saturation_gap"].as_f64().unwrap() < 1e-6);
}

#[test]
fn non_positive_alpha_is_rejected() {
    assert_eq!(aklt("entropy --spin 1 --length 2 --alpha 0").code, 2);
    assert_eq!(aklt("entropy --spin 1 --length 2 --alpha=-1").code, 2);
    assert_eq!(aklt("sweep --spin 1..2 --length 2 --alpha 0.5,0").code, 2);
}

#[test]
fn sweep_covers_the_grid_in_order() {
    let doc = json("sweep --spin 1..3 --length 2..4 --alpha 2");
    let rows = doc["results"].as_array().unwrap();
    let spectra: Vec<(u64, u64, u64)> = rows
        .iter()
        .filter(|r| r.get("J").is_some())
        .map(|r| (r["S"].as_u64().unwrap(), r["L"].as_u64().unwrap(), r["J"].as_u64().unwrap()))
        .collect();
    assert_eq!(spectra.len(), 3 * (2 + 3 + 4));
    let mut sorted = spectra.clone();
    sorted.sort();
    assert_eq!(spectra, sorted);
    let entropies = rows.iter().filter(|r| r.get("measure").is_some()).count();
    assert_eq!(entropies, 3 * 3 * 2);
}

#[test]
fn runs_are_byte_identical() {
    for args in [
        "sweep --spin 1..4 --length 1..12 --method recurrence,closed_form",
        "verify appendix",
        "entropy --spin 2 --length 2..6 --format csv --method closed_form,fock_oracle",
    ] {
        let a = aklt(args);
        let b = aklt(args);
        assert_eq!(a, b, "{args}");
    }
}

#[test]
fn verify_conjecture_grid() {
    let doc = json("verify conjecture1 --max-spin 5 --max-length 30");
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(checks[0]["name"], "recurrence_equals_closed_form");
    assert_eq!(checks[0]["value"], 580.0);
}

#[test]
fn verify_oracle_spin_one() {
    let doc = json("verify oracle --spin 1 --max-length 6");
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for n in ["fock_vs_formula", "pauli_vs_formula", "pauli_channel_identity", "vbs_norm", "degenerate_gram", "ground_projector"] {
        assert!(names.contains(&n), "{n}");
    }
}

#[test]
fn verify_hamiltonian_reports_nullity_nine() {
    let doc = json("verify hamiltonian --spin 2 --length 3");
    let c = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "block_null_space")
        .unwrap()
        .clone();
    assert_eq!(c["value"], 9.0);
    assert_eq!(c["S"], 2);
    assert_eq!(c["L"], 3);
}

#[test]
fn verify_appendix_and_csv_summary() {
    let out = aklt("verify appendix --spin 1 --format csv");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("suite,name,S,L,passed,value\n"));
    assert!(out.stdout.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn writes_to_a_file() {
    let dir = std::env::temp_dir().join(format!("aklt-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = aklt(&format!("spectrum --spin 1 --length 3 --out {}", path.display()));
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_aklt");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["spectrum", "--spin", "1", "--length", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["results"][0]["lambda_exact"], "1/3");
    let bad = status(&["spectrum", "--spin", "0", "--length", "2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("bulk spin must be a positive integer"));
    let cap = status(&["verify", "oracle", "--spin", "1", "--max-length", "9", "--max-dim", "500"]);
    assert_eq!(cap.status.code(), Some(3));
}
