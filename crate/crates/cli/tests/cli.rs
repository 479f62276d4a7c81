//! End-to-end checks of the binary: exit codes, file outputs, and
//! reproducibility.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const DEFAULT_SPEC: &str = r#"{
  "techniques": 2,
  "keys_per_technique": 2,
  "beta": 0.75,
  "rewards": {
    "defender_other_tech": 10.0,
    "defender_same_tech": 5.0,
    "attacker_match": 10.0,
    "attacker_miss": 5.0
  },
  "power": { "defender": [1.0, 3.0], "attacker": [1.0, 3.0] },
  "transition": { "key": 5.0, "technique": 10.0, "stay": 0.0 },
  "cost": { "model": "none", "q": 0.0 },
  "timing": { "brute_force_seconds": [10.0, 4.0], "margin": 0.9 }
}"#;

fn keyshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keyshift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_spec(dir: &Path, contents: &str) -> String {
    let path = dir.join("spec.json");
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn solve_writes_certified_bundle_and_tables() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), DEFAULT_SPEC);
    let out = dir.path().join("out");
    let result = keyshift(&[
        "solve",
        "--spec",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&result), 0, "{result:?}");

    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("result.json")).unwrap()).unwrap();
    assert_eq!(bundle["certificate"]["passed"], true);
    assert_eq!(bundle["game"]["defender_strategies"], "256");
    assert_eq!(bundle["game"]["attacker_strategies"], "16");
    // Policy shapes: defender 4x4, attacker 2x4.
    assert_eq!(bundle["policies"]["defender"].as_array().unwrap().len(), 4);
    assert_eq!(bundle["policies"]["attacker"].as_array().unwrap().len(), 2);
    assert_eq!(
        bundle["policies"]["attacker"][0].as_array().unwrap().len(),
        4
    );
    // Timing block from the spec's brute-force inputs: 0.9 * 4s.
    assert_eq!(bundle["timing"]["max_slot_seconds"], "3.6");
    assert_eq!(bundle["timing"]["strict"], true);

    for table in ["policies.csv", "values.csv", "certificate.csv"] {
        let text = std::fs::read_to_string(out.join(table)).unwrap();
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'), "LF line endings only");
    }

    // CSV numbers match the JSON bundle numbers.
    let values_csv = std::fs::read_to_string(out.join("values.csv")).unwrap();
    let first_row: Vec<&str> = values_csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first_row[1], bundle["values"]["defender"][0].as_str().unwrap());
}

#[test]
fn trivial_single_combination_game_solves() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        r#"{
          "techniques": 1,
          "keys_per_technique": 1,
          "beta": 0.75,
          "rewards": {
            "defender_other_tech": 10.0,
            "defender_same_tech": 5.0,
            "attacker_match": 10.0,
            "attacker_miss": 5.0
          },
          "power": { "defender": [1.0], "attacker": [1.0] },
          "transition": { "key": 5.0, "technique": 10.0, "stay": 0.0 },
          "cost": { "model": "none", "q": 0.0 }
        }"#,
    );
    let out = dir.path().join("out");
    let result = keyshift(&["solve", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&result), 0);
    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("result.json")).unwrap()).unwrap();
    assert_eq!(bundle["policies"]["defender"][0][0], "1");
    // Value (R_same + T_stay - P) / (1 - beta) = 4 / 0.25.
    assert_eq!(bundle["values"]["defender"][0], "16");
}

#[test]
fn budget_refusal_exits_2_and_names_the_count() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        &DEFAULT_SPEC.replace("\"keys_per_technique\": 2", "\"keys_per_technique\": 4"),
    );
    let result = keyshift(&[
        "solve",
        "--spec",
        &spec,
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 2);
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("4294967296"), "stderr: {stderr}");
}

#[test]
fn parse_and_usage_failures_exit_3() {
    let dir = TempDir::new().unwrap();

    // Unknown key in the document.
    let spec = write_spec(dir.path(), &DEFAULT_SPEC.replace("\"beta\"", "\"betta\""));
    let out = dir.path().join("out");
    let result = keyshift(&["solve", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&result), 3);
    assert!(String::from_utf8_lossy(&result.stderr).contains("betta"));

    // Reversed sweep bounds.
    let spec = write_spec(dir.path(), DEFAULT_SPEC);
    let result = keyshift(&[
        "sweep-beta",
        "--spec",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--from",
        "0.9",
        "--to",
        "0.1",
        "--step",
        "0.1",
    ]);
    assert_eq!(code(&result), 3);

    // Unknown flag: a usage error, also 3.
    let result = keyshift(&["solve", "--nonsense"]);
    assert_eq!(code(&result), 3);
}

#[test]
fn single_point_sweep_matches_solve_values() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), DEFAULT_SPEC);

    let solve_out = dir.path().join("solve");
    assert_eq!(
        code(&keyshift(&[
            "solve",
            "--spec",
            &spec,
            "--out",
            solve_out.to_str().unwrap(),
        ])),
        0
    );
    let solve_bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(solve_out.join("result.json")).unwrap())
            .unwrap();

    let sweep_out = dir.path().join("sweep");
    assert_eq!(
        code(&keyshift(&[
            "sweep-beta",
            "--spec",
            &spec,
            "--out",
            sweep_out.to_str().unwrap(),
            "--format",
            "csv",
            "--from",
            "0.75",
            "--to",
            "0.75",
            "--step",
            "0.1",
        ])),
        0
    );
    let csv = std::fs::read_to_string(sweep_out.join("sweep_beta.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "beta,state,value_defender,value_attacker"
    );
    for (s, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], "0.75");
        assert_eq!(
            fields[2],
            solve_bundle["values"]["defender"][s].as_str().unwrap()
        );
    }
}

#[test]
fn compare_uniform_reports_positive_gains() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), DEFAULT_SPEC);
    let out = dir.path().join("out");
    let result = keyshift(&[
        "compare-uniform",
        "--spec",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&result), 0);
    let csv = std::fs::read_to_string(out.join("compare_uniform.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let pct: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(pct > 0.0);
    }
}

#[test]
fn cost_sweep_orders_models() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), DEFAULT_SPEC);
    let out = dir.path().join("out");
    let result = keyshift(&[
        "sweep-cost",
        "--spec",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
        "--models",
        "none,log,linear",
        "--q",
        "2.0",
        "--betas",
        "0.5:0.75:0.25",
        "--state",
        "2",
    ]);
    assert_eq!(code(&result), 0, "{result:?}");
    let csv = std::fs::read_to_string(out.join("sweep_cost.csv")).unwrap();
    let value = |beta: &str, model: &str| -> f64 {
        csv.lines()
            .skip(1)
            .find(|l| l.starts_with(&format!("{beta},{model},")))
            .unwrap()
            .split(',')
            .nth(3)
            .unwrap()
            .parse()
            .unwrap()
    };
    for beta in ["0.5", "0.75"] {
        assert!(value(beta, "none") >= value(beta, "log"));
        assert!(value(beta, "log") >= value(beta, "linear"));
    }
}

#[test]
fn power_sweep_with_explicit_scenarios() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), DEFAULT_SPEC);
    let out = dir.path().join("out");
    let result = keyshift(&[
        "sweep-power",
        "--spec",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
        "--scenario",
        "1,3:1,3",
        "--scenario",
        "3,1:3,1",
    ]);
    assert_eq!(code(&result), 0);
    let csv = std::fs::read_to_string(out.join("sweep_power.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 8);

    // Malformed scenario is a usage error.
    let result = keyshift(&[
        "sweep-power",
        "--spec",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--scenario",
        "1,2,3:1,2",
    ]);
    assert_eq!(code(&result), 3);
}

#[test]
fn simulate_is_reproducible_and_needs_policies() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), DEFAULT_SPEC);

    // Without a policy source: usage error.
    let result = keyshift(&[
        "simulate",
        "--spec",
        &spec,
        "--out",
        dir.path().join("none").to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 3);

    let run = |out: &Path| {
        let result = keyshift(&[
            "simulate",
            "--spec",
            &spec,
            "--out",
            out.to_str().unwrap(),
            "--solve-first",
            "--episodes",
            "500",
            "--seed",
            "42",
        ]);
        assert_eq!(code(&result), 0, "{result:?}");
        let mut bundle: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("result.json")).unwrap())
                .unwrap();
        // Timestamps differ run to run; the numeric content must not.
        bundle["meta"]
            .as_object_mut()
            .unwrap()
            .remove("created_at");
        bundle
    };
    let a = run(&dir.path().join("a"));
    let b = run(&dir.path().join("b"));
    assert_eq!(a, b);
    assert_eq!(a["simulation"]["seed"], 42);

    // Simulating from a saved solve bundle works too.
    let solve_out = dir.path().join("solve");
    keyshift(&["solve", "--spec", &spec, "--out", solve_out.to_str().unwrap()]);
    let result = keyshift(&[
        "simulate",
        "--spec",
        &spec,
        "--out",
        dir.path().join("frombundle").to_str().unwrap(),
        "--policies",
        solve_out.join("result.json").to_str().unwrap(),
        "--episodes",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&result), 0, "{result:?}");
}
