//! End-to-end tests that drive the compiled `dosedesign` binary the way a
//! shell user would: write a problem file, run a subcommand, inspect exit
//! status, stdout, and any files it wrote.

use std::path::Path;
use std::process::{Command, Output};

use dosedesign::{
    bayes_logdet, AllocationMeasure, CompositeDesign, Design, DesignSpace, DiscretePrior,
    ModelKind, ParameterStructure,
};

/// Two administration frequencies sharing location and scale, with spread
/// five-atom priors on both shape parameters.
const SPREAD_PRIOR_PROBLEM: &str = r#"
model = "emax"
sharing = "common_location_scale"

[[groups]]
d_max = 1.0
sigma2 = 1.0
prior = { uniform_on = [0.20, 0.275, 0.35, 0.425, 0.50] }

[[groups]]
d_max = 1.0
sigma2 = 1.0
prior = { uniform_on = [0.60, 0.675, 0.75, 0.825, 0.90] }
"#;

/// Single group, point-mass prior: the saturated design is locally
/// D-optimal, so `check` must certify it.
const DIRAC_PROBLEM: &str = r#"
model = "emax"
sharing = "individual"

[[groups]]
d_max = 1.0
sigma2 = 1.0
prior = { dirac = 0.3 }
"#;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dosedesign"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should run")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Reads a design file back the way a separate tool would, without going
/// through the crate's own deserializer.
fn parse_design(path: &Path) -> (f64, CompositeDesign) {
    let value: toml::Table = std::fs::read_to_string(path).unwrap().parse().unwrap();
    let phi = value["phi"].as_float().unwrap();
    let floats = |v: &toml::Value| -> Vec<f64> {
        v.as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_float().unwrap())
            .collect()
    };
    let groups: Vec<Design> = value["group_designs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| Design::new(floats(&g["points"]), floats(&g["weights"])).unwrap())
        .collect();
    let allocation = AllocationMeasure::new(floats(&value["allocation"]["lambdas"])).unwrap();
    (phi, CompositeDesign::new(groups, allocation).unwrap())
}

#[test]
fn solve_saturated_roundtrips_through_the_design_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "problem.toml", DIRAC_PROBLEM);

    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "problem.toml",
            "--mode",
            "saturated",
            "--out",
            "design.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("mode              saturated"), "{text}");
    assert!(text.contains("criterion value"), "{text}");
    assert!(text.contains("wrote design.toml"), "{text}");

    let (phi, xi) = parse_design(&dir.path().join("design.toml"));
    let space = DesignSpace::new(1.0).unwrap();
    let s = ParameterStructure::individual(ModelKind::Emax, space, 1.0).unwrap();
    let prior = DiscretePrior::dirac(vec![0.0, 1.0, 0.3]);
    let recomputed = bayes_logdet(&s, &xi, &prior).unwrap();
    assert!(
        (phi - recomputed).abs() <= 1e-9,
        "stored phi {phi} vs recomputed {recomputed}"
    );

    let points = xi.groups()[0].points();
    assert_eq!(points.len(), 3);
    assert_eq!(points[0], 0.0);
    assert_eq!(points[2], 1.0);
    for &w in xi.groups()[0].weights() {
        assert!((w - 1.0 / 3.0).abs() <= 1e-12);
    }
}

#[test]
fn check_certifies_a_locally_optimal_design() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "problem.toml", DIRAC_PROBLEM);

    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "problem.toml",
            "--mode",
            "saturated",
            "--out",
            "design.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let out = run_in(
        dir.path(),
        &["check", "--problem", "problem.toml", "--design", "design.toml"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("verdict           certified"));
}

#[test]
fn check_refutes_the_saturated_design_under_spread_priors() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "problem.toml", SPREAD_PRIOR_PROBLEM);

    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "problem.toml",
            "--mode",
            "saturated",
            "--out",
            "design.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("case              A"));

    let out = run_in(
        dir.path(),
        &[
            "check",
            "--problem",
            "problem.toml",
            "--design",
            "design.toml",
            "--out",
            "tau.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict           refuted"), "{text}");
    assert!(text.contains("group 2"), "{text}");

    let csv = std::fs::read_to_string(dir.path().join("tau.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("group,dose,tau"));
    // 1001 scan points per group, 2 groups, plus the header.
    assert_eq!(csv.lines().count(), 1 + 2 * 1001);
}

#[test]
fn malformed_prior_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "problem.toml",
        r#"
model = "emax"
sharing = "individual"

[[groups]]
d_max = 1.0
sigma2 = 1.0
prior = { }
"#,
    );
    let out = run_in(
        dir.path(),
        &["solve", "--problem", "problem.toml", "--mode", "saturated"],
    );
    assert_eq!(out.status.code(), Some(1));
    let text = stderr(&out);
    assert!(
        text.contains("exactly one of") && text.contains("uniform_on"),
        "{text}"
    );
}

#[test]
fn unknown_problem_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "problem.toml",
        r#"
model = "emax"
sharing = "individual"
bandwidth = 3

[[groups]]
d_max = 1.0
sigma2 = 1.0
prior = { dirac = 0.3 }
"#,
    );
    let out = run_in(
        dir.path(),
        &["solve", "--problem", "problem.toml", "--mode", "saturated"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bandwidth"), "{}", stderr(&out));
}

#[test]
fn tau_curve_is_deterministic_and_aliased() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "problem.toml", SPREAD_PRIOR_PROBLEM);

    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "problem.toml",
            "--mode",
            "saturated",
            "--out",
            "design.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let args = [
        "tau-curve",
        "--problem",
        "problem.toml",
        "--design",
        "design.toml",
        "--grid",
        "101",
    ];
    let first = run_in(dir.path(), &args);
    let second = run_in(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).starts_with("group,dose,tau"));

    let mut alias = args;
    alias[0] = "equivalence";
    let aliased = run_in(dir.path(), &alias);
    assert_eq!(aliased.status.code(), Some(0));
    assert_eq!(first.stdout, aliased.stdout);
}

#[test]
fn efficiency_table_is_wide_for_two_shared_groups_and_long_otherwise() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "problem.toml",
        r#"
model = "emax"
sharing = "common_location_scale"

[[groups]]
d_max = 1.0
sigma2 = 1.0
prior = { dirac = 0.3 }

[[groups]]
d_max = 1.0
sigma2 = 1.0
prior = { dirac = 0.7 }
"#,
    );
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "problem.toml",
            "--mode",
            "saturated",
            "--out",
            "design.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let out = run_in(
        dir.path(),
        &[
            "efficiency",
            "--problem",
            "problem.toml",
            "--design",
            "design.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta2_2/theta2_1,0.3"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("0.7,"), "{row}");
    let eff: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((0.0..=1.0 + 1e-12).contains(&eff), "efficiency {eff}");

    write(dir.path(), "single.toml", DIRAC_PROBLEM);
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "single.toml",
            "--mode",
            "saturated",
            "--out",
            "sdesign.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let out = run_in(
        dir.path(),
        &[
            "efficiency",
            "--problem",
            "single.toml",
            "--design",
            "sdesign.toml",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta0,theta1,theta2,efficiency"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("0,1,0.3,"), "{row}");
    // The saturated design is the locally optimal reference here.
    let eff: f64 = row.split(',').last().unwrap().parse().unwrap();
    assert!((eff - 1.0).abs() <= 1e-6, "efficiency {eff}");
}

#[test]
fn swarm_solve_never_reports_below_the_saturated_construction() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "problem.toml", SPREAD_PRIOR_PROBLEM);

    let sat = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "problem.toml",
            "--mode",
            "saturated",
            "--out",
            "sat.toml",
        ],
    );
    assert_eq!(sat.status.code(), Some(0), "stderr: {}", stderr(&sat));
    let swarm = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            "problem.toml",
            "--mode",
            "swarm",
            "--seed",
            "0",
            "--out",
            "swarm.toml",
        ],
    );
    assert_eq!(swarm.status.code(), Some(0), "stderr: {}", stderr(&swarm));
    assert!(stdout(&swarm).contains("saturated case    A"));

    let (phi_sat, _) = parse_design(&dir.path().join("sat.toml"));
    let (phi_swarm, _) = parse_design(&dir.path().join("swarm.toml"));
    assert!(
        phi_swarm >= phi_sat,
        "swarm {phi_swarm} fell below saturated {phi_sat}"
    );

    let out = run_in(
        dir.path(),
        &["check", "--problem", "problem.toml", "--design", "swarm.toml"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("verdict           certified"));
}

#[test]
fn missing_problem_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["solve", "--problem", "nope.toml", "--mode", "saturated"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nope.toml"), "{}", stderr(&out));
}
