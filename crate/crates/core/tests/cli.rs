use std::process::{Command, Output};

use octoforms::canonical::spin9_form;
use octoforms::exterior::{JsonForm, Multivector};
use octoforms::rational::Rational;
use serde_json::Value;

fn octoforms(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_octoforms"));
    cmd.args(args).env_remove("OCTOFORMS_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

#[test]
fn spin9_csv_has_one_row_per_monomial() {
    let o = octoforms(&["form", "--format", "csv"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "blade;coeff");
    assert_eq!(lines.len(), 703);
    assert!(lines[1..].iter().all(|l| l.split(';').count() == 2));
}

#[test]
fn form_json_round_trips() {
    let o = octoforms(&["form", "--which", "spin9", "--json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let f: JsonForm = serde_json::from_value(v["form"].clone()).unwrap();
    assert_eq!(&Multivector::from_json(&f).unwrap(), spin9_form());

    let tau4: JsonForm = serde_json::from_value(json(&octoforms(&["form", "--which", "tau4", "--json"], &[]))["form"].clone()).unwrap();
    let tau4 = Multivector::from_json(&tau4).unwrap();
    assert_eq!(tau4, spin9_form().scale(&Rational::from(360)));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &[][..],
        &["nope"],
        &["fields"],
        &["fields", "--m", "abc"],
        &["hopf", "--point", "1,2,3"],
        &["verify", "--format", "csv"],
        &["clifford-structure", "--model", "EVIII", "--closure"],
        &["clifford-structure", "--model", "G2"],
        &["fields", "--m", "0"],
        &["berger", "--samples", "0"],
        &["form", "--workers", "0"],
    ] {
        assert_eq!(octoforms(args, &[]).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    for args in [["--help"], ["--version"]] {
        let o = octoforms(&args, &[]);
        assert_eq!(o.status.code(), Some(0));
        assert!(!o.stdout.is_empty());
    }
}

#[test]
fn undersampled_berger_fails() {
    let o = octoforms(&["berger", "--samples", "50"], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("cosine"));
}

#[test]
fn workers_fall_back_to_environment() {
    assert_eq!(octoforms(&["form"], &[("OCTOFORMS_WORKERS", "0")]).status.code(), Some(2));
    assert_eq!(octoforms(&["form", "--workers", "2"], &[("OCTOFORMS_WORKERS", "0")]).status.code(), Some(0));
    let from_env = octoforms(&["berger", "--samples", "3000", "--json"], &[("OCTOFORMS_WORKERS", "3")]);
    let from_flag = octoforms(&["berger", "--samples", "3000", "--json", "--workers", "1"], &[]);
    assert_eq!(from_env.stdout, from_flag.stdout);
}

#[test]
fn outputs_are_deterministic_per_seed() {
    let run = |seed: &str| octoforms(&["hopf", "--json", "--seed", seed], &[]).stdout;
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
    let mc = |seed: &str| octoforms(&["berger", "--samples", "2000", "--json", "--seed", seed], &[]).stdout;
    assert_eq!(mc("1"), mc("1"));
    assert_ne!(mc("1"), mc("2"));
}

#[test]
fn floats_have_seventeen_significant_digits() {
    let o = octoforms(&["berger", "--samples", "2000", "--json"], &[]);
    let text = stdout(&o);
    let c = text.lines().find(|l| l.trim_start().starts_with("\"cosine\"")).unwrap();
    let value = c.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = value.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{value}");
    let v = json(&o);
    assert_eq!(v["mean"]["coeffs"].as_array().unwrap().len(), 12870);
}

#[test]
fn hopf_rationals_are_strings() {
    let o = octoforms(&["hopf", "--json", "--seed", "3"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let lambda: Vec<Rational> = serde_json::from_value(v["lambda"].clone()).unwrap();
    assert_eq!(lambda.len(), 9);
    assert!(v["lambda"].as_array().unwrap().iter().all(Value::is_string));
    assert_eq!(lambda.iter().map(|l| l * l).sum::<Rational>(), Rational::from(1));
    assert_eq!(v["norm2"], "1");
}

#[test]
fn hopf_point_from_coordinates() {
    let mut coords = vec!["0"; 16];
    coords[0] = "3/5";
    coords[8] = "4/5";
    let o = octoforms(&["hopf", "--json", "--point", &coords.join(",")], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["lambda"][8], "-7/25");
    let off = coords.iter().map(|c| if *c == "4/5" { "1/5" } else { c }).collect::<Vec<_>>().join(",");
    assert_eq!(octoforms(&["hopf", "--point", &off], &[]).status.code(), Some(2));
}

#[test]
fn fields_verify_reports_sigma() {
    let o = octoforms(&["fields", "--m", "64", "--verify", "--json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["fields"].as_array().unwrap().len(), 11);
}

#[test]
fn charpoly_and_clifford() {
    let v = json(&octoforms(&["charpoly", "--json"], &[]));
    let terms: Vec<u64> = v["tau"].as_array().unwrap().iter().map(|t| t["terms"].as_u64().unwrap()).collect();
    assert_eq!(terms, [0, 0, 0, 702, 0, 0, 0, 1, 0]);
    let v = json(&octoforms(&["clifford", "--extend", "1", "--json"], &[]));
    assert_eq!(v["m"], 9);
    assert_eq!(v["delta"], "16");
}

#[test]
fn structure_census_and_tau2() {
    let o = octoforms(&["clifford-structure", "--census", "--closure", "--tau2", "--json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["closure_dim"], 45);
    assert_eq!(v["spin9_closure"], 36);
}

#[test]
fn verify_without_monte_carlo_passes() {
    let o = octoforms(&["verify", "--samples", "0"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("checks passed"));
}
