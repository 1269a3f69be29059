//! End-to-end behavior of the `wmp` driver.

use std::path::{Path, PathBuf};
use std::process::Command;

use wmp_cli::commands::{EXIT_OK, EXIT_PARSE, EXIT_RESOURCE, EXIT_USAGE, EXIT_VALIDATION};
use wmp_cli::format::{parse_model, print_model};
use wmp_cli::{run, Outcome};
use wmp_core::model::negated;
use wmp_core::Model;
use wmp_oracle::random::{random_mc, Params};

fn wmp(args: &[&str]) -> Outcome {
    run(std::iter::once("wmp").chain(args.iter().copied()))
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).to_string_lossy().into_owned()
}

fn json(out: &Outcome) -> serde_json::Value {
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn fig1_fixed_value() {
    let doc = json(&wmp(&["analyze", "--model", &corpus("fig1.mc"), "--objective", "fixwmp", "--lmax", "2"]));
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["value"], "3/2");
    assert_eq!(doc["value_decimal"], "1.50000000000");
    assert_eq!(doc["objective"]["kind"], "fixwmp");
    assert_eq!(doc["components"].as_array().unwrap().len(), 2);
    assert_eq!(doc["model_kind"], "mc");
}

#[test]
fn text_output_names_the_value() {
    let out = wmp(&["analyze", "--model", &corpus("fig1.mc"), "--objective", "fixwmp", "--lmax", "2", "--text"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("value: 3/2"), "{}", out.stdout);
}

#[test]
fn direct_bounded_uses_bounded_pipeline() {
    let a = json(&wmp(&["analyze", "--model", &corpus("fig1.mc"), "--objective", "dirbwmp"]));
    let b = json(&wmp(&["analyze", "--model", &corpus("fig1.mc"), "--objective", "bwmp"]));
    assert_eq!(a["value"], b["value"]);
    assert!(a["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("dirbwmp")));
}

#[test]
fn cost_flavor_negates_the_negated_twin() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..10 {
        let m = Model::Mc(random_mc(seed, &Params::new(4, -3, 3).max_out(2)));
        let a = write(dir.path(), "a.mc", &print_model(&m));
        let b = write(dir.path(), "b.mc", &print_model(&negated(&m)));
        let cost = json(&wmp(&["analyze", "--model", &a, "--objective", "bwmp", "--flavor", "cost"]));
        let payoff = json(&wmp(&["analyze", "--model", &b, "--objective", "bwmp"]));
        let c = wmp_core::rational::parse_rational(cost["value"].as_str().unwrap()).unwrap();
        let p = wmp_core::rational::parse_rational(payoff["value"].as_str().unwrap()).unwrap();
        assert_eq!(c, -p, "seed {seed}");
        assert_eq!(cost["objective"]["flavor"], "cost");
    }
}

#[test]
fn product_and_unfold_distributions_match() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..20 {
        let m = Model::Mc(random_mc(seed, &Params::new(4, -3, 3).max_out(2)));
        let path = write(dir.path(), "m.mc", &print_model(&m));
        let base = ["analyze", "--model", path.as_str(), "--objective", "dirfixwmp", "--lmax", "2", "--algorithm"];
        let p = json(&wmp(&[&base[..], &["product"]].concat()));
        let u = json(&wmp(&[&base[..], &["unfold"]].concat()));
        assert_eq!(p["distribution"], u["distribution"], "seed {seed}");
        assert_eq!(p["value"], u["value"]);
        assert_eq!(u["algorithm"], "unfold");
    }
}

#[test]
fn mdp_analysis_reports_source_states() {
    for objective in ["fixwmp", "dirfixwmp", "bwmp"] {
        let model = corpus("gamble.mdp");
        let args = ["analyze", "--model", &model, "--objective", objective, "--lmax", "2"];
        let doc = json(&wmp(if objective == "bwmp" { &args[..5] } else { &args[..] }));
        for c in doc["components"].as_array().unwrap() {
            for s in c["states"].as_array().unwrap() {
                assert!(["home", "risky", "calm"].contains(&s.as_str().unwrap()), "{objective}: {s}");
            }
        }
    }
}

#[test]
fn usage_errors() {
    let fig1 = corpus("fig1.mc");
    assert_eq!(wmp(&["analyze", "--model", &fig1, "--objective", "fixwmp"]).code, EXIT_USAGE);
    assert_eq!(wmp(&["analyze", "--model", &fig1]).code, EXIT_USAGE);
    assert_eq!(wmp(&["frobnicate"]).code, EXIT_USAGE);
    let unfold = ["analyze", "--model", &corpus("fig1.mdp"), "--objective", "dirfixwmp", "--lmax", "2", "--algorithm", "unfold"];
    assert_eq!(wmp(&unfold).code, EXIT_USAGE);
    assert_eq!(wmp(&["analyze", "--model", &corpus("fig7.game"), "--objective", "bwmp"]).code, EXIT_USAGE);
    assert_eq!(wmp(&["simulate", "--model", &fig1, "--objective", "bwmp"]).code, EXIT_USAGE);
    assert_eq!(wmp(&["analyze", "--model", "/nonexistent/model.mc", "--objective", "bwmp"]).code, EXIT_USAGE);
    assert_eq!(wmp(&["--help"]).code, EXIT_OK);
}

#[test]
fn parse_and_validation_errors() {
    let dir = tempfile::tempdir().unwrap();
    let syntax = write(dir.path(), "s.mc", "mc\nstate a\ninit a\nedge a => a prob 1 weight 0\n");
    let out = wmp(&["analyze", "--model", &syntax, "--objective", "bwmp"]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.stderr.contains("line 4"), "{}", out.stderr);
    let short = write(dir.path(), "p.mc", "mc\nstate a\ninit a\nedge a -> a prob 1/2 weight 0\n");
    let out = wmp(&["analyze", "--model", &short, "--objective", "bwmp"]);
    assert_eq!(out.code, EXIT_VALIDATION);
    assert!(out.stderr.contains("probability sum"), "{}", out.stderr);
}

#[test]
fn resource_errors() {
    // window sums of 10^18 overflow the integer kernels
    let dir = tempfile::tempdir().unwrap();
    let huge = write(
        dir.path(),
        "h.mc",
        "mc\nstate a\nstate b\ninit a\nedge a -> b prob 1 weight 9000000000000000000\nedge b -> a prob 1 weight -9000000000000000000\n",
    );
    let out = wmp(&["analyze", "--model", &huge, "--objective", "dirfixwmp", "--lmax", "3"]);
    assert_eq!(out.code, EXIT_RESOURCE, "{}", out.stderr);
}

fn without_timing(out: &Outcome) -> serde_json::Value {
    let mut v = json(out);
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn output_is_independent_of_threads() {
    for (model, objective) in [("two_traps.mc", "dirfixwmp"), ("fig1.mdp", "dirfixwmp"), ("fig1.mc", "fixwmp")] {
        let base = ["analyze", "--model", &corpus(model), "--objective", objective, "--lmax", "3"];
        let one = wmp(&[&base[..], &["--threads", "1"]].concat());
        let eight = wmp(&[&base[..], &["--threads", "8"]].concat());
        assert_eq!(without_timing(&one), without_timing(&eight), "{model}");
    }
}

#[test]
fn simulate_and_check_gw() {
    let fig2 = corpus("fig2.mc");
    let doc = json(&wmp(&["simulate", "--model", &fig2, "--objective", "fixwmp", "--lmax", "2", "--samples", "100", "--seed", "3"]));
    assert_eq!(doc["mean"], 1.5);
    let doc = json(&wmp(&["check-gw", "--model", &corpus("fig1.mc"), "--p", "1/2", "--lmax", "2", "--lambda", "1"]));
    assert_eq!(doc["holds"], true);
    assert_eq!(doc["states"].as_array().unwrap().len(), 4);
    let bad = wmp(&["check-gw", "--model", &fig2, "--p", "x", "--lmax", "2", "--lambda", "0"]);
    assert_eq!(bad.code, EXIT_USAGE);
}

#[test]
fn generated_models_round_trip() {
    for kind in ["mc", "mdp", "game"] {
        for seed in ["0", "1", "2"] {
            let out = wmp(&["gen", "--kind", kind, "--states", "5", "--seed", seed]);
            assert_eq!(out.code, 0);
            let m = parse_model(&out.stdout).unwrap();
            assert_eq!(print_model(&m), out.stdout);
            assert_eq!(m.kind_name(), kind);
        }
    }
    assert_eq!(wmp(&["gen", "--kind", "mc", "--seed", "9"]), wmp(&["gen", "--kind", "mc", "--seed", "9"]));
}

#[test]
fn corpus_round_trips() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let m = parse_model(&text).unwrap();
        assert_eq!(parse_model(&print_model(&m)).unwrap(), m);
        count += 1;
    }
    assert!(count >= 13);
}

#[test]
fn fixtures_match_corpus_files() {
    for (fixture, file) in [("fig1", "fig1.mc"), ("fig2", "fig2.mc"), ("fig3", "fig3.mc"), ("fig7", "fig7.game"), ("strict-gap", "strict_gap.mc")] {
        let out = wmp(&["gen", "--fixture", fixture]);
        let text = std::fs::read_to_string(corpus(file)).unwrap();
        assert_eq!(parse_model(&out.stdout).unwrap(), parse_model(&text).unwrap(), "{fixture}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_wmp");
    let ok = Command::new(bin).args(["analyze", "--model", &corpus("fig1.mc"), "--objective", "fixwmp", "--lmax", "2", "--text"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("3/2"));
    let usage = Command::new(bin).args(["analyze", "--model", &corpus("fig1.mc"), "--objective", "fixwmp"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
}
