//! Acceptance suite: one test per criterion, each printing a single
//! `[PASS]` or `[FAIL]` line with its pinned counts and tolerances.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use wmp_cli::format::{parse_model, print_model};
use wmp_core::game::{max_direct_window_value, mean_payoff_game_value};
use wmp_core::graph::{bsccs, mecs, min_mean_cycle, WeightedDigraph};
use wmp_core::mc::{
    build_threshold_product, bwmp_mc, dirfixwmp_mc, dirfixwmp_unfold, exp_val_bscc, fixwmp_mc, non_neg_window_bscc,
};
use wmp_core::mdp::{bwmp_mdp, dirfixwmp_mdp, fixwmp_mdp};
use wmp_core::model::negated;
use wmp_core::path::{wmp, FinitePath};
use wmp_core::rational::{int, lcm_of_denominators, ratio, to_f64};
use wmp_core::{normalize, AnalysisResult, MarkovChain, Mdp, Model, Objective, Rational, Reweight};
use wmp_oracle::brute::{brute_c_bscc, brute_m_bscc, DEFAULT_CAP};
use wmp_oracle::fixtures::{fig1, fig7_game, strict_gap_chain, FIG1_S3, FIG1_S4};
use wmp_oracle::game_oracle::{brute_direct_window_game_value, brute_mean_payoff_game_value};
use wmp_oracle::monte_carlo::monte_carlo;
use wmp_oracle::random::{
    random_bipartite_game, random_bscc, random_game, random_mc, random_mdp, random_single_action_mdp, Params,
};
use wmp_oracle::reset::{build_bounded_reset_mdp, build_reset_mdp, reset_weight};

fn verdict(n: u32, claim: &str, ok: bool, detail: String) {
    println!("[{}] criterion {n}: {claim} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn within(start: Instant, cap: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t < cap, format!("{:.2}s of {}s", t.as_secs_f64(), cap.as_secs()))
}

fn whole(mc: &MarkovChain) -> WeightedDigraph {
    WeightedDigraph::from_chain_states(mc, &(0..mc.num_states()).collect::<Vec<_>>())
}

fn dist(r: &AnalysisResult) -> BTreeMap<Rational, Rational> {
    r.distribution.as_ref().expect("chain results carry a distribution").iter().map(|(v, p)| (v.clone(), p.clone())).collect()
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_01_fig1_worked_example() {
    let start = Instant::now();
    let mc = fig1();
    let top = exp_val_bscc(&WeightedDigraph::from_chain_states(&mc, &[1]), 2).unwrap();
    let bottom = exp_val_bscc(&WeightedDigraph::from_chain_states(&mc, &[FIG1_S3, FIG1_S4]), 2).unwrap();
    let value = fixwmp_mc(&mc, 2).unwrap().value;
    let (fast, time) = within(start, Duration::from_secs(1));
    let ok = top == int(2) && bottom == int(1) && value == ratio(3, 2) && fast;
    verdict(1, "fig1 components 2 and 1, fixwmp = 3/2 exactly", ok, format!("got {top}, {bottom}, {value}; {time}"));
}

#[test]
fn criterion_02_fig1_window_table() {
    let start = Instant::now();
    let mc = fig1();
    let mut values = Vec::new();
    for s in [FIG1_S3, FIG1_S4] {
        for a in mc.out_edges(s) {
            for b in mc.out_edges(a.dst) {
                values.push(wmp(&FinitePath::from_weights(&[a.weight.clone(), b.weight.clone()]), 2).unwrap());
            }
        }
    }
    let expected = [int(3), int(3), int(2), int(2), ratio(3, 2), int(1), int(1), int(1)];
    let (fast, time) = within(start, Duration::from_secs(1));
    let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    verdict(2, "eight length-2 window values from s3 and s4", values == expected && fast, format!("[{}]; {time}", shown.join(", ")));
}

#[test]
fn criterion_03_bscc_oracle_suite() {
    let start = Instant::now();
    let (mut checked, mut bad) = (0, Vec::new());
    for seed in 0..200u64 {
        let states = 1 + (seed as usize % 6);
        let g = whole(&random_bscc(seed, &Params::new(states, -5, 5).max_out(3)));
        if min_mean_cycle(&g).unwrap() != brute_c_bscc(&g).unwrap() {
            bad.push(format!("cycle seed {seed}"));
        }
        for l in 1..=5 {
            if exp_val_bscc(&g, l).unwrap() != brute_m_bscc(&g, l, DEFAULT_CAP).unwrap() {
                bad.push(format!("window seed {seed} l {l}"));
            }
        }
        checked += 1;
    }
    let (fast, time) = within(start, Duration::from_secs(120));
    verdict(3, "200 BSCCs agree with path and cycle enumeration", bad.is_empty() && fast, format!("{checked} BSCCs, mismatches {bad:?}; {time}"));
}

#[test]
fn criterion_04_product_and_unfolding_agree() {
    let start = Instant::now();
    let (mut tails, mut bad) = (0, Vec::new());
    for seed in 0..100u64 {
        let mc = random_mc(seed, &Params::new(1 + seed as usize % 5, -3, 3).max_out(2));
        let (norm, _) = normalize(&mc);
        let big_w = norm.weights().into_iter().max().unwrap().clone();
        for l in 1..=3usize {
            let a = dirfixwmp_mc(&norm, l).unwrap();
            let b = dirfixwmp_unfold(&norm, l).unwrap();
            if dist(&a) != dist(&b) {
                bad.push(format!("distribution seed {seed} l {l}"));
                continue;
            }
            let d = a.distribution.unwrap();
            for q in 1..=l as i64 {
                let mut p = int(0);
                while p <= &big_w * int(q) {
                    let lambda = &p / int(q);
                    let no_trap = build_threshold_product(&norm, &lambda, l).unwrap().prob_no_trap().unwrap();
                    if no_trap != d.tail(&lambda) {
                        bad.push(format!("tail seed {seed} l {l} lambda {lambda}"));
                    }
                    tails += 1;
                    p += int(1);
                }
            }
        }
    }
    let (fast, time) = within(start, Duration::from_secs(300));
    verdict(4, "100 chains: equal distributions and tails = 1 - Pr(trap)", bad.is_empty() && fast, format!("{tails} tail checks, mismatches {bad:?}; {time}"));
}

#[test]
fn criterion_05_single_action_mdps_are_chains() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..100u64 {
        let m = random_single_action_mdp(seed, &Params::new(1 + seed as usize % 5, -3, 3).max_out(2));
        let mc = m.induced_chain(&vec![0; m.num_states()]);
        for l in 1..=3 {
            if fixwmp_mdp(&m, l).unwrap().value != fixwmp_mc(&mc, l).unwrap().value {
                bad.push(format!("fixwmp seed {seed} l {l}"));
            }
            if dirfixwmp_mdp(&m, l).unwrap().value != dirfixwmp_mc(&mc, l).unwrap().value {
                bad.push(format!("dirfixwmp seed {seed} l {l}"));
            }
        }
        if bwmp_mdp(&m).unwrap().value != bwmp_mc(&mc).unwrap().value {
            bad.push(format!("bwmp seed {seed}"));
        }
    }
    let (fast, time) = within(start, Duration::from_secs(300));
    verdict(5, "100 single-action MDPs match their chains", bad.is_empty() && fast, format!("mismatches {bad:?}; {time}"));
}

#[test]
fn criterion_06_game_solver_oracles() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..100u64 {
        let g = random_game(seed, &Params::new(1 + seed as usize % 5, -3, 3).max_out(3));
        if mean_payoff_game_value(&g).unwrap() != brute_mean_payoff_game_value(&g).unwrap() {
            bad.push(format!("mean payoff seed {seed}"));
        }
    }
    for seed in 0..100u64 {
        let g = random_game(seed, &Params::new(1 + seed as usize % 6, -2, 2).max_out(3));
        for l in 1..=3 {
            if max_direct_window_value(&g, l).unwrap().per_vertex != brute_direct_window_game_value(&g, l).unwrap() {
                bad.push(format!("direct window seed {seed} l {l}"));
            }
        }
    }
    let (fast, time) = within(start, Duration::from_secs(300));
    verdict(6, "100 + 100 games match positional and safety-product oracles", bad.is_empty() && fast, format!("mismatches {bad:?}; {time}"));
}

#[test]
fn criterion_07_reset_round_trips() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..50u64 {
        let states = 2 + seed as usize % 3;
        let g = random_bipartite_game(seed, &Params::new(states, 0, 3).max_out(2), 1 + seed as usize % (states - 1));
        for l in 1..=3 {
            let expect = &max_direct_window_value(&g, l).unwrap().per_vertex[g.initial()];
            if fixwmp_mdp(&build_reset_mdp(&g, l).unwrap(), l).unwrap().value != *expect {
                bad.push(format!("fixed seed {seed} l {l}"));
            }
        }
        let expect = &mean_payoff_game_value(&g).unwrap()[g.initial()];
        if bwmp_mdp(&build_bounded_reset_mdp(&g).unwrap()).unwrap().value != *expect {
            bad.push(format!("bounded seed {seed}"));
        }
    }
    let weight = reset_weight(&fig7_game(), 3);
    let (fast, time) = within(start, Duration::from_secs(600));
    let ok = bad.is_empty() && weight == int(30) && fast;
    verdict(7, "50 games survive both reset round trips; reset weight 30 at W=4, l=3", ok, format!("weight {weight}, mismatches {bad:?}; {time}"));
}

/// `ceil((n*W)(n-1)/d) + (n-1)` with `d` half the least gap between
/// distinct fractions with denominators at most `n`.
fn length_bound(n: usize, big_w: &Rational) -> usize {
    if n <= 1 {
        return 1;
    }
    let n_r = int(n as i64);
    let d = ratio(1, 2 * (n * (n - 1)) as i64);
    let raw = (&n_r * big_w * (&n_r - int(1)) / d).ceil();
    (wmp_core::rational::to_i64(&raw).unwrap() as usize + n - 1).max(1)
}

fn max_abs<'a>(ws: impl IntoIterator<Item = &'a Rational>) -> Rational {
    ws.into_iter().map(|w| w.abs()).max().unwrap_or_else(|| int(0))
}

/// Checks monotonicity on `1..=6`, the bound by the bounded value and
/// attainment at `l_star`.
fn convergence(values: impl Fn(usize) -> Rational, bounded: &Rational, l_star: usize) -> (bool, bool, bool) {
    let series: Vec<Rational> = (1..=6).map(&values).collect();
    let monotone = series.windows(2).all(|w| w[0] <= w[1]);
    let at_bound = values(l_star);
    let below = series.iter().all(|v| v <= bounded) && at_bound <= *bounded;
    (monotone, below, at_bound == *bounded)
}

#[test]
fn criterion_08_fixed_values_converge_to_bounded() {
    let start = Instant::now();
    let (mut monotone, mut bounded, mut attained, mut total) = (0, 0, 0, 0);
    let mut missed = Vec::new();
    let mut chains: Vec<(String, MarkovChain)> =
        (0..20u64).map(|s| (format!("chain seed {s}"), random_mc(s, &Params::new(1 + s as usize % 4, -2, 2).max_out(2)))).collect();
    chains.push(("strict gap chain".into(), strict_gap_chain()));
    for (name, mc) in &chains {
        let l_star = bsccs(mc)
            .unwrap()
            .components
            .iter()
            .map(|c| {
                let g = WeightedDigraph::from_chain_states(mc, c);
                length_bound(c.len(), &max_abs(g.edges().iter().map(|e| &e.2)))
            })
            .max()
            .unwrap();
        let b = bwmp_mc(mc).unwrap().value;
        let (m, below, hit) = convergence(|l| fixwmp_mc(mc, l).unwrap().value, &b, l_star);
        total += 1;
        monotone += usize::from(m);
        bounded += usize::from(below);
        attained += usize::from(hit);
        if !hit {
            missed.push(format!("{name}: fixwmp({l_star}) = {} < {b}", fixwmp_mc(mc, l_star).unwrap().value));
        }
    }
    for seed in 0..10u64 {
        let m: Mdp = random_mdp(seed, &Params::new(1 + seed as usize % 2, -1, 1).max_out(2).max_actions(2));
        // end component cycles of the split game alternate states and choices
        let l_star = mecs(&m)
            .mecs
            .iter()
            .map(|c| {
                let ws: Vec<&Rational> = c.states.iter().flat_map(|&s| m.choices(s)).flat_map(|ch| ch.transitions.iter().map(|t| &t.weight)).collect();
                length_bound(2 * c.states.len(), &max_abs(ws))
            })
            .max()
            .unwrap();
        let b = bwmp_mdp(&m).unwrap().value;
        let (mo, below, hit) = convergence(|l| fixwmp_mdp(&m, l).unwrap().value, &b, l_star);
        total += 1;
        monotone += usize::from(mo);
        bounded += usize::from(below);
        attained += usize::from(hit);
        if !hit {
            missed.push(format!("mdp seed {seed}: fixwmp({l_star}) = {} < {b}", fixwmp_mdp(&m, l_star).unwrap().value));
        }
    }
    let (fast, time) = within(start, Duration::from_secs(300));
    let ok = monotone == total && bounded == total && attained == total && fast;
    verdict(
        8,
        "fixwmp monotone in l, below bwmp, equal to bwmp at the length bound",
        ok,
        format!("{total} models: monotone {monotone}, bounded {bounded}, attained {attained}; misses {missed:?}; {time}"),
    );
}

#[test]
fn criterion_09_window_witness_at_the_length_bound() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..50u64 {
        let g = whole(&random_bscc(seed, &Params::new(1 + seed as usize % 5, -5, 5).max_out(3)));
        let n = g.num_vertices() as i64;
        let lambda = min_mean_cycle(&g).unwrap() - ratio(1, 2 * n);
        let shifted = g.map_weights(|w| w - &lambda);
        let big_w = max_abs(shifted.edges().iter().map(|e| &e.2));
        // d = 1/(2n)
        let raw = (int(n) * &big_w * int(n - 1) * int(2 * n)).ceil();
        let l = (wmp_core::rational::to_i64(&raw).unwrap() + n - 1).max(1) as usize;
        let scale = Rational::from_integer(lcm_of_denominators(shifted.edges().iter().map(|e| &e.2)));
        let scaled = shifted.map_weights(|w| w * &scale);
        let got = non_neg_window_bscc(&scaled, l).unwrap();
        if got != (0..g.num_vertices()).collect::<BTreeSet<_>>() {
            bad.push(format!("seed {seed} l {l}: {got:?}"));
        }
    }
    let (fast, time) = within(start, Duration::from_secs(120));
    verdict(9, "50 shifted BSCCs: every state opens good windows at the bound", bad.is_empty() && fast, format!("failures {bad:?}; {time}"));
}

const MC_SAMPLES: usize = 100_000;
const MC_HORIZON: usize = 1_500;
const MC_BURN_IN: usize = 50;
const MC_SEED: u64 = 7;
const MC_WINDOW: u32 = 3;

#[test]
fn criterion_10_monte_carlo_sanity() {
    let start = Instant::now();
    let chains: Vec<(String, MarkovChain)> = corpus()
        .into_iter()
        .filter(|(name, _)| name.ends_with(".mc"))
        .map(|(name, text)| match parse_model(&text).unwrap() {
            Model::Mc(mc) => (name, mc),
            _ => unreachable!("mc files hold chains"),
        })
        .collect();
    let rows: Vec<(String, bool)> = std::thread::scope(|scope| {
        let handles: Vec<_> = chains
            .iter()
            .flat_map(|(name, mc)| {
                [Objective::fixed(MC_WINDOW).unwrap(), Objective::direct_fixed(MC_WINDOW).unwrap()].map(|o| {
                    scope.spawn(move || {
                        let l = MC_WINDOW as usize;
                        let exact = match o.kind() {
                            wmp_core::WindowKind::Fixed => fixwmp_mc(mc, l).unwrap().value,
                            _ => dirfixwmp_mc(mc, l).unwrap().value,
                        };
                        let e = monte_carlo(mc, &o, MC_SAMPLES, MC_HORIZON, MC_BURN_IN, MC_SEED).unwrap();
                        let x = to_f64(&exact);
                        let ok = (e.mean - x).abs() <= 4.0 * e.std_err + 1e-12;
                        (format!("{name} {}: {:.5} vs {exact} (se {:.2e})", o.kind().name(), e.mean, e.std_err), ok)
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let failed: Vec<&String> = rows.iter().filter(|r| !r.1).map(|r| &r.0).collect();
    let (fast, time) = within(start, Duration::from_secs(180));
    let ok = chains.len() >= 10 && failed.is_empty() && fast;
    verdict(
        10,
        "Monte Carlo estimates within 4 standard errors (+1e-12) of exact values",
        ok,
        format!(
            "{} corpus chains, {MC_SAMPLES} samples, horizon {MC_HORIZON}, burn-in {MC_BURN_IN}, seed {MC_SEED}, l {MC_WINDOW}; outside {failed:?}; {time}",
            chains.len()
        ),
    );
}

fn run(args: &[&str]) -> wmp_cli::Outcome {
    wmp_cli::run(std::iter::once("wmp").chain(args.iter().copied()))
}

fn json_value(out: &wmp_cli::Outcome) -> serde_json::Value {
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

fn random_models(count: u64) -> Vec<Model> {
    (0..count)
        .map(|s| {
            let p = Params::new(2 + s as usize % 3, -3, 3).max_out(2).max_actions(2);
            if s % 2 == 0 {
                Model::Mc(random_mc(s, &p))
            } else {
                Model::Mdp(random_mdp(s, &p))
            }
        })
        .collect()
}

fn values(m: &Model, l: usize) -> [Rational; 3] {
    match m {
        Model::Mc(mc) => [fixwmp_mc(mc, l).unwrap().value, dirfixwmp_mc(mc, l).unwrap().value, bwmp_mc(mc).unwrap().value],
        Model::Mdp(d) => [fixwmp_mdp(d, l).unwrap().value, dirfixwmp_mdp(d, l).unwrap().value, bwmp_mdp(d).unwrap().value],
        Model::Game(_) => unreachable!("only chains and MDPs are analyzed"),
    }
}

#[test]
fn criterion_11_equivariance_and_format() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let (b, c) = (ratio(3, 2), ratio(-2, 3));
    let models = random_models(20);
    for (i, m) in models.iter().enumerate() {
        let moved = m.map_weights(|w| w * &b + &c);
        if values(&moved, 2) != values(m, 2).map(|v| v * &b + &c) {
            bad.push(format!("affine model {i}"));
        }
    }

    let dir = tempfile::tempdir().unwrap();
    for (i, m) in models.iter().enumerate() {
        let path = dir.path().join(format!("m{i}"));
        let twin = dir.path().join(format!("n{i}"));
        std::fs::write(&path, print_model(m)).unwrap();
        std::fs::write(&twin, print_model(&negated(m))).unwrap();
        for (objective, lmax) in [("bwmp", None), ("fixwmp", Some("2"))] {
            let mut cost = vec!["analyze", "--model", path.to_str().unwrap(), "--objective", objective, "--flavor", "cost"];
            let mut payoff = vec!["analyze", "--model", twin.to_str().unwrap(), "--objective", objective];
            if let Some(l) = lmax {
                cost.extend(["--lmax", l]);
                payoff.extend(["--lmax", l]);
            }
            let cv = json_value(&run(&cost))["value"].as_str().unwrap().to_string();
            let pv = json_value(&run(&payoff))["value"].as_str().unwrap().to_string();
            let neg = wmp_core::rational::parse_rational(&pv).map(|v| -v);
            if wmp_core::rational::parse_rational(&cv) != neg {
                bad.push(format!("cost model {i} {objective}: {cv} vs {pv}"));
            }
        }
    }

    let files = corpus();
    for (name, text) in &files {
        let model = parse_model(text).unwrap();
        if parse_model(&print_model(&model)).unwrap() != model {
            bad.push(format!("round trip {name}"));
        }
    }

    let mut compared = 0;
    for (name, _) in &files {
        if name.ends_with(".game") {
            continue;
        }
        let path = corpus_dir().join(name);
        let path = path.to_str().unwrap();
        for objective in ["fixwmp", "dirfixwmp", "bwmp"] {
            let base = ["analyze", "--model", path, "--objective", objective, "--lmax", "2", "--json"];
            let base = if objective == "bwmp" { &base[..5] } else { &base[..] };
            let one = run(&[base, &["--threads", "1"]].concat());
            let eight = run(&[base, &["--threads", "8"]].concat());
            if json_value(&one) != json_value(&eight) {
                bad.push(format!("threads {name} {objective}"));
            }
            compared += 1;
        }
    }
    let (fast, time) = within(start, Duration::from_secs(120));
    let ok = bad.is_empty() && models.len() == 20 && fast;
    verdict(
        11,
        "affine equivariance, cost duality, corpus round trip, thread determinism",
        ok,
        format!("20 models, {} corpus files, {compared} thread comparisons, failures {bad:?}; {time}", files.len()),
    );
}

#[test]
fn acceptance_inputs_are_well_formed() {
    assert!(fig1().edges().iter().all(|e| !e.prob.is_negative()));
    assert!(dist(&dirfixwmp_mc(&fig1(), 2).unwrap()).values().sum::<Rational>().is_one());
}
