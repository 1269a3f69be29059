//! Command-line interface: argument parsing, dispatch and exit codes.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wmp_core::mc::{bwmp_mc, check_alt_good_window, dirfixwmp_mc, dirfixwmp_unfold, fixwmp_mc};
use wmp_core::mdp::{bwmp_mdp, dirfixwmp_mdp, fixwmp_mdp};
use wmp_core::model::negated;
use wmp_core::rational::{exact_string, parse_rational};
use wmp_core::{AnalysisResult, Error, Flavor, MarkovChain, Model, Objective, Rational, WindowKind};
use wmp_oracle::fixtures;
use wmp_oracle::monte_carlo::monte_carlo;
use wmp_oracle::random::{random_model, ModelKind, Params};

use crate::format::{parse_model, print_model};
use crate::output::{model_hash, AnalysisDoc, GoodWindowDoc, ObjectiveDoc, SimulationDoc, StateMassDoc, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_RESOURCE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "wmp", version, about = "Exact window mean-payoff analysis of Markov chains and MDPs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Computes the exact optimal expected value of a window objective.
    Analyze(AnalyzeArgs),
    /// Estimates a fixed or direct fixed window value by sampling a chain.
    Simulate(SimulateArgs),
    /// Checks that every reachable state opens a good window with probability at least p.
    CheckGw(CheckGwArgs),
    /// Prints a random model or a built-in fixture in the model file format.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Fixwmp,
    Dirfixwmp,
    Bwmp,
    Dirbwmp,
}

impl ObjectiveArg {
    fn kind(self) -> WindowKind {
        match self {
            ObjectiveArg::Fixwmp => WindowKind::Fixed,
            ObjectiveArg::Dirfixwmp => WindowKind::DirectFixed,
            ObjectiveArg::Bwmp => WindowKind::Bounded,
            ObjectiveArg::Dirbwmp => WindowKind::DirectBounded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Payoff,
    Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Product,
    Unfold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Mc,
    Mdp,
    Game,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureArg {
    Fig1,
    Fig2,
    Fig3,
    Fig7,
    StrictGap,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit a JSON document (the default).
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Emit a human-readable summary.
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    /// Window length, required for the fixed objectives.
    #[arg(long)]
    pub lmax: Option<u32>,
    #[arg(long, value_enum, default_value = "payoff")]
    pub flavor: FlavorArg,
    /// Direct fixed algorithm on chains: threshold products or path unfolding.
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgorithmArg>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub lmax: Option<u32>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Edges per sampled path.
    #[arg(long, default_value_t = 200)]
    pub horizon: usize,
    /// Window starts ignored by the fixed objective.
    #[arg(long, default_value_t = 50)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckGwArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Required probability of a good window.
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub lmax: u32,
    /// Threshold on the window mean payoff.
    #[arg(long)]
    pub lambda: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, required_unless_present = "fixture")]
    pub kind: Option<KindArg>,
    /// Print a built-in fixture instead of a random model.
    #[arg(long, value_enum, conflicts_with = "kind")]
    pub fixture: Option<FixtureArg>,
    #[arg(long, default_value_t = 4)]
    pub states: usize,
    #[arg(long, default_value_t = 2)]
    pub max_out: usize,
    #[arg(long, default_value_t = 2)]
    pub max_actions: usize,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    pub weight_lo: i64,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    pub weight_hi: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Outcome { code, stdout: String::new(), stderr }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Model(_) | Error::Precondition(_) | Error::Unsupported(_) => EXIT_VALIDATION,
        Error::SizeCap { .. } | Error::Overflow(_) => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

fn load(path: &PathBuf) -> Result<(Model, String), Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: cannot read {}: {e}", path.display())))?;
    let model = parse_model(&text).map_err(|e| {
        let code = if e.is_syntax() { EXIT_PARSE } else { EXIT_VALIDATION };
        Outcome::fail(code, format!("error: {}: {e}", path.display()))
    })?;
    let hash = model_hash(&print_model(&model));
    Ok((model, hash))
}

fn objective(kind: WindowKind, lmax: Option<u32>, flavor: Flavor) -> Result<Objective, Outcome> {
    Objective::new(kind, lmax, flavor).map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: {e}")))
}

fn json(doc: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs one command line (program name first) and captures its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome::ok(text) } else { Outcome::fail(code, text.trim_end()) };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a),
        Command::Simulate(a) => simulate(&a),
        Command::CheckGw(a) => check_gw(&a),
        Command::Gen(a) => gen(&a),
    };
    result.unwrap_or_else(|o| o)
}

fn analyze(a: &AnalyzeArgs) -> Result<Outcome, Outcome> {
    let flavor = match a.flavor {
        FlavorArg::Payoff => Flavor::Payoff,
        FlavorArg::Cost => Flavor::Cost,
    };
    let kind = a.objective.kind();
    objective(kind, a.lmax, flavor)?;
    if a.algorithm.is_some() && kind != WindowKind::DirectFixed {
        return Err(Outcome::fail(EXIT_USAGE, "error: --algorithm applies to dirfixwmp only"));
    }
    if a.threads == Some(0) {
        return Err(Outcome::fail(EXIT_USAGE, "error: --threads must be at least 1"));
    }
    let (model, hash) = load(&a.model)?;
    let unfold = a.algorithm == Some(AlgorithmArg::Unfold);
    if matches!(model, Model::Mdp(_)) && unfold {
        return Err(Outcome::fail(EXIT_USAGE, "error: --algorithm unfold is only available for Markov chains"));
    }
    if matches!(model, Model::Game(_)) {
        return Err(Outcome::fail(EXIT_USAGE, "error: analyze takes a Markov chain or an MDP; games are not analyzed directly"));
    }
    let l = a.lmax.map(|l| l as usize);
    let mut extra = Vec::new();
    if kind == WindowKind::DirectBounded {
        extra.push("dirbwmp is answered by the bwmp computation: both window functions agree on every path".to_string());
    }
    let input = if flavor == Flavor::Cost { negated(&model) } else { model.clone() };

    let start = Instant::now();
    let compute = || -> Result<AnalysisResult, Error> {
        match (&input, kind) {
            (Model::Mc(mc), WindowKind::Fixed) => fixwmp_mc(mc, l.expect("checked")),
            (Model::Mc(mc), WindowKind::DirectFixed) if unfold => dirfixwmp_unfold(mc, l.expect("checked")),
            (Model::Mc(mc), WindowKind::DirectFixed) => dirfixwmp_mc(mc, l.expect("checked")),
            (Model::Mc(mc), _) => bwmp_mc(mc),
            (Model::Mdp(m), WindowKind::Fixed) => fixwmp_mdp(m, l.expect("checked")),
            (Model::Mdp(m), WindowKind::DirectFixed) => dirfixwmp_mdp(m, l.expect("checked")),
            (Model::Mdp(m), _) => bwmp_mdp(m),
            (Model::Game(_), _) => unreachable!("rejected above"),
        }
    };
    let result = match a.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Outcome::fail(EXIT_INTERNAL, format!("error: thread pool: {e}")))?
            .install(compute),
        None => compute(),
    };
    let result = result.map_err(|e| Outcome::fail(error_code(&e), format!("error: {e}")))?;
    let mut result = if flavor == Flavor::Cost { result.map_values(|v| -v) } else { result };
    result.objective = objective(kind, a.lmax, flavor)?;
    let timing = elapsed_ms(start);

    let names: Vec<String> = match &model {
        Model::Mc(mc) => mc.names().to_vec(),
        Model::Mdp(m) => m.state_names().to_vec(),
        Model::Game(g) => g.names().to_vec(),
    };
    let algorithm = match (kind, unfold) {
        (WindowKind::DirectFixed, true) => "unfold",
        (WindowKind::DirectFixed, false) => "product",
        (WindowKind::Fixed, _) => "window-components",
        _ => "cycle-means",
    };
    let doc = AnalysisDoc::new(model.kind_name(), hash, algorithm, &result, &names, extra, timing);
    Ok(Outcome::ok(if a.output.text { doc.text() } else { json(&doc) }))
}

fn chain_only(model: Model, command: &str) -> Result<MarkovChain, Outcome> {
    match model {
        Model::Mc(mc) => Ok(mc),
        other => Err(Outcome::fail(EXIT_USAGE, format!("error: {command} takes a Markov chain, not a {}", other.kind_name()))),
    }
}

fn simulate(a: &SimulateArgs) -> Result<Outcome, Outcome> {
    let kind = a.objective.kind();
    if !kind.needs_window() {
        return Err(Outcome::fail(EXIT_USAGE, "error: simulate supports fixwmp and dirfixwmp only"));
    }
    let o = objective(kind, a.lmax, Flavor::Payoff)?;
    let (model, hash) = load(&a.model)?;
    let mc = chain_only(model, "simulate")?;
    let start = Instant::now();
    let e = monte_carlo(&mc, &o, a.samples, a.horizon, a.burn_in, a.seed)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: {e}")))?;
    let doc = SimulationDoc {
        schema: SCHEMA,
        command: "simulate",
        model_hash: hash,
        objective: ObjectiveDoc { kind: kind.name().into(), lmax: a.lmax, flavor: Flavor::Payoff.name().into() },
        samples: e.samples,
        horizon: a.horizon,
        burn_in: a.burn_in,
        seed: a.seed,
        mean: e.mean,
        std_dev: e.std_dev,
        std_err: e.std_err,
        interval: e.interval(4.0),
        timing_ms: elapsed_ms(start),
    };
    Ok(Outcome::ok(if a.output.text { doc.text() } else { json(&doc) }))
}

fn rational_flag(name: &str, text: &str) -> Result<Rational, Outcome> {
    parse_rational(text).ok_or_else(|| Outcome::fail(EXIT_USAGE, format!("error: --{name} `{text}` is not a rational")))
}

fn check_gw(a: &CheckGwArgs) -> Result<Outcome, Outcome> {
    let p = rational_flag("p", &a.p)?;
    let lambda = rational_flag("lambda", &a.lambda)?;
    if a.lmax == 0 {
        return Err(Outcome::fail(EXIT_USAGE, "error: window length must be at least 1"));
    }
    let (model, hash) = load(&a.model)?;
    let mc = chain_only(model, "check-gw")?;
    let start = Instant::now();
    let r = check_alt_good_window(&mc, &p, a.lmax as usize, &lambda)
        .map_err(|e| Outcome::fail(error_code(&e), format!("error: {e}")))?;
    let doc = GoodWindowDoc {
        schema: SCHEMA,
        command: "check-gw",
        model_hash: hash,
        p: exact_string(&p),
        lmax: a.lmax,
        lambda: exact_string(&lambda),
        holds: r.holds_globally,
        states: (0..mc.num_states())
            .map(|s| StateMassDoc { state: mc.name(s).into(), mass: exact_string(&r.mass[s]), satisfied: r.satisfied[s] })
            .collect(),
        timing_ms: elapsed_ms(start),
    };
    Ok(Outcome::ok(if a.output.text { doc.text() } else { json(&doc) }))
}

fn gen(a: &GenArgs) -> Result<Outcome, Outcome> {
    let model = match a.fixture {
        Some(FixtureArg::Fig1) => Model::Mc(fixtures::fig1()),
        Some(FixtureArg::Fig2) => Model::Mc(fixtures::fig2()),
        Some(FixtureArg::Fig3) => Model::Mc(fixtures::fig3()),
        Some(FixtureArg::Fig7) => Model::Game(fixtures::fig7_game()),
        Some(FixtureArg::StrictGap) => Model::Mc(fixtures::strict_gap_chain()),
        None => {
            if a.states == 0 || a.max_out == 0 || a.max_actions == 0 || a.weight_lo > a.weight_hi {
                return Err(Outcome::fail(EXIT_USAGE, "error: sizes must be positive and weight-lo <= weight-hi"));
            }
            let kind = match a.kind.expect("clap requires a kind") {
                KindArg::Mc => ModelKind::Mc,
                KindArg::Mdp => ModelKind::Mdp,
                KindArg::Game => ModelKind::Game,
            };
            let p = Params::new(a.states, a.weight_lo, a.weight_hi).max_out(a.max_out).max_actions(a.max_actions);
            // parse the printout so action indices are canonical
            parse_model(&print_model(&random_model(kind, &p, a.seed))).expect("generated models print validly")
        }
    };
    Ok(Outcome::ok(print_model(&model)))
}
