//! Seeded random models for differential tests. Probabilities are exact
//! integer splits of a small denominator, so every distribution sums to 1.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wmp_core::rational::{int, ratio};
use wmp_core::{Choice, GameEdge, MarkovChain, McEdge, Mdp, Model, Player, Rational, Transition, TwoPlayerGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Mc,
    Mdp,
    Game,
}

/// Size, weight and density bounds. Weights are integers in
/// `weight_lo..=weight_hi`; each state or action gets between 1 and
/// `max_out` successors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub states: usize,
    pub max_out: usize,
    pub max_actions: usize,
    pub weight_lo: i64,
    pub weight_hi: i64,
}

impl Params {
    pub fn new(states: usize, weight_lo: i64, weight_hi: i64) -> Self {
        Params { states, max_out: 2, max_actions: 2, weight_lo, weight_hi }
    }

    pub fn max_out(self, max_out: usize) -> Self {
        Params { max_out, ..self }
    }

    pub fn max_actions(self, max_actions: usize) -> Self {
        Params { max_actions, ..self }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

fn weight(rng: &mut ChaCha8Rng, p: &Params) -> Rational {
    int(rng.gen_range(p.weight_lo..=p.weight_hi))
}

/// `k` positive rationals summing to 1, with a denominator of at most `2k + 2`.
pub fn split(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    let den = rng.gen_range(k..=2 * k + 2);
    let mut cuts: Vec<usize> = sample(rng, den - 1, k - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(den);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let r = ratio((c - prev) as i64, den as i64);
            prev = c;
            r
        })
        .collect()
}

/// Distinct successors of `s`, always containing `forced` when given.
fn successors(rng: &mut ChaCha8Rng, n: usize, max_out: usize, forced: Option<usize>) -> Vec<usize> {
    let k = rng.gen_range(1..=max_out.min(n));
    let mut succ: Vec<usize> = sample(rng, n, k).into_vec();
    if let Some(f) = forced {
        if !succ.contains(&f) {
            succ[0] = f;
        }
    }
    succ.sort_unstable();
    succ
}

fn chain_edges(rng: &mut ChaCha8Rng, s: usize, succ: &[usize], p: &Params) -> Vec<McEdge> {
    let probs = split(rng, succ.len());
    succ.iter().zip(probs).map(|(&t, pr)| McEdge::new(s, t, pr, weight(rng, p))).collect()
}

/// A Markov chain with initial state `s0`.
pub fn random_mc(seed: u64, p: &Params) -> MarkovChain {
    let mut rng = rng(seed);
    let n = p.states;
    let mut edges = Vec::new();
    for s in 0..n {
        let succ = successors(&mut rng, n, p.max_out, None);
        edges.extend(chain_edges(&mut rng, s, &succ, p));
    }
    MarkovChain::new(names(n), 0, edges).expect("generated chain is valid")
}

/// A strongly connected chain: a random Hamiltonian cycle plus extra edges.
pub fn random_bscc(seed: u64, p: &Params) -> MarkovChain {
    let mut rng = rng(seed);
    let n = p.states;
    let order: Vec<usize> = sample(&mut rng, n, n).into_vec();
    let mut next = vec![0; n];
    for i in 0..n {
        next[order[i]] = order[(i + 1) % n];
    }
    let mut edges = Vec::new();
    for s in 0..n {
        let succ = successors(&mut rng, n, p.max_out, Some(next[s]));
        edges.extend(chain_edges(&mut rng, s, &succ, p));
    }
    MarkovChain::new(names(n), 0, edges).expect("generated chain is valid")
}

fn mdp_with(seed: u64, p: &Params, cycle: bool) -> Mdp {
    let mut rng = rng(seed);
    let n = p.states;
    let actions: Vec<String> = (0..p.max_actions).map(|a| format!("a{a}")).collect();
    let choices = (0..n)
        .map(|s| {
            let k = rng.gen_range(1..=p.max_actions);
            let mut acts: Vec<usize> = sample(&mut rng, p.max_actions, k).into_vec();
            acts.sort_unstable();
            acts.iter()
                .enumerate()
                .map(|(i, &a)| {
                    let forced = (cycle && i == 0).then_some((s + 1) % n);
                    let succ = successors(&mut rng, n, p.max_out, forced);
                    let probs = split(&mut rng, succ.len());
                    let transitions =
                        succ.iter().zip(probs).map(|(&t, pr)| Transition::new(t, pr, weight(&mut rng, p))).collect();
                    Choice { action: a, transitions }
                })
                .collect()
        })
        .collect();
    Mdp::new(names(n), actions, 0, choices).expect("generated MDP is valid")
}

/// An MDP with up to `max_actions` actions per state.
pub fn random_mdp(seed: u64, p: &Params) -> Mdp {
    mdp_with(seed, p, false)
}

/// An MDP whose first action at `s_i` can reach `s_{i+1}`, so the whole
/// state space is one end component.
pub fn random_mec(seed: u64, p: &Params) -> Mdp {
    mdp_with(seed, p, true)
}

pub fn random_single_action_mdp(seed: u64, p: &Params) -> Mdp {
    Mdp::from_markov_chain(&random_mc(seed, p))
}

/// A game with random owners; Player One owns the initial vertex.
pub fn random_game(seed: u64, p: &Params) -> TwoPlayerGame {
    let mut rng = rng(seed);
    let n = p.states;
    let owners: Vec<Player> =
        (0..n).map(|v| if v == 0 || rng.gen_bool(0.5) { Player::One } else { Player::Two }).collect();
    let mut edges = Vec::new();
    for v in 0..n {
        for t in successors(&mut rng, n, p.max_out, None) {
            edges.push(GameEdge::new(v, t, weight(&mut rng, p)));
        }
    }
    TwoPlayerGame::new(names(n), owners, 0, edges).expect("generated game is valid")
}

/// A bipartite game with `ones` Player One vertices (`s0` first, initial)
/// and `states - ones` Player Two vertices.
pub fn random_bipartite_game(seed: u64, p: &Params, ones: usize) -> TwoPlayerGame {
    assert!(ones >= 1 && ones < p.states, "both sides must be non-empty");
    let mut rng = rng(seed);
    let n = p.states;
    let twos = n - ones;
    let mut vnames: Vec<String> = (0..ones).map(|i| format!("s{i}")).collect();
    vnames.extend((0..twos).map(|i| format!("t{i}")));
    let owners: Vec<Player> = (0..n).map(|v| if v < ones { Player::One } else { Player::Two }).collect();
    let mut edges = Vec::new();
    for v in 0..ones {
        for t in successors(&mut rng, twos, p.max_out, None) {
            edges.push(GameEdge::new(v, ones + t, weight(&mut rng, p)));
        }
    }
    for v in 0..twos {
        for t in successors(&mut rng, ones, p.max_out, None) {
            edges.push(GameEdge::new(ones + v, t, weight(&mut rng, p)));
        }
    }
    TwoPlayerGame::new(vnames, owners, 0, edges).expect("generated game is valid")
}

pub fn random_model(kind: ModelKind, p: &Params, seed: u64) -> Model {
    match kind {
        ModelKind::Mc => Model::Mc(random_mc(seed, p)),
        ModelKind::Mdp => Model::Mdp(random_mdp(seed, p)),
        ModelKind::Game => Model::Game(random_game(seed, p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wmp_core::graph::is_strongly_connected;

    #[test]
    fn same_seed_same_model() {
        let p = Params::new(5, -3, 3).max_out(3);
        for kind in [ModelKind::Mc, ModelKind::Mdp, ModelKind::Game] {
            assert_eq!(random_model(kind, &p, 42), random_model(kind, &p, 42));
        }
    }

    #[test]
    fn bounds_are_honored() {
        let p = Params::new(4, 0, 2).max_out(2).max_actions(3);
        for seed in 0..50 {
            let m = random_mdp(seed, &p);
            assert_eq!(m.num_states(), 4);
            for s in 0..4 {
                assert!(m.choices(s).len() <= 3);
                for c in m.choices(s) {
                    assert!(c.transitions.len() <= 2);
                    assert!(c.transitions.iter().all(|t| t.weight >= int(0) && t.weight <= int(2)));
                }
            }
        }
    }

    #[test]
    fn splits_sum_to_one() {
        let mut r = rng(9);
        for k in 1..6 {
            assert_eq!(split(&mut r, k).iter().sum::<Rational>(), int(1));
        }
    }

    #[test]
    fn bsccs_are_strongly_connected() {
        for seed in 0..50 {
            assert!(is_strongly_connected(&random_bscc(seed, &Params::new(5, -5, 5).max_out(3)).adjacency()));
        }
    }
}
