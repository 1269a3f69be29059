//! Reset constructions: a bipartite game is augmented with heavy edges back
//! to its initial vertex, as a game and as an MDP whose alternating game
//! reproduces it.
//!
//! For every Player One edge `s -> s'` the reset game adds a Player Two
//! vertex `(s,s',2)` and a Player One vertex `(s,s',1)`:
//! `s -0-> (s,s',2) -w-> (s,s',1) -0-> s'` and `(s,s',2) -R-> init`.
//! The reset MDP has the states of Player One and the `(s,s',1)`; action
//! `to_s'` at `s` moves with weight `w(s,s')` to `(s,s',1)` or with weight
//! `R` to `init`, each with probability 1/2, and `go` at `(s,s',1)` picks
//! a successor of `s'` uniformly.

use std::collections::HashMap;

use num_traits::Zero;
use wmp_core::game::{mdp_to_game, GameVertex};
use wmp_core::model::has_natural_weights;
use wmp_core::rational::{int, ratio};
use wmp_core::{Choice, GameEdge, Mdp, Player, Rational, Transition, TwoPlayerGame};

use crate::error::{OracleError, Result};

/// Weight of the reset edges for window length `l_max`: `(W + 1) * 2 * l_max`.
pub fn reset_weight(game: &TwoPlayerGame, l_max: usize) -> Rational {
    (max_w(game) + int(1)) * int(2 * l_max as i64)
}

/// Weight of the bounded reset edges: `(W + 1)` times the vertex count of
/// the reset game.
pub fn bounded_reset_weight(game: &TwoPlayerGame) -> Rational {
    (max_w(game) + int(1)) * int(reset_game_size(game) as i64)
}

fn max_w(game: &TwoPlayerGame) -> Rational {
    game.edges().iter().map(|e| e.weight.clone()).max().unwrap_or_else(Rational::zero)
}

fn player_one_edges(game: &TwoPlayerGame) -> Vec<(usize, usize, Rational)> {
    game.edges()
        .iter()
        .filter(|e| game.owner(e.src) == Player::One)
        .map(|e| (e.src, e.dst, e.weight.clone()))
        .collect()
}

/// Vertex count of the reset game.
pub fn reset_game_size(game: &TwoPlayerGame) -> usize {
    game.num_vertices() + 2 * player_one_edges(game).len()
}

fn check_source(game: &TwoPlayerGame) -> Result<()> {
    if game.owner(game.initial()) != Player::One {
        return Err(OracleError::Unsupported("reset source must start at a Player One vertex".into()));
    }
    if game.edges().iter().any(|e| game.owner(e.src) == game.owner(e.dst)) {
        return Err(OracleError::Unsupported("reset source must be bipartite".into()));
    }
    if !has_natural_weights(game) {
        return Err(OracleError::Unsupported("reset source needs non-negative integer weights".into()));
    }
    Ok(())
}

fn mid_name(game: &TwoPlayerGame, s: usize, t: usize, k: u8) -> String {
    format!("({},{},{k})", game.name(s), game.name(t))
}

fn reset_game_with(game: &TwoPlayerGame, r: Rational) -> Result<TwoPlayerGame> {
    check_source(game)?;
    let mut names = game.names().to_vec();
    let mut owners = game.owners().to_vec();
    let mut edges: Vec<GameEdge> = game
        .edges()
        .iter()
        .filter(|e| game.owner(e.src) == Player::Two)
        .cloned()
        .collect();
    for (s, t, w) in player_one_edges(game) {
        let two = names.len();
        names.push(mid_name(game, s, t, 2));
        owners.push(Player::Two);
        let one = names.len();
        names.push(mid_name(game, s, t, 1));
        owners.push(Player::One);
        edges.push(GameEdge::new(s, two, Rational::zero()));
        edges.push(GameEdge::new(two, one, w));
        edges.push(GameEdge::new(one, t, Rational::zero()));
        edges.push(GameEdge::new(two, game.initial(), r.clone()));
    }
    TwoPlayerGame::new(names, owners, game.initial(), edges)
        .map_err(|e| OracleError::Inconsistent(format!("reset game: {e}")))
}

fn reset_mdp_with(game: &TwoPlayerGame, r: Rational) -> Result<Mdp> {
    check_source(game)?;
    let ones: Vec<usize> = (0..game.num_vertices()).filter(|&v| game.owner(v) == Player::One).collect();
    let index: HashMap<usize, usize> = ones.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut names: Vec<String> = ones.iter().map(|&v| game.name(v).to_string()).collect();
    let mut actions: Vec<String> = vec!["go".into()];
    let mut action_of: HashMap<usize, usize> = HashMap::new();
    let p1e = player_one_edges(game);
    let mut mids = Vec::with_capacity(p1e.len());
    for (s, t, _) in &p1e {
        mids.push(names.len());
        names.push(mid_name(game, *s, *t, 1));
        action_of.entry(*t).or_insert_with(|| {
            actions.push(format!("to_{}", game.name(*t)));
            actions.len() - 1
        });
    }
    let init = index[&game.initial()];
    let mut choices: Vec<Vec<Choice>> = vec![Vec::new(); names.len()];
    for ((s, t, w), &mid) in p1e.iter().zip(&mids) {
        choices[index[s]].push(Choice {
            action: action_of[t],
            transitions: vec![Transition::new(mid, ratio(1, 2), w.clone()), Transition::new(init, ratio(1, 2), r.clone())],
        });
        let succ: Vec<_> = game.out_edges(*t).collect();
        let p = ratio(1, succ.len() as i64);
        choices[mid].push(Choice {
            action: 0,
            transitions: succ.iter().map(|e| Transition::new(index[&e.dst], p.clone(), e.weight.clone())).collect(),
        });
    }
    Mdp::new(names, actions, init, choices).map_err(|e| OracleError::Inconsistent(format!("reset MDP: {e}")))
}

pub fn build_reset_game(game: &TwoPlayerGame, l_max: usize) -> Result<TwoPlayerGame> {
    reset_game_with(game, reset_weight(game, l_max))
}

pub fn build_reset_mdp(game: &TwoPlayerGame, l_max: usize) -> Result<Mdp> {
    reset_mdp_with(game, reset_weight(game, l_max))
}

pub fn build_bounded_reset_game(game: &TwoPlayerGame) -> Result<TwoPlayerGame> {
    reset_game_with(game, bounded_reset_weight(game))
}

pub fn build_bounded_reset_mdp(game: &TwoPlayerGame) -> Result<Mdp> {
    reset_mdp_with(game, bounded_reset_weight(game))
}

/// How the alternating game of the reset MDP relates to the reset game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Correspondence {
    /// The canonical vertex map preserves owners, edges and weights.
    pub homomorphism: bool,
    /// The map is moreover a bijection on vertices and on edges.
    pub isomorphism: bool,
}

/// Compares `mdp_to_game(build_reset_mdp(G))` with `build_reset_game(G)`
/// through the map `s -> s`, `(s,s',1) -> (s,s',1)`, `s[to_s'] -> (s,s',2)`
/// and `(s,s',1)[go] -> s'`. Both sides are matched by vertex name.
pub fn reset_correspondence(game: &TwoPlayerGame, l_max: usize) -> Result<Correspondence> {
    let target = build_reset_game(game, l_max)?;
    let mdp = build_reset_mdp(game, l_max)?;
    let derived = mdp_to_game(&mdp);
    let by_name: HashMap<&str, usize> = (0..target.num_vertices()).map(|v| (target.name(v), v)).collect();
    let p1e = player_one_edges(game);
    let mut map = Vec::with_capacity(derived.game.num_vertices());
    for v in &derived.vertices {
        let image = match *v {
            GameVertex::State(s) => by_name.get(mdp.state_name(s)).copied(),
            GameVertex::Choice(s, a) if mdp.action_name(a) == "go" => {
                let (_, t, _) = p1e.iter().find(|(x, y, _)| mid_name(game, *x, *y, 1) == mdp.state_name(s)).expect("mid state");
                Some(*t)
            }
            GameVertex::Choice(s, a) => {
                let t = mdp.action_name(a).strip_prefix("to_").and_then(|n| by_name.get(n).copied());
                t.and_then(|t| by_name.get(mid_name(game, by_name[mdp.state_name(s)], t, 2).as_str()).copied())
            }
        };
        map.push(image.ok_or_else(|| OracleError::Inconsistent(format!("no image for {v:?}")))?);
    }
    let owners_ok = (0..map.len()).all(|v| derived.game.owner(v) == target.owner(map[v]));
    let edges_ok = derived.game.edges().iter().all(|e| {
        target.out_edges(map[e.src]).any(|f| f.dst == map[e.dst] && f.weight == e.weight)
    });
    let homomorphism = owners_ok && edges_ok;
    let mut hit = vec![false; target.num_vertices()];
    for &m in &map {
        hit[m] = true;
    }
    // unreachable Player Two vertices of the source have no MDP counterpart
    let isomorphism = homomorphism
        && map.len() == target.num_vertices()
        && hit.iter().all(|&h| h)
        && derived.game.edges().len() == target.edges().len();
    Ok(Correspondence { homomorphism, isomorphism })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig7_game;

    #[test]
    fn fig7_reset_weight() {
        assert_eq!(reset_weight(&fig7_game(), 3), int(30));
        let g = build_reset_game(&fig7_game(), 3).unwrap();
        assert_eq!(g.num_vertices(), 4 + 2 * 3);
        assert!(g.edges().iter().filter(|e| e.dst == 0).any(|e| e.weight == int(30)));
    }

    #[test]
    fn fig7_correspondence() {
        // t0 has in-degree 2, so the derived game splits it
        let c = reset_correspondence(&fig7_game(), 2).unwrap();
        assert!(c.homomorphism);
        assert!(!c.isomorphism);
    }

    #[test]
    fn bounded_weight_counts_reset_vertices() {
        assert_eq!(bounded_reset_weight(&fig7_game()), int(5 * 10));
    }

    #[test]
    fn reset_mdp_is_valid() {
        let m = build_reset_mdp(&fig7_game(), 1).unwrap();
        assert_eq!(m.num_states(), 2 + 3);
        assert_eq!(m.choices(1).len(), 2);
    }
}
