//! The alternating game of an MDP: Player One picks actions, Player Two
//! resolves them adversarially.

use std::collections::HashSet;

use num_traits::Zero;

use crate::model::{GameEdge, Mdp, Player, TwoPlayerGame};
use crate::rational::Rational;

/// What a vertex of [`GameFromMdp`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameVertex {
    State(usize),
    /// `(state, action)` with `action` an MDP action index.
    Choice(usize, usize),
}

/// Vertices `0..n` are the MDP states, in order; choice vertices follow in
/// state order, then action order.
#[derive(Debug, Clone)]
pub struct GameFromMdp {
    pub game: TwoPlayerGame,
    pub vertices: Vec<GameVertex>,
    pub num_states: usize,
}

impl GameFromMdp {
    pub fn state_vertex(&self, s: usize) -> usize {
        debug_assert!(s < self.num_states);
        s
    }

    pub fn choice_vertex(&self, s: usize, action: usize) -> Option<usize> {
        self.vertices.iter().position(|v| *v == GameVertex::Choice(s, action))
    }
}

pub fn mdp_to_game(mdp: &Mdp) -> GameFromMdp {
    let n = mdp.num_states();
    let mut names: Vec<String> = mdp.state_names().to_vec();
    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let mut owners = vec![Player::One; n];
    let mut vertices: Vec<GameVertex> = (0..n).map(GameVertex::State).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        for c in mdp.choices(s) {
            let v = vertices.len();
            let mut name = format!("{}[{}]", mdp.state_name(s), mdp.action_name(c.action));
            while !taken.insert(name.clone()) {
                name.push('\'');
            }
            names.push(name);
            owners.push(Player::Two);
            vertices.push(GameVertex::Choice(s, c.action));
            edges.push(GameEdge::new(s, v, Rational::zero()));
            for t in &c.transitions {
                edges.push(GameEdge::new(v, t.dst, t.weight.clone()));
            }
        }
    }
    let game = TwoPlayerGame::new(names, owners, mdp.initial(), edges).expect("a valid MDP yields a valid game");
    GameFromMdp { game, vertices, num_states: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{min_mean_cycle, WeightedDigraph};
    use crate::model::{McEdge, MarkovChain};
    use crate::rational::{int, ratio};

    #[test]
    fn fig1_second_component_game() {
        let mc = MarkovChain::new(
            vec!["s3".into(), "s4".into()],
            0,
            vec![
                McEdge::new(0, 0, ratio(1, 2), int(3)),
                McEdge::new(0, 1, ratio(1, 2), int(2)),
                McEdge::new(1, 0, ratio(1, 2), int(0)),
                McEdge::new(1, 1, ratio(1, 2), int(1)),
            ],
        )
        .unwrap();
        let g = mdp_to_game(&Mdp::from_markov_chain(&mc));
        assert_eq!(g.game.num_vertices(), 4);
        assert_eq!(g.game.owner(2), Player::Two);
        assert_eq!(g.choice_vertex(1, 0), Some(3));
        let d = WeightedDigraph::new(
            4,
            g.game.edges().iter().map(|e| (e.src, e.dst, e.weight.clone())).collect(),
        );
        assert_eq!(min_mean_cycle(&d).unwrap(), ratio(1, 2));
    }
}
