//! Hand-built models shared by tests, the corpus and the acceptance suite.
//!
//! `fig1` reproduces the worked Markov chain example exactly on its bottom
//! components; its transient weights are 0. The other fixtures are
//! constructed to exhibit the documented behaviour; see each item.

use wmp_core::rational::{int, ratio};
use wmp_core::{GameEdge, MarkovChain, McEdge, Player, Rational, TwoPlayerGame};

/// States `s0, s1, s3, s4` (indices 0..4). Bottom components are `{s1}`
/// and `{s3, s4}`, each reached with probability 1/2.
pub fn fig1() -> MarkovChain {
    let h = || ratio(1, 2);
    MarkovChain::new(
        vec!["s0".into(), "s1".into(), "s3".into(), "s4".into()],
        0,
        vec![
            McEdge::new(0, 1, h(), int(0)),
            McEdge::new(0, 2, h(), int(0)),
            McEdge::new(1, 1, int(1), int(2)),
            McEdge::new(2, 2, h(), int(3)),
            McEdge::new(2, 3, h(), int(2)),
            McEdge::new(3, 2, h(), int(0)),
            McEdge::new(3, 3, h(), int(1)),
        ],
    )
    .expect("valid fixture")
}

/// Index of `s3` in [`fig1`].
pub const FIG1_S3: usize = 2;
/// Index of `s4` in [`fig1`].
pub const FIG1_S4: usize = 3;

/// A deterministic cycle `s0 -> s1 -> ... -> s0` with the given weights.
pub fn cycle(weights: &[Rational]) -> MarkovChain {
    let n = weights.len();
    MarkovChain::new(
        (0..n).map(|i| format!("s{i}")).collect(),
        0,
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| McEdge::new(i, (i + 1) % n, int(1), w.clone()))
            .collect(),
    )
    .expect("valid cycle")
}

/// Cycle with weights `2, 5, 4` and a constructed closing weight `1`.
pub fn fig2() -> MarkovChain {
    cycle(&[int(2), int(5), int(4), int(1)])
}

/// [`fig2`] with every weight reduced by 3: `-1, 2, 1, -2`.
pub fn fig3() -> MarkovChain {
    cycle(&[int(-1), int(2), int(1), int(-2)])
}

/// A constructed bipartite game with maximum weight 4 and initial vertex
/// `s0`. Player One owns `s0, s1`, Player Two owns `t0, t1`; only `s1`
/// has more than one successor.
pub fn fig7_game() -> TwoPlayerGame {
    let names = ["s0", "s1", "t0", "t1"];
    TwoPlayerGame::new(
        names.iter().map(|s| s.to_string()).collect(),
        vec![Player::One, Player::One, Player::Two, Player::Two],
        0,
        vec![
            GameEdge::new(0, 2, int(2)),
            GameEdge::new(1, 2, int(0)),
            GameEdge::new(1, 3, int(4)),
            GameEdge::new(2, 0, int(3)),
            GameEdge::new(2, 1, int(1)),
            GameEdge::new(3, 0, int(4)),
        ],
    )
    .expect("valid fixture")
}

/// A constructed chain whose bounded window value is 0 while every fixed
/// window value is `-1/l < 0`: `a -> b` weighs -1, `b` loops with weight 0
/// or returns to `a` with weight 1.
pub fn strict_gap_chain() -> MarkovChain {
    MarkovChain::new(
        vec!["a".into(), "b".into()],
        0,
        vec![
            McEdge::new(0, 1, int(1), int(-1)),
            McEdge::new(1, 1, ratio(1, 2), int(0)),
            McEdge::new(1, 0, ratio(1, 2), int(1)),
        ],
    )
    .expect("valid fixture")
}
