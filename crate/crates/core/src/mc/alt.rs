//! Probabilistic good-window check: from each state, the `l_max`-step paths
//! whose window mean payoff reaches `lambda` carry probability at least `p`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, ModelError, Result};
use crate::graph::reachable_from;
use crate::model::MarkovChain;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltGoodWindow {
    /// Probability of a good window starting at each state.
    pub mass: Vec<Rational>,
    pub satisfied: Vec<bool>,
    /// Every state reachable from the initial state is satisfied.
    pub holds_globally: bool,
}

/// Probability that an `l_max`-step path from `s` has a prefix of length
/// `k` with weight sum at least `k * lambda`.
pub fn good_window_mass(mc: &MarkovChain, s: usize, l_max: usize, lambda: &Rational) -> Rational {
    let mut done = Rational::zero();
    // undecided mass keyed by (state, prefix sum)
    let mut open: HashMap<(usize, Rational), Rational> = HashMap::from([((s, Rational::zero()), int(1))]);
    for k in 1..=l_max {
        let bar = lambda * int(k as i64);
        let mut next: HashMap<(usize, Rational), Rational> = HashMap::new();
        for ((v, sum), pr) in open {
            for e in mc.out_edges(v) {
                let sum = &sum + &e.weight;
                let mass = &pr * &e.prob;
                if sum >= bar {
                    done += mass;
                } else {
                    *next.entry((e.dst, sum)).or_insert_with(Rational::zero) += mass;
                }
            }
        }
        open = next;
    }
    done
}

pub fn check_alt_good_window(mc: &MarkovChain, p: &Rational, l_max: usize, lambda: &Rational) -> Result<AltGoodWindow> {
    if l_max == 0 {
        return Err(Error::Model(ModelError::ZeroWindow));
    }
    let mass: Vec<Rational> = (0..mc.num_states()).map(|s| good_window_mass(mc, s, l_max, lambda)).collect();
    let satisfied: Vec<bool> = mass.iter().map(|m| m >= p).collect();
    let reach = reachable_from(&mc.adjacency(), &[mc.initial()]);
    let holds_globally = (0..mc.num_states()).all(|s| !reach[s] || satisfied[s]);
    Ok(AltGoodWindow { mass, satisfied, holds_globally })
}
