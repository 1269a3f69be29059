//! Reachability, until and bottom-component analysis of Markov chains.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::model::MarkovChain;
use crate::rational::Rational;

use super::linear::{solve_fixed_point, LinearEquation};
use super::scc::tarjan_scc;

/// Expected value collected on first entering a target state, with zero
/// for paths that leave `stay` first or never reach a target.
///
/// `target_value[s]` marks `s` as a target with that value. Targets take
/// precedence over `stay`.
pub fn until_value(mc: &MarkovChain, stay: &[bool], target_value: &[Option<Rational>]) -> Result<Vec<Rational>> {
    let n = mc.num_states();
    let is_target = |s: usize| target_value[s].is_some();
    let inner = |s: usize| stay[s] && !is_target(s);

    // Qualitative step: inner states that cannot reach a non-zero target
    // are fixed to 0, which leaves a non-singular system.
    let mut useful = vec![false; n];
    let mut todo: Vec<usize> = (0..n)
        .filter(|&s| target_value[s].as_ref().is_some_and(|v| !v.is_zero()))
        .collect();
    for &s in &todo {
        useful[s] = true;
    }
    let mut preds = vec![Vec::new(); n];
    for e in mc.edges() {
        preds[e.dst].push(e.src);
    }
    while let Some(v) = todo.pop() {
        for &u in &preds[v] {
            if !useful[u] && inner(u) {
                useful[u] = true;
                todo.push(u);
            }
        }
    }

    let eqs: Vec<LinearEquation> = (0..n)
        .map(|s| {
            if let Some(v) = &target_value[s] {
                LinearEquation { constant: v.clone(), terms: Vec::new() }
            } else if !inner(s) || !useful[s] {
                LinearEquation::default_zero()
            } else {
                LinearEquation {
                    constant: Rational::zero(),
                    terms: mc
                        .out_edges(s)
                        .filter(|e| useful[e.dst])
                        .map(|e| (e.dst, e.prob.clone()))
                        .collect(),
                }
            }
        })
        .collect();
    solve_fixed_point(&eqs)
}

impl LinearEquation {
    fn default_zero() -> Self {
        LinearEquation { constant: Rational::zero(), terms: Vec::new() }
    }
}

/// Probability of `stay U target` from every state.
pub fn until_prob(mc: &MarkovChain, stay: &[bool], target: &[bool]) -> Result<Vec<Rational>> {
    let n = mc.num_states();
    let inner = |s: usize| stay[s] && !target[s];

    // States that can fail: can reach (through inner states) a state that is
    // neither inner nor target, or an inner state with no way to a target.
    let mut can_hit = target.to_vec();
    let mut preds = vec![Vec::new(); n];
    for e in mc.edges() {
        preds[e.dst].push(e.src);
    }
    let mut todo: Vec<usize> = (0..n).filter(|&s| target[s]).collect();
    while let Some(v) = todo.pop() {
        for &u in &preds[v] {
            if !can_hit[u] && inner(u) {
                can_hit[u] = true;
                todo.push(u);
            }
        }
    }
    let mut can_fail: Vec<bool> = (0..n).map(|s| !target[s] && !can_hit[s]).collect();
    let mut todo: Vec<usize> = (0..n).filter(|&s| can_fail[s]).collect();
    while let Some(v) = todo.pop() {
        for &u in &preds[v] {
            if !can_fail[u] && inner(u) {
                can_fail[u] = true;
                todo.push(u);
            }
        }
    }

    let target_value: Vec<Option<Rational>> = (0..n)
        .map(|s| (target[s] || (inner(s) && !can_fail[s])).then(Rational::one))
        .collect();
    until_value(mc, stay, &target_value)
}

/// Probability of eventually reaching `target` from every state.
pub fn reach_prob(mc: &MarkovChain, target: &[bool]) -> Result<Vec<Rational>> {
    until_prob(mc, &vec![true; mc.num_states()], target)
}

/// Bottom strongly connected components with their reachability
/// probabilities from the initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsccPartition {
    /// Sorted states of each component; components ordered by least state.
    pub components: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
    /// `reach[i]` is the probability of eventually entering `components[i]`.
    pub reach: Vec<Rational>,
}

pub fn bsccs(mc: &MarkovChain) -> Result<BsccPartition> {
    let n = mc.num_states();
    let adj = mc.adjacency();
    let sccs = tarjan_scc(&adj);
    let mut comp_of = vec![0; n];
    for (i, c) in sccs.iter().enumerate() {
        for &s in c {
            comp_of[s] = i;
        }
    }
    let mut components: Vec<Vec<usize>> = sccs
        .iter()
        .enumerate()
        .filter(|(i, c)| c.iter().all(|&s| adj[s].iter().all(|&t| comp_of[t] == *i)))
        .map(|(_, c)| c.clone())
        .collect();
    components.sort();

    let mut in_bottom = vec![false; n];
    for c in &components {
        for &s in c {
            in_bottom[s] = true;
        }
    }
    let transient = (0..n).filter(|&s| !in_bottom[s]).collect();

    let mut reach = Vec::with_capacity(components.len());
    for c in &components {
        let mut target = vec![false; n];
        for &s in c {
            target[s] = true;
        }
        reach.push(reach_prob(mc, &target)?[mc.initial()].clone());
    }
    Ok(BsccPartition { components, transient, reach })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::McEdge;
    use crate::rational::{int, ratio};

    fn fig1() -> MarkovChain {
        let names = ["s0", "s1", "s3", "s4"].iter().map(|s| s.to_string()).collect();
        let e = |a, b, p: Rational, w| McEdge::new(a, b, p, int(w));
        MarkovChain::new(
            names,
            0,
            vec![
                e(0, 1, ratio(1, 2), 0),
                e(0, 2, ratio(1, 2), 0),
                e(1, 1, int(1), 2),
                e(2, 2, ratio(1, 2), 3),
                e(2, 3, ratio(1, 2), 2),
                e(3, 2, ratio(1, 2), 0),
                e(3, 3, ratio(1, 2), 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fig1_components() {
        let p = bsccs(&fig1()).unwrap();
        assert_eq!(p.components, vec![vec![1], vec![2, 3]]);
        assert_eq!(p.transient, vec![0]);
        assert_eq!(p.reach, vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn gamblers_ruin() {
        // 0 <- 1 <-> 2 <-> 3 -> 4, fair steps, 0 and 4 absorbing
        let names = (0..5).map(|i| format!("s{i}")).collect();
        let h = ratio(1, 2);
        let mut edges = vec![McEdge::new(0, 0, int(1), int(0)), McEdge::new(4, 4, int(1), int(0))];
        for s in 1..4 {
            edges.push(McEdge::new(s, s - 1, h.clone(), int(0)));
            edges.push(McEdge::new(s, s + 1, h.clone(), int(0)));
        }
        let mc = MarkovChain::new(names, 2, edges).unwrap();
        let target = [false, false, false, false, true];
        let p = reach_prob(&mc, &target).unwrap();
        assert_eq!(p, vec![int(0), ratio(1, 4), ratio(1, 2), ratio(3, 4), int(1)]);
        let stay = [true, false, true, true, true];
        let u = until_prob(&mc, &stay, &target).unwrap();
        assert_eq!(u, vec![int(0), int(0), ratio(1, 3), ratio(2, 3), int(1)]);
    }
}
