//! Expected mean payoff of MDPs by memoryless strategy enumeration.

use wmp_core::{Mdp, Rational};

use crate::brute::{brute_chain_mean_payoff, brute_sccs, DEFAULT_CAP};
use crate::error::{OracleError, Result};

/// Every memoryless strategy as a choice index per state.
pub fn memoryless_strategies(mdp: &Mdp, cap: usize) -> Result<Vec<Vec<usize>>> {
    let mut total = 1usize;
    for s in 0..mdp.num_states() {
        total = total
            .checked_mul(mdp.choices(s).len())
            .filter(|&t| t <= cap)
            .ok_or_else(|| OracleError::Cap("memoryless strategies".into()))?;
    }
    let mut acc = vec![Vec::with_capacity(mdp.num_states())];
    for s in 0..mdp.num_states() {
        acc = acc
            .into_iter()
            .flat_map(|base| {
                (0..mdp.choices(s).len()).map(move |k| {
                    let mut b = base.clone();
                    b.push(k);
                    b
                })
            })
            .collect();
    }
    Ok(acc)
}

/// Best expected mean payoff over memoryless strategies, each evaluated
/// through its stationary distributions. Optimal whenever memoryless
/// strategies suffice, e.g. for constant end-component weights.
pub fn brute_expected_mean_payoff(mdp: &Mdp) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for strategy in memoryless_strategies(mdp, DEFAULT_CAP)? {
        let v = brute_chain_mean_payoff(&mdp.induced_chain(&strategy))?;
        if best.as_ref().map_or(true, |b| v > *b) {
            best = Some(v);
        }
    }
    best.ok_or_else(|| OracleError::Unsupported("MDP without strategies".into()))
}

/// Maximal end components as `(states, actions per state)` with sorted
/// action indices, by the naive fixpoint: drop actions that may leave the
/// SCC of their state, then states without actions, until stable.
pub fn brute_mecs(mdp: &Mdp) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    let n = mdp.num_states();
    let mut alive = vec![true; n];
    let mut allowed: Vec<Vec<usize>> = (0..n).map(|s| mdp.choices(s).iter().map(|c| c.action).collect()).collect();
    loop {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                allowed[s]
                    .iter()
                    .flat_map(|&a| mdp.choice(s, a).expect("enabled").transitions.iter().map(|t| t.dst))
                    .filter(|&t| alive[t])
                    .collect()
            })
            .collect();
        let mut comp = vec![usize::MAX; n];
        for (i, c) in brute_sccs(&adj).iter().enumerate() {
            for &s in c {
                comp[s] = i;
            }
        }
        let mut changed = false;
        let live: Vec<usize> = (0..n).filter(|&s| alive[s]).collect();
        for s in live {
            let before = allowed[s].len();
            allowed[s].retain(|&a| mdp.choice(s, a).expect("enabled").transitions.iter().all(|t| alive[t.dst] && comp[t.dst] == comp[s]));
            changed |= allowed[s].len() != before;
            if allowed[s].is_empty() {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            let mut out: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
            for c in brute_sccs(&adj) {
                let states: Vec<usize> = c.into_iter().filter(|&s| alive[s]).collect();
                if !states.is_empty() {
                    let acts = states.iter().map(|&s| allowed[s].clone()).collect();
                    out.push((states, acts));
                }
            }
            out.sort();
            return out;
        }
    }
}
