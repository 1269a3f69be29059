//! Optimal expected mean payoff of MDPs whose end components carry a
//! constant weight.
//!
//! Staying forever in a MEC of constant weight `c` earns exactly `c`, and
//! every other behaviour eventually settles in some MEC, so the problem
//! reduces to a maximal expected terminal reward on the MEC quotient, where
//! each MEC gets an extra "commit" action paying its weight.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{mecs, solve_fixed_point, LinearEquation, MecPartition};
use crate::model::{Choice, Mdp};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedValue {
    /// Optimal value from each MDP state.
    pub per_state: Vec<Rational>,
    /// Constant weight of each MEC, in partition order.
    pub mec_values: Vec<Rational>,
    pub partition: MecPartition,
}

impl ExpectedValue {
    pub fn at(&self, s: usize) -> &Rational {
        &self.per_state[s]
    }
}

enum Action {
    Commit(Rational),
    Move(Vec<(usize, Rational)>),
}

pub fn expected_mean_payoff_const_mec(mdp: &Mdp) -> Result<Rational> {
    let v = solve_const_mec(mdp)?;
    Ok(v.per_state[mdp.initial()].clone())
}

/// Policy iteration on the quotient. A node switches action only on a
/// strict improvement, to the lowest-index best action.
pub fn solve_const_mec(mdp: &Mdp) -> Result<ExpectedValue> {
    let partition = mecs(mdp);
    let n = mdp.num_states();
    let mec_of = partition.mec_of(n);

    let mut mec_values = Vec::with_capacity(partition.mecs.len());
    for m in &partition.mecs {
        let mut weights = m.states.iter().zip(&m.actions).flat_map(|(&s, acts)| {
            acts.iter()
                .flat_map(move |&a| mdp.choice(s, a).expect("MEC action").transitions.iter().map(|t| &t.weight))
        });
        let first = weights.next().expect("a MEC has an internal action").clone();
        if let Some(w) = weights.find(|w| **w != first) {
            return Err(Error::Unsupported(format!(
                "expected mean payoff needs constant weights inside each end component, found {first} and {w} in the component of `{}`",
                mdp.state_name(m.states[0])
            )));
        }
        mec_values.push(first);
    }

    // quotient nodes: one per MEC, then one per state outside every MEC
    let mut node_of = vec![0usize; n];
    let mut outside = Vec::new();
    for s in 0..n {
        match mec_of[s] {
            Some(i) => node_of[s] = i,
            None => {
                node_of[s] = partition.mecs.len() + outside.len();
                outside.push(s);
            }
        }
    }
    let nodes = partition.mecs.len() + outside.len();
    let mut actions: Vec<Vec<Action>> = Vec::with_capacity(nodes);
    let to_move = |c: &Choice| {
        let mut row: Vec<(usize, Rational)> = Vec::new();
        for t in &c.transitions {
            let d = node_of[t.dst];
            match row.iter_mut().find(|e| e.0 == d) {
                Some(e) => e.1 += &t.prob,
                None => row.push((d, t.prob.clone())),
            }
        }
        Action::Move(row)
    };
    for (m, value) in partition.mecs.iter().zip(&mec_values) {
        let mut acts = vec![Action::Commit(value.clone())];
        for &s in &m.states {
            for c in mdp.choices(s) {
                if !m.contains_choice(s, c.action) {
                    acts.push(to_move(c));
                }
            }
        }
        actions.push(acts);
    }
    for &s in &outside {
        actions.push(mdp.choices(s).iter().map(to_move).collect());
    }

    // Every non-committing memoryless policy would form an end component
    // outside the MECs, so commit-first is proper and so is every policy.
    let mut policy: Vec<usize> = vec![0; nodes];
    let x = loop {
        let eqs: Vec<LinearEquation> = (0..nodes)
            .map(|v| match &actions[v][policy[v]] {
                Action::Commit(c) => LinearEquation { constant: c.clone(), terms: Vec::new() },
                Action::Move(row) => LinearEquation { constant: Rational::zero(), terms: row.clone() },
            })
            .collect();
        let x = solve_fixed_point(&eqs)?;
        let q = |a: &Action| -> Rational {
            match a {
                Action::Commit(c) => c.clone(),
                Action::Move(row) => row.iter().map(|(d, p)| p * &x[*d]).sum(),
            }
        };
        let mut changed = false;
        for v in 0..nodes {
            let current = q(&actions[v][policy[v]]);
            let values: Vec<Rational> = actions[v].iter().map(q).collect();
            let best = values.iter().max().expect("every node has an action");
            if *best > current {
                policy[v] = values.iter().position(|x| x == best).expect("maximum is attained");
                changed = true;
            }
        }
        if !changed {
            break x;
        }
    };
    let per_state = (0..n).map(|s| x[node_of[s]].clone()).collect();
    Ok(ExpectedValue { per_state, mec_values, partition })
}
