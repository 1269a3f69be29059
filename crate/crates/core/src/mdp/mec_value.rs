//! Values of maximal end components and the MEC-rewritten MDP.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{max_direct_window_value, mdp_to_game, mean_payoff_game_value};
use crate::graph::{is_strongly_connected, mecs, Mec, MecPartition};
use crate::model::{Choice, Mdp, Transition};
use crate::rational::{int, Rational};
use crate::transform::normalize;

/// The MDP on the states of `mec` with only its internal actions.
pub fn mec_sub_mdp(mdp: &Mdp, mec: &Mec) -> Mdp {
    let local = |s: usize| mec.states.binary_search(&s).expect("MEC transitions stay inside");
    let choices = mec
        .states
        .iter()
        .zip(&mec.actions)
        .map(|(&s, acts)| {
            acts.iter()
                .map(|&a| {
                    let c = mdp.choice(s, a).expect("MEC action is enabled");
                    Choice {
                        action: a,
                        transitions: c
                            .transitions
                            .iter()
                            .map(|t| Transition::new(local(t.dst), t.prob.clone(), t.weight.clone()))
                            .collect(),
                    }
                })
                .collect()
        })
        .collect();
    Mdp::new(
        mec.states.iter().map(|&s| mdp.state_name(s).to_string()).collect(),
        mdp.action_names().to_vec(),
        0,
        choices,
    )
    .expect("a MEC is a valid sub-MDP")
}

fn check_single_mec(mec: &Mdp) -> Result<()> {
    let adj: Vec<Vec<usize>> = (0..mec.num_states())
        .map(|s| mec.choices(s).iter().flat_map(|c| c.transitions.iter().map(|t| t.dst)).collect())
        .collect();
    if !is_strongly_connected(&adj) {
        return Err(Error::Precondition("input is not a single end component".into()));
    }
    Ok(())
}

/// Fixed window value of a single MEC: twice the best direct window value
/// with window `2 * l_max` over the state vertices of its game.
pub fn fixwmp_mec(mec: &Mdp, l_max: usize) -> Result<Rational> {
    check_single_mec(mec)?;
    if l_max == 0 {
        return Err(Error::Model(crate::error::ModelError::ZeroWindow));
    }
    let (norm, t) = normalize(mec);
    let g = mdp_to_game(&norm);
    let values = max_direct_window_value(&g.game, 2 * l_max)?;
    let best = values.per_vertex[..g.num_states].iter().max().expect("non-empty MEC");
    Ok(t.denormalize(&(best * int(2))))
}

/// Bounded window value of a single MEC: twice the best mean-payoff game
/// value over the state vertices of its game.
pub fn bwmp_mec(mec: &Mdp) -> Result<Rational> {
    check_single_mec(mec)?;
    let (norm, t) = normalize(mec);
    let g = mdp_to_game(&norm);
    let values = mean_payoff_game_value(&g.game)?;
    let best = values[..g.num_states].iter().max().expect("non-empty MEC");
    Ok(t.denormalize(&(best * int(2))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MecMode {
    Fixed(usize),
    Bounded,
}

#[derive(Debug, Clone)]
pub struct MecValueAnnotation {
    pub partition: MecPartition,
    /// `values[i]` belongs to `partition.mecs[i]`.
    pub values: Vec<Rational>,
    /// Every internal action of MEC `i` carries weight `values[i]`; other
    /// weights are unchanged.
    pub rewritten: Mdp,
}

pub fn replace_mecs(mdp: &Mdp, mode: MecMode) -> Result<MecValueAnnotation> {
    let partition = mecs(mdp);
    let values: Vec<Rational> = partition
        .mecs
        .par_iter()
        .map(|m| {
            let sub = mec_sub_mdp(mdp, m);
            match mode {
                MecMode::Fixed(l) => fixwmp_mec(&sub, l),
                MecMode::Bounded => bwmp_mec(&sub),
            }
        })
        .collect::<Result<_>>()?;
    let rewritten = rewrite(mdp, &partition, &values);
    Ok(MecValueAnnotation { partition, values, rewritten })
}

fn rewrite(mdp: &Mdp, partition: &MecPartition, values: &[Rational]) -> Mdp {
    let mec_of = partition.mec_of(mdp.num_states());
    let choices = (0..mdp.num_states())
        .map(|s| {
            mdp.choices(s)
                .iter()
                .map(|c| {
                    let inside = mec_of[s].filter(|&i| partition.mecs[i].contains_choice(s, c.action));
                    let transitions = c
                        .transitions
                        .iter()
                        .map(|t| match inside {
                            Some(i) => Transition::new(t.dst, t.prob.clone(), values[i].clone()),
                            None => t.clone(),
                        })
                        .collect();
                    Choice { action: c.action, transitions }
                })
                .collect()
        })
        .collect();
    Mdp::new(mdp.state_names().to_vec(), mdp.action_names().to_vec(), mdp.initial(), choices)
        .expect("reweighting keeps the MDP valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn fig1_b2() -> Mdp {
        let t = |d, w| Transition::new(d, ratio(1, 2), int(w));
        Mdp::new(
            vec!["s3".into(), "s4".into()],
            vec!["a".into()],
            0,
            vec![
                vec![Choice { action: 0, transitions: vec![t(0, 3), t(1, 2)] }],
                vec![Choice { action: 0, transitions: vec![t(0, 0), t(1, 1)] }],
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_action_mec_matches_chain_values() {
        assert_eq!(fixwmp_mec(&fig1_b2(), 2).unwrap(), int(1));
        assert_eq!(fixwmp_mec(&fig1_b2(), 1).unwrap(), int(0));
        assert_eq!(bwmp_mec(&fig1_b2()).unwrap(), int(1));
    }

    #[test]
    fn self_loop_mec() {
        let m = Mdp::new(
            vec!["x".into()],
            vec!["a".into()],
            0,
            vec![vec![Choice { action: 0, transitions: vec![Transition::new(0, int(1), ratio(-5, 2))] }]],
        )
        .unwrap();
        assert_eq!(fixwmp_mec(&m, 3).unwrap(), ratio(-5, 2));
        assert_eq!(bwmp_mec(&m).unwrap(), ratio(-5, 2));
    }

    #[test]
    fn rewrite_touches_only_internal_actions() {
        // x -a-> x (w 4) is a MEC; x -b-> y (w 7) leaves; y loops with weight 1
        let m = Mdp::new(
            vec!["x".into(), "y".into()],
            vec!["a".into(), "b".into()],
            0,
            vec![
                vec![
                    Choice { action: 0, transitions: vec![Transition::new(0, int(1), int(4))] },
                    Choice { action: 1, transitions: vec![Transition::new(1, int(1), int(7))] },
                ],
                vec![Choice { action: 0, transitions: vec![Transition::new(1, int(1), int(1))] }],
            ],
        )
        .unwrap();
        let a = replace_mecs(&m, MecMode::Fixed(2)).unwrap();
        assert_eq!(a.values, vec![int(4), int(1)]);
        assert_eq!(a.rewritten.choice(0, 1).unwrap().transitions[0].weight, int(7));
    }
}
