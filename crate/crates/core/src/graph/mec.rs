use crate::model::Mdp;

use super::scc::tarjan_scc;

/// A maximal end component: states and, per state, the enabled actions
/// (action indices, sorted) that keep the play inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mec {
    pub states: Vec<usize>,
    pub actions: Vec<Vec<usize>>,
}

impl Mec {
    pub fn contains_choice(&self, state: usize, action: usize) -> bool {
        match self.states.binary_search(&state) {
            Ok(i) => self.actions[i].binary_search(&action).is_ok(),
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MecPartition {
    /// Ordered by least state.
    pub mecs: Vec<Mec>,
}

impl MecPartition {
    /// `mec_of(n)[s]` is the index of the MEC containing `s`, if any.
    pub fn mec_of(&self, num_states: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; num_states];
        for (i, m) in self.mecs.iter().enumerate() {
            for &s in &m.states {
                out[s] = Some(i);
            }
        }
        out
    }
}

/// Iterated SCC refinement: drop every choice that can leave the SCC of
/// its state, drop states left without choices, repeat until stable.
pub fn mecs(mdp: &Mdp) -> MecPartition {
    let n = mdp.num_states();
    let mut alive_choice: Vec<Vec<bool>> = (0..n).map(|s| vec![true; mdp.choices(s).len()]).collect();
    let mut alive_state = vec![true; n];

    loop {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                if !alive_state[s] {
                    return Vec::new();
                }
                mdp.choices(s)
                    .iter()
                    .zip(&alive_choice[s])
                    .filter(|(_, &a)| a)
                    .flat_map(|(c, _)| c.transitions.iter().map(|t| t.dst))
                    .collect()
            })
            .collect();
        let sccs = tarjan_scc(&adj);
        let mut comp = vec![0; n];
        for (i, c) in sccs.iter().enumerate() {
            for &s in c {
                comp[s] = i;
            }
        }
        let mut changed = false;
        for s in 0..n {
            if !alive_state[s] {
                continue;
            }
            for (k, c) in mdp.choices(s).iter().enumerate() {
                if alive_choice[s][k]
                    && c.transitions.iter().any(|t| !alive_state[t.dst] || comp[t.dst] != comp[s])
                {
                    alive_choice[s][k] = false;
                    changed = true;
                }
            }
            if !alive_choice[s].iter().any(|&a| a) {
                alive_state[s] = false;
                changed = true;
            }
        }
        if !changed {
            let mut out: Vec<Mec> = sccs
                .into_iter()
                .filter(|c| alive_state[c[0]])
                .map(|states| {
                    let actions = states
                        .iter()
                        .map(|&s| {
                            mdp.choices(s)
                                .iter()
                                .zip(&alive_choice[s])
                                .filter(|(_, &a)| a)
                                .map(|(c, _)| c.action)
                                .collect()
                        })
                        .collect();
                    Mec { states, actions }
                })
                .collect();
            out.sort_by(|a, b| a.states.cmp(&b.states));
            return MecPartition { mecs: out };
        }
    }
}
