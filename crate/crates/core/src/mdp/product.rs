//! MDP solvers for the three window objectives, and the product MDP that
//! tracks the least window mean payoff seen so far.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, ModelError, Result};
use crate::graph::mecs;
use crate::int::int_weight;
use crate::model::{Choice, Mdp, Transition};
use crate::objective::Objective;
use crate::rational::{ratio, Rational};
use crate::result::{AnalysisResult, ComponentKind, ComponentValue};
use crate::transform::{normalize, WeightTransform};

use super::expected::solve_const_mec;
use super::mec_value::{replace_mecs, MecMode};

/// Default bound on materialized product states.
pub const DEFAULT_DIRFIX_CAP: usize = 1_000_000;

/// Product state: source state, the last `l_max - 1` weights (oldest
/// first) and the least completed window mean so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirFixLabel {
    pub state: usize,
    pub window: Vec<i64>,
    pub lambda: Rational,
}

#[derive(Debug, Clone)]
pub struct DirFixProductMdp {
    /// Every transition out of a product state weighs its `lambda`.
    pub mdp: Mdp,
    pub labels: Vec<DirFixLabel>,
}

/// Builds the product reachable from `(init, [W; l_max - 1], W)`.
///
/// Weights must be non-negative integers so the sentinel `W` never lowers
/// `lambda`. Fails if an end component of the product mixes `lambda`s.
pub fn build_dirfix_product(mdp: &Mdp, l_max: usize, cap: usize) -> Result<DirFixProductMdp> {
    if l_max == 0 {
        return Err(Error::Model(ModelError::ZeroWindow));
    }
    let mut big_w = 0i64;
    let mut int_choices: Vec<Vec<(usize, Vec<(usize, Rational, i64)>)>> = Vec::new();
    for s in 0..mdp.num_states() {
        let mut row = Vec::new();
        for c in mdp.choices(s) {
            let mut ts = Vec::new();
            for t in &c.transitions {
                let w = int_weight(&t.weight)?;
                if w < 0 {
                    return Err(Error::Precondition("direct window product needs non-negative weights".into()));
                }
                big_w = big_w.max(w);
                ts.push((t.dst, t.prob.clone(), w));
            }
            row.push((c.action, ts));
        }
        int_choices.push(row);
    }

    let init = DirFixLabel { state: mdp.initial(), window: vec![big_w; l_max - 1], lambda: ratio(big_w, 1) };
    let mut labels = vec![init.clone()];
    let mut index: HashMap<DirFixLabel, usize> = HashMap::from([(init, 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut choices: Vec<Vec<Choice>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let here = labels[i].clone();
        let mut row = Vec::new();
        for (action, ts) in &int_choices[here.state] {
            let mut transitions = Vec::new();
            for (dst, prob, w) in ts {
                let next = step(&here, *dst, *w)?;
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if labels.len() >= cap {
                            return Err(Error::SizeCap {
                                what: "direct window product".into(),
                                size: format!("more than {cap} states"),
                                cap: cap as u64,
                            });
                        }
                        index.insert(next.clone(), labels.len());
                        queue.push_back(labels.len());
                        labels.push(next);
                        labels.len() - 1
                    }
                };
                transitions.push(Transition::new(id, prob.clone(), here.lambda.clone()));
            }
            row.push(Choice { action: *action, transitions });
        }
        if choices.len() <= i {
            choices.resize_with(i + 1, Vec::new);
        }
        choices[i] = row;
    }

    let names = labels
        .iter()
        .map(|l| {
            let w: Vec<String> = l.window.iter().map(i64::to_string).collect();
            format!("{}|{}|{}", mdp.state_name(l.state), w.join(","), l.lambda)
        })
        .collect();
    let product = Mdp::new(names, mdp.action_names().to_vec(), 0, choices)
        .map_err(|e| Error::Internal(format!("direct window product: {e}")))?;
    for m in mecs(&product).mecs {
        let l0 = &labels[m.states[0]].lambda;
        if m.states.iter().any(|&s| labels[s].lambda != *l0) {
            return Err(Error::Internal("end component of the product mixes window values".into()));
        }
    }
    Ok(DirFixProductMdp { mdp: product, labels })
}

/// `lambda' = min(lambda, best prefix mean of window ++ [w])`.
fn step(here: &DirFixLabel, dst: usize, w: i64) -> Result<DirFixLabel> {
    let mut best: Option<Rational> = None;
    let mut sum = 0i64;
    for (k, &a) in here.window.iter().chain(std::iter::once(&w)).enumerate() {
        sum = sum.checked_add(a).ok_or(Error::Overflow("window sum"))?;
        let mean = ratio(sum, k as i64 + 1);
        if best.as_ref().map_or(true, |b| mean > *b) {
            best = Some(mean);
        }
    }
    let best = best.expect("window of length at least one");
    let lambda = if best < here.lambda { best } else { here.lambda.clone() };
    let mut window = here.window.clone();
    if !window.is_empty() {
        window.remove(0);
        window.push(w);
    }
    Ok(DirFixLabel { state: dst, window, lambda })
}

fn mec_components(
    partition: &crate::graph::MecPartition,
    values: &[Rational],
    t: &WeightTransform,
) -> Vec<ComponentValue> {
    partition
        .mecs
        .iter()
        .zip(values)
        .map(|(m, v)| ComponentValue {
            kind: ComponentKind::Mec,
            states: m.states.clone(),
            reach_probability: None,
            value: t.denormalize(v),
        })
        .collect()
}

fn via_mec_values(mdp: &Mdp, objective: Objective, mode: MecMode) -> Result<AnalysisResult> {
    let (norm, t) = normalize(mdp);
    let ann = replace_mecs(&norm, mode)?;
    let v = solve_const_mec(&ann.rewritten)?;
    Ok(AnalysisResult {
        objective,
        value: t.denormalize(&v.per_state[norm.initial()]),
        distribution: None,
        components: mec_components(&ann.partition, &ann.values, &t),
        transform: t,
        notes: Vec::new(),
    })
}

/// Optimal expected fixed window mean payoff.
pub fn fixwmp_mdp(mdp: &Mdp, l_max: usize) -> Result<AnalysisResult> {
    let objective = Objective::fixed(l_max as u32)?;
    via_mec_values(mdp, objective, MecMode::Fixed(l_max))
}

/// Optimal expected bounded window mean payoff.
pub fn bwmp_mdp(mdp: &Mdp) -> Result<AnalysisResult> {
    via_mec_values(mdp, Objective::bounded(), MecMode::Bounded)
}

pub fn dirfixwmp_mdp(mdp: &Mdp, l_max: usize) -> Result<AnalysisResult> {
    dirfixwmp_mdp_with_cap(mdp, l_max, DEFAULT_DIRFIX_CAP)
}

/// Optimal expected direct fixed window mean payoff: the expected mean
/// payoff of the product, whose end components have constant weight.
pub fn dirfixwmp_mdp_with_cap(mdp: &Mdp, l_max: usize, cap: usize) -> Result<AnalysisResult> {
    let objective = Objective::direct_fixed(l_max as u32)?;
    let (norm, t) = normalize(mdp);
    let product = build_dirfix_product(&norm, l_max, cap)?;
    let v = solve_const_mec(&product.mdp)?;
    let mut components = mec_components(&v.partition, &v.mec_values, &t);
    // project product end components onto source states
    for c in &mut components {
        let mut states: Vec<usize> = c.states.iter().map(|&p| product.labels[p].state).collect();
        states.sort_unstable();
        states.dedup();
        c.states = states;
    }
    Ok(AnalysisResult {
        objective,
        value: t.denormalize(&v.per_state[0]),
        distribution: None,
        components,
        transform: t,
        notes: vec![format!("product with {} states; components list the source states of product end components", product.labels.len())],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn self_loop(w: i64) -> Mdp {
        Mdp::new(
            vec!["x".into()],
            vec!["a".into()],
            0,
            vec![vec![Choice { action: 0, transitions: vec![Transition::new(0, int(1), int(w))] }]],
        )
        .unwrap()
    }

    #[test]
    fn self_loop_values() {
        for l in 1..4 {
            assert_eq!(fixwmp_mdp(&self_loop(-2), l).unwrap().value, int(-2));
            assert_eq!(dirfixwmp_mdp(&self_loop(3), l).unwrap().value, int(3));
        }
        assert_eq!(bwmp_mdp(&self_loop(7)).unwrap().value, int(7));
    }

    #[test]
    fn product_lambda_updates() {
        let here = DirFixLabel { state: 0, window: vec![3, 0], lambda: int(3) };
        let next = step(&here, 1, 0).unwrap();
        // prefix means of [3, 0, 0]: 3, 3/2, 1
        assert_eq!(next.lambda, int(3));
        let next = step(&next, 1, 0).unwrap();
        // [0, 0, 0]
        assert_eq!(next.lambda, int(0));
        assert_eq!(next.window, vec![0, 0]);
    }

    #[test]
    fn window_one_product() {
        let here = DirFixLabel { state: 0, window: vec![], lambda: int(5) };
        assert_eq!(step(&here, 0, 2).unwrap().lambda, int(2));
    }
}
