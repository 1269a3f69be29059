//! Direct fixed window distribution through the chain of `l_max`-step paths.
//!
//! Exponential in `l_max`; used as an independent cross-check of the
//! threshold-product algorithm.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, ModelError, Result};
use crate::graph::{reach_prob, until_value};
use crate::model::{McEdge, MarkovChain};
use crate::objective::Objective;
use crate::path::{wmp, FinitePath};
use crate::rational::{int, Rational};
use crate::result::{AnalysisResult, ValueDistribution};
use crate::transform::WeightTransform;

/// Default bound on `|S|^l_max`.
pub const DEFAULT_UNFOLD_CAP: u64 = 1_000_000;

/// Node 0 is the initial node; node `i > 0` is the path `paths[i - 1]`
/// (edge indices into the source chain) labelled `labels[i - 1]`.
#[derive(Debug, Clone)]
pub struct PathChain {
    pub chain: MarkovChain,
    pub paths: Vec<Vec<usize>>,
    pub labels: Vec<Rational>,
}

impl PathChain {
    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }
}

/// Builds the path chain reachable from the initial node.
pub fn build_path_chain(mc: &MarkovChain, l_max: usize, cap: u64) -> Result<PathChain> {
    if l_max == 0 {
        return Err(Error::Model(ModelError::ZeroWindow));
    }
    let n = mc.num_states() as u64;
    let guard = u32::try_from(l_max).ok().and_then(|l| n.checked_pow(l));
    if guard.map_or(true, |g| g > cap) {
        return Err(Error::SizeCap {
            what: "path unfolding".into(),
            size: format!("|S|^l_max = {n}^{l_max}"),
            cap,
        });
    }
    let mut out_idx = vec![Vec::new(); mc.num_states()];
    for (i, e) in mc.edges().iter().enumerate() {
        out_idx[e.src].push(i);
    }

    // every l_max-step path from the initial state
    let mut starts: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
    for _ in 0..l_max {
        let mut next = Vec::new();
        for (p, pr) in starts {
            let at = p.last().map_or(mc.initial(), |&k| mc.edges()[k].dst);
            for &k in &out_idx[at] {
                let mut q = p.clone();
                q.push(k);
                next.push((q, &pr * &mc.edges()[k].prob));
            }
        }
        starts = next;
    }

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |p: Vec<usize>, paths: &mut Vec<Vec<usize>>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            paths.push(p);
            queue.push_back(paths.len());
            paths.len()
        })
    };
    for (p, pr) in starts {
        let id = intern(p, &mut paths, &mut queue);
        edges.push(McEdge::new(0, id, pr, Rational::zero()));
    }
    while let Some(id) = queue.pop_front() {
        let p = paths[id - 1].clone();
        let at = mc.edges()[*p.last().expect("non-empty path")].dst;
        for &k in &out_idx[at] {
            let mut q = p[1..].to_vec();
            q.push(k);
            let to = intern(q, &mut paths, &mut queue);
            edges.push(McEdge::new(id, to, mc.edges()[k].prob.clone(), Rational::zero()));
        }
    }

    let labels = paths
        .iter()
        .map(|p| {
            let ws: Vec<Rational> = p.iter().map(|&k| mc.edges()[k].weight.clone()).collect();
            wmp(&FinitePath::from_weights(&ws), l_max)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut names = vec!["<init>".to_string()];
    names.extend(paths.iter().map(|p| {
        let mut s = mc.name(mc.edges()[p[0]].src).to_string();
        for &k in p {
            s.push(' ');
            s.push_str(mc.name(mc.edges()[k].dst));
        }
        s
    }));
    let chain = MarkovChain::new(names, 0, edges).map_err(|e| Error::Internal(format!("path chain: {e}")))?;
    Ok(PathChain { chain, paths, labels })
}

/// Law of the direct fixed window value as the law of the least label
/// visited in the path chain.
///
/// `Pr(min = m)` is the probability of staying on labels above `m` until a
/// label-`m` node from which no label below `m` is ever reached.
pub fn dirfixwmp_unfold(mc: &MarkovChain, l_max: usize) -> Result<AnalysisResult> {
    dirfixwmp_unfold_with_cap(mc, l_max, DEFAULT_UNFOLD_CAP)
}

pub fn dirfixwmp_unfold_with_cap(mc: &MarkovChain, l_max: usize, cap: u64) -> Result<AnalysisResult> {
    let objective = Objective::direct_fixed(l_max as u32)?;
    let pc = build_path_chain(mc, l_max, cap)?;
    let label = |v: usize| if v == 0 { None } else { Some(&pc.labels[v - 1]) };
    let nodes = pc.chain.num_states();
    let mut values: Vec<Rational> = pc.labels.clone();
    values.sort();
    values.dedup();

    let masses: Vec<Rational> = values
        .par_iter()
        .map(|m| {
            let below: Vec<bool> = (0..nodes).map(|v| label(v).is_some_and(|x| x < m)).collect();
            let escape = reach_prob(&pc.chain, &below)?;
            let stay: Vec<bool> = (0..nodes).map(|v| label(v).map_or(true, |x| x > m)).collect();
            let target: Vec<Option<Rational>> = (0..nodes)
                .map(|v| (label(v) == Some(m)).then(|| int(1) - &escape[v]))
                .collect();
            Ok(until_value(&pc.chain, &stay, &target)?.swap_remove(0))
        })
        .collect::<Result<_>>()?;

    let mut dist = ValueDistribution::new();
    for (v, p) in values.into_iter().zip(masses) {
        dist.add(v, p);
    }
    if !dist.total_mass().is_one() {
        return Err(Error::Internal(format!("distribution mass {} is not 1", dist.total_mass())));
    }
    Ok(AnalysisResult {
        objective,
        value: dist.expectation(),
        distribution: Some(dist),
        components: Vec::new(),
        transform: WeightTransform::identity(),
        notes: vec![format!("path chain with {} paths", pc.num_paths())],
    })
}
