//! Threshold product and the distribution of the direct fixed window value.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{reach_prob, reachable_from};
use crate::int::{frac_parts, int_weight};
use crate::model::{McEdge, MarkovChain};
use crate::objective::Objective;
use crate::rational::{ratio, Rational};
use crate::result::{AnalysisResult, ValueDistribution};
use crate::transform::normalize;

/// Default bound on materialized product states.
pub const DEFAULT_PRODUCT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProductLabel {
    Trap,
    /// `age` edges of the oldest open window have been read and its reduced
    /// weight sum is `-deficit`; `age == 0` means no window is open.
    State { state: usize, age: usize, deficit: i64 },
}

/// The chain tracking the oldest open window at threshold `lambda`.
///
/// Reaching `trap` means some window stayed open for `l_max` steps.
#[derive(Debug, Clone)]
pub struct ThresholdProductMc {
    pub chain: MarkovChain,
    pub labels: Vec<ProductLabel>,
    pub trap: usize,
    pub lambda: Rational,
}

impl ThresholdProductMc {
    /// Exact probability of never reaching the trap from the initial state.
    pub fn prob_no_trap(&self) -> Result<Rational> {
        let mut target = vec![false; self.chain.num_states()];
        target[self.trap] = true;
        let p = reach_prob(&self.chain, &target)?;
        Ok(Rational::one() - &p[self.chain.initial()])
    }
}

pub fn build_threshold_product(mc: &MarkovChain, lambda: &Rational, l_max: usize) -> Result<ThresholdProductMc> {
    build_threshold_product_with_cap(mc, lambda, l_max, DEFAULT_PRODUCT_CAP)
}

/// Builds the reachable part of the product. Weights of `mc` must be integers.
pub fn build_threshold_product_with_cap(
    mc: &MarkovChain,
    lambda: &Rational,
    l_max: usize,
    cap: usize,
) -> Result<ThresholdProductMc> {
    if l_max == 0 {
        return Err(Error::Model(crate::error::ModelError::ZeroWindow));
    }
    let (a, b) = frac_parts(lambda)?;
    let reduced: Vec<i64> = mc
        .edges()
        .iter()
        .map(|e| {
            int_weight(&e.weight)?
                .checked_mul(b)
                .and_then(|v| v.checked_sub(a))
                .ok_or(Error::Overflow("reduced weight"))
        })
        .collect::<Result<_>>()?;
    let mut out_idx = vec![Vec::new(); mc.num_states()];
    for (i, e) in mc.edges().iter().enumerate() {
        out_idx[e.src].push(i);
    }

    let mut labels: Vec<ProductLabel> = Vec::new();
    let mut index: HashMap<ProductLabel, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut rows: Vec<Vec<(ProductLabel, Rational)>> = Vec::new();

    let init = ProductLabel::State { state: mc.initial(), age: 0, deficit: 0 };
    index.insert(init.clone(), 0);
    labels.push(init);
    queue.push_back(0);

    while let Some(i) = queue.pop_front() {
        let ProductLabel::State { state, age, deficit } = labels[i].clone() else { unreachable!() };
        let mut trap_mass: Option<Rational> = None;
        let mut row = Vec::new();
        for &k in &out_idx[state] {
            let e = &mc.edges()[k];
            let open = deficit.checked_sub(reduced[k]).ok_or(Error::Overflow("window deficit"))?;
            let next = if open <= 0 {
                ProductLabel::State { state: e.dst, age: 0, deficit: 0 }
            } else if age + 1 == l_max {
                *trap_mass.get_or_insert_with(|| ratio(0, 1)) += &e.prob;
                continue;
            } else {
                ProductLabel::State { state: e.dst, age: age + 1, deficit: open }
            };
            if !index.contains_key(&next) {
                if labels.len() >= cap {
                    return Err(Error::SizeCap {
                        what: "threshold product".into(),
                        size: format!("more than {cap} states"),
                        cap: cap as u64,
                    });
                }
                index.insert(next.clone(), labels.len());
                queue.push_back(labels.len());
                labels.push(next.clone());
            }
            row.push((next, e.prob.clone()));
        }
        if let Some(p) = trap_mass {
            row.push((ProductLabel::Trap, p));
        }
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        rows[i] = row;
    }

    let trap = labels.len();
    labels.push(ProductLabel::Trap);
    index.insert(ProductLabel::Trap, trap);
    let mut edges = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        for (label, p) in row {
            edges.push(McEdge::new(i, index[&label], p, ratio(0, 1)));
        }
    }
    edges.push(McEdge::new(trap, trap, Rational::one(), ratio(0, 1)));
    let names = labels
        .iter()
        .map(|l| match l {
            ProductLabel::Trap => "trap".to_string(),
            ProductLabel::State { state, age, deficit } => format!("{}|{}|{}", mc.name(*state), age, deficit),
        })
        .collect();
    let chain = MarkovChain::new(names, 0, edges).map_err(|e| Error::Internal(format!("threshold product: {e}")))?;
    Ok(ThresholdProductMc { chain, labels, trap, lambda: lambda.clone() })
}

/// Window mean payoffs of every `l_max`-step path starting in a state
/// reachable from the initial state. Weights must be integers.
pub fn realized_window_values(mc: &MarkovChain, l_max: usize) -> Result<BTreeSet<Rational>> {
    let reach = reachable_from(&mc.adjacency(), &[mc.initial()]);
    let out: Vec<Vec<(usize, i64)>> = (0..mc.num_states())
        .map(|s| mc.out_edges(s).map(|e| Ok((e.dst, int_weight(&e.weight)?))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    // frontier entries: (state, prefix sum, best mean numerator, best mean denominator)
    let mut frontier: HashSet<(usize, i64, i64, i64)> = (0..mc.num_states())
        .filter(|&s| reach[s])
        .map(|s| (s, 0, 0, 0))
        .collect();
    for k in 1..=l_max as i64 {
        let mut next = HashSet::new();
        for &(s, sum, bn, bd) in &frontier {
            for &(t, w) in &out[s] {
                let sum = sum.checked_add(w).ok_or(Error::Overflow("window sum"))?;
                let better = bd == 0 || i128::from(sum) * i128::from(bd) > i128::from(bn) * i128::from(k);
                let (bn, bd) = if better { (sum, k) } else { (bn, bd) };
                next.insert((t, sum, bn, bd));
            }
        }
        frontier = next;
    }
    Ok(frontier.into_iter().map(|(_, _, n, d)| ratio(n, d)).collect())
}

/// Tail probabilities `Pr(f >= lambda)` for the given integer-weight chain.
pub fn tail_probabilities(mc: &MarkovChain, l_max: usize, lambdas: &[Rational]) -> Result<Vec<Rational>> {
    lambdas
        .par_iter()
        .map(|lambda| build_threshold_product(mc, lambda, l_max)?.prob_no_trap())
        .collect()
}

/// Law and expectation of the direct fixed window value.
///
/// Probes each realized window value `lambda` in descending order via the
/// threshold product; point masses are successive differences of tails.
pub fn dirfixwmp_mc(mc: &MarkovChain, l_max: usize) -> Result<AnalysisResult> {
    let objective = Objective::direct_fixed(l_max as u32)?;
    let (norm, t) = normalize(mc);
    let values: Vec<Rational> = realized_window_values(&norm, l_max)?.into_iter().rev().collect();
    let tails = tail_probabilities(&norm, l_max, &values)?;
    let mut dist = ValueDistribution::new();
    let mut above = ratio(0, 1);
    for (v, tail) in values.iter().zip(&tails) {
        dist.add(t.denormalize(v), tail - &above);
        above = tail.clone();
    }
    if !dist.total_mass().is_one() {
        return Err(Error::Internal(format!("distribution mass {} is not 1", dist.total_mass())));
    }
    Ok(AnalysisResult {
        objective,
        value: dist.expectation(),
        distribution: Some(dist),
        components: Vec::new(),
        transform: t,
        notes: Vec::new(),
    })
}
