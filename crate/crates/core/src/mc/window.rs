//! Fixed and bounded window values of Markov chains.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{bsccs, min_mean_cycle, WeightedDigraph};
use crate::model::MarkovChain;
use crate::objective::Objective;
use crate::rational::{candidate_count_bound, candidate_values, Rational};
use crate::result::{AnalysisResult, ComponentKind, ComponentValue};
use crate::transform::{normalize, WeightTransform};

use crate::int::{frac_parts, int_weight, CANDIDATE_CAP};

/// Integer edge list `(src, dst, weight)` with per-vertex out-lists.
pub(crate) struct IntGraph {
    pub out: Vec<Vec<(usize, i64)>>,
}

impl IntGraph {
    pub fn from_digraph(g: &WeightedDigraph) -> Result<Self> {
        let mut out = vec![Vec::new(); g.num_vertices()];
        for (u, v, w) in g.edges() {
            out[*u].push((*v, int_weight(w)?));
        }
        Ok(IntGraph { out })
    }

    fn bounds(&self) -> (i64, i64) {
        let ws = self.out.iter().flatten().map(|e| e.1);
        let lo = ws.clone().min().unwrap_or(0);
        let hi = ws.max().unwrap_or(0);
        (lo, hi)
    }

    /// `TP_l(s) >= 0` for every vertex, on weights `q*w - p`.
    ///
    /// `TP_0 = 0`, `TP_i(s) = min over s -> t of max(w, w + TP_{i-1}(t))`.
    fn window_nonneg(&self, l_max: usize, q: i64, p: i64) -> Result<Vec<bool>> {
        let n = self.out.len();
        let mut tp = vec![0i128; n];
        let mut next = vec![0i128; n];
        for _ in 0..l_max {
            for s in 0..n {
                next[s] = self.out[s]
                    .iter()
                    .map(|&(t, w)| {
                        let w = i128::from(q) * i128::from(w) - i128::from(p);
                        w.max(w + tp[t])
                    })
                    .min()
                    .ok_or_else(|| Error::Precondition("vertex without outgoing edge".into()))?;
            }
            std::mem::swap(&mut tp, &mut next);
        }
        Ok(tp.into_iter().map(|v| v >= 0).collect())
    }
}

/// States from which every path has a non-negative window total payoff
/// within `l_max` steps. Weights must be integers.
pub fn non_neg_window_bscc(graph: &WeightedDigraph, l_max: usize) -> Result<BTreeSet<usize>> {
    check_window(l_max)?;
    let g = IntGraph::from_digraph(graph)?;
    let ok = g.window_nonneg(l_max, 1, 0)?;
    Ok((0..ok.len()).filter(|&s| ok[s]).collect())
}

fn check_window(l_max: usize) -> Result<()> {
    if l_max == 0 {
        return Err(Error::Model(crate::error::ModelError::ZeroWindow));
    }
    Ok(())
}

/// Sorted candidate thresholds for means of at most `l_max` weights in `[lo, hi]`.
pub(crate) fn candidates(lo: i64, hi: i64, l_max: usize) -> Result<Vec<Rational>> {
    let l = u32::try_from(l_max).map_err(|_| Error::Overflow("window length"))?;
    let bound = candidate_count_bound(lo, hi, l);
    if bound > CANDIDATE_CAP as u128 {
        return Err(Error::SizeCap {
            what: "threshold candidate set".into(),
            size: bound.to_string(),
            cap: CANDIDATE_CAP,
        });
    }
    Ok(candidate_values(lo, hi, l))
}

/// Largest index `i` with `pred(i)`, given `pred(0)` and monotone `pred`.
pub(crate) fn last_true(len: usize, mut pred: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
    let (mut lo, mut hi) = (0, len);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// The least window mean payoff over states and `l_max`-step paths of a
/// bottom component with integer weights.
///
/// Binary search over the candidate thresholds `p/q`; the test for
/// `m >= p/q` runs the window check on weights `q*w - p`.
pub fn exp_val_bscc(bscc: &WeightedDigraph, l_max: usize) -> Result<Rational> {
    check_window(l_max)?;
    let g = IntGraph::from_digraph(bscc)?;
    let (lo, hi) = g.bounds();
    let cands = candidates(lo, hi, l_max)?;
    let i = last_true(cands.len(), |i| {
        let (p, q) = frac_parts(&cands[i])?;
        Ok(g.window_nonneg(l_max, q, p)?.into_iter().all(|b| b))
    })?;
    Ok(cands[i].clone())
}

fn per_bscc(
    mc: &MarkovChain,
    objective: Objective,
    transform: WeightTransform,
    value_of: impl Fn(&WeightedDigraph) -> Result<Rational>,
) -> Result<AnalysisResult> {
    let part = bsccs(mc)?;
    let mut components = Vec::new();
    let mut value = Rational::zero();
    for (states, reach) in part.components.iter().zip(&part.reach) {
        let g = WeightedDigraph::from_chain_states(mc, states);
        let v = transform.denormalize(&value_of(&g)?);
        value += reach * &v;
        components.push(ComponentValue {
            kind: ComponentKind::Bscc,
            states: states.clone(),
            reach_probability: Some(reach.clone()),
            value: v,
        });
    }
    Ok(AnalysisResult { objective, value, distribution: None, components, transform, notes: Vec::new() })
}

/// Expected fixed window mean payoff: the sum over bottom components of
/// their reach probability times their window value.
pub fn fixwmp_mc(mc: &MarkovChain, l_max: usize) -> Result<AnalysisResult> {
    check_window(l_max)?;
    let objective = Objective::fixed(l_max as u32)?;
    let (norm, t) = normalize(mc);
    per_bscc(&norm, objective, t, |g| exp_val_bscc(g, l_max))
}

/// Expected bounded window mean payoff: each bottom component contributes
/// its minimum cycle mean.
pub fn bwmp_mc(mc: &MarkovChain) -> Result<AnalysisResult> {
    per_bscc(mc, Objective::bounded(), WeightTransform::identity(), min_mean_cycle)
}
