//! Exhaustive path and cycle enumeration oracles for Markov chains.
//!
//! Nothing here calls into the `wmp-core` solvers; only model types and
//! rational helpers are shared.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use wmp_core::graph::WeightedDigraph;
use wmp_core::rational::int;
use wmp_core::{MarkovChain, Rational};

use crate::error::{OracleError, Result};
use crate::linalg::solve;

/// Default cap on enumerated paths or strategies.
pub const DEFAULT_CAP: usize = 2_000_000;

fn out_lists(g: &WeightedDigraph) -> Vec<Vec<(usize, Rational)>> {
    let mut out = vec![Vec::new(); g.num_vertices()];
    for (u, v, w) in g.edges() {
        out[*u].push((*v, w.clone()));
    }
    out
}

/// Calls `visit` with the weight sequence of every `len`-step path from `s`.
fn for_each_path(
    out: &[Vec<(usize, Rational)>],
    s: usize,
    len: usize,
    budget: &mut usize,
    visit: &mut dyn FnMut(&[Rational]),
) -> Result<()> {
    fn go(
        out: &[Vec<(usize, Rational)>],
        v: usize,
        left: usize,
        acc: &mut Vec<Rational>,
        budget: &mut usize,
        visit: &mut dyn FnMut(&[Rational]),
    ) -> Result<()> {
        if left == 0 {
            if *budget == 0 {
                return Err(OracleError::Cap("path enumeration".into()));
            }
            *budget -= 1;
            visit(acc);
            return Ok(());
        }
        for (t, w) in &out[v] {
            acc.push(w.clone());
            go(out, *t, left - 1, acc, budget, visit)?;
            acc.pop();
        }
        Ok(())
    }
    go(out, s, len, &mut Vec::with_capacity(len), budget, visit)
}

/// `max_k (w_1 + ... + w_k) / k` over `k = 1..=len`.
pub fn literal_wmp(weights: &[Rational]) -> Rational {
    let mut sum = Rational::zero();
    let mut best: Option<Rational> = None;
    for (k, w) in weights.iter().enumerate() {
        sum += w;
        let mean = &sum / int(k as i64 + 1);
        if best.as_ref().map_or(true, |b| mean > *b) {
            best = Some(mean);
        }
    }
    best.expect("non-empty window")
}

/// `max_k (w_1 + ... + w_k)` over `k = 1..=len`.
pub fn literal_wtp(weights: &[Rational]) -> Rational {
    let mut sum = Rational::zero();
    let mut best: Option<Rational> = None;
    for w in weights {
        sum += w;
        if best.as_ref().map_or(true, |b| sum > *b) {
            best = Some(sum.clone());
        }
    }
    best.expect("non-empty window")
}

/// Least window mean payoff over every state and every `l_max`-step path.
pub fn brute_m_bscc(g: &WeightedDigraph, l_max: usize, cap: usize) -> Result<Rational> {
    let out = out_lists(g);
    let mut budget = cap;
    let mut best: Option<Rational> = None;
    for s in 0..g.num_vertices() {
        for_each_path(&out, s, l_max, &mut budget, &mut |ws| {
            let v = literal_wmp(ws);
            if best.as_ref().map_or(true, |b| v < *b) {
                best = Some(v);
            }
        })?;
    }
    best.ok_or_else(|| OracleError::Unsupported("graph without paths".into()))
}

/// States whose every `l_max`-step path has a non-negative window total payoff.
pub fn brute_window_set(g: &WeightedDigraph, l_max: usize, cap: usize) -> Result<Vec<usize>> {
    let out = out_lists(g);
    let mut budget = cap;
    let mut set = Vec::new();
    for s in 0..g.num_vertices() {
        let mut ok = true;
        for_each_path(&out, s, l_max, &mut budget, &mut |ws| {
            if literal_wtp(ws) < Rational::zero() {
                ok = false;
            }
        })?;
        if ok {
            set.push(s);
        }
    }
    Ok(set)
}

/// Window mean payoffs of all `l_max`-step paths from state `s`, in
/// enumeration order.
pub fn path_wmp_values(g: &WeightedDigraph, s: usize, l_max: usize) -> Result<Vec<Rational>> {
    let out = out_lists(g);
    let mut budget = DEFAULT_CAP;
    let mut vals = Vec::new();
    for_each_path(&out, s, l_max, &mut budget, &mut |ws| vals.push(literal_wmp(ws)))?;
    Ok(vals)
}

/// Every elementary cycle as its vertex sequence, starting at its least
/// vertex.
pub fn enum_elementary_cycles(g: &WeightedDigraph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for (u, v, _) in g.edges() {
        adj[*u].push(*v);
    }
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        extend(&adj, start, &mut path, &mut on_path, &mut cycles);
    }
    cycles
}

fn extend(adj: &[Vec<usize>], start: usize, path: &mut Vec<usize>, on_path: &mut [bool], cycles: &mut Vec<Vec<usize>>) {
    let v = *path.last().expect("non-empty");
    for &t in &adj[v] {
        if t == start {
            cycles.push(path.clone());
        } else if t > start && !on_path[t] {
            on_path[t] = true;
            path.push(t);
            extend(adj, start, path, on_path, cycles);
            path.pop();
            on_path[t] = false;
        }
    }
}

/// Mean weight of a cycle given as a vertex sequence.
pub fn cycle_mean(g: &WeightedDigraph, cycle: &[usize]) -> Rational {
    let weight = |u: usize, v: usize| {
        g.edges()
            .iter()
            .find(|e| e.0 == u && e.1 == v)
            .map(|e| e.2.clone())
            .expect("cycle edge exists")
    };
    let total: Rational = (0..cycle.len()).map(|i| weight(cycle[i], cycle[(i + 1) % cycle.len()])).sum();
    total / int(cycle.len() as i64)
}

/// Least elementary cycle mean.
pub fn brute_c_bscc(g: &WeightedDigraph) -> Result<Rational> {
    enum_elementary_cycles(g)
        .iter()
        .map(|c| cycle_mean(g, c))
        .min()
        .ok_or_else(|| OracleError::Unsupported("graph without cycles".into()))
}

/// Reachability matrix by depth-first search from every state.
pub(crate) fn reach_matrix(adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &t in &adj[v] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Strongly connected components as sorted state lists, by intersecting
/// forward and backward reachability.
pub fn brute_sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let r = reach_matrix(adj);
    let n = adj.len();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if done[s] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&t| r[s][t] && r[t][s]).collect();
        for &t in &comp {
            done[t] = true;
        }
        out.push(comp);
    }
    out
}

/// Probability that an `l_max`-step path from `s` has window mean payoff
/// at least `lambda`, by enumerating the paths with their probabilities.
pub fn brute_good_window_mass(mc: &MarkovChain, s: usize, l_max: usize, lambda: &Rational) -> Rational {
    fn go(mc: &MarkovChain, v: usize, left: usize, ws: &mut Vec<Rational>, p: Rational, lambda: &Rational) -> Rational {
        if left == 0 {
            return if literal_wmp(ws) >= *lambda { p } else { Rational::zero() };
        }
        let mut total = Rational::zero();
        for e in mc.out_edges(v) {
            ws.push(e.weight.clone());
            total += go(mc, e.dst, left - 1, ws, &p * &e.prob, lambda);
            ws.pop();
        }
        total
    }
    go(mc, s, l_max, &mut Vec::new(), Rational::one(), lambda)
}

/// Bottom components as sorted state lists: `s` is bottom iff every state
/// it reaches reaches it back.
pub fn brute_bsccs(mc: &MarkovChain) -> Vec<Vec<usize>> {
    let r = reach_matrix(&mc.adjacency());
    let n = mc.num_states();
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if done[s] || !(0..n).all(|t| !r[s][t] || r[t][s]) {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&t| r[s][t]).collect();
        for &t in &comp {
            done[t] = true;
        }
        out.push(comp);
    }
    out
}

/// Probability of eventually entering each bottom component from each
/// state, by a dense solve on the transient states.
pub fn brute_bscc_reach(mc: &MarkovChain) -> Result<(Vec<Vec<usize>>, Vec<Vec<Rational>>)> {
    let comps = brute_bsccs(mc);
    let n = mc.num_states();
    let mut comp_of = vec![None; n];
    for (i, c) in comps.iter().enumerate() {
        for &s in c {
            comp_of[s] = Some(i);
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&s| comp_of[s].is_none()).collect();
    let pos: BTreeMap<usize, usize> = transient.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut per_comp = Vec::new();
    for i in 0..comps.len() {
        let k = transient.len();
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for (r, &s) in transient.iter().enumerate() {
            a[r][r] = Rational::one();
            for e in mc.out_edges(s) {
                match comp_of[e.dst] {
                    Some(j) if j == i => b[r] += &e.prob,
                    Some(_) => {}
                    None => a[r][pos[&e.dst]] -= &e.prob,
                }
            }
        }
        let x = solve(a, b)?;
        let probs = (0..n)
            .map(|s| match comp_of[s] {
                Some(j) => if j == i { Rational::one() } else { Rational::zero() },
                None => x[pos[&s]].clone(),
            })
            .collect();
        per_comp.push(probs);
    }
    Ok((comps, per_comp))
}

/// Long-run average weight of a chain restricted to a bottom component,
/// from its stationary distribution.
pub fn brute_bscc_gain(mc: &MarkovChain, comp: &[usize]) -> Result<Rational> {
    let k = comp.len();
    let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // pi (P - I) = 0 with the last equation replaced by sum(pi) = 1
    let mut a = vec![vec![Rational::zero(); k]; k];
    for (i, &s) in comp.iter().enumerate() {
        a[i][i] -= Rational::one();
        for e in mc.out_edges(s) {
            a[pos[&e.dst]][i] += &e.prob;
        }
    }
    let mut b = vec![Rational::zero(); k];
    a[k - 1] = vec![Rational::one(); k];
    b[k - 1] = Rational::one();
    let pi = solve(a, b)?;
    let mut gain = Rational::zero();
    for (i, &s) in comp.iter().enumerate() {
        for e in mc.out_edges(s) {
            gain += &pi[i] * &e.prob * &e.weight;
        }
    }
    Ok(gain)
}

/// Expected mean payoff of a chain from its initial state.
pub fn brute_chain_mean_payoff(mc: &MarkovChain) -> Result<Rational> {
    let (comps, reach) = brute_bscc_reach(mc)?;
    let mut total = Rational::zero();
    for (c, r) in comps.iter().zip(&reach) {
        total += &r[mc.initial()] * brute_bscc_gain(mc, c)?;
    }
    Ok(total)
}

/// Expected fixed window value: each bottom component contributes its
/// reach probability times its literal window minimum.
pub fn brute_fixwmp_mc(mc: &MarkovChain, l_max: usize) -> Result<Rational> {
    let (comps, reach) = brute_bscc_reach(mc)?;
    let mut total = Rational::zero();
    for (c, r) in comps.iter().zip(&reach) {
        let g = WeightedDigraph::from_chain_states(mc, c);
        total += &r[mc.initial()] * brute_m_bscc(&g, l_max, DEFAULT_CAP)?;
    }
    Ok(total)
}

/// Law of the direct fixed window value on chains whose bottom components
/// are single absorbing states and whose other states form a DAG, by
/// enumerating every prefix that enters an absorbing state.
pub fn brute_dirfix_absorbing(mc: &MarkovChain, l_max: usize) -> Result<BTreeMap<Rational, Rational>> {
    let n = mc.num_states();
    let absorbing: Vec<Option<Rational>> = (0..n)
        .map(|s| {
            let es: Vec<_> = mc.out_edges(s).collect();
            (es.len() == 1 && es[0].dst == s).then(|| es[0].weight.clone())
        })
        .collect();
    let r = reach_matrix(&mc.adjacency());
    for s in 0..n {
        if absorbing[s].is_none() && r[s].iter().enumerate().any(|(t, &x)| x && t != s && r[t][s]) {
            return Err(OracleError::Unsupported("transient part is not acyclic".into()));
        }
        if absorbing[s].is_none() && mc.out_edges(s).any(|e| e.dst == s) {
            return Err(OracleError::Unsupported("transient self-loop".into()));
        }
    }
    let mut dist: BTreeMap<Rational, Rational> = BTreeMap::new();
    let mut stack: Vec<(usize, Vec<Rational>, Rational)> = vec![(mc.initial(), Vec::new(), Rational::one())];
    while let Some((s, ws, p)) = stack.pop() {
        if let Some(c) = &absorbing[s] {
            let mut full = ws.clone();
            full.extend(std::iter::repeat(c.clone()).take(l_max));
            let v = (0..=ws.len()).map(|i| literal_wmp(&full[i..i + l_max])).min().expect("positions");
            *dist.entry(v).or_insert_with(Rational::zero) += p;
            continue;
        }
        for e in mc.out_edges(s) {
            let mut next = ws.clone();
            next.push(e.weight.clone());
            stack.push((e.dst, next, &p * &e.prob));
        }
    }
    Ok(dist)
}
