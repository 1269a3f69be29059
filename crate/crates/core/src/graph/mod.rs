//! Structural decompositions and probability primitives.

mod karp;
mod linear;
mod mec;
mod reach;
mod scc;

use std::collections::HashMap;

use crate::model::MarkovChain;
use crate::rational::Rational;

pub use karp::min_mean_cycle;
pub use linear::{solve_dense, solve_fixed_point, LinearEquation};
pub use mec::{mecs, Mec, MecPartition};
pub use reach::{bsccs, reach_prob, until_prob, until_value, BsccPartition};
pub use scc::{is_strongly_connected, reachable_from, tarjan_scc};

/// A directed graph with rational edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    n: usize,
    edges: Vec<(usize, usize, Rational)>,
    out: Vec<Vec<usize>>,
}

impl WeightedDigraph {
    /// Panics if an endpoint is out of range.
    pub fn new(n: usize, edges: Vec<(usize, usize, Rational)>) -> Self {
        let mut out = vec![Vec::new(); n];
        for (i, (u, v, _)) in edges.iter().enumerate() {
            assert!(*u < n && *v < n, "edge endpoint out of range");
            out[*u].push(i);
        }
        WeightedDigraph { n, edges, out }
    }

    /// Sub-graph of `mc` induced by `states`; vertex `i` is `states[i]`.
    pub fn from_chain_states(mc: &MarkovChain, states: &[usize]) -> Self {
        let index: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut edges = Vec::new();
        for &s in states {
            for e in mc.out_edges(s) {
                if let Some(&j) = index.get(&e.dst) {
                    edges.push((index[&s], j, e.weight.clone()));
                }
            }
        }
        WeightedDigraph::new(states.len(), edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Rational)] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &(usize, usize, Rational)> + '_ {
        self.out[v].iter().map(move |&i| &self.edges[i])
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.out_edges(v).map(|e| e.1).collect()).collect()
    }

    pub fn map_weights(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let edges = self.edges.iter().map(|(u, v, w)| (*u, *v, f(w))).collect();
        WeightedDigraph { n: self.n, edges, out: self.out.clone() }
    }

    pub fn max_weight(&self) -> Option<&Rational> {
        self.edges.iter().map(|e| &e.2).max()
    }

    pub fn min_weight(&self) -> Option<&Rational> {
        self.edges.iter().map(|e| &e.2).min()
    }
}
