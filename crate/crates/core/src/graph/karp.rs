use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

use super::scc::is_strongly_connected;
use super::WeightedDigraph;

/// Minimum cycle mean of a strongly connected graph (Karp).
///
/// `d[k][v]` is the least weight of a `k`-edge walk from vertex 0 to `v`;
/// the answer is `min_v max_k (d[n][v] - d[k][v]) / (n - k)`.
pub fn min_mean_cycle(g: &WeightedDigraph) -> Result<Rational> {
    let n = g.num_vertices();
    if g.edges().is_empty() || !is_strongly_connected(&g.adjacency()) {
        return Err(Error::Precondition(
            "minimum mean cycle needs a strongly connected graph with an edge".into(),
        ));
    }
    let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n + 1];
    d[0][0] = Some(Rational::zero());
    for k in 1..=n {
        let (done, rest) = d.split_at_mut(k);
        let prev = &done[k - 1];
        let cur = &mut rest[0];
        for (u, v, w) in g.edges() {
            if let Some(du) = &prev[*u] {
                let cand = du + w;
                if cur[*v].as_ref().map_or(true, |c| cand < *c) {
                    cur[*v] = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..n {
        let Some(dn) = &d[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].as_ref().map(|dk| (dn - dk) / int((n - k) as i64)))
            .max()
            .expect("a walk of length < n reaches every vertex");
        if best.as_ref().map_or(true, |b| worst < *b) {
            best = Some(worst);
        }
    }
    best.ok_or_else(|| Error::Internal("no walk of length n in a strongly connected graph".into()))
}
