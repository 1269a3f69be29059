//! Window evaluators on explicit finite paths.

use crate::error::{Error, ModelError, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: Rational,
}

/// A finite path. Invariant: `edges[i].dst == edges[i + 1].src`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePath {
    origin: usize,
    edges: Vec<PathEdge>,
}

impl FinitePath {
    pub fn new(origin: usize, edges: Vec<PathEdge>) -> std::result::Result<Self, ModelError> {
        let mut at = origin;
        for (i, e) in edges.iter().enumerate() {
            if e.src != at {
                return Err(ModelError::BrokenPath(i));
            }
            at = e.dst;
        }
        Ok(FinitePath { origin, edges })
    }

    /// A path through anonymous states carrying the given weights.
    pub fn from_weights(weights: &[Rational]) -> Self {
        let edges = weights
            .iter()
            .enumerate()
            .map(|(i, w)| PathEdge { src: i, dst: i + 1, weight: w.clone() })
            .collect();
        FinitePath { origin: 0, edges }
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn edges(&self) -> &[PathEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.edges.iter().map(|e| &e.weight)
    }
}

fn check_len(path: &FinitePath, l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::Model(ModelError::ZeroWindow));
    }
    if path.len() < l {
        return Err(Error::Precondition(format!(
            "path has {} edges, window needs {l}",
            path.len()
        )));
    }
    Ok(())
}

fn max_prefix(weights: &[&Rational], l: usize, mean: bool) -> Rational {
    let mut sum = Rational::from_integer(0.into());
    let mut best: Option<Rational> = None;
    for (k, w) in weights.iter().take(l).enumerate() {
        sum += *w;
        let v = if mean { &sum / Rational::from_integer((k as i64 + 1).into()) } else { sum.clone() };
        if best.as_ref().map_or(true, |b| v > *b) {
            best = Some(v);
        }
    }
    best.expect("window length is positive")
}

/// Window total payoff: the largest of the first `l` prefix sums.
pub fn wtp(path: &FinitePath, l: usize) -> Result<Rational> {
    check_len(path, l)?;
    let w: Vec<&Rational> = path.weights().collect();
    Ok(max_prefix(&w, l, false))
}

/// Window mean payoff: the largest of the first `l` prefix means.
pub fn wmp(path: &FinitePath, l: usize) -> Result<Rational> {
    check_len(path, l)?;
    let w: Vec<&Rational> = path.weights().collect();
    Ok(max_prefix(&w, l, true))
}

/// Least window mean payoff over every position that still has a full
/// window of `l_max` edges ahead of it.
pub fn finite_direct_window_value(path: &FinitePath, l_max: usize) -> Result<Rational> {
    check_len(path, l_max)?;
    let w: Vec<&Rational> = path.weights().collect();
    let value = (0..=w.len() - l_max)
        .map(|i| max_prefix(&w[i..], l_max, true))
        .min()
        .expect("at least one position");
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(ws: &[i64]) -> FinitePath {
        FinitePath::from_weights(&ws.iter().map(|&w| int(w)).collect::<Vec<_>>())
    }

    #[test]
    fn total_payoff_examples() {
        assert_eq!(wtp(&p(&[2, 5, 4]), 3).unwrap(), int(11));
        assert_eq!(wtp(&p(&[-1, 2, 1]), 3).unwrap(), int(2));
        assert_eq!(wtp(&p(&[-7]), 1).unwrap(), int(-7));
    }

    #[test]
    fn mean_payoff_examples() {
        assert_eq!(wmp(&p(&[2, 0]), 2).unwrap(), int(2));
        assert_eq!(wmp(&p(&[0, 2]), 2).unwrap(), int(1));
        assert_eq!(wmp(&p(&[1, 0]), 2).unwrap(), int(1));
        assert_eq!(wmp(&p(&[2, 5, 4]), 3).unwrap(), ratio(11, 3));
    }

    #[test]
    fn short_path_is_a_precondition_error() {
        assert!(matches!(wmp(&p(&[1]), 2), Err(Error::Precondition(_))));
        assert!(matches!(finite_direct_window_value(&p(&[1]), 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn direct_value_examples() {
        assert_eq!(finite_direct_window_value(&p(&[2, 0, 2, 0, 2, 0]), 2).unwrap(), int(1));
        assert_eq!(finite_direct_window_value(&p(&[4, 4, 4, 4]), 3).unwrap(), int(4));
        // windows [2,5,4] -> 11/3, [5,4,2] -> 5, [4,2,5] -> 4
        assert_eq!(
            finite_direct_window_value(&p(&[2, 5, 4, 2, 5, 4, 2, 5, 4]), 3).unwrap(),
            ratio(11, 3)
        );
    }

    #[test]
    fn broken_chain_rejected() {
        let e = |s, d| PathEdge { src: s, dst: d, weight: int(0) };
        assert!(FinitePath::new(0, vec![e(0, 1), e(1, 2)]).is_ok());
        assert_eq!(FinitePath::new(0, vec![e(0, 1), e(2, 3)]), Err(ModelError::BrokenPath(1)));
    }
}
