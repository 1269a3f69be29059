//! Weighted transition models.
//!
//! States are interned as `usize` indices into a name table. All three
//! model kinds are validated on construction and immutable afterwards.
//! Parallel edges (two edges with the same source and target, or the same
//! target twice within one action distribution) are rejected.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Signed, Zero};

use crate::error::ModelError;
use crate::rational::Rational;

fn check_unique_names(names: &[String]) -> Result<(), ModelError> {
    if names.is_empty() {
        return Err(ModelError::NoStates);
    }
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(ModelError::DuplicateState(n.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McEdge {
    pub src: usize,
    pub dst: usize,
    pub prob: Rational,
    pub weight: Rational,
}

impl McEdge {
    pub fn new(src: usize, dst: usize, prob: Rational, weight: Rational) -> Self {
        McEdge { src, dst, prob, weight }
    }
}

/// A finite weighted Markov chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovChain {
    names: Vec<String>,
    initial: usize,
    edges: Vec<McEdge>,
    out: Vec<Vec<usize>>,
}

impl MarkovChain {
    /// Validates and builds a chain. Edge order is preserved.
    pub fn new(names: Vec<String>, initial: usize, edges: Vec<McEdge>) -> Result<Self, ModelError> {
        check_unique_names(&names)?;
        let n = names.len();
        if initial >= n {
            return Err(ModelError::UnknownState(initial));
        }
        let mut out = vec![Vec::new(); n];
        let mut pairs = HashSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.src >= n {
                return Err(ModelError::UnknownState(e.src));
            }
            if e.dst >= n {
                return Err(ModelError::UnknownState(e.dst));
            }
            if !e.prob.is_positive() {
                return Err(ModelError::NonPositiveProbability {
                    src: names[e.src].clone(),
                    dst: names[e.dst].clone(),
                    prob: e.prob.to_string(),
                });
            }
            if !pairs.insert((e.src, e.dst)) {
                return Err(ModelError::DuplicateEdge {
                    src: names[e.src].clone(),
                    dst: names[e.dst].clone(),
                });
            }
            out[e.src].push(i);
        }
        for (s, list) in out.iter().enumerate() {
            if list.is_empty() {
                return Err(ModelError::NoOutgoingEdge(names[s].clone()));
            }
            let sum: Rational = list.iter().map(|&i| &edges[i].prob).sum();
            if !sum.is_one() {
                return Err(ModelError::ProbabilitySum {
                    context: format!("state `{}`", names[s]),
                    sum: sum.to_string(),
                });
            }
        }
        Ok(MarkovChain { names, initial, edges, out })
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[McEdge] {
        &self.edges
    }

    pub fn out_edges(&self, s: usize) -> impl Iterator<Item = &McEdge> + '_ {
        self.out[s].iter().map(move |&i| &self.edges[i])
    }

    /// Successor lists of the underlying graph.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.num_states())
            .map(|s| self.out_edges(s).map(|e| e.dst).collect())
            .collect()
    }

    /// Same chain with a different initial state.
    pub fn with_initial(&self, initial: usize) -> Self {
        assert!(initial < self.num_states());
        MarkovChain { initial, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub dst: usize,
    pub prob: Rational,
    pub weight: Rational,
}

impl Transition {
    pub fn new(dst: usize, prob: Rational, weight: Rational) -> Self {
        Transition { dst, prob, weight }
    }
}

/// One enabled action of a state and its weighted distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Choice {
    pub action: usize,
    pub transitions: Vec<Transition>,
}

/// A finite weighted Markov decision process.
///
/// Choices of each state are sorted by action index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mdp {
    state_names: Vec<String>,
    action_names: Vec<String>,
    initial: usize,
    choices: Vec<Vec<Choice>>,
}

impl Mdp {
    pub fn new(
        state_names: Vec<String>,
        action_names: Vec<String>,
        initial: usize,
        mut choices: Vec<Vec<Choice>>,
    ) -> Result<Self, ModelError> {
        check_unique_names(&state_names)?;
        let n = state_names.len();
        if initial >= n {
            return Err(ModelError::UnknownState(initial));
        }
        if choices.len() != n {
            return Err(ModelError::UnknownState(choices.len().min(n)));
        }
        for (s, list) in choices.iter_mut().enumerate() {
            if list.is_empty() {
                return Err(ModelError::NoActions(state_names[s].clone()));
            }
            list.sort_by_key(|c| c.action);
            for w in list.windows(2) {
                if w[0].action == w[1].action {
                    return Err(ModelError::DuplicateAction {
                        state: state_names[s].clone(),
                        action: action_names.get(w[0].action).cloned().unwrap_or_default(),
                    });
                }
            }
            for c in list.iter() {
                if c.action >= action_names.len() {
                    return Err(ModelError::UnknownAction(c.action));
                }
                let context = format!("state `{}` action `{}`", state_names[s], action_names[c.action]);
                if c.transitions.is_empty() {
                    return Err(ModelError::ProbabilitySum { context, sum: "0".into() });
                }
                let mut dsts = HashSet::new();
                for t in &c.transitions {
                    if t.dst >= n {
                        return Err(ModelError::UnknownState(t.dst));
                    }
                    if !t.prob.is_positive() {
                        return Err(ModelError::NonPositiveProbability {
                            src: state_names[s].clone(),
                            dst: state_names[t.dst].clone(),
                            prob: t.prob.to_string(),
                        });
                    }
                    if !dsts.insert(t.dst) {
                        return Err(ModelError::DuplicateEdge {
                            src: format!("{} [{}]", state_names[s], action_names[c.action]),
                            dst: state_names[t.dst].clone(),
                        });
                    }
                }
                let sum: Rational = c.transitions.iter().map(|t| &t.prob).sum();
                if !sum.is_one() {
                    return Err(ModelError::ProbabilitySum { context, sum: sum.to_string() });
                }
            }
        }
        Ok(Mdp { state_names, action_names, initial, choices })
    }

    /// The single-action MDP whose only strategy induces `mc`.
    pub fn from_markov_chain(mc: &MarkovChain) -> Self {
        let choices = (0..mc.num_states())
            .map(|s| {
                vec![Choice {
                    action: 0,
                    transitions: mc
                        .out_edges(s)
                        .map(|e| Transition::new(e.dst, e.prob.clone(), e.weight.clone()))
                        .collect(),
                }]
            })
            .collect();
        Mdp::new(mc.names().to_vec(), vec!["a".to_string()], mc.initial(), choices)
            .expect("a valid chain yields a valid MDP")
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.state_names[s]
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.action_names[a]
    }

    pub fn choices(&self, s: usize) -> &[Choice] {
        &self.choices[s]
    }

    pub fn choice(&self, s: usize, action: usize) -> Option<&Choice> {
        self.choices[s]
            .binary_search_by_key(&action, |c| c.action)
            .ok()
            .map(|i| &self.choices[s][i])
    }

    pub fn num_choices(&self) -> usize {
        self.choices.iter().map(Vec::len).sum()
    }

    /// True when every state has exactly one enabled action.
    pub fn is_single_action(&self) -> bool {
        self.choices.iter().all(|c| c.len() == 1)
    }

    /// Chain induced by the memoryless strategy picking `strategy[s]`
    /// (an index into `choices(s)`) at every state.
    pub fn induced_chain(&self, strategy: &[usize]) -> MarkovChain {
        let mut edges = Vec::new();
        for (s, &k) in strategy.iter().enumerate() {
            for t in &self.choices[s][k].transitions {
                edges.push(McEdge::new(s, t.dst, t.prob.clone(), t.weight.clone()));
            }
        }
        MarkovChain::new(self.state_names.clone(), self.initial, edges)
            .expect("choices of a valid MDP induce a valid chain")
    }

    pub fn with_initial(&self, initial: usize) -> Self {
        assert!(initial < self.num_states());
        Mdp { initial, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: Rational,
}

impl GameEdge {
    pub fn new(src: usize, dst: usize, weight: Rational) -> Self {
        GameEdge { src, dst, weight }
    }
}

/// A finite two-player weighted game graph. Player One maximizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPlayerGame {
    names: Vec<String>,
    owners: Vec<Player>,
    initial: usize,
    edges: Vec<GameEdge>,
    out: Vec<Vec<usize>>,
}

impl TwoPlayerGame {
    pub fn new(
        names: Vec<String>,
        owners: Vec<Player>,
        initial: usize,
        edges: Vec<GameEdge>,
    ) -> Result<Self, ModelError> {
        check_unique_names(&names)?;
        let n = names.len();
        if owners.len() != n {
            return Err(ModelError::UnknownState(owners.len().min(n)));
        }
        if initial >= n {
            return Err(ModelError::UnknownState(initial));
        }
        let mut out = vec![Vec::new(); n];
        let mut pairs = HashSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                return Err(ModelError::UnknownState(e.src.max(e.dst)));
            }
            if !pairs.insert((e.src, e.dst)) {
                return Err(ModelError::DuplicateEdge {
                    src: names[e.src].clone(),
                    dst: names[e.dst].clone(),
                });
            }
            out[e.src].push(i);
        }
        if let Some(s) = out.iter().position(Vec::is_empty) {
            return Err(ModelError::NoOutgoingEdge(names[s].clone()));
        }
        Ok(TwoPlayerGame { names, owners, initial, edges, out })
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn edges(&self) -> &[GameEdge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &GameEdge> + '_ {
        self.out[v].iter().map(move |&i| &self.edges[i])
    }

    pub fn with_initial(&self, initial: usize) -> Self {
        assert!(initial < self.num_vertices());
        TwoPlayerGame { initial, ..self.clone() }
    }

    /// Sub-game on the vertices with `keep[v]`, dropping edges that leave it.
    ///
    /// Returns `None` if some kept vertex loses all its edges. The initial
    /// vertex maps to the first kept vertex when it is itself dropped.
    pub fn restrict(&self, keep: &[bool]) -> Option<(TwoPlayerGame, Vec<usize>)> {
        let kept: Vec<usize> = (0..self.num_vertices()).filter(|&v| keep[v]).collect();
        if kept.is_empty() {
            return None;
        }
        let index: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.src] && keep[e.dst])
            .map(|e| GameEdge::new(index[&e.src], index[&e.dst], e.weight.clone()))
            .collect();
        let initial = index.get(&self.initial).copied().unwrap_or(0);
        let game = TwoPlayerGame::new(
            kept.iter().map(|&v| self.names[v].clone()).collect(),
            kept.iter().map(|&v| self.owners[v]).collect(),
            initial,
            edges,
        )
        .ok()?;
        Some((game, kept))
    }
}

/// Any of the three model kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Mc(MarkovChain),
    Mdp(Mdp),
    Game(TwoPlayerGame),
}

impl Model {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Model::Mc(_) => "mc",
            Model::Mdp(_) => "mdp",
            Model::Game(_) => "game",
        }
    }
}

/// Models whose edge weights can be read and rewritten uniformly.
pub trait Reweight: Sized {
    fn weights(&self) -> Vec<&Rational>;
    /// Applies `f` to every edge weight, keeping structure and probabilities.
    fn map_weights<F: FnMut(&Rational) -> Rational>(&self, f: F) -> Self;
}

impl Reweight for MarkovChain {
    fn weights(&self) -> Vec<&Rational> {
        self.edges.iter().map(|e| &e.weight).collect()
    }

    fn map_weights<F: FnMut(&Rational) -> Rational>(&self, mut f: F) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.weight = f(&e.weight);
        }
        out
    }
}

impl Reweight for Mdp {
    fn weights(&self) -> Vec<&Rational> {
        self.choices
            .iter()
            .flatten()
            .flat_map(|c| c.transitions.iter().map(|t| &t.weight))
            .collect()
    }

    fn map_weights<F: FnMut(&Rational) -> Rational>(&self, mut f: F) -> Self {
        let mut out = self.clone();
        for t in out.choices.iter_mut().flatten().flat_map(|c| c.transitions.iter_mut()) {
            t.weight = f(&t.weight);
        }
        out
    }
}

impl Reweight for TwoPlayerGame {
    fn weights(&self) -> Vec<&Rational> {
        self.edges.iter().map(|e| &e.weight).collect()
    }

    fn map_weights<F: FnMut(&Rational) -> Rational>(&self, mut f: F) -> Self {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.weight = f(&e.weight);
        }
        out
    }
}

impl Reweight for Model {
    fn weights(&self) -> Vec<&Rational> {
        match self {
            Model::Mc(m) => m.weights(),
            Model::Mdp(m) => m.weights(),
            Model::Game(m) => m.weights(),
        }
    }

    fn map_weights<F: FnMut(&Rational) -> Rational>(&self, f: F) -> Self {
        match self {
            Model::Mc(m) => Model::Mc(m.map_weights(f)),
            Model::Mdp(m) => Model::Mdp(m.map_weights(f)),
            Model::Game(m) => Model::Game(m.map_weights(f)),
        }
    }
}

/// Negates every weight (the cost-to-payoff reduction).
pub fn negated<M: Reweight>(model: &M) -> M {
    model.map_weights(|w| -w)
}

/// True when every weight is an integer.
pub fn has_integer_weights<M: Reweight>(model: &M) -> bool {
    model.weights().iter().all(|w| w.is_integer())
}

/// True when every weight is a non-negative integer.
pub fn has_natural_weights<M: Reweight>(model: &M) -> bool {
    model.weights().iter().all(|w| w.is_integer() && !w.is_negative())
}

/// Largest weight, or zero for a model without edges.
pub fn max_weight<M: Reweight>(model: &M) -> Rational {
    model.weights().into_iter().max().cloned().unwrap_or_else(Rational::zero)
}
