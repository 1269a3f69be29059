//! Exact window mean-payoff analysis.
//!
//! Models are weighted Markov chains, Markov decision processes and
//! two-player games. All probabilities, weights and results are exact
//! rationals.

pub mod error;
pub mod game;
pub mod graph;
mod int;
pub mod mc;
pub mod mdp;
pub mod model;
pub mod objective;
pub mod path;
pub mod rational;
pub mod result;
pub mod transform;

pub use error::{Error, ModelError, Result};
pub use model::{Choice, GameEdge, MarkovChain, McEdge, Mdp, Model, Player, Reweight, Transition, TwoPlayerGame};
pub use objective::{Flavor, Objective, WindowKind};
pub use rational::Rational;
pub use result::{AnalysisResult, ComponentKind, ComponentValue, ValueDistribution};
pub use transform::{normalize, WeightTransform};
