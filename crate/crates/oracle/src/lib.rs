//! Independent brute-force oracles, fixtures, random model generation,
//! reset constructions and Monte Carlo estimation for differential tests
//! of `wmp-core`.

pub mod brute;
pub mod error;
pub mod fixtures;
pub mod game_oracle;
mod linalg;
pub mod mdp_oracle;
pub mod monte_carlo;
pub mod random;
pub mod reset;

pub use error::{OracleError, Result};
