//! Two-player games derived from MDPs and their window and mean-payoff
//! solvers.

mod build;
mod mean_payoff;
mod window;

pub use build::{mdp_to_game, GameFromMdp, GameVertex};
pub use mean_payoff::{mean_payoff_game_value, MAX_ITERATIONS};
pub use window::{direct_fwmp_winning, direct_window_value_at, good_win, max_direct_window_value, GoodWin, WindowValues};
