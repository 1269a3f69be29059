//! Window objectives on Markov decision processes.

mod expected;
mod mec_value;
mod product;

pub use expected::{expected_mean_payoff_const_mec, solve_const_mec, ExpectedValue};
pub use mec_value::{bwmp_mec, fixwmp_mec, mec_sub_mdp, replace_mecs, MecMode, MecValueAnnotation};
pub use product::{
    build_dirfix_product, bwmp_mdp, dirfixwmp_mdp, dirfixwmp_mdp_with_cap, fixwmp_mdp, DirFixLabel, DirFixProductMdp,
    DEFAULT_DIRFIX_CAP,
};
