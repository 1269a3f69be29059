//! Window objectives on Markov chains.

mod alt;
mod product;
mod unfold;
mod window;

pub use alt::{check_alt_good_window, good_window_mass, AltGoodWindow};
pub use product::{
    build_threshold_product, build_threshold_product_with_cap, dirfixwmp_mc, realized_window_values,
    tail_probabilities, ProductLabel, ThresholdProductMc, DEFAULT_PRODUCT_CAP,
};
pub use unfold::{build_path_chain, dirfixwmp_unfold, dirfixwmp_unfold_with_cap, PathChain, DEFAULT_UNFOLD_CAP};
pub use window::{bwmp_mc, exp_val_bscc, fixwmp_mc, non_neg_window_bscc};

pub(crate) use window::{candidates, last_true};
