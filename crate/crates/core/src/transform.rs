//! Integer normalization of weights.
//!
//! Window values are maxima and minima of means, so they commute with any
//! affine map `w -> b*w + shift` with `b > 0`. Solvers work on the
//! normalized model and map results back with [`WeightTransform::denormalize`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::model::Reweight;
use crate::rational::{lcm_of_denominators, Rational};

/// The map `w -> scale*w + shift`, with `scale > 0` and `shift >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTransform {
    pub scale: BigInt,
    pub shift: BigInt,
}

impl WeightTransform {
    pub fn identity() -> Self {
        WeightTransform { scale: BigInt::one(), shift: BigInt::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.scale.is_one() && self.shift.is_zero()
    }

    pub fn apply(&self, w: &Rational) -> Rational {
        w * Rational::from_integer(self.scale.clone()) + Rational::from_integer(self.shift.clone())
    }

    pub fn denormalize(&self, v: &Rational) -> Rational {
        (v - Rational::from_integer(self.shift.clone())) / Rational::from_integer(self.scale.clone())
    }
}

/// Scales by the LCM of all weight denominators, then shifts so the least
/// weight becomes zero if it was negative.
pub fn normalize<M: Reweight>(model: &M) -> (M, WeightTransform) {
    let weights = model.weights();
    let scale = lcm_of_denominators(weights.iter().copied());
    let scale_r = Rational::from_integer(scale.clone());
    let min_scaled = weights
        .iter()
        .map(|w| (*w * &scale_r).to_integer())
        .min()
        .unwrap_or_else(BigInt::zero);
    let shift = if min_scaled.is_negative() { -min_scaled } else { BigInt::zero() };
    let t = WeightTransform { scale, shift };
    if t.is_identity() {
        return (model.map_weights(|w| w.clone()), t);
    }
    let out = model.map_weights(|w| t.apply(w));
    (out, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{McEdge, MarkovChain};
    use crate::rational::{int, ratio};

    fn chain(weights: &[Rational]) -> MarkovChain {
        let n = weights.len();
        let names = (0..n).map(|i| format!("s{i}")).collect();
        let edges = weights
            .iter()
            .enumerate()
            .map(|(i, w)| McEdge::new(i, (i + 1) % n, int(1), w.clone()))
            .collect();
        MarkovChain::new(names, 0, edges).unwrap()
    }

    #[test]
    fn natural_weights_get_identity() {
        let mc = chain(&[int(3), int(2), int(0), int(1)]);
        let (out, t) = normalize(&mc);
        assert!(t.is_identity());
        assert_eq!(out, mc);
    }

    #[test]
    fn half_and_minus_one() {
        let mc = chain(&[int(-1), ratio(1, 2)]);
        let (out, t) = normalize(&mc);
        assert_eq!(t.scale, BigInt::from(2));
        assert_eq!(t.shift, BigInt::from(2));
        let w: Vec<Rational> = out.weights().into_iter().cloned().collect();
        assert_eq!(w, vec![int(0), int(3)]);
        assert_eq!(t.denormalize(&int(3)), ratio(1, 2));
    }
}
