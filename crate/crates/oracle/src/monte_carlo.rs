//! Seeded Monte Carlo estimation of expected fixed and direct fixed
//! window values on Markov chains.
//!
//! Sampling is exact: each state's probabilities are brought to a common
//! integer denominator and a uniform integer picks the successor. Path
//! values are computed exactly on integer-scaled weights; only the final
//! average is floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wmp_core::{MarkovChain, Objective, WindowKind};

use crate::error::{OracleError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub samples: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// `std_dev / sqrt(samples)`.
    pub std_err: f64,
}

impl Estimate {
    /// Normal-approximation interval `mean -/+ z * std_err`.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        (self.mean - z * self.std_err, self.mean + z * self.std_err)
    }
}

/// Per-state cumulative integer thresholds over a common denominator.
struct Sampler {
    rows: Vec<(u64, Vec<(u64, usize, i64)>)>,
    /// Weights were multiplied by this to become integers.
    scale: i64,
}

impl Sampler {
    fn new(mc: &MarkovChain) -> Result<Self> {
        let too_big = || OracleError::Unsupported("probabilities or weights too fine for sampling".into());
        let scale = mc.edges().iter().fold(BigInt::from(1), |acc, e| acc.lcm(e.weight.denom()));
        let scale_i = scale.to_i64().ok_or_else(too_big)?;
        let mut rows = Vec::with_capacity(mc.num_states());
        for s in 0..mc.num_states() {
            let den = mc.out_edges(s).fold(BigInt::from(1), |acc, e| acc.lcm(e.prob.denom()));
            let mut cum = BigInt::zero();
            let mut row = Vec::new();
            for e in mc.out_edges(s) {
                cum += e.prob.numer() * (&den / e.prob.denom());
                let w = (e.weight.numer() * (&scale / e.weight.denom())).to_i64().ok_or_else(too_big)?;
                row.push((cum.to_u64().ok_or_else(too_big)?, e.dst, w));
            }
            rows.push((den.to_u64().ok_or_else(too_big)?, row));
        }
        Ok(Sampler { rows, scale: scale_i })
    }

    fn walk(&self, init: usize, horizon: usize, rng: &mut ChaCha8Rng, out: &mut Vec<i64>) {
        out.clear();
        let mut s = init;
        for _ in 0..horizon {
            let (den, row) = &self.rows[s];
            let u = rng.gen_range(0..*den);
            let &(_, dst, w) = row.iter().find(|(c, _, _)| u < *c).expect("cumulative mass reaches the denominator");
            out.push(w);
            s = dst;
        }
    }
}

/// `(num, den)` of the least window mean payoff over the window starts in
/// `from..=w.len() - l_max`, on integer weights.
pub fn least_window_value(w: &[i64], l_max: usize, from: usize) -> (i64, i64) {
    let mut least: Option<(i64, i64)> = None;
    for i in from..=w.len() - l_max {
        let mut sum = 0i64;
        let mut best = (i64::MIN, 1i64);
        for (k, &x) in w[i..i + l_max].iter().enumerate() {
            sum += x;
            let cand = (sum, k as i64 + 1);
            if best.0 == i64::MIN || (cand.0 as i128) * (best.1 as i128) > (best.0 as i128) * (cand.1 as i128) {
                best = cand;
            }
        }
        if least.map_or(true, |l| (best.0 as i128) * (l.1 as i128) < (l.0 as i128) * (best.1 as i128)) {
            least = Some(best);
        }
    }
    least.expect("at least one window start")
}

/// Estimates the expected value of a fixed or direct fixed window
/// objective from `samples` paths of `horizon` edges.
///
/// A path's direct fixed value is its least window mean payoff over all
/// complete windows; its fixed value ignores windows starting before
/// `burn_in`.
pub fn monte_carlo(
    mc: &MarkovChain,
    objective: &Objective,
    samples: usize,
    horizon: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Estimate> {
    let l_max = match (objective.kind(), objective.window()) {
        (WindowKind::Fixed | WindowKind::DirectFixed, Some(l)) => l as usize,
        _ => return Err(OracleError::Unsupported(format!("no finite-horizon evaluator for {}", objective.kind().name()))),
    };
    let from = if objective.kind() == WindowKind::Fixed { burn_in } else { 0 };
    if samples == 0 || horizon < from + l_max {
        return Err(OracleError::Unsupported("horizon too short for the window and burn-in".into()));
    }
    let sampler = Sampler::new(mc)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut path = Vec::with_capacity(horizon);
    let (mut s1, mut s2) = (0f64, 0f64);
    for _ in 0..samples {
        sampler.walk(mc.initial(), horizon, &mut rng, &mut path);
        let (num, den) = least_window_value(&path, l_max, from);
        let v = num as f64 / (den as f64 * sampler.scale as f64);
        s1 += v;
        s2 += v * v;
    }
    let n = samples as f64;
    let mean = s1 / n;
    let var = if samples > 1 { ((s2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    let std_dev = var.sqrt();
    Ok(Estimate { samples, mean, std_dev, std_err: std_dev / n.sqrt() })
}
