//! Exact mean-payoff game values by bounded value iteration.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::int::int_weight;
use crate::model::{Player, TwoPlayerGame};
use crate::rational::{ratio, Rational};

/// Largest iteration count accepted before reporting the instance as too
/// large for an exact solve.
pub const MAX_ITERATIONS: u64 = 100_000_000;

/// Per-vertex mean-payoff value (Player One maximizes). Integer weights.
///
/// After `k = 4 n^3 W` rounds of `v(s) = opt (w + v(t))`, the true value
/// lies within `2nW/k` of `v(s)/k` and has denominator at most `n`, which
/// identifies it uniquely.
pub fn mean_payoff_game_value(game: &TwoPlayerGame) -> Result<Vec<Rational>> {
    let n = game.num_vertices();
    let mut out = vec![Vec::new(); n];
    let mut big_w: i64 = 0;
    for e in game.edges() {
        let w = int_weight(&e.weight)?;
        big_w = big_w.max(w.checked_abs().ok_or(Error::Overflow("weight magnitude"))?);
        out[e.src].push((e.dst, w));
    }
    if big_w == 0 {
        return Ok(vec![ratio(0, 1); n]);
    }
    let n64 = n as u64;
    let k = n64
        .checked_pow(3)
        .and_then(|c| c.checked_mul(4))
        .and_then(|c| c.checked_mul(big_w as u64))
        .filter(|&k| k <= MAX_ITERATIONS)
        .ok_or_else(|| Error::SizeCap {
            what: "mean-payoff value iteration".into(),
            size: format!("4 * {n}^3 * {big_w} iterations"),
            cap: MAX_ITERATIONS,
        })?;
    // |v_k| <= k * W <= 1e8 * W; checked below per step
    let mut v = vec![0i64; n];
    let mut next = vec![0i64; n];
    for _ in 0..k {
        for s in 0..n {
            let vals = out[s].iter().map(|&(t, w)| w.checked_add(v[t]));
            let best = match game.owner(s) {
                Player::One => vals.max_by(cmp_opt),
                Player::Two => vals.min_by(cmp_opt),
            };
            next[s] = best.flatten().ok_or(Error::Overflow("value iteration"))?;
        }
        std::mem::swap(&mut v, &mut next);
    }
    let k = k as i64;
    let slack = 2 * n as i64 * big_w;
    v.iter().map(|&vs| snap(vs - slack, vs + slack, k, n as i64)).collect()
}

fn cmp_opt(a: &Option<i64>, b: &Option<i64>) -> std::cmp::Ordering {
    // overflow (None) is propagated as the winner so it is reported
    match (a, b) {
        (None, _) => std::cmp::Ordering::Greater,
        (_, None) => std::cmp::Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// The unique reduced `p/q` with `q <= max_den` in `[lo/k, hi/k]`.
fn snap(lo: i64, hi: i64, k: i64, max_den: i64) -> Result<Rational> {
    let mut found: Option<Rational> = None;
    for q in 1..=max_den {
        // p/q >= lo/k  <=>  p >= ceil(lo*q/k)
        let p_min = Integer::div_ceil(&(i128::from(lo) * i128::from(q)), &i128::from(k));
        let p_max = Integer::div_floor(&(i128::from(hi) * i128::from(q)), &i128::from(k));
        for p in p_min..=p_max {
            let r = Rational::new((p as i64).into(), q.into());
            match &found {
                None => found = Some(r),
                Some(f) if *f == r => {}
                Some(f) => {
                    return Err(Error::Internal(format!("ambiguous mean-payoff value: {f} and {r}")));
                }
            }
        }
    }
    found.ok_or_else(|| Error::Internal("no mean-payoff value with a small denominator".into()))
}
