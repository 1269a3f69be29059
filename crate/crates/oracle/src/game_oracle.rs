//! Game oracles: explicit safety products with attractors, positional
//! strategy enumeration and literal game-tree recursion.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::ToPrimitive;
use wmp_core::rational::{int, ratio};
use wmp_core::{Player, Rational, TwoPlayerGame};

use crate::error::{OracleError, Result};

/// Default cap on safety-game product states per threshold.
pub const PRODUCT_CAP: usize = 100_000;
/// Default cap on enumerated strategy profiles.
pub const PROFILE_CAP: usize = 1_000_000;

fn int_edges(game: &TwoPlayerGame) -> Result<Vec<Vec<(usize, i64)>>> {
    let mut out = vec![Vec::new(); game.num_vertices()];
    for e in game.edges() {
        let w = if e.weight.is_integer() { e.weight.to_integer().to_i64() } else { None }
            .ok_or_else(|| OracleError::Unsupported("game oracle needs small integer weights".into()))?;
        out[e.src].push((e.dst, w));
    }
    Ok(out)
}

/// Product node: vertex, steps taken in the oldest open window, and the
/// scaled sum `q * (w_1 + ... + w_k) - p * k` of that window (age 0 means
/// no window is open).
type Node = (usize, usize, i64);

/// Per-vertex flag: Player One avoids the bad node from `(v, 0, 0)` at
/// threshold `p / q`.
fn safe_at(game: &TwoPlayerGame, out: &[Vec<(usize, i64)>], l_max: usize, p: i64, q: i64, cap: usize) -> Result<Vec<bool>> {
    let n = game.num_vertices();
    // index 0 is the bad sink
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = vec![(usize::MAX, 0, 0)];
    let mut succ: Vec<Vec<usize>> = vec![vec![0]];
    let mut queue = VecDeque::new();
    for v in 0..n {
        index.insert((v, 0, 0), nodes.len());
        nodes.push((v, 0, 0));
        queue.push_back(nodes.len() - 1);
    }
    succ.resize(nodes.len(), Vec::new());
    while let Some(i) = queue.pop_front() {
        let (v, age, sum) = nodes[i];
        let mut row = Vec::new();
        for &(t, w) in &out[v] {
            let s = sum + q * w - p;
            let next = if s >= 0 {
                Some((t, 0, 0))
            } else if age + 1 == l_max {
                None
            } else {
                Some((t, age + 1, s))
            };
            let id = match next {
                None => 0,
                Some(node) => match index.get(&node) {
                    Some(&id) => id,
                    None => {
                        if nodes.len() >= cap {
                            return Err(OracleError::Cap("window safety product".into()));
                        }
                        index.insert(node, nodes.len());
                        nodes.push(node);
                        succ.push(Vec::new());
                        queue.push_back(nodes.len() - 1);
                        nodes.len() - 1
                    }
                },
            };
            row.push(id);
        }
        succ[i] = row;
    }

    // attractor of Player Two to the bad sink
    let m = nodes.len();
    let mut pred = vec![Vec::new(); m];
    for (i, row) in succ.iter().enumerate().skip(1) {
        for &j in row {
            pred[j].push(i);
        }
    }
    let owner = |i: usize| game.owner(nodes[i].0);
    let mut remaining: Vec<usize> = succ.iter().map(Vec::len).collect();
    let mut attr = vec![false; m];
    attr[0] = true;
    let mut work = vec![0usize];
    while let Some(j) = work.pop() {
        for &i in &pred[j] {
            if attr[i] {
                continue;
            }
            remaining[i] -= 1;
            if owner(i) == Player::Two || remaining[i] == 0 {
                attr[i] = true;
                work.push(i);
            }
        }
    }
    Ok((0..n).map(|v| !attr[index[&(v, 0, 0)]]).collect())
}

/// Exact direct window value of every vertex: the greatest candidate
/// threshold `p/q` (`q <= l_max`) at which Player One wins the safety
/// game on the explicit product. Every candidate is swept, highest first.
pub fn brute_direct_window_game_value(game: &TwoPlayerGame, l_max: usize) -> Result<Vec<Rational>> {
    brute_direct_window_game_value_with_cap(game, l_max, PRODUCT_CAP)
}

pub fn brute_direct_window_game_value_with_cap(game: &TwoPlayerGame, l_max: usize, cap: usize) -> Result<Vec<Rational>> {
    if l_max == 0 {
        return Err(OracleError::Unsupported("window length 0".into()));
    }
    let out = int_edges(game)?;
    let lo = out.iter().flatten().map(|e| e.1).min().unwrap_or(0);
    let hi = out.iter().flatten().map(|e| e.1).max().unwrap_or(0);
    let mut cands: BTreeMap<Rational, (i64, i64)> = BTreeMap::new();
    for q in 1..=l_max as i64 {
        for p in lo * q..=hi * q {
            cands.entry(ratio(p, q)).or_insert((p, q));
        }
    }
    let n = game.num_vertices();
    let mut value: Vec<Option<Rational>> = vec![None; n];
    for (r, (p, q)) in cands.iter().rev() {
        if value.iter().all(Option::is_some) {
            break;
        }
        let safe = safe_at(game, &out, l_max, *p, *q, cap)?;
        for v in 0..n {
            if safe[v] && value[v].is_none() {
                value[v] = Some(r.clone());
            }
        }
    }
    value
        .into_iter()
        .map(|v| v.ok_or_else(|| OracleError::Inconsistent("least weight threshold lost".into())))
        .collect()
}

/// Mean of the cycle reached from `v` when every vertex follows `pick`.
fn profile_mean(out: &[Vec<(usize, i64)>], pick: &[usize], v: usize) -> Rational {
    let mut seen = vec![usize::MAX; out.len()];
    let mut order = Vec::new();
    let mut u = v;
    while seen[u] == usize::MAX {
        seen[u] = order.len();
        order.push(u);
        u = out[u][pick[u]].0;
    }
    let cyc = &order[seen[u]..];
    let total: i64 = cyc.iter().map(|&x| out[x][pick[x]].1).sum();
    ratio(total, cyc.len() as i64)
}

fn all_picks(out: &[Vec<(usize, i64)>], verts: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut acc: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for &v in verts {
        acc = acc
            .into_iter()
            .flat_map(|base| {
                (0..out[v].len()).map(move |k| {
                    let mut b = base.clone();
                    b.push((v, k));
                    b
                })
            })
            .collect();
    }
    acc
}

/// Mean-payoff value of every vertex by positional strategy enumeration.
/// Checks that min-max and max-min agree.
pub fn brute_mean_payoff_game_value(game: &TwoPlayerGame) -> Result<Vec<Rational>> {
    let out = int_edges(game)?;
    let n = game.num_vertices();
    let ones: Vec<usize> = (0..n).filter(|&v| game.owner(v) == Player::One).collect();
    let twos: Vec<usize> = (0..n).filter(|&v| game.owner(v) == Player::Two).collect();
    let count = |vs: &[usize]| vs.iter().try_fold(1usize, |a, &v| a.checked_mul(out[v].len()));
    let profiles = count(&ones).and_then(|a| count(&twos).and_then(|b| a.checked_mul(b)));
    if profiles.map_or(true, |p| p > PROFILE_CAP) {
        return Err(OracleError::Cap("positional strategy profiles".into()));
    }
    let s1 = all_picks(&out, &ones);
    let s2 = all_picks(&out, &twos);
    // table[i][j][v]
    let mut table = vec![vec![Vec::with_capacity(n); s2.len()]; s1.len()];
    let mut pick = vec![0usize; n];
    for (i, a) in s1.iter().enumerate() {
        for (j, b) in s2.iter().enumerate() {
            for &(v, k) in a.iter().chain(b) {
                pick[v] = k;
            }
            table[i][j] = (0..n).map(|v| profile_mean(&out, &pick, v)).collect();
        }
    }
    let mut values = Vec::with_capacity(n);
    for v in 0..n {
        let min_max = (0..s2.len()).map(|j| (0..s1.len()).map(|i| table[i][j][v].clone()).max().unwrap()).min().unwrap();
        let max_min = (0..s1.len()).map(|i| (0..s2.len()).map(|j| table[i][j][v].clone()).min().unwrap()).max().unwrap();
        if min_max != max_min {
            return Err(OracleError::Inconsistent(format!("min-max {min_max} differs from max-min {max_min}")));
        }
        values.push(min_max);
    }
    Ok(values)
}

/// `C_l(v)` by literal game-tree search: the value of the best prefix sum
/// seen along the `l_max` steps, with Player One maximizing and Player Two
/// minimizing at each node, and the running sum carried down the tree.
pub fn brute_good_win_table(game: &TwoPlayerGame, l_max: usize) -> Result<Vec<Rational>> {
    let out = int_edges(game)?;
    fn go(game: &TwoPlayerGame, out: &[Vec<(usize, i64)>], v: usize, left: usize, sum: i64, best: Option<i64>) -> i64 {
        if left == 0 {
            return best.expect("at least one step");
        }
        let vals = out[v].iter().map(|&(t, w)| {
            let s = sum + w;
            go(game, out, t, left - 1, s, Some(best.map_or(s, |b| b.max(s))))
        });
        match game.owner(v) {
            Player::One => vals.max(),
            Player::Two => vals.min(),
        }
        .expect("every vertex has a successor")
    }
    Ok((0..game.num_vertices()).map(|v| int(go(game, &out, v, l_max, 0, None))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig7_game;
    use wmp_core::GameEdge;

    fn two_cycles() -> TwoPlayerGame {
        // P1 at x picks the 1-loop or the 2-loop
        TwoPlayerGame::new(
            vec!["x".into(), "y".into()],
            vec![Player::One, Player::Two],
            0,
            vec![GameEdge::new(0, 0, int(1)), GameEdge::new(0, 1, int(2)), GameEdge::new(1, 0, int(2))],
        )
        .unwrap()
    }

    #[test]
    fn two_cycle_choice() {
        assert_eq!(brute_mean_payoff_game_value(&two_cycles()).unwrap(), vec![int(2), int(2)]);
        assert_eq!(brute_direct_window_game_value(&two_cycles(), 1).unwrap(), vec![int(2), int(2)]);
    }

    #[test]
    fn self_loop() {
        let g = TwoPlayerGame::new(vec!["x".into()], vec![Player::Two], 0, vec![GameEdge::new(0, 0, int(-3))]).unwrap();
        assert_eq!(brute_mean_payoff_game_value(&g).unwrap(), vec![int(-3)]);
        assert_eq!(brute_direct_window_game_value(&g, 3).unwrap(), vec![int(-3)]);
        assert_eq!(brute_good_win_table(&g, 3).unwrap(), vec![int(-3)]);
    }

    #[test]
    fn fig7_values() {
        // from s0 the only play is s0 t0 ..., and t0 steers away from the 4-edges
        let v = brute_mean_payoff_game_value(&fig7_game()).unwrap();
        assert_eq!(v[0], ratio(5, 2));
    }
}
