//! Direct fixed window games: winning sets and values.

use std::collections::BTreeSet;

use crate::error::{Error, ModelError, Result};
use crate::int::int_weight;
use crate::mc::{candidates, last_true};
use crate::model::{Player, TwoPlayerGame};
use crate::rational::{int, Rational};

/// Integer copy of a game for the window kernels.
pub(crate) struct IntGame {
    pub owner: Vec<Player>,
    pub out: Vec<Vec<(usize, i64)>>,
}

impl IntGame {
    pub fn new(game: &TwoPlayerGame) -> Result<Self> {
        let mut out = vec![Vec::new(); game.num_vertices()];
        for e in game.edges() {
            out[e.src].push((e.dst, int_weight(&e.weight)?));
        }
        Ok(IntGame { owner: game.owners().to_vec(), out })
    }

    fn len(&self) -> usize {
        self.out.len()
    }

    fn bounds(&self) -> (i64, i64) {
        let ws = self.out.iter().flatten().map(|e| e.1);
        (ws.clone().min().unwrap_or(0), ws.max().unwrap_or(0))
    }

    /// `C_l` on the sub-game of `alive` vertices, weights `q*w - p`.
    /// Entries of dead vertices are meaningless.
    fn good_win_table(&self, alive: &[bool], l_max: usize, q: i64, p: i64) -> Vec<i128> {
        let n = self.len();
        let mut c = vec![0i128; n];
        let mut next = vec![0i128; n];
        for _ in 0..l_max {
            for v in (0..n).filter(|&v| alive[v]) {
                let vals = self.out[v].iter().filter(|e| alive[e.0]).map(|&(t, w)| {
                    let w = i128::from(q) * i128::from(w) - i128::from(p);
                    w.max(w + c[t])
                });
                next[v] = match self.owner[v] {
                    Player::One => vals.max(),
                    Player::Two => vals.min(),
                }
                .expect("alive vertices keep a successor");
            }
            std::mem::swap(&mut c, &mut next);
        }
        c
    }

    /// Drops Player One vertices without a live successor and Player Two
    /// vertices with a dead successor, until stable.
    fn close(&self, alive: &mut [bool]) {
        loop {
            let mut changed = false;
            for v in 0..self.len() {
                if !alive[v] {
                    continue;
                }
                let keep = match self.owner[v] {
                    Player::One => self.out[v].iter().any(|e| alive[e.0]),
                    Player::Two => self.out[v].iter().all(|e| alive[e.0]),
                };
                if !keep {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Greatest fixpoint of the good-window set under sub-game restriction.
    pub fn direct_winning(&self, l_max: usize, q: i64, p: i64) -> Vec<bool> {
        let mut alive = vec![true; self.len()];
        loop {
            let c = self.good_win_table(&alive, l_max, q, p);
            let mut next: Vec<bool> = (0..self.len()).map(|v| alive[v] && c[v] >= 0).collect();
            self.close(&mut next);
            if next == alive {
                return alive;
            }
            alive = next;
        }
    }
}

fn check_window(l_max: usize) -> Result<()> {
    if l_max == 0 {
        return Err(Error::Model(ModelError::ZeroWindow));
    }
    Ok(())
}

/// The table `C_l(v)`: the best guaranteed maximal prefix sum within
/// `l_max` steps, and the vertices where it is non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodWin {
    pub table: Vec<Rational>,
    pub set: BTreeSet<usize>,
}

/// Player One maximizes and Player Two minimizes
/// `C_i(v) = opt over v -> t of max(w, w + C_{i-1}(t))`. Integer weights.
pub fn good_win(game: &TwoPlayerGame, l_max: usize) -> Result<GoodWin> {
    check_window(l_max)?;
    let g = IntGame::new(game)?;
    let c = g.good_win_table(&vec![true; g.len()], l_max, 1, 0);
    let table = c.iter().map(|&v| Rational::from_integer(v.into())).collect();
    let set = (0..g.len()).filter(|&v| c[v] >= 0).collect();
    Ok(GoodWin { table, set })
}

/// Vertices from which Player One can close every window, at threshold 0,
/// within `l_max` steps. Integer weights.
pub fn direct_fwmp_winning(game: &TwoPlayerGame, l_max: usize) -> Result<BTreeSet<usize>> {
    check_window(l_max)?;
    let g = IntGame::new(game)?;
    let w = g.direct_winning(l_max, 1, 0);
    Ok((0..w.len()).filter(|&v| w[v]).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowValues {
    pub per_vertex: Vec<Rational>,
    pub max: Rational,
}

/// Per vertex, the largest threshold `lambda` at which the vertex wins the
/// direct window game with weights `w - lambda`. Integer weights.
///
/// The answer is always a candidate `p/q` with `q <= l_max`; vertices are
/// bisected together over the sorted candidates so each probed threshold
/// costs one fixpoint.
pub fn max_direct_window_value(game: &TwoPlayerGame, l_max: usize) -> Result<WindowValues> {
    check_window(l_max)?;
    let g = IntGame::new(game)?;
    let (lo, hi) = g.bounds();
    let cands = candidates(lo, hi, l_max)?;
    let mut index = vec![0usize; g.len()];
    bisect(&g, l_max, &cands, 0, cands.len(), (0..g.len()).collect(), &mut index)?;
    let per_vertex: Vec<Rational> = index.iter().map(|&i| cands[i].clone()).collect();
    let max = per_vertex.iter().max().cloned().unwrap_or_else(|| int(0));
    Ok(WindowValues { per_vertex, max })
}

/// Every vertex of `verts` wins at `cands[lo]` and loses at `cands[hi]`.
fn bisect(
    g: &IntGame,
    l_max: usize,
    cands: &[Rational],
    lo: usize,
    hi: usize,
    verts: Vec<usize>,
    index: &mut [usize],
) -> Result<()> {
    if verts.is_empty() {
        return Ok(());
    }
    if hi - lo <= 1 {
        for v in verts {
            index[v] = lo;
        }
        return Ok(());
    }
    let mid = lo + (hi - lo) / 2;
    let (p, q) = crate::int::frac_parts(&cands[mid])?;
    let win = g.direct_winning(l_max, q, p);
    let (up, down): (Vec<usize>, Vec<usize>) = verts.into_iter().partition(|&v| win[v]);
    bisect(g, l_max, cands, lo, mid, down, index)?;
    bisect(g, l_max, cands, mid, hi, up, index)
}

/// Single-vertex variant by plain binary search; used to cross-check
/// [`max_direct_window_value`].
pub fn direct_window_value_at(game: &TwoPlayerGame, l_max: usize, v: usize) -> Result<Rational> {
    check_window(l_max)?;
    let g = IntGame::new(game)?;
    let (lo, hi) = g.bounds();
    let cands = candidates(lo, hi, l_max)?;
    let i = last_true(cands.len(), |i| {
        let (p, q) = crate::int::frac_parts(&cands[i])?;
        Ok(g.direct_winning(l_max, q, p)[v])
    })?;
    Ok(cands[i].clone())
}
