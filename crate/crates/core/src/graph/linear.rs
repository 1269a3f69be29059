//! Exact linear solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, Rational};

use super::scc::tarjan_scc;

/// Solves `a x = b` by fraction-free (Bareiss) elimination.
///
/// Each row is first cleared of denominators, so every intermediate entry
/// is an integer minor of the scaled matrix.
pub fn solve_dense(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Internal("linear system shape mismatch".into()));
    }
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let lcm = lcm_of_denominators(row.iter().chain(std::iter::once(rhs)));
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::Internal("singular linear system".into()))?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = v.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
            }
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// One equation `x_i = constant + sum_j coeff_j * x_j` over unknowns `j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearEquation {
    pub constant: Rational,
    pub terms: Vec<(usize, Rational)>,
}

/// Solves `x = c + P x` for a sparse `P`, one strongly connected block of
/// the dependency graph at a time, dependencies first.
///
/// Requires `I - P` to be non-singular on every block.
pub fn solve_fixed_point(eqs: &[LinearEquation]) -> Result<Vec<Rational>> {
    let n = eqs.len();
    let adj: Vec<Vec<usize>> = eqs.iter().map(|e| e.terms.iter().map(|t| t.0).collect()).collect();
    let mut x: Vec<Option<Rational>> = vec![None; n];
    let mut local = vec![usize::MAX; n];

    for block in tarjan_scc(&adj) {
        for (i, &v) in block.iter().enumerate() {
            local[v] = i;
        }
        let in_block = |j: usize, local: &[usize]| local[j] != usize::MAX && x[j].is_none();
        if block.len() == 1 && !eqs[block[0]].terms.iter().any(|t| t.0 == block[0]) {
            let v = block[0];
            let mut acc = eqs[v].constant.clone();
            for (j, c) in &eqs[v].terms {
                acc += c * x[*j].as_ref().expect("dependency solved first");
            }
            x[v] = Some(acc);
            local[v] = usize::MAX;
            continue;
        }
        let k = block.len();
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for (i, &v) in block.iter().enumerate() {
            a[i][i] += Rational::one();
            b[i] += &eqs[v].constant;
            for (j, c) in &eqs[v].terms {
                if in_block(*j, &local) {
                    a[i][local[*j]] -= c;
                } else {
                    b[i] += c * x[*j].as_ref().expect("dependency solved first");
                }
            }
        }
        let sol = solve_dense(&a, &b)?;
        for (i, &v) in block.iter().enumerate() {
            x[v] = Some(sol[i].clone());
        }
        for &v in &block {
            local[v] = usize::MAX;
        }
    }
    Ok(x.into_iter().map(|v| v.expect("every unknown solved")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn dense_solve() {
        // 2x + y = 3, x - y = 0
        let a = vec![vec![int(2), int(1)], vec![int(1), int(-1)]];
        let x = solve_dense(&a, &[int(3), int(0)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
    }

    #[test]
    fn dense_solve_with_fractions_and_pivoting() {
        let a = vec![vec![int(0), ratio(1, 2)], vec![ratio(1, 3), int(1)]];
        let x = solve_dense(&a, &[int(1), int(1)]).unwrap();
        assert_eq!(x, vec![int(-3), int(2)]);
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(matches!(solve_dense(&a, &[int(1), int(2)]), Err(Error::Internal(_))));
    }

    #[test]
    fn fixed_point_blocks() {
        // x0 = 1/2 x1 + 1/2 x2 ; x1 = 1/2 x0 + 1/2 ; x2 = 0
        let eqs = vec![
            LinearEquation { constant: int(0), terms: vec![(1, ratio(1, 2)), (2, ratio(1, 2))] },
            LinearEquation { constant: ratio(1, 2), terms: vec![(0, ratio(1, 2))] },
            LinearEquation { constant: int(0), terms: vec![] },
        ];
        let x = solve_fixed_point(&eqs).unwrap();
        assert_eq!(x, vec![ratio(1, 3), ratio(2, 3), int(0)]);
    }
}
