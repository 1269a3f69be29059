//! Checked conversions into the `i64` kernels used by integer solvers.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Upper bound on materialized threshold candidate sets.
pub(crate) const CANDIDATE_CAP: u64 = 10_000_000;

/// An integral weight as `i64`.
pub(crate) fn int_weight(w: &Rational) -> Result<i64> {
    if !w.is_integer() {
        return Err(Error::Precondition(format!("weight {w} is not an integer; normalize first")));
    }
    w.numer().to_i64().ok_or(Error::Overflow("integer weight conversion"))
}

/// Numerator and denominator of a threshold as `i64`.
pub(crate) fn frac_parts(c: &Rational) -> Result<(i64, i64)> {
    let p = c.numer().to_i64().ok_or(Error::Overflow("threshold numerator"))?;
    let q = c.denom().to_i64().ok_or(Error::Overflow("threshold denominator"))?;
    Ok((p, q))
}
