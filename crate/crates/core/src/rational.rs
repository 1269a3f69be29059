//! Exact rational helpers shared by every solver.
//!
//! `Rational` is always kept in canonical form by `num-rational`: the
//! denominator is positive and coprime with the numerator.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The reduced fraction `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `int` or `int/int` (optional leading `-`, no spaces).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num = parse_int(num)?;
    let den = match den {
        Some(d) if !d.starts_with('-') => parse_int(d)?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Least common multiple of the denominators; 1 for an empty input.
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Returns the value as `i64` when it is an integer that fits.
pub fn to_i64(value: &Rational) -> Option<i64> {
    if value.is_integer() {
        value.numer().to_i64()
    } else {
        None
    }
}

/// Lossy conversion for display and statistics only.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Canonical exact rendering: `p/q`, or `p` when the denominator is 1.
pub fn exact_string(value: &Rational) -> String {
    value.to_string()
}

/// Decimal rendering with `sig` significant digits, rounding half to even.
///
/// Positional notation is used for decimal exponents in `[-6, 15)`,
/// scientific notation otherwise.
pub fn decimal_string(value: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if value.is_zero() {
        return "0".to_string();
    }
    let neg = value.is_negative();
    let a = value.numer().abs();
    let b = value.denom().clone();
    let ten = BigInt::from(10);

    // e = floor(log10(a / b))
    let mut e = a.to_string().len() as i64 - b.to_string().len() as i64;
    let cmp_pow = |e: i64| -> Ordering {
        if e >= 0 {
            a.cmp(&(&b * ten.pow(e as u32)))
        } else {
            (&a * ten.pow((-e) as u32)).cmp(&b)
        }
    };
    while cmp_pow(e) == Ordering::Less {
        e -= 1;
    }
    while cmp_pow(e + 1) != Ordering::Less {
        e += 1;
    }

    let shift = sig as i64 - 1 - e;
    let (num, den) = if shift >= 0 {
        (&a * ten.pow(shift as u32), b.clone())
    } else {
        (a.clone(), &b * ten.pow((-shift) as u32))
    };
    let (mut q, r) = num.div_rem(&den);
    let twice = &r * 2u32;
    match twice.cmp(&den) {
        Ordering::Greater => q += 1u32,
        Ordering::Equal if q.is_odd() => q += 1u32,
        _ => {}
    }
    let mut digits = q.to_string();
    if digits.len() > sig {
        digits.truncate(sig);
        e += 1;
    }

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-6..15).contains(&e) {
        if e >= 0 {
            let int_len = e as usize + 1;
            if int_len >= digits.len() {
                out.push_str(&digits);
                out.push_str(&"0".repeat(int_len - digits.len()));
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-e - 1) as usize));
            out.push_str(&digits);
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push_str(&format!("e{e}"));
    }
    out
}

/// Sorted, deduplicated set `{p/q : 1 <= q <= max_den, lo*q <= p <= hi*q}`.
///
/// Every mean of at most `max_den` integer weights in `[lo, hi]` lies in it.
pub fn candidate_values(lo: i64, hi: i64, max_den: u32) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for q in 1..=i64::from(max_den) {
        for p in lo * q..=hi * q {
            if Integer::gcd(&p, &q) == 1 {
                out.push(ratio(p, q));
            }
        }
    }
    out.sort();
    out
}

/// Number of elements `candidate_values` would produce, before reduction.
pub fn candidate_count_bound(lo: i64, hi: i64, max_den: u32) -> u128 {
    let span = (hi - lo).max(0) as u128;
    let l = u128::from(max_den);
    span * l * (l + 1) / 2 + l
}
