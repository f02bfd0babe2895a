//! Decimal renderings of exact nonnegative ratios.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::count::BigRatio;

fn pow10(e: u32) -> BigUint {
    BigUint::from(10u32).pow(e)
}

/// Divides with round-half-even.
fn div_round_even(num: &BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    let twice = &r << 1u32;
    if twice > *den || (twice == *den && q.is_odd()) {
        q + 1u32
    } else {
        q
    }
}

/// `floor(log10(num / den))` for a positive ratio.
fn decimal_exponent(num: &BigUint, den: &BigUint) -> i64 {
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ge = |e: i64| {
        if e >= 0 {
            *num >= den * pow10(e as u32)
        } else {
            num * pow10((-e) as u32) >= *den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    e
}

/// Positional rendering rounded to `digits` significant digits, ties to
/// even. Trailing zeros are kept.
pub fn render_significant(x: &BigRatio, digits: usize) -> String {
    let digits = digits.max(1);
    let (num, den) = (x.numer(), x.denom());
    if num.is_zero() {
        return "0".to_string();
    }
    let mut e = decimal_exponent(num, den);
    let shift = digits as i64 - 1 - e;
    let mut mantissa = if shift >= 0 {
        div_round_even(&(num * pow10(shift as u32)), den)
    } else {
        div_round_even(num, &(den * pow10((-shift) as u32)))
    };
    if mantissa == pow10(digits as u32) {
        mantissa = pow10(digits as u32 - 1);
        e += 1;
    }
    let s = mantissa.to_string();
    debug_assert_eq!(s.len(), digits);
    if e < 0 {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
    } else if e as usize + 1 >= digits {
        format!("{}{}", s, "0".repeat(e as usize + 1 - digits))
    } else {
        let (int, frac) = s.split_at(e as usize + 1);
        format!("{int}.{frac}")
    }
}

/// The `f64` nearest to `x`, ties to even. Assumes `x` is zero or lies in
/// the normal range.
pub fn to_f64(x: &BigRatio) -> f64 {
    let (num, den) = (x.numer(), x.denom());
    if num.is_zero() {
        return 0.0;
    }
    let scaled = |shift: i64| -> (BigUint, BigUint) {
        if shift >= 0 {
            (num << shift as u64, den.clone())
        } else {
            (num.clone(), den << (-shift) as u64)
        }
    };
    let mut shift = 52 - (num.bits() as i64 - den.bits() as i64);
    let low = BigUint::one() << 52u32;
    loop {
        let (a, b) = scaled(shift);
        if a.clone() / &b < low {
            shift += 1;
            continue;
        }
        if a.clone() / &b >= (&low << 1u32) {
            shift -= 1;
            continue;
        }
        let q = div_round_even(&a, &b);
        let q: u64 = q.try_into().expect("53-bit mantissa");
        return q as f64 * 2f64.powi(-(shift as i32));
    }
}

/// Shortest decimal that round-trips the nearest `f64`.
pub fn render_f64(x: &BigRatio) -> String {
    format!("{}", to_f64(x))
}
