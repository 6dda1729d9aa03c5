//! Exact rational numbers plus the parsing and rendering helpers used by
//! reports and scenario files.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Parses an integer (`"14"`), a decimal (`"16.67"`, `"-0.5"`, `"1e-3"` is not
/// accepted) or a fraction (`"50/3"`) into an exact rational. Decimal strings
/// are read as exact base-10 values.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("`{text}` is not an integer, decimal or p/q fraction"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("`{text}` has a zero denominator")));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if (whole.is_empty() && frac.is_empty())
        || !whole.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mantissa: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

/// Exact rendering: `"7"` for integers, `"50/3"` otherwise.
pub fn format_exact(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rounds half-to-even at `precision` decimal places and renders with exactly
/// that many fractional digits.
pub fn format_decimal(x: &Rational, precision: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), precision);
    let scaled = x * Rational::from_integer(scale.clone());
    let rounded = round_half_even(&scaled);
    let negative = rounded.is_negative();
    let magnitude = rounded.abs();
    let (whole, frac) = magnitude.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if precision == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = precision)
    }
}

/// Nearest integer, ties to even.
pub fn round_half_even(x: &Rational) -> BigInt {
    let floor = x.floor().to_integer();
    let rem = x - Rational::from_integer(floor.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if rem > half || (rem == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    }
}

/// Exact rational rounded to `precision` places, handy for comparing against
/// published two-decimal tables.
pub fn rounded(x: &Rational, precision: usize) -> Rational {
    let scale = num_traits::pow(BigInt::from(10), precision);
    Rational::new(
        round_half_even(&(x * Rational::from_integer(scale.clone()))),
        scale,
    )
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}
