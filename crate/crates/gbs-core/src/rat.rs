//! Small helpers around `BigRational`.
//!
//! All height and tile arithmetic is exact; floating point never enters any
//! computation (rendering layers may round for layout only).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Parses `num/den` (or a bare integer) into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("bad rational numerator in {s:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad rational denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational as `num/den` in lowest terms (bare integer when `den == 1`).
pub fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact integer power with negative exponents allowed (`base != 0` when `exp < 0`).
pub fn rat_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let mut acc = BigRational::one();
    let positive = base.clone();
    let step = if exp > 0 { positive } else { positive.recip() };
    for _ in 0..exp.unsigned_abs() {
        acc *= step.clone();
    }
    acc
}

/// Floor of a rational as a `BigInt`.
pub fn floor_int(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int_ratio(num: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(num))
}

/// True when `r` is an integer.
pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Absolute value.
pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}
