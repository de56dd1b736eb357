//! Arbitrary precision rationals and their string form (`"7/30"`, `"-2"`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or an integer string. Surrounding whitespace is ignored.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::input("empty rational string"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::input(format!("invalid rational {s:?}")))?;
    let den = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| Error::input(format!("invalid rational {s:?}")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical string form: `"p/q"`, or `"p"` for integers.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn format_list(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format).collect();
    format!("[{}]", parts.join(", "))
}

/// Lossy decimal approximation, for human-facing hints only.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

/// Parses a comma separated list such as `"3,2"` or `"1/2, 1/3"`.
pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse).collect()
}
