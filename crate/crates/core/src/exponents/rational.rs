//! Exact rationals and the extended value `∞` used for critical powers and
//! Lebesgue exponents.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Largest denominator accepted when a decimal literal is read as a rational.
pub const MAX_DECIMAL_DENOMINATOR: u64 = 1_000_000;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `num/den`, denominator always written (`2/1`, `-7/4`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_even_integer(r: &Rational) -> bool {
    r.is_integer() && (r.to_integer() % BigInt::from(2)).is_zero()
}

pub fn min_of(values: &[Rational]) -> Rational {
    values
        .iter()
        .min()
        .cloned()
        .expect("min_of needs at least one value")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("`{0}` is not a rational literal")]
    Syntax(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}` needs a denominator above {MAX_DECIMAL_DENOMINATOR}; write it as p/q")]
    DenominatorTooLarge(String),
}

fn parse_int(text: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    let t = text.trim();
    let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(ParseRationalError::Syntax(whole.to_string()));
    }
    BigInt::from_str(t.trim_start_matches('+'))
        .map_err(|_| ParseRationalError::Syntax(whole.to_string()))
}

/// Reads `p/q`, an integer, or a finite decimal. Decimals are only accepted
/// when their reduced denominator is at most [`MAX_DECIMAL_DENOMINATOR`].
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = t.split_once('/') {
        let num = parse_int(num, t)?;
        let den = parse_int(den, t)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(t.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(ParseRationalError::Syntax(t.to_string()));
        }
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim().trim_start_matches(['+', '-']);
        let whole_value = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(whole_digits, t)?
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac_value = parse_int(frac, t)?;
        let mut value = Rational::new(whole_value * &scale + frac_value, scale);
        if negative {
            value = -value;
        }
        if value.denom() > &BigInt::from(MAX_DECIMAL_DENOMINATOR) {
            return Err(ParseRationalError::DenominatorTooLarge(t.to_string()));
        }
        return Ok(value);
    }
    Ok(Rational::from_integer(parse_int(t, t)?))
}

/// A rational or the distinct marker `∞`. Never encoded as a large rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinity,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    /// `1/x`, with `1/∞ = 0`. Zero maps to `∞` (only non-negative values are
    /// meaningful here).
    pub fn reciprocal(&self) -> Extended {
        match self {
            Extended::Infinity => Extended::Finite(Rational::zero()),
            Extended::Finite(r) if r.is_zero() => Extended::Infinity,
            Extended::Finite(r) => Extended::Finite(r.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(r) => to_f64(r),
            Extended::Infinity => f64::INFINITY,
        }
    }
}

impl From<Rational> for Extended {
    fn from(r: Rational) -> Self {
        Extended::Finite(r)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
            (Extended::Infinity, _) => Ordering::Greater,
            (_, Extended::Infinity) => Ordering::Less,
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => f.write_str(&format_rational(r)),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Extended {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Extended::Infinity),
            other => parse_rational(other).map(Extended::Finite),
        }
    }
}

pub(crate) fn positive(r: &Rational) -> bool {
    r.is_positive()
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("18/7").unwrap(), rat(18, 7));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rational("0.0000001"),
            Err(ParseRationalError::DenominatorTooLarge(_))
        ));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("").is_err());
        // reduces to 1/2 so the long decimal is fine
        assert_eq!(parse_rational("0.50000000").unwrap(), rat(1, 2));
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&int(2)), "2/1");
        assert_eq!(format_rational(&rat(18, 7)), "18/7");
        assert_eq!(Extended::Infinity.to_string(), "inf");
    }

    #[test]
    fn infinity_orders_above_everything() {
        let big = Extended::Finite(int(1_000_000_000));
        assert!(Extended::Infinity > big);
        assert_eq!(Extended::Infinity.reciprocal(), Extended::Finite(int(0)));
        assert_eq!("inf".parse::<Extended>().unwrap(), Extended::Infinity);
    }

    #[test]
    fn even_integer_detection() {
        assert!(is_even_integer(&int(2)));
        assert!(is_even_integer(&int(0)));
        assert!(!is_even_integer(&int(3)));
        assert!(!is_even_integer(&rat(4, 3)));
    }
}
