//! Rational scalars and their text forms.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `n / d`. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `10^-k` as an exact rational.
pub fn ten_pow_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize))
}

/// Default tolerance for root refinement, `1/10^12`.
pub fn default_tol() -> Rational {
    ten_pow_neg(12)
}

/// Parses `"n"` or `"n/d"` with `d != 0`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(String::from(text));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() || den.starts_with('+') || den.starts_with('-') {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Like [`parse_rational`] but also accepts finite decimals such as
/// `"0.27"` or `"-1.5e-3"`, converted exactly.
pub fn parse_rational_or_decimal(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.contains('/') || !(s.contains('.') || s.contains('e') || s.contains('E')) {
        return parse_rational(s);
    }
    let bad = || Error::Parse(String::from(text));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{ip}{fp}");
    let mut n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    if neg {
        n = -n;
    }
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        Rational::from_integer(n * p)
    } else {
        Rational::new(n, p)
    })
}

/// Lossless text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering with `digits` fractional digits, rounding half to even.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * Rational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let twice: BigInt = &r * 2u32;
    let mut rounded = q.clone();
    match twice.cmp(scaled.denom()) {
        core::cmp::Ordering::Greater => rounded += 1,
        core::cmp::Ordering::Equal if q.is_odd() => rounded += 1,
        _ => {}
    }
    let negative = rounded.sign() == Sign::Minus;
    let magnitude = rounded.abs().to_string();
    let body = if digits == 0 {
        magnitude
    } else {
        let padded = if magnitude.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - magnitude.len()), magnitude)
        } else {
            magnitude
        };
        let (i, f) = padded.split_at(padded.len() - digits);
        format!("{i}.{f}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Nearest `f64`, for display and plotting only.
pub fn to_f64(x: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

pub(crate) fn ensure_delta(delta: &Rational) -> Result<()> {
    if delta.is_positive() && *delta < rat(1, 2) {
        Ok(())
    } else {
        Err(Error::DeltaOutOfRange(delta.clone()))
    }
}

pub(crate) fn ensure_positive(what: &'static str, value: &Rational) -> Result<()> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(Error::NotPositive { what, value: value.clone() })
    }
}

pub(crate) fn min_r(a: &Rational, b: &Rational) -> Rational {
    if a <= b { a.clone() } else { b.clone() }
}

pub(crate) fn max_r(a: &Rational, b: &Rational) -> Rational {
    if a >= b { a.clone() } else { b.clone() }
}

/// Greatest integer `<= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_and_fraction_forms() {
        assert_eq!(parse_rational("27/100").unwrap(), rat(27, 100));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("3/-4").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational_or_decimal("0.27").unwrap(), rat(27, 100));
        assert_eq!(parse_rational_or_decimal("-1.5e-3").unwrap(), rat(-3, 2000));
        assert_eq!(parse_rational_or_decimal("2e2").unwrap(), int(200));
        assert_eq!(parse_rational_or_decimal(".5").unwrap(), rat(1, 2));
        assert!(parse_rational_or_decimal("1.2.3").is_err());
    }

    #[test]
    fn formats_losslessly() {
        assert_eq!(format_rational(&rat(10, 4)), "5/2");
        assert_eq!(format_rational(&int(-3)), "-3");
        for s in ["1/3", "-7/9", "0", "12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    #[test]
    fn decimal_rounding_is_half_even() {
        assert_eq!(to_decimal(&rat(1, 8), 2), "0.12");
        assert_eq!(to_decimal(&rat(3, 8), 2), "0.38");
        assert_eq!(to_decimal(&rat(-1, 8), 2), "-0.12");
        assert_eq!(to_decimal(&rat(5, 2), 0), "2");
        assert_eq!(to_decimal(&rat(7, 2), 0), "4");
        assert_eq!(to_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&rat(1, 1000), 2), "0.00");
        assert_eq!(to_decimal(&rat(-1, 1000), 2), "0.00");
        assert_eq!(to_decimal(&rat(27, 100), 4), "0.2700");
    }

    #[test]
    fn floor_handles_negatives() {
        assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(floor(&rat(7, 2)), BigInt::from(3));
        assert_eq!(floor(&int(-2)), BigInt::from(-2));
    }
}
