//! Arbitrary-precision rationals, plus the strict `p/q` literal parser used by
//! the command line. `BigRational` already keeps values reduced with a positive
//! denominator, which is exactly the canonical form we rely on.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

/// Shorthand for a rational from small integers.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a rational literal: either `p/q` or a plain integer `p`.
///
/// Decimal notation is rejected on purpose; a float that has silently been
/// rounded is worse than an error.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(format!(
            "`{s}`: rationals must be given as p/q literals, not decimals"
        ));
    }
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(Rational::from)
            .map_err(|e| format!("`{s}`: {e}")),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|e| format!("`{s}`: {e}"))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| format!("`{s}`: {e}"))?;
            if q.is_zero() {
                return Err(format!("`{s}`: zero denominator"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Renders `r` as `p/q` (or `p` when the denominator is one).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts to `f64`; exact rationals in this project are far inside range.
pub fn to_f64(r: &Rational) -> f64 {
    let digits = 30u32;
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (r.numer() * &scale) / r.denom();
    let big = scaled.abs().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let sign = if scaled.is_negative() { -1.0 } else { 1.0 };
    sign * big / 1e30
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_integer() {
        assert_eq!(parse_rational("7/64").unwrap(), rat(7, 64));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3, 1));
        assert_eq!(parse_rational(" 25 / 668 ").unwrap(), rat(25, 668));
    }

    #[test]
    fn rejects_decimals_and_zero_denominator() {
        assert!(parse_rational("0.44").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&rat(50, 1336)), "25/668");
        assert_eq!(format_rational(&rat(4, 2)), "2");
    }

    #[test]
    fn f64_conversion_close() {
        let x = to_f64(&rat(25, 668));
        assert!((x - 25.0 / 668.0).abs() < 1e-15);
        assert!((to_f64(&rat(-1, 3)) + 1.0 / 3.0).abs() < 1e-15);
    }
}
