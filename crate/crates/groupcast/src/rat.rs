//! Exact rational scalars and their canonical text form.
//!
//! All file formats carry rationals as strings, either a plain integer
//! (`"3"`, `"-2"`) or a fraction in lowest terms (`"3/2"`). Floats are never
//! accepted: exactness is the product.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational. `BigRational` keeps values reduced with a
/// positive denominator, which is exactly the canonical form we need.
pub type Rat = BigRational;

/// Rational zero.
pub fn zero() -> Rat {
    Rat::zero()
}

/// Rational from a machine integer.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`; panics if `q == 0` (programmer error, not input error).
pub fn frac(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical text form: `"p"` when the value is an integer, else `"p/q"`.
pub fn format(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the canonical text form. Rejects empty strings, floats, and zero
/// denominators.
pub fn parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Schema("empty rational".into()));
    }
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (s, None),
    };
    let numer: BigInt = p
        .parse()
        .map_err(|_| Error::Schema(format!("bad rational numerator in {s:?}")))?;
    let denom: BigInt = match q {
        Some(q) => q
            .parse()
            .map_err(|_| Error::Schema(format!("bad rational denominator in {s:?}")))?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(Error::Schema(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(numer, denom))
}

/// Parses and additionally requires the value to be nonnegative.
pub fn parse_nonneg(s: &str) -> Result<Rat> {
    let r = parse(s)?;
    if r.is_negative() {
        return Err(Error::Schema(format!("negative value {s:?} not allowed")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["0", "7", "-3", "3/2", "-5/8", "441/8"] {
            let r = parse(s).unwrap();
            assert_eq!(format(&r), s);
        }
    }

    #[test]
    fn normalizes_on_parse() {
        assert_eq!(format(&parse("6/4").unwrap()), "3/2");
        assert_eq!(format(&parse("-6/-4").unwrap()), "3/2");
        assert_eq!(format(&parse("4/2").unwrap()), "2");
        assert_eq!(format(&parse("0/5").unwrap()), "0");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1.5", "1/0", "a/b", "3/", "/2", "1e3"] {
            assert!(parse(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn nonneg_guard() {
        assert!(parse_nonneg("3/2").is_ok());
        assert!(parse_nonneg("-1").is_err());
    }
}
