use num_bigint::BigInt;
use num_rational::BigRational;
use std::str::FromStr;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_in_lowest_terms() {
        assert_eq!(parse_rational("6/4"), Some(rat(3, 2)));
        assert_eq!(parse_rational("-7"), Some(int(-7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}

/// Serializes any `Display` value as a JSON string; used for big integers and
/// rationals so reports stay readable.
pub fn ser_display<T: std::fmt::Display, S: serde::Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
