//! Parsing and printing of `p/q` rationals used by every file format.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

pub fn parse_rational(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: i64 = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational64::new(n, d))
}

pub fn format_rational(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_big_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_big_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational64::new(3, 2));
        assert_eq!(parse_rational(" 4 ").unwrap(), Rational64::from_integer(4));
        assert_eq!(parse_rational("-2/4").unwrap(), Rational64::new(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&Rational64::new(6, 4)), "3/2");
        assert_eq!(format_big_rational(&parse_big_rational("10/5").unwrap()), "2");
    }
}
