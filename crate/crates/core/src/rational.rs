//! Exact rational coefficients and their `p/q` text form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational coefficient.
pub type Coeff = BigRational;

pub fn int(v: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(v))
}

pub fn parse_coeff(text: &str) -> Option<Coeff> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let q = BigRational::from_str(text).ok()?;
    Some(q)
}

/// `p` for integers, `p/q` otherwise.
pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_coeff("2/3").unwrap(), Coeff::new(2.into(), 3.into()));
        assert_eq!(parse_coeff("-4/6").map(|c| format_coeff(&c)).unwrap(), "-2/3");
        assert_eq!(format_coeff(&int(7)), "7");
        assert!(parse_coeff("1/0").is_none());
        assert!(parse_coeff("x").is_none());
    }
}
