//! Exact rational scalars and small helpers shared across the crate.
//!
//! Everything numeric in certified paths is a [`Rat`]: an arbitrary-precision
//! rational kept in lowest terms by construction. Canonical text form is
//! `p/q` (just `p` when the denominator is 1), matching the wire format used
//! by the CLI and the JSON certificates.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational number in lowest terms.
pub type Rat = num_rational::BigRational;

/// Builds `p/q` from machine integers. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// The rational `n/1`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Reduces `x` modulo 1 into the representative range `[0, 1)`.
pub fn mod1(x: &Rat) -> Rat {
    x - x.floor()
}

/// Arc distance on the circle between representatives in `[0, 1)`:
/// `min(|x - y| mod 1, 1 - (|x - y| mod 1))`. Always in `[0, 1/2]`.
pub fn arc_distance(x: &Rat, y: &Rat) -> Rat {
    let diff = mod1(&(x - y));
    let complement = Rat::one() - &diff;
    diff.min(complement)
}

/// Parses the canonical text form of a rational: `p/q` or a bare integer,
/// optional leading `-`. The result is reduced; `q` must be nonzero.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer: BigInt = num_text
        .parse()
        .map_err(|_| Error::Parse(alloc::format!("bad rational numerator: {text:?}")))?;
    let denom: BigInt = match den_text {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(alloc::format!("bad rational denominator: {text:?}")))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse("zero denominator".to_string()));
    }
    Ok(Rat::new(numer, denom))
}

/// `true` iff `x` is a nonnegative rational.
pub fn is_nonnegative(x: &Rat) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod1_reduces_into_unit_interval() {
        assert_eq!(mod1(&rat(5, 4)), rat(1, 4));
        assert_eq!(mod1(&rat(-1, 4)), rat(3, 4));
        assert_eq!(mod1(&rat_int(3)), rat_int(0));
        assert_eq!(mod1(&rat(7, 7)), rat_int(0));
    }

    #[test]
    fn arc_distance_takes_shorter_way_around() {
        assert_eq!(arc_distance(&rat(1, 10), &rat(9, 10)), rat(1, 5));
        assert_eq!(arc_distance(&rat(1, 4), &rat(3, 4)), rat(1, 2));
        assert_eq!(arc_distance(&rat(1, 3), &rat(1, 3)), rat_int(0));
    }

    #[test]
    fn parse_round_trips_canonical_forms() {
        for text in ["3/4", "-1/3", "0", "17", "-5"] {
            let r = parse_rat(text).unwrap();
            assert_eq!(r.to_string(), text);
        }
        assert_eq!(parse_rat("6/8").unwrap(), rat(3, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
