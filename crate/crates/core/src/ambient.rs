//! Concrete abelian groups with exact arithmetic and an invariant metric.
//!
//! Supported ambient groups: the circle `T = R/Z` with rational
//! representatives in `[0, 1)`, finite cyclic groups `Z_n`, the rational
//! points of the real line, and finite products of these. The invariant
//! metric is the normalized arc distance on the circle (so the circle has
//! diameter `1/2`), `min(|i-j|, n-|i-j|)/n` on `Z_n` (realizing `Z_n` as the
//! subgroup `{k/n}` of the circle, so products mix kinds coherently),
//! `|x - y|` on the line, and the maximum of component distances on products.
//!
//! The standard neighborhood scale is the open ball `U_m = {x : rho(x,0) <
//! 1/m}`; [`Radius`] generalizes this to arbitrary positive rational radii.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rat::{arc_distance, mod1, Rat};
use crate::{Error, Result};

/// Shape of a concrete abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    /// The circle group `T = R/Z`.
    Circle,
    /// The cyclic group `Z_n` of the given order (`n >= 1`).
    FiniteCyclic(u64),
    /// The additive group of the real line (rational points).
    RealLine,
    /// A finite, non-empty product of groups.
    Product(Vec<GroupDescriptor>),
}

impl GroupDescriptor {
    /// Product of `count` copies of the circle.
    pub fn torus(count: usize) -> Self {
        GroupDescriptor::Product(alloc::vec![GroupDescriptor::Circle; count])
    }

    /// Identity element of this group.
    pub fn zero(&self) -> GroupElement {
        match self {
            GroupDescriptor::Circle => GroupElement::Circle(Rat::zero()),
            GroupDescriptor::FiniteCyclic(order) => GroupElement::Residue { value: 0, order: *order },
            GroupDescriptor::RealLine => GroupElement::Real(Rat::zero()),
            GroupDescriptor::Product(parts) => {
                GroupElement::Tuple(parts.iter().map(|p| p.zero()).collect())
            }
        }
    }

    /// Checks structural invariants: positive cyclic orders, non-empty products.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupDescriptor::Circle | GroupDescriptor::RealLine => Ok(()),
            GroupDescriptor::FiniteCyclic(order) => {
                if *order >= 1 {
                    Ok(())
                } else {
                    Err(Error::Invalid("cyclic order must be >= 1".to_string()))
                }
            }
            GroupDescriptor::Product(parts) => {
                if parts.is_empty() {
                    return Err(Error::Invalid("product descriptor must be non-empty".to_string()));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
        }
    }
}

/// Exact point of a concrete abelian group, tagged by its descriptor shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    /// Circle point: representative rational in `[0, 1)`.
    Circle(Rat),
    /// Residue in `{0, ..., order-1}`.
    Residue { value: u64, order: u64 },
    /// Rational point of the real line.
    Real(Rat),
    /// Point of a product group.
    Tuple(Vec<GroupElement>),
}

impl GroupElement {
    /// Circle point from any rational; reduced modulo 1.
    pub fn circle(r: Rat) -> Self {
        GroupElement::Circle(mod1(&r))
    }

    /// Residue class of `value` in `Z_order`.
    pub fn residue(value: i64, order: u64) -> Self {
        let order_i = order as i64;
        GroupElement::Residue { value: value.rem_euclid(order_i) as u64, order }
    }

    /// Real-line point.
    pub fn real(r: Rat) -> Self {
        GroupElement::Real(r)
    }

    /// The descriptor this element belongs to.
    pub fn descriptor(&self) -> GroupDescriptor {
        match self {
            GroupElement::Circle(_) => GroupDescriptor::Circle,
            GroupElement::Residue { order, .. } => GroupDescriptor::FiniteCyclic(*order),
            GroupElement::Real(_) => GroupDescriptor::RealLine,
            GroupElement::Tuple(parts) => {
                GroupDescriptor::Product(parts.iter().map(|p| p.descriptor()).collect())
            }
        }
    }

    /// `true` iff this is the identity.
    pub fn is_zero(&self) -> bool {
        match self {
            GroupElement::Circle(r) | GroupElement::Real(r) => r.is_zero(),
            GroupElement::Residue { value, .. } => *value == 0,
            GroupElement::Tuple(parts) => parts.iter().all(|p| p.is_zero()),
        }
    }
}

/// Exact group sum. Circle sums reduce modulo 1, residues modulo the order.
pub fn add(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    match (a, b) {
        (GroupElement::Circle(x), GroupElement::Circle(y)) => Ok(GroupElement::Circle(mod1(&(x + y)))),
        (GroupElement::Residue { value: x, order: n }, GroupElement::Residue { value: y, order: m })
            if n == m =>
        {
            Ok(GroupElement::Residue { value: (x + y) % n, order: *n })
        }
        (GroupElement::Real(x), GroupElement::Real(y)) => Ok(GroupElement::Real(x + y)),
        (GroupElement::Tuple(xs), GroupElement::Tuple(ys)) if xs.len() == ys.len() => {
            let parts: Result<Vec<_>> = xs.iter().zip(ys).map(|(x, y)| add(x, y)).collect();
            Ok(GroupElement::Tuple(parts?))
        }
        _ => Err(Error::DescriptorMismatch),
    }
}

/// Exact negation: `a + neg(a) = 0`.
pub fn neg(a: &GroupElement) -> GroupElement {
    match a {
        GroupElement::Circle(x) => GroupElement::Circle(mod1(&(-x))),
        GroupElement::Residue { value, order } => {
            GroupElement::Residue { value: (order - value) % order, order: *order }
        }
        GroupElement::Real(x) => GroupElement::Real(-x),
        GroupElement::Tuple(parts) => GroupElement::Tuple(parts.iter().map(neg).collect()),
    }
}

/// `k`-fold sum of `a` (negation for `k < 0`), computed in one exact step.
pub fn scalar_mul(k: &BigInt, a: &GroupElement) -> GroupElement {
    match a {
        GroupElement::Circle(x) => GroupElement::Circle(mod1(&(Rat::from_integer(k.clone()) * x))),
        GroupElement::Residue { value, order } => {
            let order_big = BigInt::from(*order);
            let r = (k * BigInt::from(*value)) % &order_big;
            let r = if r.is_negative() { r + &order_big } else { r };
            // r is in [0, order), so the conversion cannot fail
            let (_, digits) = r.to_u64_digits();
            GroupElement::Residue { value: digits.first().copied().unwrap_or(0), order: *order }
        }
        GroupElement::Real(x) => GroupElement::Real(Rat::from_integer(k.clone()) * x),
        GroupElement::Tuple(parts) => {
            GroupElement::Tuple(parts.iter().map(|p| scalar_mul(k, p)).collect())
        }
    }
}

/// [`scalar_mul`] with a machine-integer multiplier.
pub fn scalar_mul_i64(k: i64, a: &GroupElement) -> GroupElement {
    scalar_mul(&BigInt::from(k), a)
}

/// Invariant metric `rho`. Exact; satisfies the metric axioms and the
/// invariance `rho(a+c, b+c) = rho(a, b)`. Products take the maximum of
/// component distances.
pub fn rho(a: &GroupElement, b: &GroupElement) -> Result<Rat> {
    match (a, b) {
        (GroupElement::Circle(x), GroupElement::Circle(y)) => Ok(arc_distance(x, y)),
        (GroupElement::Residue { value: x, order: n }, GroupElement::Residue { value: y, order: m })
            if n == m =>
        {
            let diff = x.abs_diff(*y);
            let around = diff.min(n - diff);
            Ok(Rat::new(BigInt::from(around), BigInt::from(*n)))
        }
        (GroupElement::Real(x), GroupElement::Real(y)) => Ok((x - y).abs()),
        (GroupElement::Tuple(xs), GroupElement::Tuple(ys)) if xs.len() == ys.len() => {
            let mut best = Rat::zero();
            for (x, y) in xs.iter().zip(ys) {
                let d = rho(x, y)?;
                if d > best {
                    best = d;
                }
            }
            Ok(best)
        }
        _ => Err(Error::DescriptorMismatch),
    }
}

/// Distance to the identity, `rho(a, 0)`.
pub fn norm(a: &GroupElement) -> Rat {
    rho(a, &a.descriptor().zero()).expect("element matches its own descriptor")
}

/// Exact positive metric radius. The classical neighborhood `U_m` is
/// `Radius::inverse(m)`; arbitrary positive rationals are allowed because
/// stage schedules need radii like `1/(2^m n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radius(Rat);

impl Radius {
    /// Wraps a positive rational radius.
    pub fn new(value: Rat) -> Result<Self> {
        if value.is_positive() {
            Ok(Radius(value))
        } else {
            Err(Error::Invalid("radius must be positive".to_string()))
        }
    }

    /// The classical scale `1/m`.
    pub fn inverse(m: u64) -> Self {
        Radius(Rat::new(BigInt::one(), BigInt::from(m.max(1))))
    }

    /// The radius value.
    pub fn value(&self) -> &Rat {
        &self.0
    }

    /// Half of this radius (the metric realization of `V` with `V+V ⊆ U`).
    pub fn half(&self) -> Radius {
        Radius(&self.0 / Rat::from_integer(BigInt::from(2)))
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// ---------------------------------------------------------------------------
// Canonical text forms: "T:3/4", "Z5:2", "R:-1/3", "T^2:(1/3,1/4)".
// ---------------------------------------------------------------------------

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Circle => write!(f, "T"),
            GroupDescriptor::FiniteCyclic(n) => write!(f, "Z{n}"),
            GroupDescriptor::RealLine => write!(f, "R"),
            GroupDescriptor::Product(parts) => {
                if parts.len() > 1 && parts.iter().all(|p| p == &parts[0]) && !matches!(parts[0], GroupDescriptor::Product(_)) {
                    write!(f, "{}^{}", parts[0], parts.len())
                } else {
                    write!(f, "(")?;
                    for (i, p) in parts.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{p}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('(') {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced product descriptor: {s:?}")))?;
            let parts: Result<Vec<_>> = split_top_level(inner)?.iter().map(|p| p.parse()).collect();
            let parts = parts?;
            if parts.is_empty() {
                return Err(Error::Parse("empty product descriptor".to_string()));
            }
            return Ok(GroupDescriptor::Product(parts));
        }
        if let Some((base, count)) = s.split_once('^') {
            let base: GroupDescriptor = base.parse()?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad power in descriptor: {s:?}")))?;
            if count == 0 {
                return Err(Error::Parse("descriptor power must be >= 1".to_string()));
            }
            return Ok(GroupDescriptor::Product(alloc::vec![base; count]));
        }
        match s {
            "T" => Ok(GroupDescriptor::Circle),
            "R" => Ok(GroupDescriptor::RealLine),
            _ => {
                let order = s
                    .strip_prefix('Z')
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown descriptor: {s:?}")))?;
                if order == 0 {
                    return Err(Error::Parse("cyclic order must be >= 1".to_string()));
                }
                Ok(GroupDescriptor::FiniteCyclic(order))
            }
        }
    }
}

/// Splits `a,b,(c,d),e` on top-level commas only.
fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses: {s:?}")))?;
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses: {s:?}")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

impl GroupElement {
    fn fmt_value(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Circle(r) | GroupElement::Real(r) => write!(f, "{r}"),
            GroupElement::Residue { value, .. } => write!(f, "{value}"),
            GroupElement::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    p.fmt_value(f)?;
                }
                write!(f, ")")
            }
        }
    }

    /// Value part of the canonical form, without the descriptor prefix:
    /// `3/4`, `2`, `(1/3,1/4)`.
    pub fn value_text(&self) -> String {
        struct V<'a>(&'a GroupElement);
        impl fmt::Display for V<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_value(f)
            }
        }
        V(self).to_string()
    }

    /// Parses the value part against a known descriptor.
    pub fn parse_value(descriptor: &GroupDescriptor, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        match descriptor {
            GroupDescriptor::Circle => Ok(GroupElement::circle(crate::rat::parse_rat(text)?)),
            GroupDescriptor::RealLine => Ok(GroupElement::Real(crate::rat::parse_rat(text)?)),
            GroupDescriptor::FiniteCyclic(order) => {
                let value: i64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue: {text:?}")))?;
                Ok(GroupElement::residue(value, *order))
            }
            GroupDescriptor::Product(parts) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("product value needs parentheses: {text:?}")))?;
                let pieces = split_top_level(inner)?;
                if pieces.len() != parts.len() {
                    return Err(Error::Parse(format!(
                        "expected {} components, found {}",
                        parts.len(),
                        pieces.len()
                    )));
                }
                let components: Result<Vec<_>> = parts
                    .iter()
                    .zip(pieces)
                    .map(|(d, t)| GroupElement::parse_value(d, t))
                    .collect();
                Ok(GroupElement::Tuple(components?))
            }
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.descriptor())?;
        self.fmt_value(f)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (desc_text, value_text) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("element needs a descriptor prefix: {s:?}")))?;
        let descriptor: GroupDescriptor = desc_text.parse()?;
        GroupElement::parse_value(&descriptor, value_text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn t(p: i64, q: i64) -> GroupElement {
        GroupElement::circle(rat(p, q))
    }

    #[test]
    fn add_reduces_mod_one_and_mod_order() {
        assert_eq!(add(&t(3, 4), &t(1, 2)).unwrap(), t(1, 4));
        assert_eq!(
            add(&GroupElement::residue(3, 5), &GroupElement::residue(4, 5)).unwrap(),
            GroupElement::residue(2, 5)
        );
        let a = t(2, 7);
        assert_eq!(add(&a, &GroupDescriptor::Circle.zero()).unwrap(), a);
    }

    #[test]
    fn add_rejects_descriptor_mismatch() {
        assert_eq!(
            add(&t(1, 2), &GroupElement::residue(1, 3)),
            Err(Error::DescriptorMismatch)
        );
    }

    #[test]
    fn neg_is_inverse() {
        assert_eq!(neg(&t(1, 4)), t(3, 4));
        assert_eq!(neg(&GroupDescriptor::Circle.zero()), GroupDescriptor::Circle.zero());
        assert_eq!(neg(&GroupElement::residue(3, 7)), GroupElement::residue(4, 7));
        let a = t(5, 9);
        assert!(add(&a, &neg(&a)).unwrap().is_zero());
    }

    #[test]
    fn scalar_mul_matches_spec_examples() {
        assert_eq!(scalar_mul_i64(3, &t(2, 7)), t(6, 7));
        assert!(scalar_mul_i64(0, &t(2, 7)).is_zero());
        // -2 * 2/7 = -4/7 = 3/7 mod 1
        assert_eq!(scalar_mul_i64(-2, &t(2, 7)), t(3, 7));
    }

    #[test]
    fn scalar_mul_agrees_with_repeated_addition() {
        let points = [t(2, 7), t(3, 11), GroupElement::residue(4, 9), GroupElement::real(rat(3, 5))];
        for a in &points {
            for k in -50i64..=50 {
                let mut acc = a.descriptor().zero();
                let step = if k >= 0 { a.clone() } else { neg(a) };
                for _ in 0..k.unsigned_abs() {
                    acc = add(&acc, &step).unwrap();
                }
                assert_eq!(scalar_mul_i64(k, a), acc, "k = {k}");
            }
        }
    }

    #[test]
    fn rho_matches_spec_examples() {
        assert_eq!(rho(&t(1, 4), &t(3, 4)).unwrap(), rat(1, 2));
        assert_eq!(rho(&t(1, 10), &t(9, 10)).unwrap(), rat(1, 5));
        let p = GroupElement::Tuple(alloc::vec![t(0, 1), t(0, 1)]);
        let q = GroupElement::Tuple(alloc::vec![t(1, 3), t(1, 4)]);
        assert_eq!(rho(&p, &q).unwrap(), rat(1, 3));
    }

    #[test]
    fn residue_metric_is_circle_subgroup_metric() {
        for n in [2u64, 5, 9] {
            for i in 0..n {
                for j in 0..n {
                    let a = GroupElement::Residue { value: i, order: n };
                    let b = GroupElement::Residue { value: j, order: n };
                    let circle = rho(&t(i as i64, n as i64), &t(j as i64, n as i64)).unwrap();
                    assert_eq!(rho(&a, &b).unwrap(), circle);
                }
            }
        }
    }

    #[test]
    fn circle_metric_is_bounded_by_half() {
        for p in 0..24i64 {
            assert!(norm(&t(p, 24)) <= rat(1, 2));
        }
    }

    #[test]
    fn radius_rejects_nonpositive() {
        assert!(Radius::new(rat_int(0)).is_err());
        assert!(Radius::new(rat(-1, 2)).is_err());
        assert_eq!(Radius::inverse(4).value(), &rat(1, 4));
        assert_eq!(Radius::inverse(4).half().value(), &rat(1, 8));
    }

    #[test]
    fn canonical_text_round_trips() {
        let samples = [
            "T:3/4",
            "Z5:2",
            "R:-1/3",
            "T^2:(1/3,1/4)",
            "(T,Z5,R):(1/3,2,-7/2)",
            "T^3:(0,1/2,2/3)",
        ];
        for s in samples {
            let e: GroupElement = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
        // non-canonical inputs normalize
        let e: GroupElement = "T:5/4".parse().unwrap();
        assert_eq!(e.to_string(), "T:1/4");
        let e: GroupElement = "Z5:7".parse().unwrap();
        assert_eq!(e.to_string(), "Z5:2");
    }

    #[test]
    fn descriptor_text_round_trips() {
        for s in ["T", "Z12", "R", "T^4", "(T,Z5)", "((T,R),Z2)"] {
            let d: GroupDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("Z0".parse::<GroupDescriptor>().is_err());
        assert!("Q".parse::<GroupDescriptor>().is_err());
    }
}
