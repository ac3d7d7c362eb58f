//! Elements of `c0(X)` as truncated sequences with certified tail bounds.
//!
//! A [`NullSeq`] stores a finite exact prefix `x_1, ..., x_L` together with a
//! tail bound: every unlisted coordinate `x_n` (`n > L`) satisfies
//! `rho(x_n, 0) <= tail_bound`. A tail bound of zero means the element is
//! exactly finitely supported. The uniform metric
//! `d(x, y) = sup_n rho(x_n, y_n)` is computed as an exact [`Interval`]
//! enclosing the true distance, so tail uncertainty is never silently
//! dropped; when both tail bounds are zero the interval is a point.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::ambient::{self, GroupDescriptor, GroupElement};
use crate::rat::Rat;
use crate::{Error, Result};

/// Closed interval of exact rationals enclosing a real quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    /// Greatest certified lower bound.
    pub lo: Rat,
    /// Least certified upper bound.
    pub hi: Rat,
}

impl Interval {
    /// Degenerate interval `[v, v]`.
    pub fn point(v: Rat) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    /// `true` iff the interval is a single point.
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Truncated element of `c0(X)`: exact prefix plus certified tail bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullSeq {
    descriptor: GroupDescriptor,
    prefix: Vec<GroupElement>,
    tail_bound: Rat,
}

impl NullSeq {
    /// Builds a sequence, checking that all prefix entries share the
    /// descriptor and the tail bound is nonnegative.
    pub fn new(descriptor: GroupDescriptor, prefix: Vec<GroupElement>, tail_bound: Rat) -> Result<Self> {
        descriptor.validate()?;
        if tail_bound.is_negative() {
            return Err(Error::Invalid("tail bound must be nonnegative".to_string()));
        }
        for entry in &prefix {
            if entry.descriptor() != descriptor {
                return Err(Error::DescriptorMismatch);
            }
        }
        Ok(NullSeq { descriptor, prefix, tail_bound })
    }

    /// Finitely supported sequence (tail bound zero).
    pub fn finitely_supported(descriptor: GroupDescriptor, prefix: Vec<GroupElement>) -> Result<Self> {
        NullSeq::new(descriptor, prefix, Rat::zero())
    }

    /// The zero element of `c0(X)`.
    pub fn zero(descriptor: GroupDescriptor) -> Self {
        NullSeq { descriptor, prefix: Vec::new(), tail_bound: Rat::zero() }
    }

    /// Coordinate embedding `nu_n(a) = (0, ..., 0, a, 0, ...)` with `a` in
    /// position `n` (1-based) and tail bound zero.
    pub fn nu_embed(n: usize, a: GroupElement) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("coordinate positions are 1-based".to_string()));
        }
        let descriptor = a.descriptor();
        let mut prefix = alloc::vec![descriptor.zero(); n];
        prefix[n - 1] = a;
        NullSeq::finitely_supported(descriptor, prefix)
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn prefix(&self) -> &[GroupElement] {
        &self.prefix
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn tail_bound(&self) -> &Rat {
        &self.tail_bound
    }

    /// `true` iff the sequence is known exactly (tail bound zero).
    pub fn is_finitely_supported(&self) -> bool {
        self.tail_bound.is_zero()
    }

    /// Coordinate projection `pi_n`. Coordinates beyond the prefix return the
    /// identity together with an uncertainty note equal to the tail bound;
    /// explicit coordinates carry uncertainty zero.
    pub fn project(&self, n: usize) -> (GroupElement, Rat) {
        if n >= 1 && n <= self.prefix.len() {
            (self.prefix[n - 1].clone(), Rat::zero())
        } else {
            (self.descriptor.zero(), self.tail_bound.clone())
        }
    }

    /// Prefix projection `p_n(x) = (x_1, ..., x_n)`, padding beyond the
    /// stored prefix with the identity (exact only when the tail bound is 0).
    pub fn prefix_project(&self, n: usize) -> Vec<GroupElement> {
        (1..=n).map(|i| self.project(i).0).collect()
    }

    /// Largest `rho(x_i, 0)` over the explicit prefix entries with `i > m`,
    /// combined with the tail bound: an upper bound for
    /// `sup_{n > m} rho(x_n, 0)`.
    pub fn sup_norm_beyond(&self, m: usize) -> Rat {
        let mut best = self.tail_bound.clone();
        for entry in self.prefix.iter().skip(m) {
            let v = ambient::norm(entry);
            if v > best {
                best = v;
            }
        }
        best
    }
}

/// Uniform metric `d(x, y) = sup_n rho(x_n, y_n)` as an exact enclosure.
///
/// Coordinates where both entries are explicit contribute exactly. Where one
/// side is only tail-bounded with bound `t`, the coordinate contributes the
/// interval `[max(0, rho(0, other) - t), rho(0, other) + t]`; beyond both
/// prefixes the contribution is `[0, t_x + t_y]`. The true distance lies in
/// the returned interval, and the interval is a point whenever both tail
/// bounds are zero.
pub fn d(x: &NullSeq, y: &NullSeq) -> Result<Interval> {
    if x.descriptor != y.descriptor {
        return Err(Error::DescriptorMismatch);
    }
    let mut lo = Rat::zero();
    let mut hi = &x.tail_bound + &y.tail_bound;
    let longest = x.prefix.len().max(y.prefix.len());
    for i in 1..=longest {
        let (xe, xu) = x.project(i);
        let (ye, yu) = y.project(i);
        let base = ambient::rho(&xe, &ye)?;
        let slack = xu + yu;
        let coord_lo = (&base - &slack).max(Rat::zero());
        let coord_hi = base + slack;
        if coord_lo > lo {
            lo = coord_lo;
        }
        if coord_hi > hi {
            hi = coord_hi;
        }
    }
    if lo > hi {
        hi = lo.clone();
    }
    Ok(Interval { lo, hi })
}

/// Exact uniform distance; requires both tail bounds to be zero.
pub fn d_exact(x: &NullSeq, y: &NullSeq) -> Result<Rat> {
    if !x.is_finitely_supported() || !y.is_finitely_supported() {
        return Err(Error::InexactDistance);
    }
    Ok(d(x, y)?.lo)
}

/// Coordinatewise sum; tail bounds add by the triangle inequality.
pub fn seq_add(x: &NullSeq, y: &NullSeq) -> Result<NullSeq> {
    if x.descriptor != y.descriptor {
        return Err(Error::DescriptorMismatch);
    }
    let longest = x.prefix.len().max(y.prefix.len());
    let mut prefix = Vec::with_capacity(longest);
    for i in 1..=longest {
        prefix.push(ambient::add(&x.project(i).0, &y.project(i).0)?);
    }
    Ok(NullSeq {
        descriptor: x.descriptor.clone(),
        prefix,
        tail_bound: &x.tail_bound + &y.tail_bound,
    })
}

/// Coordinatewise negation; the tail bound is unchanged (the metric is
/// invariant, so `rho(-x_n, 0) = rho(x_n, 0)`).
pub fn seq_neg(x: &NullSeq) -> NullSeq {
    NullSeq {
        descriptor: x.descriptor.clone(),
        prefix: x.prefix.iter().map(ambient::neg).collect(),
        tail_bound: x.tail_bound.clone(),
    }
}

/// Coordinatewise `k`-fold sum; the tail bound scales by `|k|`.
pub fn seq_scalar_mul(k: &BigInt, x: &NullSeq) -> NullSeq {
    NullSeq {
        descriptor: x.descriptor.clone(),
        prefix: x.prefix.iter().map(|e| ambient::scalar_mul(k, e)).collect(),
        tail_bound: Rat::from_integer(k.abs()) * &x.tail_bound,
    }
}

// ---------------------------------------------------------------------------
// Canonical text form: "[T: 1/3, 1/8 | tail<=1/100]".
// ---------------------------------------------------------------------------

impl fmt::Display for NullSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:", self.descriptor)?;
        for (i, entry) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {}", entry.value_text())?;
        }
        write!(f, " | tail<={}]", self.tail_bound)
    }
}

impl FromStr for NullSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("sequence needs [..] brackets: {s:?}")))?;
        let (desc_text, rest) = inner
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("sequence needs a descriptor prefix: {s:?}")))?;
        let descriptor: GroupDescriptor = desc_text.parse()?;
        let (entries_text, tail_text) = match rest.rsplit_once('|') {
            Some((e, t)) => (e, Some(t)),
            None => (rest, None),
        };
        let tail_bound = match tail_text {
            Some(t) => {
                let t = t.trim();
                let value = t
                    .strip_prefix("tail<=")
                    .ok_or_else(|| Error::Parse(format!("tail clause must read tail<=p/q: {t:?}")))?;
                crate::rat::parse_rat(value)?
            }
            None => Rat::zero(),
        };
        let entries_text = entries_text.trim();
        let prefix = if entries_text.is_empty() {
            Vec::new()
        } else {
            let pieces = split_entries(entries_text)?;
            let entries: Result<Vec<_>> = pieces
                .iter()
                .map(|p| GroupElement::parse_value(&descriptor, p))
                .collect();
            entries?
        };
        NullSeq::new(descriptor, prefix, tail_bound)
    }
}

/// Splits coordinate entries on top-level commas (tuple values nest parens).
fn split_entries(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse("unbalanced parentheses in sequence".to_string()))?;
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    Ok(parts)
}

/// Canonical text of a sequence value; see the module docs for the format.
pub fn to_text(x: &NullSeq) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn t(p: i64, q: i64) -> GroupElement {
        GroupElement::circle(rat(p, q))
    }

    fn seq(entries: &[(i64, i64)], tail: Rat) -> NullSeq {
        NullSeq::new(
            GroupDescriptor::Circle,
            entries.iter().map(|&(p, q)| t(p, q)).collect(),
            tail,
        )
        .unwrap()
    }

    #[test]
    fn metric_on_single_coordinate_embedding() {
        let x = NullSeq::nu_embed(2, t(1, 4)).unwrap();
        let zero = NullSeq::zero(GroupDescriptor::Circle);
        assert_eq!(d(&x, &zero).unwrap(), Interval::point(rat(1, 4)));
    }

    #[test]
    fn metric_of_element_with_itself_is_zero_point() {
        let x = seq(&[(1, 3), (1, 8)], Rat::zero());
        assert_eq!(d(&x, &x).unwrap(), Interval::point(rat_int(0)));
    }

    #[test]
    fn metric_dominant_coordinate_beats_tail() {
        let x = seq(&[(1, 3), (1, 8)], Rat::zero());
        let y = seq(&[(0, 1), (1, 8)], rat(1, 100));
        assert_eq!(d(&x, &y).unwrap(), Interval::point(rat(1, 3)));
    }

    #[test]
    fn metric_interval_tracks_tail_uncertainty() {
        // x's first coordinate is explicit 0; y is all tail-bounded by 1/4.
        let x = seq(&[(1, 2)], Rat::zero());
        let y = NullSeq::new(GroupDescriptor::Circle, alloc::vec![], rat(1, 4)).unwrap();
        let i = d(&x, &y).unwrap();
        assert_eq!(i.lo, rat(1, 4));
        assert_eq!(i.hi, rat(3, 4));
    }

    #[test]
    fn metric_rejects_descriptor_mismatch() {
        let x = NullSeq::zero(GroupDescriptor::Circle);
        let y = NullSeq::zero(GroupDescriptor::RealLine);
        assert_eq!(d(&x, &y), Err(Error::DescriptorMismatch));
    }

    #[test]
    fn nu_embed_places_and_projects() {
        let x = NullSeq::nu_embed(3, t(1, 2)).unwrap();
        assert_eq!(x.prefix_len(), 3);
        assert_eq!(x.project(3).0, t(1, 2));
        assert!(x.project(1).0.is_zero());
        assert!(NullSeq::nu_embed(1, GroupDescriptor::Circle.zero()).unwrap().project(1).0.is_zero());
    }

    #[test]
    fn project_beyond_prefix_returns_zero_with_tail_note() {
        let x = seq(&[(1, 3), (1, 8)], rat(1, 7));
        let (value, uncertainty) = x.project(99);
        assert!(value.is_zero());
        assert_eq!(uncertainty, rat(1, 7));
        assert_eq!(x.project(2), (t(1, 8), rat_int(0)));
        assert_eq!(x.prefix_project(2), alloc::vec![t(1, 3), t(1, 8)]);
    }

    #[test]
    fn seq_arithmetic_matches_examples() {
        let a = NullSeq::nu_embed(1, t(1, 4)).unwrap();
        let b = NullSeq::nu_embed(2, t(1, 4)).unwrap();
        let sum = seq_add(&a, &b).unwrap();
        assert_eq!(sum.prefix(), &[t(1, 4), t(1, 4)]);

        let x = seq(&[(1, 3)], rat(1, 9));
        let cancel = seq_add(&x, &seq_neg(&x)).unwrap();
        assert!(cancel.prefix()[0].is_zero());
        assert_eq!(cancel.tail_bound(), &rat(2, 9));

        let tripled = seq_scalar_mul(&BigInt::from(3), &NullSeq::nu_embed(1, t(2, 7)).unwrap());
        assert_eq!(tripled.prefix()[0], t(6, 7));
    }

    #[test]
    fn seq_scalar_mul_scales_tail_by_magnitude() {
        let x = seq(&[(1, 5)], rat(1, 10));
        let y = seq_scalar_mul(&BigInt::from(-3), &x);
        assert_eq!(y.tail_bound(), &rat(3, 10));
        assert_eq!(y.prefix()[0], t(2, 5));
    }

    #[test]
    fn mismatched_prefix_lengths_pad_with_tail_semantics() {
        let x = seq(&[(1, 3)], Rat::zero());
        let y = seq(&[(1, 3), (1, 5)], Rat::zero());
        // x's coordinate 2 is exactly 0, so the distance is exact.
        assert_eq!(d(&x, &y).unwrap(), Interval::point(rat(1, 5)));
    }

    #[test]
    fn text_round_trips() {
        let x = seq(&[(1, 3), (1, 8)], rat(1, 100));
        assert_eq!(x.to_string(), "[T: 1/3, 1/8 | tail<=1/100]");
        let back: NullSeq = x.to_string().parse().unwrap();
        assert_eq!(back, x);

        let zero = NullSeq::zero(GroupDescriptor::Circle);
        assert_eq!(zero.to_string(), "[T: | tail<=0]");
        assert_eq!(zero.to_string().parse::<NullSeq>().unwrap(), zero);

        let explicit: NullSeq = "[T: 0 | tail<=0]".parse().unwrap();
        assert_eq!(explicit.prefix_len(), 1);
        assert!(explicit.is_finitely_supported());

        // tail clause optional on input
        let y: NullSeq = "[T: 1/2, 1/4]".parse().unwrap();
        assert!(y.is_finitely_supported());

        let tuple: NullSeq = "[T^2: (1/3,1/4), (0,0) | tail<=0]".parse().unwrap();
        assert_eq!(tuple.prefix_len(), 2);
        assert_eq!(tuple.to_string(), "[T^2: (1/3,1/4), (0,0) | tail<=0]");
    }

    #[test]
    fn new_rejects_bad_inputs() {
        assert!(NullSeq::new(GroupDescriptor::Circle, alloc::vec![], rat(-1, 2)).is_err());
        assert!(NullSeq::new(GroupDescriptor::Circle, alloc::vec![GroupElement::residue(1, 5)], Rat::zero())
            .is_err());
    }
}
