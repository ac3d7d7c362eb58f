//! Characters of `c0(X)`, exact pairings, and Bohr-convergence witnesses.
//!
//! For compact `X` the dual of `c0(X)` consists of the finitely supported
//! sequences of characters of `X`, acting by a finite product: with angles
//! written additively, `(g, x) = sum_i g_i . x_i mod 1`. A [`PairingValue`]
//! stores that angle exactly; "the pairing tends to 1" becomes "the arc
//! distance of the angle from 0 tends to 0".
//!
//! On top of the pairing the module provides Bohr-nullity reports, the
//! Schur-failure witness (a Bohr-null, uniformly discrete sequence built
//! from coordinate embeddings of a fixed nonzero point), and the separating
//! character schedule certifying that a non-null sequence in `c0(X)` is
//! detected by countably many characters.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ambient::{self, GroupDescriptor, GroupElement};
use crate::nullseq::{self, NullSeq};
use crate::rat::{mod1, Rat};
use crate::{Error, Result};

/// Per-coordinate character of a concrete compact group.
///
/// Circle characters are integers `g` acting by `x -> g.x mod 1`; characters
/// of `Z_n` are exponents `e` acting by `j -> e.j/n mod 1`; products act
/// componentwise and sum the angles. A component used inside a [`Character`]
/// support must be nonzero (zero factors are allowed inside tuples as long
/// as some factor is nonzero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharComponent {
    /// Integer character of the circle.
    Circle(i64),
    /// Exponent character of `Z_order`.
    FiniteCyclic { exponent: u64, order: u64 },
    /// Componentwise character of a product.
    Tuple(Vec<CharComponent>),
}

impl CharComponent {
    /// `true` iff the component acts trivially.
    pub fn is_zero(&self) -> bool {
        match self {
            CharComponent::Circle(g) => *g == 0,
            CharComponent::FiniteCyclic { exponent, .. } => *exponent == 0,
            CharComponent::Tuple(parts) => parts.iter().all(CharComponent::is_zero),
        }
    }

    /// Descriptor of the group this component acts on.
    pub fn descriptor(&self) -> GroupDescriptor {
        match self {
            CharComponent::Circle(_) => GroupDescriptor::Circle,
            CharComponent::FiniteCyclic { order, .. } => GroupDescriptor::FiniteCyclic(*order),
            CharComponent::Tuple(parts) => {
                GroupDescriptor::Product(parts.iter().map(CharComponent::descriptor).collect())
            }
        }
    }

    /// Exact angle of the component applied to one group element.
    pub fn apply(&self, x: &GroupElement) -> Result<Rat> {
        match (self, x) {
            (CharComponent::Circle(g), GroupElement::Circle(r)) => {
                Ok(mod1(&(Rat::from_integer(BigInt::from(*g)) * r)))
            }
            (CharComponent::FiniteCyclic { exponent, order }, GroupElement::Residue { value, order: n })
                if order == n =>
            {
                let angle = Rat::new(BigInt::from(*exponent) * BigInt::from(*value), BigInt::from(*order));
                Ok(mod1(&angle))
            }
            (CharComponent::Tuple(parts), GroupElement::Tuple(xs)) if parts.len() == xs.len() => {
                let mut angle = Rat::zero();
                for (part, x) in parts.iter().zip(xs) {
                    angle += part.apply(x)?;
                }
                Ok(mod1(&angle))
            }
            _ => Err(Error::DescriptorMismatch),
        }
    }

    /// Componentwise sum in the dual group; cancels to zero exactly.
    pub fn add(&self, other: &CharComponent) -> Result<CharComponent> {
        match (self, other) {
            (CharComponent::Circle(a), CharComponent::Circle(b)) => Ok(CharComponent::Circle(a + b)),
            (
                CharComponent::FiniteCyclic { exponent: a, order: n },
                CharComponent::FiniteCyclic { exponent: b, order: m },
            ) if n == m => Ok(CharComponent::FiniteCyclic { exponent: (a + b) % n, order: *n }),
            (CharComponent::Tuple(xs), CharComponent::Tuple(ys)) if xs.len() == ys.len() => {
                let parts: Result<Vec<_>> = xs.iter().zip(ys).map(|(x, y)| x.add(y)).collect();
                Ok(CharComponent::Tuple(parts?))
            }
            _ => Err(Error::DescriptorMismatch),
        }
    }
}

impl fmt::Display for CharComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharComponent::Circle(g) => write!(f, "{g}"),
            CharComponent::FiniteCyclic { exponent, order } => write!(f, "{exponent} mod {order}"),
            CharComponent::Tuple(parts) => {
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

/// Finitely supported character of `c0(X)`: a finite map from 1-based
/// coordinate positions to nonzero per-coordinate characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    descriptor: GroupDescriptor,
    support: BTreeMap<usize, CharComponent>,
}

impl Character {
    /// Character with empty support (the trivial character).
    pub fn trivial(descriptor: GroupDescriptor) -> Self {
        Character { descriptor, support: BTreeMap::new() }
    }

    /// Builds a character from (position, component) pairs; zero components
    /// are dropped, and every component must match the descriptor.
    pub fn new(
        descriptor: GroupDescriptor,
        entries: impl IntoIterator<Item = (usize, CharComponent)>,
    ) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (position, component) in entries {
            if position == 0 {
                return Err(Error::Invalid("character positions are 1-based".to_string()));
            }
            if component.descriptor() != descriptor {
                return Err(Error::DescriptorMismatch);
            }
            if component.is_zero() {
                continue;
            }
            support.insert(position, component);
        }
        Ok(Character { descriptor, support })
    }

    /// Single-coordinate circle character `g` at `position`.
    pub fn circle_at(position: usize, g: i64) -> Result<Self> {
        Character::new(GroupDescriptor::Circle, [(position, CharComponent::Circle(g))])
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn support(&self) -> &BTreeMap<usize, CharComponent> {
        &self.support
    }

    /// Largest supported position, or 0 for the trivial character.
    pub fn max_support(&self) -> usize {
        self.support.keys().next_back().copied().unwrap_or(0)
    }

    /// Supportwise sum in the dual group, dropping components that cancel.
    pub fn add(&self, other: &Character) -> Result<Character> {
        if self.descriptor != other.descriptor {
            return Err(Error::DescriptorMismatch);
        }
        let mut support = self.support.clone();
        for (position, component) in &other.support {
            let merged = match support.get(position) {
                Some(existing) => existing.add(component)?,
                None => component.clone(),
            };
            if merged.is_zero() {
                support.remove(position);
            } else {
                support.insert(*position, merged);
            }
        }
        Ok(Character { descriptor: self.descriptor.clone(), support })
    }
}

/// Exact pairing value: the circle element `e^{2 pi i . angle}` represented
/// by its angle in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingValue {
    angle: Rat,
}

impl PairingValue {
    pub fn from_angle(angle: Rat) -> Self {
        PairingValue { angle: mod1(&angle) }
    }

    pub fn zero() -> Self {
        PairingValue { angle: Rat::zero() }
    }

    pub fn angle(&self) -> &Rat {
        &self.angle
    }

    /// Arc distance of the angle from 0; "pairing -> 1" in multiplicative
    /// notation is "this distance -> 0".
    pub fn distance_to_zero(&self) -> Rat {
        let complement = Rat::one() - &self.angle;
        self.angle.clone().min(complement)
    }

    pub fn is_trivial(&self) -> bool {
        self.angle.is_zero()
    }
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.angle)
    }
}

/// Exact pairing `(chi, x)`: the finite support of `chi` makes the defining
/// limit a finite sum of angles. Positions beyond the prefix of `x`
/// contribute only when the tail bound is zero (the coordinate is then
/// exactly 0); otherwise the pairing is tail-ambiguous.
pub fn pair(chi: &Character, x: &NullSeq) -> Result<PairingValue> {
    if chi.descriptor != *x.descriptor() {
        return Err(Error::DescriptorMismatch);
    }
    let mut angle = Rat::zero();
    for (&position, component) in &chi.support {
        let (value, uncertainty) = x.project(position);
        if !uncertainty.is_zero() {
            return Err(Error::TailAmbiguous { position });
        }
        angle += component.apply(&value)?;
    }
    Ok(PairingValue::from_angle(angle))
}

/// One row of a Bohr-nullity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrRow {
    /// Index of the character in the input family.
    pub char_index: usize,
    /// Largest pairing deviation over the whole list.
    pub max_deviation: Rat,
    /// Last 1-based list index whose deviation exceeds the tolerance.
    pub last_exceed: Option<usize>,
}

/// For each character, the deviation profile of the pairings against a list
/// of sequences: the largest arc distance from the trivial pairing and the
/// last index where it still exceeds `tolerance`. A Bohr-null list shows
/// `last_exceed` strictly before the end of the list for every character.
pub fn bohr_null_report(xs: &[NullSeq], chars: &[Character], tolerance: &Rat) -> Result<Vec<BohrRow>> {
    let mut rows = Vec::with_capacity(chars.len());
    for (char_index, chi) in chars.iter().enumerate() {
        let mut max_deviation = Rat::zero();
        let mut last_exceed = None;
        for (i, x) in xs.iter().enumerate() {
            let deviation = pair(chi, x)?.distance_to_zero();
            if deviation > *tolerance {
                last_exceed = Some(i + 1);
            }
            if deviation > max_deviation {
                max_deviation = deviation;
            }
        }
        rows.push(BohrRow { char_index, max_deviation, last_exceed });
    }
    Ok(rows)
}

/// Per-character part of a Schur-failure witness: all nonzero pairings
/// against the embedded sequence, which must sit at positions inside the
/// character's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharCertificate {
    pub char_index: usize,
    pub max_support: usize,
    /// `(n, angle)` for every `n <= horizon` with a nonzero pairing angle.
    pub nonzero_pairings: Vec<(usize, Rat)>,
}

/// Witness that the embedded sequence `nu_n(t)` is Bohr-null against a
/// character family yet uniformly discrete in the uniform metric: every
/// character eventually pairs trivially, while no subsequence can converge
/// because all pairwise uniform distances equal `rho(t, 0)` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    /// The witnessing point (its distance to 0 is the separation).
    pub point: GroupElement,
    pub horizon: usize,
    /// Exact common value of all pairwise uniform distances.
    pub separation: Rat,
    /// Number of pairwise distances checked (`horizon` choose 2).
    pub pairs_checked: usize,
    /// Pairings vanish for all `n` past this index (max support of the family).
    pub vanish_after: usize,
    pub char_certificates: Vec<CharCertificate>,
}

impl WitnessReport {
    /// The embedded sequence `nu_n(point)` for `n = 1..=horizon`.
    pub fn embedded_sequence(&self) -> Vec<NullSeq> {
        (1..=self.horizon)
            .map(|n| NullSeq::nu_embed(n, self.point.clone()).expect("positions are 1-based"))
            .collect()
    }
}

/// Builds the Schur-failure witness for a nonzero point `t` of a compact
/// descriptor: the embedded sequence `nu_n(t)` up to `horizon`, the exact
/// certificate that every family character pairs trivially with `nu_n(t)`
/// once `n` exceeds its support, and the exact certificate that all pairwise
/// uniform distances equal `rho(t, 0)`.
pub fn schur_witness(
    t: &GroupElement,
    horizon: usize,
    char_family: &[Character],
) -> Result<WitnessReport> {
    if t.is_zero() {
        return Err(Error::Invalid("witness point must be nonzero".to_string()));
    }
    if descriptor_contains_line(&t.descriptor()) {
        return Err(Error::Invalid("witness point must belong to a compact descriptor".to_string()));
    }
    let separation = ambient::norm(t);
    let sequence: Vec<NullSeq> = (1..=horizon)
        .map(|n| NullSeq::nu_embed(n, t.clone()))
        .collect::<Result<_>>()?;

    let mut char_certificates = Vec::with_capacity(char_family.len());
    let mut vanish_after = 0usize;
    for (char_index, chi) in char_family.iter().enumerate() {
        let max_support = chi.max_support();
        vanish_after = vanish_after.max(max_support);
        let mut nonzero_pairings = Vec::new();
        for (i, x) in sequence.iter().enumerate() {
            let value = pair(chi, x)?;
            if !value.is_trivial() {
                let n = i + 1;
                if n > max_support {
                    return Err(Error::Invalid(format!(
                        "pairing did not vanish at position {n} beyond support {max_support}"
                    )));
                }
                nonzero_pairings.push((n, value.angle().clone()));
            }
        }
        char_certificates.push(CharCertificate { char_index, max_support, nonzero_pairings });
    }

    let mut pairs_checked = 0usize;
    for (i, a) in sequence.iter().enumerate() {
        for b in &sequence[i + 1..] {
            pairs_checked += 1;
            let distance = nullseq::d_exact(a, b)?;
            if distance != separation {
                return Err(Error::Invalid(format!(
                    "pairwise distance {distance} differs from separation {separation}"
                )));
            }
        }
    }

    Ok(WitnessReport {
        point: t.clone(),
        horizon,
        separation,
        pairs_checked,
        vanish_after,
        char_certificates,
    })
}

fn descriptor_contains_line(descriptor: &GroupDescriptor) -> bool {
    match descriptor {
        GroupDescriptor::RealLine => true,
        GroupDescriptor::Circle | GroupDescriptor::FiniteCyclic(_) => false,
        GroupDescriptor::Product(parts) => parts.iter().any(descriptor_contains_line),
    }
}

/// One separating character in a schedule: it evaluates a sequence `(x_n)`
/// of elements of `c0(X)` at the outer index `n_l` through a
/// single-coordinate inner character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorChar {
    /// 1-based index into the outer sequence.
    pub outer: usize,
    /// 1-based coordinate inside the selected element.
    pub inner_position: usize,
    /// The per-coordinate character applied there.
    pub component: CharComponent,
}

impl SeparatorChar {
    /// Pairing of this character against an outer sequence of elements of
    /// `c0(X)`. Outer indices beyond the supplied list are an error.
    pub fn pair_with(&self, outer_sequence: &[NullSeq]) -> Result<PairingValue> {
        let element = outer_sequence.get(self.outer - 1).ok_or_else(|| {
            Error::Invalid(format!("outer index {} beyond supplied sequence", self.outer))
        })?;
        let chi = Character::new(
            element.descriptor().clone(),
            [(self.inner_position, self.component.clone())],
        )?;
        pair(&chi, element)
    }
}

/// An escaping coordinate found while scanning a non-null sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Escape {
    /// 1-based index into `ys`.
    pub outer: usize,
    /// 1-based coordinate index with `rho(value, 0) > delta`.
    pub coordinate: usize,
    pub value: GroupElement,
}

/// Separating schedule for a non-null sequence `ys` in `c0(X)`: characters
/// `chi_l` that pair trivially in the limit with every null sequence of
/// `c0(X)` elements while staying uniformly away from the trivial pairing
/// on `ys`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorSchedule {
    pub delta: Rat,
    /// The escaping coordinates found during the scan, one per outer index.
    pub escapes: Vec<Escape>,
    /// Members of the winning cluster (indices into `escapes`).
    pub cluster: Vec<usize>,
    /// Representative value of the winning cluster.
    pub cluster_value: GroupElement,
    /// The selected per-coordinate character.
    pub component: CharComponent,
    pub chars: Vec<SeparatorChar>,
    /// Exact pairing angles of each `chi_l` against `ys`.
    pub pairings: Vec<Rat>,
    /// Least arc distance from 0 among those pairings; positive.
    pub separation_bound: Rat,
}

/// Search bound for the separating character component (per axis): the
/// winning magnitude is the smallest one attaining the maximal worst-case
/// pairing distance among magnitudes up to this bound.
pub const SEPARATOR_CHAR_BOUND: i64 = 8;

/// Builds the separating schedule. Scans `ys` in order for coordinates at
/// distance `> delta` from 0 (one escape per outer index), clusters the
/// escaping values at tolerance `delta/4`, keeps the largest cluster, and
/// selects the per-coordinate character with the best worst-case pairing
/// distance over the cluster among magnitudes up to
/// [`SEPARATOR_CHAR_BOUND`], smallest magnitude first.
pub fn gclosed_separator(ys: &[NullSeq], delta: &Rat) -> Result<SeparatorSchedule> {
    if !delta.is_positive() {
        return Err(Error::Invalid("delta must be positive".to_string()));
    }
    let mut escapes = Vec::new();
    for (i, y) in ys.iter().enumerate() {
        for n in 1..=y.prefix_len() {
            let value = y.project(n).0;
            if ambient::norm(&value) > *delta {
                escapes.push(Escape { outer: i + 1, coordinate: n, value });
                break;
            }
        }
    }
    if escapes.is_empty() {
        return Err(Error::Invalid("no escaping coordinate at the given delta".to_string()));
    }

    // Greedy clustering at tolerance delta/4, standing in for the
    // compactness argument that would extract a convergent subsequence of
    // escaping values.
    let tolerance = delta / Rat::from_integer(BigInt::from(4));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (idx, escape) in escapes.iter().enumerate() {
        let mut placed = false;
        for cluster in clusters.iter_mut() {
            let representative = &escapes[cluster[0]].value;
            if ambient::rho(representative, &escape.value)? <= tolerance {
                cluster.push(idx);
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push(alloc::vec![idx]);
        }
    }
    let cluster = clusters
        .into_iter()
        .max_by_key(|c| c.len())
        .expect("at least one cluster exists");
    let cluster_values: Vec<GroupElement> =
        cluster.iter().map(|&i| escapes[i].value.clone()).collect();
    let cluster_value = cluster_values[0].clone();

    let component = separating_component(&cluster_values, SEPARATOR_CHAR_BOUND)?;

    let chars: Vec<SeparatorChar> = cluster
        .iter()
        .map(|&i| SeparatorChar {
            outer: escapes[i].outer,
            inner_position: escapes[i].coordinate,
            component: component.clone(),
        })
        .collect();

    let mut pairings = Vec::with_capacity(chars.len());
    let mut separation_bound: Option<Rat> = None;
    for chi in &chars {
        let value = chi.pair_with(ys)?;
        let distance = value.distance_to_zero();
        separation_bound = Some(match separation_bound {
            Some(current) => current.min(distance.clone()),
            None => distance.clone(),
        });
        pairings.push(value.angle().clone());
    }
    let separation_bound = separation_bound.expect("schedule is non-empty");
    if !separation_bound.is_positive() {
        return Err(Error::Invalid(
            "selected character pairs trivially with an escaping value; raise the search bound"
                .to_string(),
        ));
    }

    Ok(SeparatorSchedule {
        delta: delta.clone(),
        escapes,
        cluster,
        cluster_value,
        component,
        chars,
        pairings,
        separation_bound,
    })
}

/// Deviation profile of a separator schedule against one null test sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullCertificate {
    /// Arc distance from 0 of each scheduled pairing.
    pub deviations: Vec<Rat>,
    /// All deviations past this schedule index are exactly zero.
    pub vanish_after: usize,
}

impl SeparatorSchedule {
    /// Finite-scale certificate that the schedule pairs trivially in the
    /// limit with a null test sequence: the deviation per `chi_l` and the
    /// schedule index past which all deviations vanish exactly. For finitely
    /// supported test data this index exists as soon as the outer indices
    /// leave the support.
    pub fn certify_null(&self, test_sequence: &[NullSeq]) -> Result<NullCertificate> {
        let mut deviations = Vec::with_capacity(self.chars.len());
        for chi in &self.chars {
            let deviation = match test_sequence.get(chi.outer - 1) {
                Some(element) => {
                    let chi_inner = Character::new(
                        element.descriptor().clone(),
                        [(chi.inner_position, chi.component.clone())],
                    )?;
                    pair(&chi_inner, element)?.distance_to_zero()
                }
                // Outer indices beyond finitely supported test data hit the
                // zero element exactly.
                None => Rat::zero(),
            };
            deviations.push(deviation);
        }
        let vanish_after = deviations.iter().rposition(|d| !d.is_zero()).map(|i| i + 1).unwrap_or(0);
        Ok(NullCertificate { deviations, vanish_after })
    }
}

/// Selects the per-coordinate character with the best worst-case distance
/// from the trivial pairing over the given values, searching magnitudes
/// `1..=bound` (smallest winning magnitude is kept). For products, each
/// axis is searched and the best single-axis character wins.
fn separating_component(values: &[GroupElement], bound: i64) -> Result<CharComponent> {
    match &values[0] {
        GroupElement::Circle(_) => {
            let mut best: Option<(Rat, i64)> = None;
            for g in 1..=bound.max(1) {
                let candidate = CharComponent::Circle(g);
                let worst = worst_distance(&candidate, values)?;
                if best.as_ref().map(|(w, _)| worst > *w).unwrap_or(true) {
                    best = Some((worst, g));
                }
            }
            let (worst, g) = best.expect("bound >= 1");
            if worst.is_zero() {
                return Err(Error::Invalid(
                    "no circle character up to the bound separates the cluster".to_string(),
                ));
            }
            Ok(CharComponent::Circle(g))
        }
        GroupElement::Residue { order, .. } => {
            let mut best: Option<(Rat, u64)> = None;
            let top = order.saturating_sub(1).min(bound.unsigned_abs());
            for e in 1..=top {
                let candidate = CharComponent::FiniteCyclic { exponent: e, order: *order };
                let worst = worst_distance(&candidate, values)?;
                if best.as_ref().map(|(w, _)| worst > *w).unwrap_or(true) {
                    best = Some((worst, e));
                }
            }
            let (worst, e) = best.ok_or_else(|| {
                Error::Invalid("cyclic group of order 1 has no nontrivial character".to_string())
            })?;
            if worst.is_zero() {
                return Err(Error::Invalid(
                    "no cyclic character up to the bound separates the cluster".to_string(),
                ));
            }
            Ok(CharComponent::FiniteCyclic { exponent: e, order: *order })
        }
        GroupElement::Tuple(parts) => {
            let mut best: Option<(Rat, CharComponent)> = None;
            for axis in 0..parts.len() {
                let axis_values: Vec<GroupElement> = values
                    .iter()
                    .map(|v| match v {
                        GroupElement::Tuple(ps) => ps[axis].clone(),
                        _ => unreachable!("values share a descriptor"),
                    })
                    .collect();
                let Ok(axis_component) = separating_component(&axis_values, bound) else {
                    continue;
                };
                let mut tuple: Vec<CharComponent> =
                    parts.iter().map(|p| trivial_component(&p.descriptor())).collect();
                tuple[axis] = axis_component;
                let candidate = CharComponent::Tuple(tuple);
                let worst = worst_distance(&candidate, values)?;
                if best.as_ref().map(|(w, _)| worst > *w).unwrap_or(true) {
                    best = Some((worst, candidate));
                }
            }
            match best {
                Some((worst, candidate)) if worst.is_positive() => Ok(candidate),
                _ => Err(Error::Invalid(
                    "no single-axis character up to the bound separates the cluster".to_string(),
                )),
            }
        }
        GroupElement::Real(_) => Err(Error::Invalid(
            "separating characters are only built over compact descriptors".to_string(),
        )),
    }
}

fn trivial_component(descriptor: &GroupDescriptor) -> CharComponent {
    match descriptor {
        GroupDescriptor::Circle | GroupDescriptor::RealLine => CharComponent::Circle(0),
        GroupDescriptor::FiniteCyclic(order) => {
            CharComponent::FiniteCyclic { exponent: 0, order: *order }
        }
        GroupDescriptor::Product(parts) => {
            CharComponent::Tuple(parts.iter().map(trivial_component).collect())
        }
    }
}

fn worst_distance(component: &CharComponent, values: &[GroupElement]) -> Result<Rat> {
    let mut worst: Option<Rat> = None;
    for v in values {
        let d = PairingValue::from_angle(component.apply(v)?).distance_to_zero();
        worst = Some(match worst {
            Some(w) => w.min(d),
            None => d,
        });
    }
    Ok(worst.expect("cluster is non-empty"))
}
