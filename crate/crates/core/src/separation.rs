//! Witnesses for the precompact / uniformly-discrete dichotomy.
//!
//! At a fixed scale `u` a finite point family either admits a small covering
//! by `u`-balls or contains many points pairwise at least `u/2` apart; both
//! outcomes come with exactly checkable certificates. The scale-`u/2`
//! separated subset plays the role of a symmetric neighborhood `V` with
//! `V + V` inside the `u`-ball, which the triangle inequality provides once
//! radii are halved.
//!
//! The infinite-set dichotomy is an exact alternative; at finite scale a
//! failure to find a discrete subset is evidence of precompactness, not a
//! proof, and the result types say which side was certified.

use alloc::vec::Vec;

use crate::ambient::{self, GroupElement, Radius};
use crate::nullseq::{self, NullSeq};
use crate::rat::Rat;
use crate::{Error, Result};

/// Point types with an exactly computable metric.
///
/// For [`GroupElement`] this is the invariant metric `rho`; for [`NullSeq`]
/// it is the uniform metric, which is exact only for finitely supported
/// sequences (nonzero tail bounds yield [`Error::InexactDistance`]).
pub trait ExactDistance: Clone {
    fn exact_distance(&self, other: &Self) -> Result<Rat>;
}

impl ExactDistance for GroupElement {
    fn exact_distance(&self, other: &Self) -> Result<Rat> {
        ambient::rho(self, other)
    }
}

impl ExactDistance for NullSeq {
    fn exact_distance(&self, other: &Self) -> Result<Rat> {
        nullseq::d_exact(self, other)
    }
}

/// Maximal (under inclusion) `u`-separated subset of `points`, greedy in
/// input order: a point is kept iff its distance to every kept point is at
/// least `u`. Every omitted point is strictly within `u` of some kept point,
/// which is exactly the maximality certificate.
pub fn max_separated<P: ExactDistance>(points: &[P], u: &Radius) -> Result<Vec<P>> {
    let mut kept: Vec<P> = Vec::new();
    for p in points {
        let mut separated = true;
        for q in &kept {
            if p.exact_distance(q)? < *u.value() {
                separated = false;
                break;
            }
        }
        if separated {
            kept.push(p.clone());
        }
    }
    Ok(kept)
}

/// Outcome of the finite-scale dichotomy at radius `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DichotomyResult<P> {
    /// Every input point lies strictly within `radius` of some center.
    Cover {
        centers: Vec<P>,
        radius: Radius,
        /// Number of point-center distance comparisons certified.
        checked_pairs: usize,
    },
    /// More than the caller's threshold of points pairwise `separation` apart.
    DiscreteWitness {
        points: Vec<P>,
        separation: Radius,
        checked_pairs: usize,
    },
}

/// Finite-scale dichotomy. The half-radius balls around a maximal family of
/// points pairwise `>= u` apart are disjoint, so the family is the proof's
/// maximal `(u/2)`-ball-separated subset `F`. A small `F`
/// (`|F| <= threshold`) covers the input by `u`-balls, certified exactly;
/// otherwise `threshold + 1` members of `F` witness uniform discreteness,
/// reported with the disjoint-ball radius `u/2`.
pub fn dichotomy<P: ExactDistance>(
    points: &[P],
    u: &Radius,
    threshold: usize,
) -> Result<DichotomyResult<P>> {
    let separated = max_separated(points, u)?;
    if separated.len() <= threshold {
        // Maximality puts every omitted point strictly within u of a kept
        // one; re-check the full cover property exactly.
        let mut checked = 0usize;
        for p in points {
            let mut covered = false;
            for c in &separated {
                checked += 1;
                if p.exact_distance(c)? < *u.value() {
                    covered = true;
                    break;
                }
            }
            if !covered {
                return Err(Error::Invalid(alloc::string::String::from(
                    "cover certificate failed; maximal separated subset was not maximal",
                )));
            }
        }
        Ok(DichotomyResult::Cover { centers: separated, radius: u.clone(), checked_pairs: checked })
    } else {
        let half = u.half();
        let witness: Vec<P> = separated.into_iter().take(threshold + 1).collect();
        let mut checked = 0usize;
        for (i, p) in witness.iter().enumerate() {
            for q in &witness[i + 1..] {
                checked += 1;
                if p.exact_distance(q)? < *half.value() {
                    return Err(Error::Invalid(alloc::string::String::from(
                        "separation certificate failed for greedy subset",
                    )));
                }
            }
        }
        Ok(DichotomyResult::DiscreteWitness { points: witness, separation: half, checked_pairs: checked })
    }
}

/// One step of the uniformly-discrete extraction: which row escaped at which
/// coordinate, and the first index past which that row stays inside the
/// half-radius ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeStep {
    /// 1-based coordinate where the row leaves the `u`-ball.
    pub coordinate: usize,
    /// Index of the escaping row in the input slice.
    pub row: usize,
    /// Coordinates from here on stay inside the half-radius ball.
    pub settled_from: usize,
}

/// Outcome of [`extract_uniformly_discrete`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtractOutcome {
    /// Rows pairwise at least `separation` apart in the uniform metric.
    Discrete {
        rows: Vec<NullSeq>,
        separation: Radius,
        steps: Vec<EscapeStep>,
    },
    /// No escaping coordinate found past the scan horizon: on the given
    /// finite data the per-coordinate images form a null sequence at scale
    /// `u`. Finite evidence only.
    NullAtScale { horizon: usize },
}

/// Builds a uniformly discrete subfamily by induction: find a coordinate
/// where some row leaves the `u`-ball, note where that row settles back into
/// the half-radius ball, and continue scanning past that point. Any two
/// selected rows differ by at least `u/2` at the later row's escape
/// coordinate (the earlier row has already settled there).
///
/// Rows must be finitely supported so every comparison is exact.
pub fn extract_uniformly_discrete(
    rows: &[NullSeq],
    u: &Radius,
    want: usize,
) -> Result<ExtractOutcome> {
    for row in rows {
        if !row.is_finitely_supported() {
            return Err(Error::InexactDistance);
        }
    }
    let horizon = rows.iter().map(NullSeq::prefix_len).max().unwrap_or(0);
    let half = u.half();
    let mut steps: Vec<EscapeStep> = Vec::new();
    let mut selected: Vec<usize> = Vec::new();
    let mut scan_from = 1usize;

    while selected.len() < want && scan_from <= horizon {
        let mut found = None;
        'coords: for n in scan_from..=horizon {
            for (idx, row) in rows.iter().enumerate() {
                let coord_norm = ambient::norm(&row.project(n).0);
                if coord_norm >= *u.value() {
                    found = Some((n, idx));
                    break 'coords;
                }
            }
        }
        let Some((coordinate, row_idx)) = found else {
            break;
        };
        let row = &rows[row_idx];
        // First index past the escape where the row stays inside the
        // half-radius ball for good. Finitely supported rows always settle.
        let mut settled_from = row.prefix_len() + 1;
        while settled_from > coordinate + 1 {
            let prev = ambient::norm(&row.project(settled_from - 1).0);
            if prev < *half.value() {
                settled_from -= 1;
            } else {
                break;
            }
        }
        selected.push(row_idx);
        steps.push(EscapeStep { coordinate, row: row_idx, settled_from });
        scan_from = settled_from;
    }

    if selected.len() < want {
        return Ok(ExtractOutcome::NullAtScale { horizon });
    }

    let chosen: Vec<NullSeq> = selected.iter().map(|&i| rows[i].clone()).collect();
    for (i, a) in chosen.iter().enumerate() {
        for b in &chosen[i + 1..] {
            if nullseq::d_exact(a, b)? < *half.value() {
                return Err(Error::Invalid(alloc::string::String::from(
                    "extracted rows are not half-radius separated",
                )));
            }
        }
    }
    Ok(ExtractOutcome::Discrete { rows: chosen, separation: half, steps })
}

/// Least 1-based index `N` such that every listed set from `N` on lies inside
/// the open ball of radius `u` around 0; `None` when the last listed set
/// still violates the bound (finite evidence cannot certify a later `N`).
pub fn is_null_sequence_of_sets(sets: &[Vec<GroupElement>], u: &Radius) -> Option<usize> {
    let mut last_violation = 0usize;
    for (i, set) in sets.iter().enumerate() {
        if set.iter().any(|p| ambient::norm(p) >= *u.value()) {
            last_violation = i + 1;
        }
    }
    if last_violation == sets.len() && !sets.is_empty() {
        None
    } else {
        Some(last_violation + 1)
    }
}

/// Verdict of the per-coordinate compactness criterion for a closed box in
/// `c0(X)` described by its exact coordinate images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompactnessVerdict {
    /// The coordinate images enter every scheduled ball eventually; the
    /// entry index for each scheduled radius is recorded.
    CompactBox { entry_indices: Vec<usize> },
    /// Some scheduled radius is violated by the final coordinate image.
    NotCompact { failing_radius: Radius },
}

/// Finite-scale certificate that the coordinate images `pi_n(K)` form a
/// null sequence of sets: checks [`is_null_sequence_of_sets`] at every
/// scheduled radius.
pub fn compactness_check(
    per_coordinate: &[Vec<GroupElement>],
    radius_schedule: &[Radius],
) -> CompactnessVerdict {
    let mut entry_indices = Vec::with_capacity(radius_schedule.len());
    for u in radius_schedule {
        match is_null_sequence_of_sets(per_coordinate, u) {
            Some(n) => entry_indices.push(n),
            None => return CompactnessVerdict::NotCompact { failing_radius: u.clone() },
        }
    }
    CompactnessVerdict::CompactBox { entry_indices }
}

/// Exhaustive maximality check used by tests and certificate verifiers: every
/// omitted input point must be strictly within `u` of some kept point.
pub fn verify_maximality<P: ExactDistance + PartialEq>(
    all: &[P],
    kept: &[P],
    u: &Radius,
) -> Result<bool> {
    for p in all {
        if kept.iter().any(|k| k == p) {
            continue;
        }
        let mut near = false;
        for k in kept {
            if p.exact_distance(k)? < *u.value() {
                near = true;
                break;
            }
        }
        if !near {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::GroupDescriptor;
    use crate::rat::rat;

    fn t(p: i64, q: i64) -> GroupElement {
        GroupElement::circle(rat(p, q))
    }

    fn radius(p: i64, q: i64) -> Radius {
        Radius::new(rat(p, q)).unwrap()
    }

    #[test]
    fn max_separated_matches_greedy_oracle() {
        let points = [t(0, 1), t(1, 10), t(1, 5), t(1, 2)];
        let kept = max_separated(&points, &radius(3, 20)).unwrap();
        assert_eq!(kept, alloc::vec![t(0, 1), t(1, 5), t(1, 2)]);
        assert!(verify_maximality(&points, &kept, &radius(3, 20)).unwrap());
    }

    #[test]
    fn max_separated_trivial_inputs() {
        let empty: [GroupElement; 0] = [];
        assert!(max_separated(&empty, &radius(1, 2)).unwrap().is_empty());
        let single = [t(1, 3)];
        assert_eq!(max_separated(&single, &radius(1, 2)).unwrap(), alloc::vec![t(1, 3)]);
    }

    #[test]
    fn dichotomy_covers_fine_grid() {
        let points: Vec<GroupElement> = (0..200).map(|k| t(k, 200)).collect();
        match dichotomy(&points, &radius(1, 10), 50).unwrap() {
            DichotomyResult::Cover { centers, radius: r, .. } => {
                assert_eq!(centers.len(), 10);
                assert_eq!(r, radius(1, 10));
                for p in &points {
                    assert!(centers.iter().any(|c| ambient::rho(p, c).unwrap() < rat(1, 10)));
                }
            }
            other => panic!("expected cover, got {other:?}"),
        }
    }

    #[test]
    fn dichotomy_finds_discrete_witness_in_c0() {
        let rows: Vec<NullSeq> = (1..=20).map(|n| NullSeq::nu_embed(n, t(1, 3)).unwrap()).collect();
        match dichotomy(&rows, &radius(1, 3), 10).unwrap() {
            DichotomyResult::DiscreteWitness { points, separation, .. } => {
                assert_eq!(points.len(), 11);
                assert_eq!(separation, radius(1, 6));
                for (i, a) in points.iter().enumerate() {
                    for b in &points[i + 1..] {
                        assert_eq!(nullseq::d_exact(a, b).unwrap(), rat(1, 3));
                    }
                }
            }
            other => panic!("expected discrete witness, got {other:?}"),
        }
    }

    #[test]
    fn dichotomy_single_point_is_cover() {
        let points = [t(1, 7)];
        match dichotomy(&points, &radius(1, 5), 3).unwrap() {
            DichotomyResult::Cover { centers, .. } => assert_eq!(centers.len(), 1),
            other => panic!("expected cover, got {other:?}"),
        }
    }

    #[test]
    fn extract_builds_discrete_rows_from_embeddings() {
        let rows: Vec<NullSeq> = (1..=10).map(|n| NullSeq::nu_embed(n, t(1, 2)).unwrap()).collect();
        match extract_uniformly_discrete(&rows, &radius(1, 2), 5).unwrap() {
            ExtractOutcome::Discrete { rows: chosen, separation, steps } => {
                assert_eq!(chosen.len(), 5);
                assert_eq!(separation, radius(1, 4));
                assert_eq!(steps.len(), 5);
                for (i, a) in chosen.iter().enumerate() {
                    for b in &chosen[i + 1..] {
                        assert_eq!(nullseq::d_exact(a, b).unwrap(), rat(1, 2));
                    }
                }
            }
            other => panic!("expected discrete rows, got {other:?}"),
        }
    }

    #[test]
    fn extract_fails_on_all_zero_rows() {
        let rows = alloc::vec![NullSeq::zero(GroupDescriptor::Circle); 4];
        assert_eq!(
            extract_uniformly_discrete(&rows, &radius(1, 2), 1).unwrap(),
            ExtractOutcome::NullAtScale { horizon: 0 }
        );
    }

    #[test]
    fn extract_fails_when_not_enough_rows_escape() {
        let rows = alloc::vec![NullSeq::nu_embed(1, t(1, 2)).unwrap()];
        assert_eq!(
            extract_uniformly_discrete(&rows, &radius(1, 2), 2).unwrap(),
            ExtractOutcome::NullAtScale { horizon: 1 }
        );
    }

    #[test]
    fn null_sequence_of_sets_scan() {
        // sets_n = {1/(n+2)}: first inside the 1/5-ball at n = 4.
        let sets: Vec<Vec<GroupElement>> = (1..=10).map(|n| alloc::vec![t(1, n + 2)]).collect();
        assert_eq!(is_null_sequence_of_sets(&sets, &radius(1, 5)), Some(4));

        let zeros: Vec<Vec<GroupElement>> = (0..5).map(|_| alloc::vec![t(0, 1)]).collect();
        assert_eq!(is_null_sequence_of_sets(&zeros, &radius(1, 5)), Some(1));

        let constant: Vec<Vec<GroupElement>> = (0..5).map(|_| alloc::vec![t(1, 3)]).collect();
        assert_eq!(is_null_sequence_of_sets(&constant, &radius(1, 4)), None);
    }

    #[test]
    fn compactness_check_shrinking_boxes() {
        // per_coordinate[n] = {0, 1/2^n}, n = 1..=12
        let per_coordinate: Vec<Vec<GroupElement>> =
            (1..=12).map(|n| alloc::vec![t(0, 1), t(1, 1 << n)]).collect();
        let schedule = [radius(1, 2), radius(1, 4), radius(1, 8)];
        assert_eq!(
            compactness_check(&per_coordinate, &schedule),
            CompactnessVerdict::CompactBox { entry_indices: alloc::vec![2, 3, 4] }
        );

        let constant: Vec<Vec<GroupElement>> = (0..6).map(|_| alloc::vec![t(0, 1), t(1, 3)]).collect();
        assert_eq!(
            compactness_check(&constant, &[radius(1, 4)]),
            CompactnessVerdict::NotCompact { failing_radius: radius(1, 4) }
        );

        let singletons: Vec<Vec<GroupElement>> = (0..6).map(|_| alloc::vec![t(0, 1)]).collect();
        assert!(matches!(
            compactness_check(&singletons, &schedule),
            CompactnessVerdict::CompactBox { .. }
        ));
    }

    #[test]
    fn mutual_exclusion_at_fixed_scale() {
        // If extraction succeeds with `want` rows at radius u, dichotomy with
        // a smaller threshold at radius u/2 must return a discrete witness.
        let rows: Vec<NullSeq> = (1..=12).map(|n| NullSeq::nu_embed(n, t(2, 5)).unwrap()).collect();
        let u = radius(2, 5);
        let outcome = extract_uniformly_discrete(&rows, &u, 12).unwrap();
        assert!(matches!(outcome, ExtractOutcome::Discrete { .. }));
        match dichotomy(&rows, &u.half(), 11).unwrap() {
            DichotomyResult::DiscreteWitness { .. } => {}
            other => panic!("expected discrete witness, got {other:?}"),
        }
    }
}
