//! Property-based invariants for the exact metric, sequence, and pairing
//! algebra, with brute-force oracles where the contract names one.

use num_bigint::BigInt;
use proptest::prelude::*;

use nullseq_core::ambient::{self, GroupDescriptor, GroupElement, Radius};
use nullseq_core::duality::{self, Character};
use nullseq_core::monothetic::{self, BuildConfig, BuildOutcome};
use nullseq_core::nullseq::{self, NullSeq};
use nullseq_core::rat::{rat, Rat};
use nullseq_core::separation;

fn circle_point() -> impl Strategy<Value = GroupElement> {
    (0i64..2000, 1i64..200).prop_map(|(p, q)| GroupElement::circle(rat(p, q)))
}

fn mixed_point() -> impl Strategy<Value = GroupElement> {
    prop_oneof![
        circle_point(),
        (0i64..97, 1u64..30).prop_map(|(v, n)| GroupElement::residue(v, n.max(1))),
        (-500i64..500, 1i64..60).prop_map(|(p, q)| GroupElement::real(rat(p, q))),
        (circle_point(), (0i64..50, 1u64..12)).prop_map(|(c, (v, n))| {
            GroupElement::Tuple(vec![c, GroupElement::residue(v, n.max(1))])
        }),
    ]
}

/// Two points guaranteed to share a descriptor.
fn matched_pair() -> impl Strategy<Value = (GroupElement, GroupElement)> {
    prop_oneof![
        (circle_point(), circle_point()),
        ((0i64..97, 0i64..97, 1u64..30)).prop_map(|(a, b, n)| {
            let n = n.max(1);
            (GroupElement::residue(a, n), GroupElement::residue(b, n))
        }),
        ((circle_point(), circle_point()), (0i64..50, 0i64..50, 1u64..12)).prop_map(
            |((c1, c2), (v1, v2, n))| {
                let n = n.max(1);
                (
                    GroupElement::Tuple(vec![c1, GroupElement::residue(v1, n)]),
                    GroupElement::Tuple(vec![c2, GroupElement::residue(v2, n)]),
                )
            }
        ),
    ]
}

fn matched_triple() -> impl Strategy<Value = (GroupElement, GroupElement, GroupElement)> {
    (matched_pair(), any::<u64>()).prop_map(|((a, b), salt)| {
        // derive a third point of the same descriptor by scaling
        let c = ambient::scalar_mul_i64((salt % 101) as i64, &a);
        let c = ambient::add(&c, &b).expect("same descriptor");
        (a, b, c)
    })
}

fn circle_seq(max_len: usize) -> impl Strategy<Value = NullSeq> {
    prop::collection::vec((0i64..120, 1i64..60), 0..=max_len).prop_map(|entries| {
        NullSeq::finitely_supported(
            GroupDescriptor::Circle,
            entries.into_iter().map(|(p, q)| GroupElement::circle(rat(p, q))).collect(),
        )
        .expect("all circle entries")
    })
}

fn circle_char(max_pos: usize) -> impl Strategy<Value = Character> {
    prop::collection::btree_map(1usize..=max_pos, -6i64..=6, 0..=4).prop_map(|support| {
        Character::new(
            GroupDescriptor::Circle,
            support
                .into_iter()
                .map(|(pos, g)| (pos, duality::CharComponent::Circle(g))),
        )
        .expect("circle components")
    })
}

proptest! {
    #[test]
    fn metric_axioms_and_invariance((a, b, c) in matched_triple()) {
        let dab = ambient::rho(&a, &b).unwrap();
        let dba = ambient::rho(&b, &a).unwrap();
        prop_assert_eq!(&dab, &dba);
        prop_assert_eq!(dab == Rat::from_integer(BigInt::from(0)), a == b);

        let dac = ambient::rho(&a, &c).unwrap();
        let dbc = ambient::rho(&b, &c).unwrap();
        prop_assert!(dac <= &dab + &dbc);

        // translation invariance
        let ac = ambient::add(&a, &c).unwrap();
        let bc = ambient::add(&b, &c).unwrap();
        prop_assert_eq!(ambient::rho(&ac, &bc).unwrap(), dab);
    }

    #[test]
    fn scalar_mul_matches_repeated_addition(a in mixed_point(), k in -50i64..=50) {
        let mut acc = a.descriptor().zero();
        let step = if k >= 0 { a.clone() } else { ambient::neg(&a) };
        for _ in 0..k.unsigned_abs() {
            acc = ambient::add(&acc, &step).unwrap();
        }
        prop_assert_eq!(ambient::scalar_mul_i64(k, &a), acc);
    }

    #[test]
    fn uniform_metric_equals_bruteforce_on_finite_supports(
        x in circle_seq(6),
        y in circle_seq(6),
    ) {
        let interval = nullseq::d(&x, &y).unwrap();
        prop_assert!(interval.is_point());
        let longest = x.prefix_len().max(y.prefix_len());
        let mut sup = Rat::from_integer(BigInt::from(0));
        for i in 1..=longest {
            let coord = ambient::rho(&x.project(i).0, &y.project(i).0).unwrap();
            if coord > sup {
                sup = coord;
            }
        }
        prop_assert_eq!(interval.lo, sup);
    }

    #[test]
    fn uniform_metric_is_invariant(
        x in circle_seq(5),
        y in circle_seq(5),
        z in circle_seq(5),
    ) {
        let base = nullseq::d(&x, &y).unwrap();
        let shifted = nullseq::d(
            &nullseq::seq_add(&x, &z).unwrap(),
            &nullseq::seq_add(&y, &z).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(base, shifted);
    }

    #[test]
    fn nu_embed_is_isometric((a, b) in matched_pair(), n in 1usize..12) {
        let rho = ambient::rho(&a, &b).unwrap();
        let d = nullseq::d(
            &NullSeq::nu_embed(n, a).unwrap(),
            &NullSeq::nu_embed(n, b).unwrap(),
        )
        .unwrap();
        prop_assert!(d.is_point());
        prop_assert_eq!(d.lo, rho);
    }

    #[test]
    fn projection_is_one_lipschitz(x in circle_seq(6), y in circle_seq(6), n in 1usize..10) {
        let d = nullseq::d(&x, &y).unwrap();
        let coord = ambient::rho(&x.project(n).0, &y.project(n).0).unwrap();
        prop_assert!(coord <= d.hi);
    }

    #[test]
    fn pairing_is_bilinear_in_both_arguments(
        chi1 in circle_char(8),
        chi2 in circle_char(8),
        x in circle_seq(8),
        y in circle_seq(8),
    ) {
        let sum = nullseq::seq_add(&x, &y).unwrap();
        let lhs = duality::pair(&chi1, &sum).unwrap();
        let rhs = duality::PairingValue::from_angle(
            duality::pair(&chi1, &x).unwrap().angle() + duality::pair(&chi1, &y).unwrap().angle(),
        );
        prop_assert_eq!(lhs, rhs);

        let chi = chi1.add(&chi2).unwrap();
        let lhs = duality::pair(&chi, &x).unwrap();
        let rhs = duality::PairingValue::from_angle(
            duality::pair(&chi1, &x).unwrap().angle() + duality::pair(&chi2, &x).unwrap().angle(),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_of_embedding_reads_one_support_entry(
        chi in circle_char(8),
        a in circle_point(),
        n in 1usize..=10,
    ) {
        let value = duality::pair(&chi, &NullSeq::nu_embed(n, a.clone()).unwrap()).unwrap();
        match chi.support().get(&n) {
            Some(component) => {
                prop_assert_eq!(value.angle(), &component.apply(&a).unwrap());
            }
            None => prop_assert!(value.is_trivial()),
        }
    }

    #[test]
    fn max_separated_is_separated_and_maximal(
        points in prop::collection::vec(circle_point(), 0..25),
        num in 1i64..10,
        den in 10i64..40,
    ) {
        let u = Radius::new(rat(num, den)).unwrap();
        let kept = separation::max_separated(&points, &u).unwrap();
        for (i, a) in kept.iter().enumerate() {
            for b in &kept[i + 1..] {
                prop_assert!(ambient::rho(a, b).unwrap() >= *u.value());
            }
        }
        prop_assert!(separation::verify_maximality(&points, &kept, &u).unwrap());
    }

    #[test]
    fn three_gap_bound_on_forward_orbits(p in 1i64..5000, q in 2i64..5000, n in 1i64..200) {
        let z = GroupElement::circle(rat(p, q));
        let orbit = monothetic::forward_orbit_gaps(&z, &BigInt::from(n)).unwrap();
        prop_assert!(orbit.distinct_gap_values().len() <= 3);
    }

    #[test]
    fn embedded_families_always_extract(
        t_num in 1i64..9,
        rows in 5usize..20,
    ) {
        // rho(t, 0) >= u guarantees extraction succeeds for any row count
        let t = GroupElement::circle(rat(t_num, 10));
        let u = Radius::new(ambient::norm(&t)).unwrap();
        let family: Vec<NullSeq> =
            (1..=rows).map(|n| NullSeq::nu_embed(n, t.clone()).unwrap()).collect();
        match separation::extract_uniformly_discrete(&family, &u, rows).unwrap() {
            separation::ExtractOutcome::Discrete { rows: found, .. } => {
                prop_assert_eq!(found.len(), rows);
            }
            other => prop_assert!(false, "extraction failed: {:?}", other),
        }
    }
}

#[test]
fn density_certificates_are_robust_over_box_corners() {
    // Stage certificates must keep their density at every corner of the box.
    let trace = match monothetic::build_generator(2, &BuildConfig::default()).unwrap() {
        BuildOutcome::Built(t) => t,
        other => panic!("build failed: {other:?}"),
    };
    for stage in &trace.stages {
        let radius = &stage.region.radius;
        let corners = 1usize << stage.region.centers.len();
        for mask in 0..corners {
            let shifted: Vec<Rat> = stage
                .region
                .centers
                .iter()
                .enumerate()
                .map(|(axis, c)| {
                    if mask & (1 << axis) != 0 {
                        c + radius
                    } else {
                        c - radius
                    }
                })
                .collect();
            let outcome = monothetic::joint_density(
                &shifted,
                &stage.multiple_bound,
                &stage.epsilon,
            )
            .unwrap();
            match outcome {
                monothetic::DensityOutcome::Certified(_) => {}
                monothetic::DensityOutcome::Refused(r) => {
                    // the corner point rarely has coprime denominators, so the
                    // mesh route may be the only one available; a refusal with
                    // an honest disproof would break robustness
                    assert!(!r.disproves, "corner disproved stage {}", stage.stage);
                    panic!("mesh route could not confirm corner of stage {}", stage.stage);
                }
            }
        }
    }
}

#[test]
fn refinement_tightens_the_schedule() {
    let trace = match monothetic::build_generator(3, &BuildConfig::default()).unwrap() {
        BuildOutcome::Built(t) => t,
        other => panic!("build failed: {other:?}"),
    };
    for pair in trace.stages.windows(2) {
        assert!(pair[1].epsilon < pair[0].epsilon);
        assert!(pair[1].multiple_bound > pair[0].multiple_bound);
    }
}
