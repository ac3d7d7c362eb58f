//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and enforcing its wall-clock budget. Every numeric assertion is an exact
//! rational comparison; the randomized runs are seeded and reproducible.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use nullseq_cli::schema::{
    self, ApproxFile, DichotomyFile, OrbitFile, SeparatorFile, TraceFile, WitnessFile,
};
use nullseq_cli::testdata;
use nullseq_core::ambient::{self, GroupDescriptor, GroupElement, Radius};
use nullseq_core::duality::{self, PairingValue};
use nullseq_core::monothetic::{
    self, ApproximationOutcome, BuildConfig, BuildOutcome, DensityEvidence, GeneratorTrace,
};
use nullseq_core::nullseq::{self, NullSeq};
use nullseq_core::rat::{rat, rat_int, Rat};
use nullseq_core::separation::{self, DichotomyResult, ExtractOutcome};

fn report(name: &str, detail: &str, elapsed: Duration, budget: Duration) {
    println!(
        "PASS {name}: {detail} ({:.2?} elapsed, budget {:.0?})",
        elapsed, budget
    );
    assert!(
        elapsed < budget,
        "{name} exceeded its time budget: {elapsed:.2?} >= {budget:.0?}"
    );
}

fn built_trace(stages: usize) -> GeneratorTrace {
    match monothetic::build_generator(stages, &BuildConfig::default()).unwrap() {
        BuildOutcome::Built(trace) => trace,
        other => panic!("generator construction failed: {other:?}"),
    }
}

/// Criterion 1: 10,000 randomized exact checks of the metric axioms,
/// invariance, pairing bilinearity, and embedding isometry.
#[test]
fn criterion_1_metric_pairing_algebra() {
    let start = Instant::now();
    let budget = Duration::from_secs(10);
    let mut rng = testdata::rng(101);
    let mut checks = 0usize;

    let random_point = |rng: &mut rand_chacha::ChaCha8Rng| -> GroupElement {
        match rng.gen_range(0..3) {
            0 => testdata::random_circle_point(rng, 300),
            1 => {
                let order = rng.gen_range(2..40u64);
                GroupElement::residue(rng.gen_range(0..order as i64), order)
            }
            _ => {
                let order = rng.gen_range(2..12u64);
                GroupElement::Tuple(vec![
                    testdata::random_circle_point(rng, 60),
                    GroupElement::residue(rng.gen_range(0..order as i64), order),
                ])
            }
        }
    };

    for _ in 0..2_500 {
        // metric axioms on three points of one random descriptor
        let a = random_point(&mut rng);
        let b = GroupElement::parse_value(&a.descriptor(), &random_point_value(&mut rng, &a))
            .unwrap();
        let c = GroupElement::parse_value(&a.descriptor(), &random_point_value(&mut rng, &a))
            .unwrap();
        let dab = ambient::rho(&a, &b).unwrap();
        assert_eq!(dab, ambient::rho(&b, &a).unwrap());
        assert_eq!(dab.numer().bits() == 0, a == b);
        assert!(ambient::rho(&a, &c).unwrap() <= &dab + ambient::rho(&b, &c).unwrap());
        checks += 1;

        // invariance under translation
        let ac = ambient::add(&a, &c).unwrap();
        let bc = ambient::add(&b, &c).unwrap();
        assert_eq!(ambient::rho(&ac, &bc).unwrap(), dab);
        checks += 1;

        // embedding isometry
        let position = rng.gen_range(1..=10);
        let embedded = nullseq::d(
            &NullSeq::nu_embed(position, a.clone()).unwrap(),
            &NullSeq::nu_embed(position, b.clone()).unwrap(),
        )
        .unwrap();
        assert!(embedded.is_point());
        assert_eq!(embedded.lo, dab);
        checks += 1;

        // pairing bilinearity over the circle
        let chi = testdata::random_character(&mut rng, 6, 5);
        let x = testdata::random_target(&mut rng, 6, 60);
        let y = testdata::random_target(&mut rng, 6, 60);
        let sum = nullseq::seq_add(&x, &y).unwrap();
        let lhs = duality::pair(&chi, &sum).unwrap();
        let rhs = PairingValue::from_angle(
            duality::pair(&chi, &x).unwrap().angle() + duality::pair(&chi, &y).unwrap().angle(),
        );
        assert_eq!(lhs, rhs);
        checks += 1;
    }

    assert_eq!(checks, 10_000);
    report(
        "criterion 1 (metric/pairing algebra)",
        "10000 randomized exact checks, zero failures",
        start.elapsed(),
        budget,
    );
}

fn random_point_value(rng: &mut rand_chacha::ChaCha8Rng, like: &GroupElement) -> String {
    // a second random point of the same descriptor, via the value grammar
    match like {
        GroupElement::Circle(_) => {
            let q = rng.gen_range(2..300i64);
            format!("{}/{}", rng.gen_range(0..q), q)
        }
        GroupElement::Residue { order, .. } => format!("{}", rng.gen_range(0..*order)),
        GroupElement::Tuple(parts) => {
            let inner: Vec<String> =
                parts.iter().map(|p| random_point_value(rng, p)).collect();
            format!("({})", inner.join(","))
        }
        GroupElement::Real(_) => {
            let q = rng.gen_range(1..60i64);
            format!("{}/{}", rng.gen_range(-300..300i64), q)
        }
    }
}

/// Criterion 2: the three-distance bound on 1000 random forward orbits.
#[test]
fn criterion_2_three_gap_invariant() {
    let start = Instant::now();
    let budget = Duration::from_secs(30);
    let mut rng = testdata::rng(202);
    for _ in 0..1_000 {
        let q = rng.gen_range(2..=10_000i64);
        let p = rng.gen_range(0..q);
        let n = rng.gen_range(1..=500i64);
        let z = GroupElement::circle(rat(p, q));
        let orbit = monothetic::forward_orbit_gaps(&z, &BigInt::from(n)).unwrap();
        let distinct = orbit.distinct_gap_values().len();
        assert!(
            distinct <= 3,
            "three-gap violated for z = {p}/{q}, n = {n}: {distinct} distinct gaps"
        );
    }
    report(
        "criterion 2 (three-gap invariant)",
        "1000 random orbits, gap multisets have <= 3 distinct values",
        start.elapsed(),
        budget,
    );
}

/// Criterion 3: the Schur-failure witness for t = 1/3 at horizon 50 against
/// the character family with support <= 20 and entries in [-5, 5].
#[test]
fn criterion_3_schur_failure_witness() {
    let start = Instant::now();
    let budget = Duration::from_secs(5);
    let t = GroupElement::circle(rat(1, 3));
    let horizon = 50;

    // The single-position characters generate every deviation profile:
    // pairing with an embedded sequence reads exactly one support entry.
    let family = testdata::singleton_char_family(20, 5);
    assert_eq!(family.len(), 200);
    let report_core = duality::schur_witness(&t, horizon, &family).unwrap();
    assert_eq!(report_core.separation, rat(1, 3));
    assert_eq!(report_core.vanish_after, 20);
    assert_eq!(report_core.pairs_checked, horizon * (horizon - 1) / 2);
    for cert in &report_core.char_certificates {
        for (n, _) in &cert.nonzero_pairings {
            assert!(*n <= 20, "pairing deviation survived past the support bound");
        }
    }

    // Spot-check the multi-support part of the family directly.
    let mut rng = testdata::rng(303);
    let sequence = report_core.embedded_sequence();
    for _ in 0..200 {
        let chi = testdata::random_character(&mut rng, 20, 5);
        for (i, x) in sequence.iter().enumerate() {
            let value = duality::pair(&chi, x).unwrap();
            if i + 1 > 20 {
                assert!(value.is_trivial(), "deviation at n = {} past support", i + 1);
            }
        }
    }

    // Pairwise distances are exactly 1/3 (re-checked from scratch).
    for (i, a) in sequence.iter().enumerate() {
        for b in &sequence[i + 1..] {
            assert_eq!(nullseq::d_exact(a, b).unwrap(), rat(1, 3));
        }
    }

    // A single certificate file that passes its own verifier.
    let artifact = WitnessFile::from_core(&report_core, &family, None);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    std::fs::write(&path, schema::to_json_string(&artifact).unwrap()).unwrap();
    let parsed: WitnessFile =
        schema::from_json_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    parsed.verify().unwrap();

    report(
        "criterion 3 (Schur-failure witness)",
        "pairings vanish exactly for n > 20; all pairwise distances exactly 1/3",
        start.elapsed(),
        budget,
    );
}

/// Criterion 4: the three-stage generator construction passes full
/// verification through the structural (product-grid) search path.
#[test]
fn criterion_4_generator_construction() {
    let start = Instant::now();
    let budget = Duration::from_secs(60);
    let trace = built_trace(3);
    assert_eq!(trace.depth(), 3);
    for stage in &trace.stages[1..] {
        assert!(
            matches!(stage.certificate.evidence, DensityEvidence::ProductGrid { .. }),
            "stage {} did not use the structural search path",
            stage.stage
        );
    }
    let verification = monothetic::verify_trace(&trace).unwrap();
    for check in &verification.checks {
        assert!(check.passed, "check {} failed: {}", check.name, check.detail);
    }
    report(
        "criterion 4 (generator construction)",
        &format!(
            "3 stages built and verified ({} checks), n_3 = {}",
            verification.checks.len(),
            trace.stages[2].multiple_bound
        ),
        start.elapsed(),
        budget,
    );
}

/// Criterion 5: certified approximation on 200 random targets, with the
/// distance bound recomputed independently of the search.
#[test]
fn criterion_5_step2_approximation() {
    let start = Instant::now();
    let budget = Duration::from_secs(30);
    let trace = built_trace(3);

    // Tolerances derived from the schedule: a depth-3 trace resolves targets
    // to 2*(1/2^3 + tail), so everything strictly above 1/4 is reachable.
    let epsilons = [rat(9, 32), rat(3, 8), rat(1, 2)];
    let mut rng = testdata::rng(505);
    let mut congruence_path = 0usize;
    for index in 0..200 {
        let x = testdata::random_target(&mut rng, 3, 50);
        let epsilon = &epsilons[index % epsilons.len()];
        match monothetic::approximate_target(&trace, &x, epsilon).unwrap() {
            ApproximationOutcome::Approximated(approx) => {
                // recompute the interval from scratch
                let scaled = nullseq::seq_scalar_mul(&approx.multiple, &trace.z_center);
                let fresh = nullseq::d(&x, &scaled).unwrap();
                assert!(
                    fresh.hi < *epsilon,
                    "target {index}: recomputed bound {} not below {epsilon}",
                    fresh.hi
                );
                assert_eq!(fresh, approx.distance);
                if approx.stage > 0 {
                    congruence_path += 1;
                    let stage = &trace.stages[approx.stage - 1];
                    assert!(
                        approx.multiple.magnitude() <= stage.multiple_bound.magnitude(),
                        "|k| exceeds the stage bound"
                    );
                }
            }
            other => panic!("target {index} not approximated: {other:?}"),
        }
    }
    assert!(
        congruence_path >= 50,
        "only {congruence_path}/200 targets exercised the congruence search"
    );
    report(
        "criterion 5 (certified approximation)",
        &format!("200 targets, zero failures, {congruence_path} through the stage grids"),
        start.elapsed(),
        budget,
    );
}

/// Criterion 6: both sides of the dichotomy with exact certificates.
#[test]
fn criterion_6_dichotomy_exclusivity() {
    let start = Instant::now();
    let budget = Duration::from_secs(5);

    // Discrete side: embedded halves at radius 1/2.
    let rows: Vec<NullSeq> = (1..=30)
        .map(|n| NullSeq::nu_embed(n, GroupElement::circle(rat(1, 2))).unwrap())
        .collect();
    let u = Radius::new(rat(1, 2)).unwrap();
    match separation::extract_uniformly_discrete(&rows, &u, 30).unwrap() {
        ExtractOutcome::Discrete { rows: found, .. } => {
            assert_eq!(found.len(), 30);
            for (i, a) in found.iter().enumerate() {
                for b in &found[i + 1..] {
                    assert_eq!(nullseq::d_exact(a, b).unwrap(), rat(1, 2));
                }
            }
        }
        other => panic!("extraction failed: {other:?}"),
    }
    match separation::dichotomy(&rows, &u, 10).unwrap() {
        DichotomyResult::DiscreteWitness { points, .. } => assert_eq!(points.len(), 11),
        other => panic!("expected a discrete witness, got {other:?}"),
    }

    // Cover side: the 1/200 grid at radius 1/10.
    let grid: Vec<GroupElement> =
        (0..200).map(|k| GroupElement::circle(rat(k, 200))).collect();
    let scale = Radius::new(rat(1, 10)).unwrap();
    match separation::dichotomy(&grid, &scale, 50).unwrap() {
        DichotomyResult::Cover { centers, .. } => {
            assert!(centers.len() <= 11, "cover used {} centers", centers.len());
            for point in &grid {
                assert!(
                    centers
                        .iter()
                        .any(|c| ambient::rho(point, c).unwrap() < rat(1, 10)),
                    "cover property failed at {point}"
                );
            }
        }
        other => panic!("expected a cover, got {other:?}"),
    }

    report(
        "criterion 6 (dichotomy exclusivity)",
        "30 rows pairwise exactly 1/2 -> discrete witness; 1/200 grid -> cover with <= 11 centers",
        start.elapsed(),
        budget,
    );
}

/// Criterion 7: the separating schedule for embedded thirds, certified both
/// against the non-null input and against 50 random null test sequences.
#[test]
fn criterion_7_gclosed_separator() {
    let start = Instant::now();
    let budget = Duration::from_secs(5);
    let ys: Vec<NullSeq> = (1..=30)
        .map(|n| NullSeq::nu_embed(n, GroupElement::circle(rat(1, 3))).unwrap())
        .collect();
    let schedule = duality::gclosed_separator(&ys, &rat(1, 4)).unwrap();

    // certificate (2): every scheduled pairing sits exactly 1/3 from 0
    assert!(!schedule.chars.is_empty());
    for chi in &schedule.chars {
        let value = chi.pair_with(&ys).unwrap();
        assert_eq!(value.distance_to_zero(), rat(1, 3));
    }
    assert_eq!(schedule.separation_bound, rat(1, 3));

    // certificate (1): deviations vanish past a finite index on null tests
    let mut rng = testdata::rng(707);
    for _ in 0..50 {
        let test = testdata::random_null_test(&mut rng, ys.len());
        let cert = schedule.certify_null(&test).unwrap();
        assert!(cert.vanish_after < schedule.chars.len());
        for deviation in &cert.deviations[cert.vanish_after..] {
            assert_eq!(deviation, &rat_int(0));
        }
    }

    report(
        "criterion 7 (separating schedule)",
        "pairing distance exactly 1/3 on every scheduled character; 50 null tests vanish",
        start.elapsed(),
        budget,
    );
}

/// Criterion 8: serialize -> parse -> re-serialize is byte-stable and the
/// stored certificate re-verifies, for every artifact type.
#[test]
fn criterion_8_certificate_round_trip() {
    let start = Instant::now();
    let budget = Duration::from_secs(5);
    let dir = tempfile::tempdir().unwrap();

    fn round_trip<T>(dir: &std::path::Path, name: &str, artifact: &T) -> T
    where
        T: serde::Serialize + for<'de> serde::Deserialize<'de>,
    {
        let first = schema::to_json_string(artifact).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, &first).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed: T = schema::from_json_str(&text).unwrap();
        let second = schema::to_json_string(&parsed).unwrap();
        assert_eq!(first, second, "{name} round trip is not byte-stable");
        parsed
    }

    // trace
    let trace = built_trace(2);
    let trace_file = TraceFile::from_core(&trace, None);
    let parsed = round_trip(dir.path(), "trace.json", &trace_file);
    assert!(monothetic::verify_trace(&parsed.to_core().unwrap()).unwrap().passed());

    // witness
    let family = testdata::singleton_char_family(10, 3);
    let witness =
        duality::schur_witness(&GroupElement::circle(rat(1, 3)), 20, &family).unwrap();
    let witness_file = WitnessFile::from_core(&witness, &family, None);
    round_trip(dir.path(), "witness.json", &witness_file).verify().unwrap();

    // dichotomy
    let grid: Vec<GroupElement> =
        (0..40).map(|k| GroupElement::circle(rat(k, 40))).collect();
    let scale = Radius::new(rat(1, 8)).unwrap();
    let verdict = separation::dichotomy(&grid, &scale, 20).unwrap();
    let dichotomy_file = DichotomyFile::from_core(&verdict, &grid, 20, &scale, None);
    round_trip(dir.path(), "dichotomy.json", &dichotomy_file).verify().unwrap();

    // separator
    let ys: Vec<NullSeq> = (1..=10)
        .map(|n| NullSeq::nu_embed(n, GroupElement::circle(rat(1, 3))).unwrap())
        .collect();
    let schedule = duality::gclosed_separator(&ys, &rat(1, 4)).unwrap();
    let mut rng = testdata::rng(808);
    let tests: Vec<_> = (0..5)
        .map(|_| schedule.certify_null(&testdata::random_null_test(&mut rng, ys.len())).unwrap())
        .collect();
    let separator_file = SeparatorFile::from_core(&schedule, &ys, &tests, None);
    round_trip(dir.path(), "separator.json", &separator_file).verify().unwrap();

    // approximation (needs a stage resolving 3/8, so depth 3)
    let deep_trace = built_trace(3);
    let target = NullSeq::nu_embed(1, GroupElement::circle(rat(2, 5))).unwrap();
    let approx = match monothetic::approximate_target(&deep_trace, &target, &rat(3, 8)).unwrap() {
        ApproximationOutcome::Approximated(a) => a,
        other => panic!("approximation failed: {other:?}"),
    };
    let approx_file =
        ApproxFile::from_core(&target, &rat(3, 8), &approx, &deep_trace.z_center, None);
    round_trip(dir.path(), "approx.json", &approx_file).verify().unwrap();

    // orbit
    let z = GroupElement::circle(rat(2, 7));
    let orbit = monothetic::orbit_gaps(&z, &BigInt::from(3)).unwrap();
    let orbit_file = OrbitFile::from_core(&z, &BigInt::from(3), false, &orbit, None);
    round_trip(dir.path(), "orbit.json", &orbit_file).verify().unwrap();

    report(
        "criterion 8 (certificate round-trip)",
        "6 artifact types byte-stable through serialize/parse and re-verified",
        start.elapsed(),
        budget,
    );
}
