//! Certified construction of a topological generator for `c0(T)`.
//!
//! The construction is staged. Stage `m` produces a multiple bound `n_m`, a
//! closed rational box in `T^m`, and an exact certificate that the symmetric
//! multiple set `F_{n_m}(z) = {kz : |k| <= n_m}` of the box center is
//! `eps_m`-dense in `T^m` for the schedule tolerance
//! `eps_m = 1/(2^m n_{m-1})`, with enough slack that the same density holds
//! for every point of the box. Boxes are nested coordinatewise, the new
//! coordinate of each stage is confined near 0 at the schedule scale, and
//! the multiple bounds strictly increase. The boxes stand in for the
//! positive-measure compact sets of the classical argument: a nonempty box
//! with a robust margin preserves every inequality the approximation step
//! uses, while staying exactly checkable.
//!
//! The trace certifies per-stage density, never that the ideal limit point
//! is itself a topological generator: the centers-plus-radii output is
//! exactly what the multiple-finder [`approximate_target`] consumes.
//!
//! Density certificates come in three kinds: exact orbit-gap enumeration on
//! the circle, full product-grid coverage for centers with pairwise coprime
//! coordinate denominators (the symmetric multiples then sweep the whole
//! grid, which makes joint density exactly enumerable without enumerating
//! it), and a finite mesh check as the general fallback and test oracle.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ambient::{GroupDescriptor, GroupElement};
use crate::nullseq::{self, Interval, NullSeq};
use crate::rat::{arc_distance, mod1, Rat};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Orbit gaps on the circle
// ---------------------------------------------------------------------------

/// Sorted multiples of a circle point over a symmetric or one-sided range,
/// with the circular gap structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitGaps {
    /// Distinct multiples `kz mod 1`, sorted, in `[0, 1)`.
    pub multiples: Vec<Rat>,
    /// Circular gaps between consecutive multiples (the last entry wraps
    /// around); a single multiple has the whole circle as its gap.
    pub gaps: Vec<Rat>,
    /// Largest circular gap.
    pub max_gap: Rat,
}

impl OrbitGaps {
    /// The distinct gap lengths, sorted. The three-distance theorem bounds
    /// the size of this set by 3 for ranges starting at 0.
    pub fn distinct_gap_values(&self) -> Vec<Rat> {
        let mut values = self.gaps.clone();
        values.sort();
        values.dedup();
        values
    }
}

fn circle_value(z: &GroupElement) -> Result<&Rat> {
    match z {
        GroupElement::Circle(r) => Ok(r),
        _ => Err(Error::Invalid("orbit gaps are defined for circle elements".to_string())),
    }
}

/// Gap structure of `{kz mod 1 : k_lo <= k <= k_hi}`, exact.
pub fn orbit_gaps_range(z: &GroupElement, k_lo: &BigInt, k_hi: &BigInt) -> Result<OrbitGaps> {
    let r = circle_value(z)?;
    if k_lo > k_hi {
        return Err(Error::Invalid("empty multiple range".to_string()));
    }
    let p = r.numer();
    let q = r.denom();
    let count = k_hi - k_lo + 1u32;

    // All multiples live on the grid {j/q}; a window of q consecutive k
    // already sweeps the whole grid because p and q are coprime.
    let residues: Vec<BigInt> = if &count >= q {
        let mut j = BigInt::zero();
        let mut all = Vec::new();
        while &j < q {
            all.push(j.clone());
            j += 1u32;
        }
        all
    } else {
        let steps = count.to_usize().ok_or_else(|| {
            Error::Invalid("multiple range too large to enumerate".to_string())
        })?;
        let mut current = (k_lo * p).mod_floor(q);
        let mut all = Vec::with_capacity(steps);
        for _ in 0..steps {
            all.push(current.clone());
            current += p;
            if &current >= q {
                current -= q;
            }
        }
        all.sort();
        all.dedup();
        all
    };

    let multiples: Vec<Rat> =
        residues.iter().map(|j| Rat::new(j.clone(), q.clone())).collect();
    let mut gaps = Vec::with_capacity(residues.len());
    if residues.len() == 1 {
        gaps.push(Rat::one());
    } else {
        for w in residues.windows(2) {
            gaps.push(Rat::new(&w[1] - &w[0], q.clone()));
        }
        gaps.push(Rat::new(q - residues.last().unwrap() + &residues[0], q.clone()));
    }
    let max_gap = gaps.iter().max().cloned().expect("at least one gap");
    Ok(OrbitGaps { multiples, gaps, max_gap })
}

/// Gap structure of the symmetric multiple set `F_n(z) = {kz : |k| <= n}`.
pub fn orbit_gaps(z: &GroupElement, n: &BigInt) -> Result<OrbitGaps> {
    if n < &BigInt::one() {
        return Err(Error::Invalid("multiple bound must be >= 1".to_string()));
    }
    orbit_gaps_range(z, &(-n.clone()), n)
}

/// Gap structure of the one-sided orbit `{kz : 0 <= k <= n}`.
pub fn forward_orbit_gaps(z: &GroupElement, n: &BigInt) -> Result<OrbitGaps> {
    orbit_gaps_range(z, &BigInt::zero(), n)
}

/// Membership certificate for the open density region: `F_n(z)` is
/// `1/m`-dense in the circle iff the largest circular gap is `< 2/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InBallCertificate {
    pub holds: bool,
    /// The density threshold `2/m` the gap was compared against.
    pub threshold: Rat,
    pub orbit: OrbitGaps,
}

/// Decides `z in B(U_m, n)` exactly, embedding the orbit enumeration.
pub fn in_b(z: &GroupElement, m: u64, n: &BigInt) -> Result<InBallCertificate> {
    if m < 1 {
        return Err(Error::Invalid("density scale must be >= 1".to_string()));
    }
    let orbit = orbit_gaps(z, n)?;
    let threshold = Rat::new(BigInt::from(2), BigInt::from(m));
    let holds = orbit.max_gap < threshold;
    Ok(InBallCertificate { holds, threshold, orbit })
}

// ---------------------------------------------------------------------------
// Joint density certificates on T^m
// ---------------------------------------------------------------------------

/// Evidence backing a density certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityEvidence {
    /// Exact orbit enumeration on the circle (`m = 1`).
    Orbit { points: usize },
    /// The coordinate denominators are pairwise coprime and `2n + 1` covers
    /// their product, so the symmetric multiples sweep the full product grid;
    /// the per-axis gap is the reciprocal denominator.
    ProductGrid { denominators: Vec<BigInt> },
    /// Finite mesh check: every mesh point lies within `epsilon/2` of some
    /// multiple, hence every point lies within `epsilon/2 + mesh/2 < epsilon`.
    GridCheck { mesh: Rat, grid_points: usize, worst: Rat },
}

/// Exact certificate that `F_n(z)` is `epsilon`-dense in `T^m` under the
/// max metric. `max_gap` is twice the certified covering radius, so the
/// robust form `max_gap + 2 n r < 2 epsilon` certifies density for every
/// point within per-coordinate distance `r` of `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityCertificate {
    /// Circle representatives of the certified center.
    pub point: Vec<Rat>,
    /// Symmetric multiple bound `n`.
    pub multiple_bound: BigInt,
    pub epsilon: Rat,
    /// Twice the certified covering radius.
    pub max_gap: Rat,
    pub evidence: DensityEvidence,
}

impl DensityCertificate {
    /// The density inequality itself: covering radius strictly below epsilon.
    pub fn is_dense(&self) -> bool {
        self.max_gap < Rat::from_integer(BigInt::from(2)) * &self.epsilon
    }

    /// Robust margin: largest per-coordinate box radius `r` such that
    /// `max_gap + 2 n r < 2 epsilon` stays strict (None when the plain
    /// certificate already fails).
    pub fn robust_radius_bound(&self) -> Option<Rat> {
        let two = Rat::from_integer(BigInt::from(2));
        let slack = &two * &self.epsilon - &self.max_gap;
        if slack.is_positive() {
            Some(slack / (&two * Rat::from_integer(self.multiple_bound.clone())))
        } else {
            None
        }
    }
}

/// Refusal to certify density, with an exact witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRefusal {
    /// The point found to be far from every multiple.
    pub witness: Vec<Rat>,
    /// Exact distance (orbit and product-grid routes) or certified lower
    /// route failure distance (mesh route) from the witness to the orbit.
    pub distance: Rat,
    /// `true` when the witness genuinely disproves `epsilon`-density (orbit
    /// and product-grid routes); the mesh route only reports a failed check.
    pub disproves: bool,
}

/// Outcome of a density query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityOutcome {
    Certified(DensityCertificate),
    Refused(DensityRefusal),
}

impl DensityOutcome {
    pub fn certificate(&self) -> Option<&DensityCertificate> {
        match self {
            DensityOutcome::Certified(c) => Some(c),
            DensityOutcome::Refused(_) => None,
        }
    }
}

/// Largest mesh-side count tolerated by the fallback grid check.
const GRID_CHECK_LIMIT: usize = 1 << 22;

/// Decides `epsilon`-density of `F_n(z)` in `T^m` (max metric). For `m = 1`
/// this is the exact orbit-gap criterion. For `m >= 2` the product-grid
/// route applies whenever the reduced coordinate denominators are pairwise
/// coprime and `2n + 1` reaches their product; otherwise a mesh of spacing
/// `<= epsilon/2` is checked exhaustively, which is sound by the triangle
/// inequality and doubles as the independent oracle for the structural
/// route.
pub fn joint_density(z: &[Rat], n: &BigInt, epsilon: &Rat) -> Result<DensityOutcome> {
    if z.is_empty() {
        return Err(Error::Invalid("density needs at least one coordinate".to_string()));
    }
    if n < &BigInt::one() {
        return Err(Error::Invalid("multiple bound must be >= 1".to_string()));
    }
    if !epsilon.is_positive() {
        return Err(Error::Invalid("epsilon must be positive".to_string()));
    }
    let z: Vec<Rat> = z.iter().map(mod1).collect();
    let two = Rat::from_integer(BigInt::from(2));

    if z.len() == 1 {
        let orbit = orbit_gaps(&GroupElement::Circle(z[0].clone()), n)?;
        let max_gap = orbit.max_gap.clone();
        if max_gap < &two * epsilon {
            return Ok(DensityOutcome::Certified(DensityCertificate {
                point: z,
                multiple_bound: n.clone(),
                epsilon: epsilon.clone(),
                max_gap,
                evidence: DensityEvidence::Orbit { points: orbit.multiples.len() },
            }));
        }
        // midpoint of the widest gap is exactly max_gap/2 from the orbit
        let gap_index = orbit.gaps.iter().position(|g| *g == orbit.max_gap).unwrap();
        let left = &orbit.multiples[gap_index];
        let witness = mod1(&(left + &orbit.max_gap / &two));
        return Ok(DensityOutcome::Refused(DensityRefusal {
            witness: alloc::vec![witness],
            distance: orbit.max_gap / &two,
            disproves: true,
        }));
    }

    if let Some(outcome) = product_grid_density(&z, n, epsilon)? {
        return Ok(outcome);
    }
    mesh_density(&z, n, epsilon)
}

/// Structural route: full product-grid coverage via coprime denominators.
fn product_grid_density(z: &[Rat], n: &BigInt, epsilon: &Rat) -> Result<Option<DensityOutcome>> {
    let denominators: Vec<BigInt> = z.iter().map(|r| r.denom().clone()).collect();
    for (i, qi) in denominators.iter().enumerate() {
        for qj in &denominators[i + 1..] {
            if qi.gcd(qj) != BigInt::one() {
                return Ok(None);
            }
        }
    }
    let product: BigInt = denominators.iter().product();
    if BigInt::from(2) * n + 1u32 < product {
        return Ok(None);
    }
    // The multiples sweep the full grid, so the covering radius in the max
    // metric is half the coarsest axis spacing.
    let q_min = denominators.iter().min().expect("non-empty").clone();
    let max_gap = Rat::new(BigInt::one(), q_min);
    let two = Rat::from_integer(BigInt::from(2));
    if max_gap < &two * epsilon {
        return Ok(Some(DensityOutcome::Certified(DensityCertificate {
            point: z.to_vec(),
            multiple_bound: n.clone(),
            epsilon: epsilon.clone(),
            max_gap,
            evidence: DensityEvidence::ProductGrid { denominators },
        })));
    }
    // Witness: push the center half a cell along every axis; its distance to
    // the grid (= the full orbit) is exactly the covering radius.
    let witness: Vec<Rat> = z
        .iter()
        .zip(&denominators)
        .map(|(zi, qi)| mod1(&(zi + Rat::new(BigInt::one(), BigInt::from(2) * qi))))
        .collect();
    Ok(Some(DensityOutcome::Refused(DensityRefusal {
        witness,
        distance: max_gap / two,
        disproves: true,
    })))
}

/// Fallback route: exhaustive mesh check at spacing `<= epsilon/2`.
fn mesh_density(z: &[Rat], n: &BigInt, epsilon: &Rat) -> Result<DensityOutcome> {
    let m = z.len();
    let two = Rat::from_integer(BigInt::from(2));
    // side >= 2/epsilon so the mesh spacing 1/side is <= epsilon/2
    let side_big = (&two / epsilon).ceil().to_integer();
    let side = side_big
        .to_usize()
        .filter(|s| m.checked_pow(0).is_some() && s.checked_pow(m as u32).map_or(false, |t| t <= GRID_CHECK_LIMIT))
        .ok_or_else(|| Error::Invalid("mesh check too large; use a structural certificate".to_string()))?;
    let orbit_len_big = BigInt::from(2) * n + 1u32;
    let orbit_len = orbit_len_big
        .to_usize()
        .filter(|&l| l <= GRID_CHECK_LIMIT)
        .ok_or_else(|| Error::Invalid("orbit too large to enumerate for the mesh check".to_string()))?;

    let mut orbit: Vec<Vec<Rat>> = Vec::with_capacity(orbit_len);
    let mut k = -n.clone();
    while &k <= n {
        let point: Vec<Rat> =
            z.iter().map(|zi| mod1(&(Rat::from_integer(k.clone()) * zi))).collect();
        orbit.push(point);
        k += 1u32;
    }

    let half_eps = epsilon / &two;
    let mesh = Rat::new(BigInt::one(), BigInt::from(side as u64));
    let mut worst = Rat::zero();
    let mut index = alloc::vec![0usize; m];
    let grid_points = side.pow(m as u32);
    for _ in 0..grid_points {
        let grid_point: Vec<Rat> = index
            .iter()
            .map(|&j| Rat::new(BigInt::from(j as u64), BigInt::from(side as u64)))
            .collect();
        // nearest orbit point, stopping as soon as one clears the bar (an
        // early stop can only overestimate `worst`, which stays sound)
        let mut best: Option<Rat> = None;
        for multiple in &orbit {
            let mut dist = Rat::zero();
            for (a, b) in grid_point.iter().zip(multiple) {
                let axis = arc_distance(a, b);
                if axis > dist {
                    dist = axis;
                }
                if let Some(current) = &best {
                    if dist >= *current {
                        break;
                    }
                }
            }
            let improved = best.as_ref().map(|b| dist < *b).unwrap_or(true);
            if improved {
                let good_enough = dist <= half_eps;
                best = Some(dist);
                if good_enough {
                    break;
                }
            }
        }
        let best = best.expect("orbit is non-empty");
        if best > half_eps {
            return Ok(DensityOutcome::Refused(DensityRefusal {
                witness: grid_point,
                distance: best,
                disproves: false,
            }));
        }
        if best > worst {
            worst = best;
        }
        // odometer step
        for slot in index.iter_mut() {
            *slot += 1;
            if *slot < side {
                break;
            }
            *slot = 0;
        }
    }
    // covering radius <= worst + mesh/2 < epsilon/2 + epsilon/4
    let max_gap = &two * (&worst + &mesh / &two);
    Ok(DensityOutcome::Certified(DensityCertificate {
        point: z.to_vec(),
        multiple_bound: n.clone(),
        epsilon: epsilon.clone(),
        max_gap,
        evidence: DensityEvidence::GridCheck { mesh, grid_points, worst },
    }))
}

// ---------------------------------------------------------------------------
// Stage search
// ---------------------------------------------------------------------------

/// Work budget for the stage search, counted in candidate attempts.
#[derive(Clone, Debug)]
pub struct Budget {
    remaining: u64,
    spent: u64,
}

impl Budget {
    pub fn new(attempts: u64) -> Self {
        Budget { remaining: attempts, spent: 0 }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    fn try_spend(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        self.spent += 1;
        true
    }
}

/// Default search budget (candidate attempts) when the caller has no opinion.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000;

/// Closed rational box in `T^m`: per-coordinate closed intervals
/// `[center_i - radius, center_i + radius]` with one shared radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageBox {
    pub centers: Vec<Rat>,
    pub radius: Rat,
}

impl StageBox {
    /// The empty box over `T^0` that seeds the first stage.
    pub fn seed() -> Self {
        StageBox { centers: Vec::new(), radius: Rat::zero() }
    }
}

/// Result of a dense-point search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { center: Vec<Rat>, multiple_bound: BigInt, certificate: DensityCertificate },
    /// Budget ran out before a certified candidate appeared.
    Exhausted { attempts: u64 },
}

/// Searches a point `z` of `T^m` whose symmetric multiples are certifiably
/// `epsilon`-dense, with the first `m - 1` coordinates placed strictly
/// inside `prev_box` and the new coordinate a nonzero point strictly within
/// `new_coord_radius` of 0.
///
/// Candidates have pairwise coprime (prime) coordinate denominators `q_i`
/// with `1/q_i < epsilon`, so the multiple bound `ceil((prod q_i - 1)/2)`
/// makes the orbit the full product grid.
pub fn find_dense_point(
    m_stage: usize,
    prev_box: &StageBox,
    epsilon: &Rat,
    new_coord_radius: &Rat,
    budget: &mut Budget,
) -> Result<SearchOutcome> {
    if m_stage == 0 {
        return Err(Error::Invalid("stages are 1-based".to_string()));
    }
    if prev_box.centers.len() != m_stage - 1 {
        return Err(Error::Invalid(format!(
            "previous box has {} coordinates; stage {m_stage} needs {}",
            prev_box.centers.len(),
            m_stage - 1
        )));
    }
    if m_stage > 1 && !prev_box.radius.is_positive() {
        return Err(Error::Invalid("previous box must be nonempty".to_string()));
    }
    if !epsilon.is_positive() || !new_coord_radius.is_positive() {
        return Err(Error::Invalid("epsilon and radius must be positive".to_string()));
    }

    // 1/q < epsilon keeps a whole epsilon of density margin for the box.
    let q_eps = floor_inverse(epsilon) + 1u32;
    // 1/q < new_coord_radius puts 1/q strictly inside the coordinate ball.
    let q_radius = floor_inverse(new_coord_radius) + 1u32;
    // placement of old coordinates within half the previous radius
    let q_nesting = if m_stage > 1 {
        let quarter = &prev_box.radius / Rat::from_integer(BigInt::from(4));
        floor_inverse(&quarter) + 1u32
    } else {
        BigInt::zero()
    };

    let mut used_primes: Vec<BigInt> = Vec::new();
    let mut centers: Vec<Rat> = Vec::with_capacity(m_stage);
    // retry offsets let the search move to fresh primes if a placement fails
    'attempts: for _ in 0..64 {
        if !budget.try_spend() {
            return Ok(SearchOutcome::Exhausted { attempts: budget.spent() });
        }
        centers.clear();
        let next_candidate = |lo: &BigInt, used: &mut Vec<BigInt>| -> BigInt {
            let mut candidate = next_prime_at_least(lo);
            while used.contains(&candidate) {
                candidate = next_prime_at_least(&(candidate + 1u32));
            }
            used.push(candidate.clone());
            candidate
        };

        for axis in 0..m_stage - 1 {
            let lo = q_eps.clone().max(q_nesting.clone());
            let q = next_candidate(&lo, &mut used_primes);
            let target = &prev_box.centers[axis];
            let slack = &prev_box.radius / Rat::from_integer(BigInt::from(2));
            match place_fraction_near(target, &q, &slack) {
                Some(a) => centers.push(Rat::new(a, q)),
                None => {
                    // prime landed badly; restart with the next primes
                    continue 'attempts;
                }
            }
        }

        let q_new = {
            let lo = q_eps.clone().max(q_radius.clone());
            next_candidate(&lo, &mut used_primes)
        };
        centers.push(Rat::new(BigInt::one(), q_new));

        let product: BigInt = centers.iter().map(|c| c.denom().clone()).product();
        let multiple_bound = if product.is_odd() {
            (&product - 1u32) / 2u32
        } else {
            &product / 2u32
        };
        let multiple_bound = multiple_bound.max(BigInt::one());

        match joint_density(&centers, &multiple_bound, epsilon)? {
            DensityOutcome::Certified(certificate) => {
                return Ok(SearchOutcome::Found { center: centers, multiple_bound, certificate });
            }
            DensityOutcome::Refused(_) => continue 'attempts,
        }
    }
    Ok(SearchOutcome::Exhausted { attempts: budget.spent() })
}

/// `floor(1/x)` for positive rational `x`.
fn floor_inverse(x: &Rat) -> BigInt {
    (Rat::one() / x).floor().to_integer()
}

/// Reduced fraction `a/q` (gcd(a, q) = 1) with `|a/q - target| <= slack`,
/// scanning numerators outward from the nearest one. Returns the numerator.
fn place_fraction_near(target: &Rat, q: &BigInt, slack: &Rat) -> Option<BigInt> {
    let scaled = target * Rat::from_integer(q.clone());
    let nearest = round_half_up(&scaled);
    for offset in 0..8i32 {
        for signed in [offset, -offset] {
            if offset == 0 && signed != offset {
                continue;
            }
            let a = &nearest + BigInt::from(signed);
            let candidate = Rat::new(a.clone(), q.clone());
            if arc_distance(&candidate, target) <= *slack && a.gcd(q).is_one() {
                return Some(a);
            }
        }
    }
    None
}

/// Nearest integer to `x`, rounding halves up.
fn round_half_up(x: &Rat) -> BigInt {
    (x + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Smallest prime `>= lo` (and `>= 2`). Uses trial division below 2^20 and
/// deterministic-base Miller-Rabin above; primality is only a search
/// heuristic, since certificates verify pairwise coprimality by gcd.
fn next_prime_at_least(lo: &BigInt) -> BigInt {
    let mut candidate = lo.clone().max(BigInt::from(2));
    loop {
        if is_prime(&candidate) {
            return candidate;
        }
        candidate += 1u32;
    }
}

fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let small = BigInt::from(small);
        if n == &small {
            return true;
        }
        if (n % &small).is_zero() {
            return false;
        }
    }
    if n < &BigInt::from(37u32 * 37) {
        return true;
    }
    // Miller-Rabin, deterministic for n < 3.3e24 with these bases.
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let two = BigInt::from(2);
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for base in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let base = BigInt::from(base);
        let mut x = base.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Staged construction
// ---------------------------------------------------------------------------

/// One stage of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    /// 1-based stage index `m`.
    pub stage: usize,
    /// Multiple bound `n_m`; strictly increasing across stages.
    pub multiple_bound: BigInt,
    /// Stage tolerance `eps_m`.
    pub epsilon: Rat,
    /// Closed box around the certified center.
    pub region: StageBox,
    /// Density certificate for the box center at tolerance `eps_m`.
    pub certificate: DensityCertificate,
    /// At least `n_m` times the sum of the box radii; with
    /// `max_gap + 2 n_m radius < 2 eps_m` it keeps the certificate valid on
    /// the whole box.
    pub slack: Rat,
}

/// Full output of the staged construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTrace {
    pub stages: Vec<StageRecord>,
    /// Centers of the final boxes as an element of `c0(T)`; the tail bound
    /// is the schedule bound `1/(2^{M+1} n_M)` satisfied by every deeper
    /// coordinate of any continuation of the tower.
    pub z_center: NullSeq,
    /// `false` when stage tolerances were overridden away from the
    /// canonical schedule `eps_m = 1/(2^m n_{m-1})`.
    pub canonical_schedule: bool,
}

impl GeneratorTrace {
    /// Multiple bound of the last stage, or 1 for the empty trace.
    pub fn last_multiple_bound(&self) -> BigInt {
        self.stages.last().map(|s| s.multiple_bound.clone()).unwrap_or_else(BigInt::one)
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }
}

/// Options for [`build_generator`].
#[derive(Clone, Debug)]
pub struct BuildConfig {
    /// Search budget in candidate attempts, shared across stages.
    pub budget: u64,
    /// Per-stage tolerance overrides; `None` entries keep the canonical
    /// schedule value. Any override marks the trace non-canonical.
    pub epsilon_overrides: Vec<Option<Rat>>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { budget: DEFAULT_SEARCH_BUDGET, epsilon_overrides: Vec::new() }
    }
}

/// Outcome of the staged construction.
#[derive(Clone, Debug)]
pub enum BuildOutcome {
    Built(GeneratorTrace),
    /// The search budget ran out; the partial trace contains the stages
    /// completed before the failing one.
    Exhausted { partial: GeneratorTrace, failed_stage: usize, attempts: u64 },
}

/// Runs the staged induction for `stages` stages with the canonical
/// schedule `eps_m = 1/(2^m n_{m-1})` (overridable per stage). Each stage
/// searches a certified dense center, bumps the multiple bound to keep it
/// strictly increasing, and shrinks the box radius below every margin:
/// robust density, the new-coordinate ball, and nesting into the previous
/// box.
pub fn build_generator(stages: usize, config: &BuildConfig) -> Result<BuildOutcome> {
    let mut budget = Budget::new(config.budget);
    let mut records: Vec<StageRecord> = Vec::with_capacity(stages);
    let mut canonical = true;

    for m in 1..=stages {
        let n_prev = records.last().map(|r| r.multiple_bound.clone()).unwrap_or_else(BigInt::one);
        let schedule_bound = Rat::new(BigInt::one(), (BigInt::one() << m) * &n_prev);
        let epsilon = match config.epsilon_overrides.get(m - 1).and_then(Clone::clone) {
            Some(custom) => {
                if custom != schedule_bound {
                    canonical = false;
                }
                custom
            }
            None => schedule_bound.clone(),
        };
        // The density tolerance and the new-coordinate ball share one scale.
        let coord_bound = epsilon.clone();
        let prev_box =
            records.last().map(|r| r.region.clone()).unwrap_or_else(StageBox::seed);

        let found = find_dense_point(m, &prev_box, &epsilon, &coord_bound, &mut budget)?;
        let (center, searched_bound, _) = match found {
            SearchOutcome::Found { center, multiple_bound, certificate } => {
                (center, multiple_bound, certificate)
            }
            SearchOutcome::Exhausted { attempts } => {
                return Ok(BuildOutcome::Exhausted {
                    partial: assemble_trace(records, canonical),
                    failed_stage: m,
                    attempts,
                });
            }
        };

        // keep the multiple bounds strictly increasing; density is monotone
        // in the bound, so re-certify at the bumped value
        let multiple_bound = searched_bound.max(&n_prev + 1u32);
        let certificate = match joint_density(&center, &multiple_bound, &epsilon)? {
            DensityOutcome::Certified(c) => c,
            DensityOutcome::Refused(_) => {
                return Err(Error::Invalid(format!(
                    "stage {m}: certificate lost when raising the multiple bound"
                )));
            }
        };

        let robust_margin = certificate.robust_radius_bound().ok_or_else(|| {
            Error::Invalid(format!("stage {m}: certificate has no robust margin"))
        })?;
        let coord_margin = &coord_bound - arc_distance(center.last().unwrap(), &Rat::zero());
        let mut radius_cap = robust_margin.min(coord_margin);
        if m > 1 {
            for (axis, c_new) in center[..m - 1].iter().enumerate() {
                let drift = arc_distance(c_new, &prev_box.centers[axis]);
                radius_cap = radius_cap.min(&prev_box.radius - drift);
            }
        }
        if !radius_cap.is_positive() {
            return Err(Error::Invalid(format!("stage {m}: no room for a nonempty box")));
        }
        let radius = radius_cap / Rat::from_integer(BigInt::from(2));
        let slack = Rat::from_integer(multiple_bound.clone())
            * Rat::from_integer(BigInt::from(m as u64))
            * &radius;

        records.push(StageRecord {
            stage: m,
            multiple_bound,
            epsilon,
            region: StageBox { centers: center, radius },
            certificate,
            slack,
        });
    }

    Ok(BuildOutcome::Built(assemble_trace(records, canonical)))
}

fn assemble_trace(records: Vec<StageRecord>, canonical: bool) -> GeneratorTrace {
    let depth = records.len();
    let n_last = records.last().map(|r| r.multiple_bound.clone()).unwrap_or_else(BigInt::one);
    let tail_bound = Rat::new(BigInt::one(), (BigInt::one() << (depth + 1)) * n_last);
    let prefix: Vec<GroupElement> = records
        .last()
        .map(|r| r.region.centers.iter().map(|c| GroupElement::Circle(c.clone())).collect())
        .unwrap_or_default();
    let z_center = NullSeq::new(GroupDescriptor::Circle, prefix, tail_bound)
        .expect("trace centers are circle points");
    GeneratorTrace { stages: records, z_center, canonical_schedule: canonical }
}

// ---------------------------------------------------------------------------
// Trace verification
// ---------------------------------------------------------------------------

/// One verified condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Detailed verification report; passes iff every check passes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Re-derives every certificate of a trace from scratch and checks all
/// structural conditions: strictly increasing multiple bounds, per-stage
/// density (independently re-enumerated), robust slack over the box, box
/// nesting, confinement of each new coordinate, the schedule tolerances for
/// canonical traces, and consistency of the published center.
pub fn verify_trace(trace: &GeneratorTrace) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let mut push = |name: String, passed: bool, detail: String| {
        checks.push(CheckResult { name, passed, detail });
    };

    // (i) multiple bounds strictly increase from n_0 = 1
    let mut previous = BigInt::one();
    let mut increasing = true;
    for record in &trace.stages {
        if record.multiple_bound <= previous {
            increasing = false;
        }
        previous = record.multiple_bound.clone();
    }
    push(
        "multiple-bounds-increase".to_string(),
        increasing,
        format!("n_0 = 1 then {:?}", trace.stages.iter().map(|r| r.multiple_bound.to_string()).collect::<Vec<_>>()),
    );

    let two = Rat::from_integer(BigInt::from(2));
    for (index, record) in trace.stages.iter().enumerate() {
        let m = record.stage;
        let label = |s: &str| format!("stage-{m}-{s}");
        push(
            label("index"),
            m == index + 1,
            format!("record {index} declares stage {m}"),
        );

        if trace.canonical_schedule {
            let n_prev = if index == 0 {
                BigInt::one()
            } else {
                trace.stages[index - 1].multiple_bound.clone()
            };
            let schedule = Rat::new(BigInt::one(), (BigInt::one() << m) * &n_prev);
            push(
                label("schedule-tolerance"),
                record.epsilon == schedule,
                format!("eps = {} vs schedule {}", record.epsilon, schedule),
            );
        }

        // certificate consistency and independent re-derivation
        let cert = &record.certificate;
        let consistent = cert.point == record.region.centers
            && cert.multiple_bound == record.multiple_bound
            && cert.epsilon == record.epsilon;
        push(
            label("certificate-matches-stage"),
            consistent,
            "certificate echoes the stage center, bound, and tolerance".to_string(),
        );
        let rederived = joint_density(&record.region.centers, &record.multiple_bound, &record.epsilon)?;
        match rederived.certificate() {
            Some(fresh) => {
                push(
                    label("density-rederived"),
                    fresh.max_gap == cert.max_gap && fresh.is_dense(),
                    format!("max_gap re-derived {} vs stored {}", fresh.max_gap, cert.max_gap),
                );
            }
            None => push(
                label("density-rederived"),
                false,
                "independent re-derivation refused the certificate".to_string(),
            ),
        }

        // robust slack over the whole box
        let robust = &cert.max_gap
            + &two * Rat::from_integer(record.multiple_bound.clone()) * &record.region.radius;
        let bound = &two * &record.epsilon;
        push(
            label("robust-density"),
            record.region.radius.is_positive() && robust < bound,
            format!("max_gap + 2 n r = {robust} < {bound}"),
        );
        let radius_sum =
            Rat::from_integer(BigInt::from(m as u64)) * &record.region.radius;
        let slack_floor = Rat::from_integer(record.multiple_bound.clone()) * radius_sum;
        push(
            label("slack-covers-radii"),
            record.slack >= slack_floor,
            format!("slack {} >= n * sum radii {}", record.slack, slack_floor),
        );

        // new coordinate confined near 0 (strictly, including the box)
        let new_coord = record
            .region
            .centers
            .last()
            .map(|c| arc_distance(c, &Rat::zero()))
            .unwrap_or_else(Rat::zero);
        push(
            label("new-coordinate-confined"),
            &new_coord + &record.region.radius < record.epsilon,
            format!(
                "|z_{m}| + r = {} < {}",
                &new_coord + &record.region.radius,
                record.epsilon
            ),
        );

        // nesting into the previous stage box
        if index > 0 {
            let prev = &trace.stages[index - 1].region;
            let mut nested = record.region.centers.len() == prev.centers.len() + 1;
            let mut worst = Rat::zero();
            if nested {
                for (axis, c_new) in record.region.centers[..prev.centers.len()].iter().enumerate() {
                    let reach = arc_distance(c_new, &prev.centers[axis]) + &record.region.radius;
                    if reach > prev.radius {
                        nested = false;
                    }
                    if reach > worst {
                        worst = reach;
                    }
                }
            }
            push(
                label("nested-in-previous"),
                nested,
                format!("max drift + r = {} <= previous radius {}", worst, prev.radius),
            );
        } else {
            push(
                label("first-box-dimension"),
                record.region.centers.len() == 1,
                "stage 1 box lives in one coordinate".to_string(),
            );
        }
    }

    // published center consistency
    let expected_prefix: Vec<GroupElement> = trace
        .stages
        .last()
        .map(|r| r.region.centers.iter().map(|c| GroupElement::Circle(c.clone())).collect())
        .unwrap_or_default();
    let depth = trace.stages.len();
    let n_last = trace.last_multiple_bound();
    let expected_tail = Rat::new(BigInt::one(), (BigInt::one() << (depth + 1)) * n_last);
    push(
        "center-consistent".to_string(),
        trace.z_center.prefix() == expected_prefix.as_slice()
            && *trace.z_center.tail_bound() == expected_tail,
        format!("tail bound {} vs schedule {}", trace.z_center.tail_bound(), expected_tail),
    );

    Ok(VerifyReport { checks })
}

// ---------------------------------------------------------------------------
// Certified approximation (the multiple finder)
// ---------------------------------------------------------------------------

/// A certified multiple: `d(x, k . z_center)` lies in `distance`, whose
/// upper end is strictly below the requested tolerance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximation {
    pub multiple: BigInt,
    /// Stage whose certificate guided the search; 0 for the trivial `k = 0`
    /// answer on targets already inside the tolerance.
    pub stage: usize,
    pub distance: Interval,
    pub epsilon: Rat,
}

/// Outcome of [`approximate_target`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ApproximationOutcome {
    Approximated(Approximation),
    /// No stage of the trace can reach the tolerance; the required stage
    /// count is reported when a finite depth would suffice (a tail bound at
    /// or above half the tolerance makes every depth insufficient).
    InsufficientDepth { required_stages: Option<usize> },
}

/// Finds an integer `k` with `d(x, k . z_center) < epsilon`, certified by an
/// exact interval. Stage selection follows the schedule inequality
/// `1/2^m + sup_{n > m} rho(x_n, 0) < epsilon/2`; the per-coordinate
/// congruences of the stage grid determine `k` with `|k| <= n_m` by
/// inverting each axis modulo its denominator. The returned interval is
/// recomputed from scratch via sequence arithmetic, so the certificate does
/// not depend on the search path.
pub fn approximate_target(
    trace: &GeneratorTrace,
    x: &NullSeq,
    epsilon: &Rat,
) -> Result<ApproximationOutcome> {
    if *x.descriptor() != GroupDescriptor::Circle {
        return Err(Error::Invalid("targets live in c0(T)".to_string()));
    }
    if !epsilon.is_positive() {
        return Err(Error::Invalid("epsilon must be positive".to_string()));
    }

    // Trivial answer when the target is already within tolerance of 0.
    let zero_distance = nullseq::d(x, &nullseq::seq_scalar_mul(&BigInt::zero(), &trace.z_center))?;
    if zero_distance.hi < *epsilon {
        return Ok(ApproximationOutcome::Approximated(Approximation {
            multiple: BigInt::zero(),
            stage: 0,
            distance: zero_distance,
            epsilon: epsilon.clone(),
        }));
    }

    let half_eps = epsilon / Rat::from_integer(BigInt::from(2));
    for record in &trace.stages {
        let m = record.stage;
        let stage_term = Rat::new(BigInt::one(), BigInt::one() << m);
        let tail_term = x.sup_norm_beyond(m);
        if &stage_term + &tail_term >= half_eps {
            continue;
        }
        let Some(k) = solve_stage_congruences(record, x)? else {
            continue;
        };
        let approximation = nullseq::seq_scalar_mul(&k, &trace.z_center);
        let distance = nullseq::d(x, &approximation)?;
        if distance.hi < *epsilon {
            return Ok(ApproximationOutcome::Approximated(Approximation {
                multiple: k,
                stage: m,
                distance,
                epsilon: epsilon.clone(),
            }));
        }
    }

    // No stage reached the tolerance: report the depth that would.
    let tail = x.tail_bound().clone();
    if tail >= half_eps {
        return Ok(ApproximationOutcome::InsufficientDepth { required_stages: None });
    }
    for m in 1..=(x.prefix_len() + 128) {
        let stage_term = Rat::new(BigInt::one(), BigInt::one() << m);
        if &stage_term + &x.sup_norm_beyond(m) < half_eps {
            return Ok(ApproximationOutcome::InsufficientDepth { required_stages: Some(m) });
        }
    }
    Ok(ApproximationOutcome::InsufficientDepth { required_stages: None })
}

/// Solves `k . a_i = b_i (mod q_i)` across the stage axes, where `b_i/q_i`
/// is the grid point nearest the target coordinate, and returns the
/// symmetric representative with `|k| <= n_m`. Fails (None) only when a
/// stage denominator shares a factor with another, which a verified trace
/// rules out.
fn solve_stage_congruences(record: &StageRecord, x: &NullSeq) -> Result<Option<BigInt>> {
    let mut modulus = BigInt::one();
    let mut k = BigInt::zero();
    for (axis, center) in record.region.centers.iter().enumerate() {
        let q = center.denom().clone();
        if q.is_one() {
            continue;
        }
        let a = center.numer().mod_floor(&q);
        let target = match x.project(axis + 1).0 {
            GroupElement::Circle(r) => r,
            _ => unreachable!("descriptor checked by the caller"),
        };
        let b = round_half_up(&(target * Rat::from_integer(q.clone()))).mod_floor(&q);
        let Some(a_inv) = mod_inverse(&a, &q) else {
            return Ok(None);
        };
        let residue = (b * a_inv).mod_floor(&q);
        // CRT combine k = residue (mod q) with the running solution
        let gcd = modulus.gcd(&q);
        if !gcd.is_one() {
            return Ok(None);
        }
        let Some(modulus_inv) = mod_inverse(&modulus.mod_floor(&q), &q) else {
            return Ok(None);
        };
        let step = ((&residue - &k).mod_floor(&q) * modulus_inv).mod_floor(&q);
        k += step * &modulus;
        modulus *= &q;
    }
    // symmetric representative in (-Q/2, Q/2]
    let k = k.mod_floor(&modulus);
    let twice = BigInt::from(2) * &k;
    let k = if twice > modulus { k - &modulus } else { k };
    Ok(Some(k))
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let extended = a.extended_gcd(modulus);
    if !extended.gcd.is_one() {
        return None;
    }
    Some(extended.x.mod_floor(modulus))
}
