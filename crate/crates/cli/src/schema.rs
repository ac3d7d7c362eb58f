//! Versioned JSON schemas for every certificate artifact.
//!
//! All rationals cross the file boundary as `p/q` strings in lowest terms
//! and unbounded integers as decimal strings, so files are exact and
//! portable. Field order is fixed by the struct definitions, which makes
//! serialization byte-stable across round trips; the optional timestamp is
//! the only non-reproducible field and is omitted under `--no-timestamp`.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use nullseq_core::ambient::{GroupDescriptor, GroupElement, Radius};
use nullseq_core::duality::{
    CharCertificate, CharComponent, Character, Escape, SeparatorChar, SeparatorSchedule,
    WitnessReport,
};
use nullseq_core::monothetic::{
    DensityCertificate, DensityEvidence, GeneratorTrace, StageBox, StageRecord,
};
use nullseq_core::nullseq::{Interval, NullSeq};
use nullseq_core::rat::{parse_rat, Rat};
use nullseq_core::separation::DichotomyResult;

fn rat_text(r: &Rat) -> String {
    r.to_string()
}

fn int_text(n: &BigInt) -> String {
    n.to_string()
}

fn parse_int(text: &str) -> Result<BigInt> {
    text.trim().parse().map_err(|_| anyhow!("bad integer: {text:?}"))
}

fn parse_rat_field(text: &str, field: &str) -> Result<Rat> {
    parse_rat(text).map_err(|e| anyhow!("{field}: {e}"))
}

// ---------------------------------------------------------------------------
// Null sequences
// ---------------------------------------------------------------------------

/// JSON form of a truncated null sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullSeqJson {
    pub descriptor: String,
    pub prefix: Vec<String>,
    pub tail_bound: String,
}

impl NullSeqJson {
    pub fn from_core(seq: &NullSeq) -> Self {
        NullSeqJson {
            descriptor: seq.descriptor().to_string(),
            prefix: seq.prefix().iter().map(|e| e.value_text()).collect(),
            tail_bound: rat_text(seq.tail_bound()),
        }
    }

    pub fn to_core(&self) -> Result<NullSeq> {
        let descriptor: GroupDescriptor =
            self.descriptor.parse().map_err(|e| anyhow!("descriptor: {e}"))?;
        let prefix = self
            .prefix
            .iter()
            .map(|v| {
                GroupElement::parse_value(&descriptor, v).map_err(|e| anyhow!("prefix entry: {e}"))
            })
            .collect::<Result<Vec<_>>>()?;
        let tail = parse_rat_field(&self.tail_bound, "tail_bound")?;
        NullSeq::new(descriptor, prefix, tail).map_err(|e| anyhow!("sequence: {e}"))
    }
}

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

/// JSON form of a per-coordinate character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ComponentJson {
    #[serde(rename = "circle")]
    Circle { g: i64 },
    #[serde(rename = "cyclic")]
    Cyclic { order: u64, exp: u64 },
    #[serde(rename = "tuple")]
    Tuple { parts: Vec<ComponentJson> },
}

impl ComponentJson {
    pub fn from_core(component: &CharComponent) -> Self {
        match component {
            CharComponent::Circle(g) => ComponentJson::Circle { g: *g },
            CharComponent::FiniteCyclic { exponent, order } => {
                ComponentJson::Cyclic { order: *order, exp: *exponent }
            }
            CharComponent::Tuple(parts) => {
                ComponentJson::Tuple { parts: parts.iter().map(ComponentJson::from_core).collect() }
            }
        }
    }

    pub fn to_core(&self) -> CharComponent {
        match self {
            ComponentJson::Circle { g } => CharComponent::Circle(*g),
            ComponentJson::Cyclic { order, exp } => {
                CharComponent::FiniteCyclic { exponent: *exp, order: *order }
            }
            ComponentJson::Tuple { parts } => {
                CharComponent::Tuple(parts.iter().map(ComponentJson::to_core).collect())
            }
        }
    }
}

/// JSON form of a finitely supported character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub descriptor: String,
    pub support: Vec<(usize, ComponentJson)>,
}

impl CharacterJson {
    pub fn from_core(chi: &Character) -> Self {
        CharacterJson {
            descriptor: chi.descriptor().to_string(),
            support: chi
                .support()
                .iter()
                .map(|(pos, c)| (*pos, ComponentJson::from_core(c)))
                .collect(),
        }
    }

    pub fn to_core(&self) -> Result<Character> {
        let descriptor: GroupDescriptor =
            self.descriptor.parse().map_err(|e| anyhow!("descriptor: {e}"))?;
        Character::new(
            descriptor,
            self.support.iter().map(|(pos, c)| (*pos, c.to_core())),
        )
        .map_err(|e| anyhow!("character: {e}"))
    }
}

// ---------------------------------------------------------------------------
// Generator traces (trace-v1)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum EvidenceJson {
    #[serde(rename = "orbit")]
    Orbit { points: usize },
    #[serde(rename = "product-grid")]
    ProductGrid { denominators: Vec<String> },
    #[serde(rename = "grid-check")]
    GridCheck { mesh: String, grid_points: usize, worst: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub z: Vec<String>,
    pub n: String,
    pub epsilon: String,
    pub max_gap: String,
    pub evidence: EvidenceJson,
}

impl CertificateJson {
    pub fn from_core(cert: &DensityCertificate) -> Self {
        CertificateJson {
            z: cert.point.iter().map(rat_text).collect(),
            n: int_text(&cert.multiple_bound),
            epsilon: rat_text(&cert.epsilon),
            max_gap: rat_text(&cert.max_gap),
            evidence: match &cert.evidence {
                DensityEvidence::Orbit { points } => EvidenceJson::Orbit { points: *points },
                DensityEvidence::ProductGrid { denominators } => EvidenceJson::ProductGrid {
                    denominators: denominators.iter().map(int_text).collect(),
                },
                DensityEvidence::GridCheck { mesh, grid_points, worst } => EvidenceJson::GridCheck {
                    mesh: rat_text(mesh),
                    grid_points: *grid_points,
                    worst: rat_text(worst),
                },
            },
        }
    }

    pub fn to_core(&self) -> Result<DensityCertificate> {
        Ok(DensityCertificate {
            point: self
                .z
                .iter()
                .map(|t| parse_rat_field(t, "certificate z"))
                .collect::<Result<Vec<_>>>()?,
            multiple_bound: parse_int(&self.n)?,
            epsilon: parse_rat_field(&self.epsilon, "certificate epsilon")?,
            max_gap: parse_rat_field(&self.max_gap, "certificate max_gap")?,
            evidence: match &self.evidence {
                EvidenceJson::Orbit { points } => DensityEvidence::Orbit { points: *points },
                EvidenceJson::ProductGrid { denominators } => DensityEvidence::ProductGrid {
                    denominators: denominators
                        .iter()
                        .map(|t| parse_int(t))
                        .collect::<Result<Vec<_>>>()?,
                },
                EvidenceJson::GridCheck { mesh, grid_points, worst } => DensityEvidence::GridCheck {
                    mesh: parse_rat_field(mesh, "mesh")?,
                    grid_points: *grid_points,
                    worst: parse_rat_field(worst, "worst")?,
                },
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxJson {
    pub centers: Vec<String>,
    pub radius: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageJson {
    pub stage: usize,
    pub n: String,
    pub epsilon: String,
    #[serde(rename = "box")]
    pub region: BoxJson,
    pub slack: String,
    pub certificate: CertificateJson,
}

/// The `trace-v1` file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<String>,
    pub canonical_schedule: bool,
    pub stages: Vec<StageJson>,
    pub z_center: NullSeqJson,
}

pub const TRACE_FORMAT: &str = "trace-v1";

impl TraceFile {
    pub fn from_core(trace: &GeneratorTrace, generated_at: Option<String>) -> Self {
        TraceFile {
            format: TRACE_FORMAT.to_string(),
            generated_at,
            canonical_schedule: trace.canonical_schedule,
            stages: trace
                .stages
                .iter()
                .map(|s| StageJson {
                    stage: s.stage,
                    n: int_text(&s.multiple_bound),
                    epsilon: rat_text(&s.epsilon),
                    region: BoxJson {
                        centers: s.region.centers.iter().map(rat_text).collect(),
                        radius: rat_text(&s.region.radius),
                    },
                    slack: rat_text(&s.slack),
                    certificate: CertificateJson::from_core(&s.certificate),
                })
                .collect(),
            z_center: NullSeqJson::from_core(&trace.z_center),
        }
    }

    pub fn to_core(&self) -> Result<GeneratorTrace> {
        if self.format != TRACE_FORMAT {
            bail!("unsupported trace format {:?}", self.format);
        }
        let stages = self
            .stages
            .iter()
            .map(|s| {
                Ok(StageRecord {
                    stage: s.stage,
                    multiple_bound: parse_int(&s.n)?,
                    epsilon: parse_rat_field(&s.epsilon, "stage epsilon")?,
                    region: StageBox {
                        centers: s
                            .region
                            .centers
                            .iter()
                            .map(|t| parse_rat_field(t, "box center"))
                            .collect::<Result<Vec<_>>>()?,
                        radius: parse_rat_field(&s.region.radius, "box radius")?,
                    },
                    slack: parse_rat_field(&s.slack, "slack")?,
                    certificate: s.certificate.to_core()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorTrace {
            stages,
            z_center: self.z_center.to_core()?,
            canonical_schedule: self.canonical_schedule,
        })
    }
}

// ---------------------------------------------------------------------------
// Schur-failure witness reports (witness-v1)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharCertificateJson {
    pub character: CharacterJson,
    pub max_support: usize,
    /// Pairs `(n, angle)` for the finitely many nonzero pairings.
    pub nonzero_pairings: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<String>,
    /// The embedded point, canonical element text.
    pub point: String,
    pub horizon: usize,
    pub separation: String,
    pub pairs_checked: usize,
    pub vanish_after: usize,
    pub chars: Vec<CharCertificateJson>,
}

pub const WITNESS_FORMAT: &str = "witness-v1";

impl WitnessFile {
    pub fn from_core(
        report: &WitnessReport,
        family: &[Character],
        generated_at: Option<String>,
    ) -> Self {
        WitnessFile {
            format: WITNESS_FORMAT.to_string(),
            generated_at,
            point: report.point.to_string(),
            horizon: report.horizon,
            separation: rat_text(&report.separation),
            pairs_checked: report.pairs_checked,
            vanish_after: report.vanish_after,
            chars: report
                .char_certificates
                .iter()
                .map(|c| CharCertificateJson {
                    character: CharacterJson::from_core(&family[c.char_index]),
                    max_support: c.max_support,
                    nonzero_pairings: c
                        .nonzero_pairings
                        .iter()
                        .map(|(n, a)| (*n, rat_text(a)))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Replays the witness construction from the echoed inputs and checks
    /// that every recorded number reproduces exactly.
    pub fn verify(&self) -> Result<()> {
        if self.format != WITNESS_FORMAT {
            bail!("unsupported witness format {:?}", self.format);
        }
        let point: GroupElement =
            self.point.parse().map_err(|e| anyhow!("witness point: {e}"))?;
        let family = self
            .chars
            .iter()
            .map(|c| c.character.to_core())
            .collect::<Result<Vec<_>>>()?;
        let fresh = nullseq_core::duality::schur_witness(&point, self.horizon, &family)
            .map_err(|e| anyhow!("replay failed: {e}"))?;
        if rat_text(&fresh.separation) != self.separation
            || fresh.pairs_checked != self.pairs_checked
            || fresh.vanish_after != self.vanish_after
        {
            bail!("replayed summary differs from the stored one");
        }
        let stored: Vec<CharCertificate> = self
            .chars
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(CharCertificate {
                    char_index: i,
                    max_support: c.max_support,
                    nonzero_pairings: c
                        .nonzero_pairings
                        .iter()
                        .map(|(n, a)| Ok((*n, parse_rat_field(a, "pairing angle")?)))
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if stored != fresh.char_certificates {
            bail!("replayed per-character certificates differ from the stored ones");
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Dichotomy verdicts (dichotomy-v1)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyFile {
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<String>,
    /// `cover` or `discrete-witness`.
    pub kind: String,
    /// Canonical element texts: the cover centers or the witness points.
    pub points: Vec<String>,
    /// Cover radius or witness separation.
    pub radius: String,
    pub checked_pairs: usize,
    /// All inputs echoed for replay.
    pub inputs: Vec<String>,
    pub threshold: usize,
    pub scale: String,
}

pub const DICHOTOMY_FORMAT: &str = "dichotomy-v1";

impl DichotomyFile {
    pub fn from_core(
        result: &DichotomyResult<GroupElement>,
        inputs: &[GroupElement],
        threshold: usize,
        scale: &Radius,
        generated_at: Option<String>,
    ) -> Self {
        let (kind, points, radius, checked_pairs) = match result {
            DichotomyResult::Cover { centers, radius, checked_pairs } => (
                "cover",
                centers.iter().map(|c| c.to_string()).collect(),
                rat_text(radius.value()),
                *checked_pairs,
            ),
            DichotomyResult::DiscreteWitness { points, separation, checked_pairs } => (
                "discrete-witness",
                points.iter().map(|p| p.to_string()).collect(),
                rat_text(separation.value()),
                *checked_pairs,
            ),
        };
        DichotomyFile {
            format: DICHOTOMY_FORMAT.to_string(),
            generated_at,
            kind: kind.to_string(),
            points,
            radius,
            checked_pairs,
            inputs: inputs.iter().map(|p| p.to_string()).collect(),
            threshold,
            scale: rat_text(scale.value()),
        }
    }

    /// Replays the dichotomy on the echoed inputs and checks the verdict.
    pub fn verify(&self) -> Result<()> {
        if self.format != DICHOTOMY_FORMAT {
            bail!("unsupported dichotomy format {:?}", self.format);
        }
        let inputs = self
            .inputs
            .iter()
            .map(|t| t.parse::<GroupElement>().map_err(|e| anyhow!("input point: {e}")))
            .collect::<Result<Vec<_>>>()?;
        let scale = Radius::new(parse_rat_field(&self.scale, "scale")?)
            .map_err(|e| anyhow!("scale: {e}"))?;
        let fresh = nullseq_core::separation::dichotomy(&inputs, &scale, self.threshold)
            .map_err(|e| anyhow!("replay failed: {e}"))?;
        let replay = DichotomyFile::from_core(&fresh, &inputs, self.threshold, &scale, None);
        if replay.kind != self.kind || replay.points != self.points || replay.radius != self.radius
        {
            bail!("replayed verdict differs from the stored one");
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Separating schedules (separator-v1)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeJson {
    pub outer: usize,
    pub coordinate: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorCharJson {
    pub outer: usize,
    pub inner_position: usize,
    pub component: ComponentJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullTestJson {
    pub deviations: Vec<String>,
    pub vanish_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorFile {
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<String>,
    pub delta: String,
    pub escapes: Vec<EscapeJson>,
    pub cluster: Vec<usize>,
    pub cluster_value: String,
    pub component: ComponentJson,
    pub chars: Vec<SeparatorCharJson>,
    pub pairings: Vec<String>,
    pub separation_bound: String,
    /// Deviation profiles against the generated null test sequences.
    pub null_tests: Vec<NullTestJson>,
    /// The scanned sequence, echoed for replay.
    pub inputs: Vec<NullSeqJson>,
}

pub const SEPARATOR_FORMAT: &str = "separator-v1";

impl SeparatorFile {
    pub fn from_core(
        schedule: &SeparatorSchedule,
        ys: &[NullSeq],
        null_tests: &[nullseq_core::duality::NullCertificate],
        generated_at: Option<String>,
    ) -> Self {
        SeparatorFile {
            format: SEPARATOR_FORMAT.to_string(),
            generated_at,
            delta: rat_text(&schedule.delta),
            escapes: schedule
                .escapes
                .iter()
                .map(|e| EscapeJson {
                    outer: e.outer,
                    coordinate: e.coordinate,
                    value: e.value.to_string(),
                })
                .collect(),
            cluster: schedule.cluster.clone(),
            cluster_value: schedule.cluster_value.to_string(),
            component: ComponentJson::from_core(&schedule.component),
            chars: schedule
                .chars
                .iter()
                .map(|c| SeparatorCharJson {
                    outer: c.outer,
                    inner_position: c.inner_position,
                    component: ComponentJson::from_core(&c.component),
                })
                .collect(),
            pairings: schedule.pairings.iter().map(rat_text).collect(),
            separation_bound: rat_text(&schedule.separation_bound),
            null_tests: null_tests
                .iter()
                .map(|t| NullTestJson {
                    deviations: t.deviations.iter().map(rat_text).collect(),
                    vanish_after: t.vanish_after,
                })
                .collect(),
            inputs: ys.iter().map(NullSeqJson::from_core).collect(),
        }
    }

    /// Replays the schedule construction on the echoed inputs.
    pub fn verify(&self) -> Result<()> {
        if self.format != SEPARATOR_FORMAT {
            bail!("unsupported separator format {:?}", self.format);
        }
        let ys = self
            .inputs
            .iter()
            .map(NullSeqJson::to_core)
            .collect::<Result<Vec<_>>>()?;
        let delta = parse_rat_field(&self.delta, "delta")?;
        let fresh = nullseq_core::duality::gclosed_separator(&ys, &delta)
            .map_err(|e| anyhow!("replay failed: {e}"))?;
        let replay = SeparatorFile::from_core(&fresh, &ys, &[], None);
        if replay.escapes != self.escapes
            || replay.chars != self.chars
            || replay.pairings != self.pairings
            || replay.separation_bound != self.separation_bound
        {
            bail!("replayed schedule differs from the stored one");
        }
        Ok(())
    }

    /// The schedule as core values (for further certification).
    pub fn to_core_schedule(&self) -> Result<SeparatorSchedule> {
        let escapes = self
            .escapes
            .iter()
            .map(|e| {
                Ok(Escape {
                    outer: e.outer,
                    coordinate: e.coordinate,
                    value: e.value.parse().map_err(|err| anyhow!("escape value: {err}"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeparatorSchedule {
            delta: parse_rat_field(&self.delta, "delta")?,
            escapes,
            cluster: self.cluster.clone(),
            cluster_value: self
                .cluster_value
                .parse()
                .map_err(|e| anyhow!("cluster value: {e}"))?,
            component: self.component.to_core(),
            chars: self
                .chars
                .iter()
                .map(|c| SeparatorChar {
                    outer: c.outer,
                    inner_position: c.inner_position,
                    component: c.component.to_core(),
                })
                .collect(),
            pairings: self
                .pairings
                .iter()
                .map(|p| parse_rat_field(p, "pairing"))
                .collect::<Result<Vec<_>>>()?,
            separation_bound: parse_rat_field(&self.separation_bound, "separation bound")?,
        })
    }
}

// ---------------------------------------------------------------------------
// Approximation certificates (approx-v1)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxFile {
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<String>,
    pub target: NullSeqJson,
    pub epsilon: String,
    pub k: String,
    pub stage: usize,
    pub distance_lo: String,
    pub distance_hi: String,
    /// The published center the multiple applies to, echoed for replay.
    pub z_center: NullSeqJson,
}

pub const APPROX_FORMAT: &str = "approx-v1";

impl ApproxFile {
    pub fn from_core(
        target: &NullSeq,
        epsilon: &Rat,
        approx: &nullseq_core::monothetic::Approximation,
        z_center: &NullSeq,
        generated_at: Option<String>,
    ) -> Self {
        ApproxFile {
            format: APPROX_FORMAT.to_string(),
            generated_at,
            target: NullSeqJson::from_core(target),
            epsilon: rat_text(epsilon),
            k: int_text(&approx.multiple),
            stage: approx.stage,
            distance_lo: rat_text(&approx.distance.lo),
            distance_hi: rat_text(&approx.distance.hi),
            z_center: NullSeqJson::from_core(z_center),
        }
    }

    /// Recomputes the certified interval from the echoed data.
    pub fn verify(&self) -> Result<()> {
        if self.format != APPROX_FORMAT {
            bail!("unsupported approx format {:?}", self.format);
        }
        let target = self.target.to_core()?;
        let z_center = self.z_center.to_core()?;
        let k = parse_int(&self.k)?;
        let epsilon = parse_rat_field(&self.epsilon, "epsilon")?;
        let scaled = nullseq_core::nullseq::seq_scalar_mul(&k, &z_center);
        let distance: Interval = nullseq_core::nullseq::d(&target, &scaled)
            .map_err(|e| anyhow!("replay failed: {e}"))?;
        if rat_text(&distance.lo) != self.distance_lo || rat_text(&distance.hi) != self.distance_hi
        {
            bail!("replayed distance interval differs from the stored one");
        }
        if !(distance.hi < epsilon) {
            bail!("stored approximation does not meet its tolerance");
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Orbit reports (orbit-v1)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitFile {
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<String>,
    pub z: String,
    pub n: String,
    /// `true` for the one-sided orbit `0..=n`, `false` for symmetric.
    pub forward: bool,
    pub multiples: Vec<String>,
    pub gaps: Vec<String>,
    pub max_gap: String,
}

pub const ORBIT_FORMAT: &str = "orbit-v1";

impl OrbitFile {
    pub fn from_core(
        z: &GroupElement,
        n: &BigInt,
        forward: bool,
        orbit: &nullseq_core::monothetic::OrbitGaps,
        generated_at: Option<String>,
    ) -> Self {
        OrbitFile {
            format: ORBIT_FORMAT.to_string(),
            generated_at,
            z: z.to_string(),
            n: int_text(n),
            forward,
            multiples: orbit.multiples.iter().map(rat_text).collect(),
            gaps: orbit.gaps.iter().map(rat_text).collect(),
            max_gap: rat_text(&orbit.max_gap),
        }
    }

    /// Re-enumerates the orbit and compares every recorded value.
    pub fn verify(&self) -> Result<()> {
        if self.format != ORBIT_FORMAT {
            bail!("unsupported orbit format {:?}", self.format);
        }
        let z: GroupElement = self.z.parse().map_err(|e| anyhow!("orbit point: {e}"))?;
        let n = parse_int(&self.n)?;
        let fresh = if self.forward {
            nullseq_core::monothetic::forward_orbit_gaps(&z, &n)
        } else {
            nullseq_core::monothetic::orbit_gaps(&z, &n)
        }
        .map_err(|e| anyhow!("replay failed: {e}"))?;
        let replay = OrbitFile::from_core(&z, &n, self.forward, &fresh, None);
        if replay.multiples != self.multiples
            || replay.gaps != self.gaps
            || replay.max_gap != self.max_gap
        {
            bail!("replayed orbit differs from the stored one");
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Input files
// ---------------------------------------------------------------------------

/// Input file for the dichotomy command: canonical element texts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsFile {
    pub points: Vec<String>,
}

/// Input file for the separator command: a list of sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequencesFile {
    pub sequences: Vec<NullSeqJson>,
}

// ---------------------------------------------------------------------------
// Shared IO helpers
// ---------------------------------------------------------------------------

/// Serializes any artifact with a stable field order and a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).context("serialize artifact")?;
    text.push('\n');
    Ok(text)
}

pub fn from_json_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).context("parse artifact")
}
