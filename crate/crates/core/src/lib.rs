//! Exact computations in groups of null sequences over concrete abelian groups.
//!
//! The ambient objects are concrete metrizable abelian groups `X` (the circle
//! group, finite cyclic groups, the real line, and finite products of these)
//! carrying an invariant metric with exact rational values. On top of them the
//! crate builds the group `c0(X)` of `X`-valued sequences converging to zero,
//! endowed with the uniform (sup) metric, and provides:
//!
//! - exact group arithmetic and the invariant metric on `X` ([`ambient`]);
//! - truncated null sequences with certified tail bounds, the uniform metric
//!   as an exact interval, and the coordinate embeddings/projections
//!   ([`nullseq`]);
//! - algorithms witnessing the precompact / uniformly-discrete dichotomy and
//!   the per-coordinate compactness criterion for boxes in `c0(X)`
//!   ([`separation`]);
//! - finitely supported characters, exact pairings, Bohr-convergence reports,
//!   Schur-failure witnesses, and the separating character schedule for
//!   non-null sequences ([`duality`]);
//! - a staged, certificate-carrying construction of a topological generator
//!   for `c0(T)` over the circle, with exact density certificates and a
//!   certified multiple-finder ([`monothetic`]).
//!
//! All certified paths use exact rational arithmetic; there is no floating
//! point anywhere in the crate. Every inequality that a certificate relies on
//! is a decidable comparison of rationals.
//!
//! The crate is `no_std`-compatible (`alloc` required); the companion CLI
//! crate carries IO, JSON schemas, and file formats.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod ambient;
pub mod duality;
pub mod monothetic;
pub mod nullseq;
pub mod rat;
pub mod separation;

pub use ambient::{GroupDescriptor, GroupElement, Radius};
pub use duality::{CharComponent, Character, PairingValue};
pub use monothetic::{DensityCertificate, GeneratorTrace, StageRecord};
pub use nullseq::{Interval, NullSeq};
pub use rat::Rat;

use alloc::string::String;
use core::fmt;

/// Errors shared by the exact operations of this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two operands belong to different group descriptors.
    DescriptorMismatch,
    /// A value violates a structural invariant (reduced residue, radius sign,
    /// tail bound sign, ...). The message names the violated constraint.
    Invalid(String),
    /// A character touches coordinates of a sequence that are only known up
    /// to a nonzero tail bound, so the pairing is not exactly computable.
    TailAmbiguous { position: usize },
    /// An exact distance was requested between sequences whose tail bounds
    /// make the uniform metric a proper interval rather than a point.
    InexactDistance,
    /// Text input did not parse as the canonical form of the expected type.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DescriptorMismatch => write!(f, "operands belong to different group descriptors"),
            Error::Invalid(msg) => write!(f, "invalid value: {msg}"),
            Error::TailAmbiguous { position } => write!(
                f,
                "pairing touches coordinate {position}, which is only known up to a nonzero tail bound"
            ),
            Error::InexactDistance => {
                write!(f, "uniform distance is an interval here; exact distance requires zero tail bounds")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
