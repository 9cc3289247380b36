//! Arcs in finite projective spaces PG(k−1, q): constructions, the
//! arc–MDS code bridge, lemma-of-tangents checks, the envelope of the
//! tangent hyperplanes, extendability tests and small classifications.
//!
//! The guide in `book/` walks through each module; its snippets are
//! compiled as doctests of this crate.

pub mod arc;
pub mod classify;
pub mod cli;
pub mod codes;
pub mod envelope;
pub mod error;
pub mod extend;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod tangent;

pub use error::{Error, Result};

/// The guide's chapters, compiled so that their snippets run as doctests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/fields.md")]
    struct Fields;
    #[doc = include_str!("../../../book/src/arcs.md")]
    struct Arcs;
    #[doc = include_str!("../../../book/src/codes.md")]
    struct Codes;
    #[doc = include_str!("../../../book/src/tangents.md")]
    struct Tangents;
    #[doc = include_str!("../../../book/src/envelope.md")]
    struct Envelope;
    #[doc = include_str!("../../../book/src/extend.md")]
    struct Extend;
    #[doc = include_str!("../../../book/src/classify.md")]
    struct Classify;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
