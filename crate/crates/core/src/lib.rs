//! Exact construction, classification and analysis of homogeneous 2-local
//! matrix representations of braid groups and their multi-virtual and
//! multi-welded extensions.
//!
//! Module map:
//! - [`symalg`]: Laurent polynomials and rational functions over Q.
//! - [`presentations`]: generators, words and instantiated relation lists.
//! - [`localrep`]: 2-local block representations, relation verification and
//!   the catalog of known families.
//! - [`classifier`]: derivation and case-splitting solution of the block
//!   equations.
//! - [`analysis`]: invariant vectors, conjugation, Burnside span closure and
//!   kernel witnesses.
//! - [`lkb`]: the Lawrence–Krammer–Bigelow representation and its welded
//!   extensions.

pub mod analysis;
pub mod classifier;
pub mod lkb;
pub mod localrep;
pub mod matrix;
pub mod par;
pub mod presentations;
pub mod symalg;

/// Version tag embedded in every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
