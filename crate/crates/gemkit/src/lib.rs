//! Edge-colored graphs ("gems") encoding compact PL manifolds, with exact
//! combinatorial invariants in dimension 4.
//!
//! An `(n+1)`-colored graph is a finite multigraph, regular of degree `n+1`,
//! whose edges are colored by `0..=n` so that the colors meeting each vertex
//! are pairwise distinct.  Such a graph encodes a colored triangulation: one
//! `n`-simplex per graph vertex, with `c`-adjacent vertices glued along the
//! faces opposite their `c`-labelled corners.  When every residue of the
//! graph is a sphere the carrier is a closed manifold; when exactly one color
//! has non-spherical residues the carrier is a singular manifold, i.e. the
//! cone-completion `M̂` of a compact manifold `M` with boundary.
//!
//! The crate computes, exactly and over explicit certificates:
//!
//! * regular genus, Gurau degree and gem-complexity witnesses
//!   ([`invariants`]);
//! * recognition of the encoded space: surface classification, closed
//!   3-manifold checks, one-sided 3-sphere certification, gem classification
//!   and dipole moves ([`recognition`]);
//! * fundamental-group presentations read off bicolored cycles, with a
//!   deterministic collapse procedure and exact abelianization ([`pi1`]);
//! * trisection data induced by a gem of a simply-connected singular
//!   4-manifold ([`trisection`]);
//! * face vectors, Euler characteristics and Betti numbers of the encoded
//!   pseudocomplex over `ℚ` and `ℤ/2` ([`homology`]);
//! * graph connected sums, exhaustive and randomized graph generation, and a
//!   registry of bundled example gems ([`constructions`]).
//!
//! All arithmetic is exact: genera are half-integers ([`genus::GenusValue`]),
//! matrix ranks are computed by fraction-free elimination over arbitrary
//! precision integers, and every identity check reports its two sides rather
//! than a rounded verdict.

#![forbid(unsafe_code)]

pub mod canon;
pub mod constructions;
pub mod genus;
pub mod graph;
pub mod homology;
pub mod invariants;
mod linalg;
pub mod perm;
pub mod pi1;
pub mod recognition;
pub mod trisection;

pub(crate) mod dsu;

pub use genus::GenusValue;
pub use graph::{Color, ColorSet, ColoredGraph, Metadata, ResiduePartition, Vertex};

use thiserror::Error;

/// Crate-wide error type.  Structural problems found while *validating* a
/// parsed graph are reported in bulk through
/// [`graph::ValidationReport`]; `GemError` is for operations that refuse to
/// proceed.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GemError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("JSON error: {0}")]
    Json(String),
    #[error("structural validation failed: {0}")]
    Invalid(String),
    #[error("unsupported number of colors {found}: expected between 3 and 7")]
    ColorCount { found: usize },
    #[error("operation requires a {expected}-colored graph, found {found} colors")]
    WrongDimension { expected: usize, found: usize },
    #[error("color {color} out of range for a graph with {colors} colors")]
    ColorOutOfRange { color: Color, colors: usize },
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: Vertex, order: usize },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("graph is not a crystallization: {count} residues missing color {color}")]
    NotCrystallization { color: Color, count: usize },
    #[error("residue over colors {colors:?} is not unique ({count} components)")]
    MultipleResidues { colors: Vec<Color>, count: usize },
    #[error("Euler characteristic formula is non-integral: 3·chi = {three_chi}")]
    NonIntegralEuler { three_chi: i64 },
    #[error("negative excess t = {value} at triple {triple:?}; claimed ranks too large")]
    NegativeExcess { triple: Vec<Color>, value: i64 },
    #[error("graph is not bipartite; operation requires a bipartition")]
    NotBipartite,
    #[error("dipole is stale or not a dipole: {0}")]
    BadDipole(String),
    #[error("dipole insertion is invalid: {0}")]
    BadInsertion(String),
    #[error("graph fails the recognition precondition: {0}")]
    Recognition(String),
    #[error("connected sum is not class-compatible: {0}")]
    SumIncompatible(String),
    #[error("enumeration request out of supported range: {0}")]
    SearchRange(String),
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, GemError>;
