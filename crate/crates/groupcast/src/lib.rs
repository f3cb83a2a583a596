//! Exact-rational polyhedral toolkit for broadcast-channel rate regions.
//!
//! The crate constructs, projects, and verifies the rate regions of the
//! K-user combination network under the diamond message set: the four-message
//! groupcast configuration with one message for all receivers, one for all but
//! the last two, and one for all but each of those two. Everything is computed
//! in exact rational arithmetic; region comparisons are decided by exact
//! linear programming, never by floating point.
//!
//! Module map:
//! - [`lattice`]: bitmask algebra on subsets of `[1:K]` and families of subsets
//!   (up-sets, down-sets, per-receiver filters).
//! - [`geometry`]: H-polytopes over named rational variables, Fourier-Motzkin
//!   projection, redundancy removal, exact simplex LP, vertex enumeration.
//! - [`network`]: the combination-network model, modular capacity sums, and
//!   evaluation of mutual-information atoms under the uniform coding
//!   distribution.
//! - [`regions`]: generators for every rate-region polytope (inner bounds,
//!   capacity region, degraded specializations, binning variants).
//! - [`cutset`]: generalized cut-set bounds built from set operators, and
//!   submodular extremal-inequality checks.
//! - [`verify`]: end-to-end pipelines proving inner/outer region equality per
//!   instance, with machine-checkable witnesses on failure.
//! - [`io`]: JSON/CSV wire formats for networks, polytopes, and reports.

pub mod cutset;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod network;
pub mod rat;
pub mod regions;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the operation's domain (bad receiver index,
    /// K out of range, family/network mismatch, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A set family violates its invariants (member outside `[1:K]`, empty
    /// member, or not a subfamily of the required carrier).
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    /// The request exceeds a hard capability limit (K > 16, vertex
    /// enumeration beyond dimension 6, ...).
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// Vertex enumeration was asked for an unbounded polyhedron.
    #[error("unbounded polyhedron: {0}")]
    Unbounded(String),

    /// Input text or JSON does not match the documented schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// Two supposedly equivalent computations disagreed. This indicates a bug
    /// in the toolkit itself, not in the input.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
