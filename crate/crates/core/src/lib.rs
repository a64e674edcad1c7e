//! Exact distributional statistics for monochromatic subgraph counts.
//!
//! Given a connected pattern graph `H` with `r` vertices and a host graph `G`
//! whose vertices are colored independently and uniformly from `c` colors,
//! the statistic of interest is `T(H, G)`: the number of copies of `H` in `G`
//! whose vertices all received one color. This crate computes
//!
//! * exact moments of `T` (mean, variance, mixed central moments of the
//!   per-copy centered indicators, and the exact fourth moment of the
//!   standardized count `Z`) in arbitrary-precision rational arithmetic,
//! * a census of the overlap structures that control the distance of `Z`
//!   from the standard normal: 2-shared pairs and quadruples, good joins,
//!   the per-vertex pair counts `ξ_t`, and the ordering-dependent error
//!   functional `Υ`,
//! * the anchored martingale decomposition of `T − E[T]` into per-vertex
//!   increments, verified exactly per coloring,
//! * seeded, reproducible Monte Carlo estimates of the empirical law of `Z`
//!   (moments, histogram, Kolmogorov distance to the normal CDF).
//!
//! The crate is `no_std` (with `alloc`): it contains no IO and no
//! platform dependencies. File formats are plain-string parsers/renderers;
//! reading files, command-line handling, and thread scheduling live in the
//! companion CLI crate. Everything here is deterministic: identical inputs
//! (including seeds) produce identical outputs regardless of how callers
//! shard the work.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

use alloc::string::String;
use core::fmt;

pub mod census;
pub mod color;
pub mod decomp;
pub mod embed;
pub mod graph;
pub mod moments;
pub mod rat;
pub mod report;
pub mod sim;

/// Crate-wide error type.
///
/// Variants map one-to-one onto the distinct failure classes surfaced to
/// callers (and, in the CLI, onto distinct exit codes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual input (edge lists, generator specs); carries a
    /// human-readable description including position information when known.
    Parse(String),
    /// Structurally invalid request (self-loop, disconnected pattern,
    /// color count < 2, mismatched coloring length, ...).
    Validation(String),
    /// A configured cap would be exceeded (copy cap, tuple cap, oracle size).
    /// Names the cap so callers can raise it deliberately.
    Capacity(String),
    /// The requested statistic is undefined for this instance
    /// (e.g. moments of `Z` when the variance is zero).
    UndefinedStatistic(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity exceeded: {msg}"),
            Error::UndefinedStatistic(msg) => write!(f, "undefined statistic: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
