//! Almost-uniform edge sampling in bounded-arboricity graphs.
//!
//! Given degree/neighbor query access to a graph with `n` vertices and
//! arboricity at most `alpha`, the walk sampler returns each ordered edge
//! with probability in `[(1 - eps/2)/rho, 1/rho]` per attempt, where
//! `rho = n * theta * (ell + 1)`, using `O(alpha/d_avg * log^3 n / eps)`
//! queries in expectation. The crate pairs the sampler with an exact
//! analyzer that evaluates the walk-return distribution in arbitrary
//! precision rationals and certifies those bounds on concrete graphs, a
//! statistical verifier, deterministic graph generators with arboricity
//! certificates, and a benchmark harness.
//!
//! Modules:
//! - [`graph`]: immutable adjacency storage and the edge-list format;
//! - [`oracle`]: the query-counted access facade;
//! - [`params`]: derived constants `theta`, `beta`, `ell`, `rho`;
//! - [`layering`]: the degree-threshold layered partition, degeneracy, and
//!   a brute-force arboricity oracle for tiny graphs;
//! - [`sampler`]: the walk sampler and the two rejection baselines;
//! - [`analyzer`]: exact walk-distribution tables and certification;
//! - [`generators`]: seeded constructors with declared arboricity bounds;
//! - [`harness`]: Monte-Carlo verification, benchmarking, edge-count
//!   estimation.
//!
//! Concurrency: [`graph::Graph`] is immutable after construction and safe
//! to share across threads. Each [`oracle::OracleSession`] is
//! single-threaded; run parallel experiments with one session per worker,
//! each under its own seed.

pub mod analyzer;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod layering;
pub mod oracle;
pub mod params;
pub mod sampler;

pub use graph::{Graph, GraphError};
pub use oracle::{OracleSession, QueryCounts};
pub use params::SamplerParams;
