//! Query-counted oracle access to a graph.
//!
//! An [`OracleSession`] is the only route the samplers take to a graph. It
//! exposes exactly the query model the algorithms are charged for: degree
//! queries, neighbor queries, pair queries, and uniform vertex draws, each
//! with its own monotone counter. Callers that need private coins (walk
//! length, acceptance coins, neighbor indices) draw them from a second RNG
//! stream via [`OracleSession::coin`] / [`OracleSession::uniform_index`];
//! those draws are not queries and are never counted.
//!
//! Reproducibility contract: the same seed plus the same operation sequence
//! yields the same answers and draws. Oracle draws and caller coins live on
//! separate ChaCha streams of the same seed, so interleaving private coins
//! does not perturb the oracle's draw sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Per-kind query tallies. Monotone non-decreasing within a session.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub degree: u64,
    pub neighbor: u64,
    pub pair: u64,
    pub uniform: u64,
}

impl QueryCounts {
    /// Sum over all kinds.
    pub fn total(&self) -> u64 {
        self.degree + self.neighbor + self.pair + self.uniform
    }

    /// Tally difference `self - earlier` (each kind).
    pub fn since(&self, earlier: &QueryCounts) -> QueryCounts {
        QueryCounts {
            degree: self.degree - earlier.degree,
            neighbor: self.neighbor - earlier.neighbor,
            pair: self.pair - earlier.pair,
            uniform: self.uniform - earlier.uniform,
        }
    }
}

impl std::ops::AddAssign for QueryCounts {
    fn add_assign(&mut self, rhs: QueryCounts) {
        self.degree += rhs.degree;
        self.neighbor += rhs.neighbor;
        self.pair += rhs.pair;
        self.uniform += rhs.uniform;
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("vertex id {v} out of range (n={n})")]
    VertexOutOfRange { v: u32, n: usize },
    #[error("pair query requires distinct vertices, got u=v={v}")]
    PairNotDistinct { v: u32 },
    #[error("neighbor index must be >= 1 (it is 1-based)")]
    ZeroNeighborIndex,
    #[error("uniform vertex draw on an empty vertex set")]
    EmptyVertexSet,
}

/// Seeded, query-counted access facade over an immutable [`Graph`].
///
/// The session never mutates the graph; counters and RNG state are the only
/// mutable pieces. One session per worker for parallel experiments.
pub struct OracleSession<'g> {
    graph: &'g Graph,
    counts: QueryCounts,
    oracle_rng: ChaCha8Rng,
    coin_rng: ChaCha8Rng,
}

impl<'g> OracleSession<'g> {
    pub fn new(graph: &'g Graph, seed: u64) -> Self {
        let mut oracle_rng = ChaCha8Rng::seed_from_u64(seed);
        oracle_rng.set_stream(0);
        let mut coin_rng = ChaCha8Rng::seed_from_u64(seed);
        coin_rng.set_stream(1);
        OracleSession {
            graph,
            counts: QueryCounts::default(),
            oracle_rng,
            coin_rng,
        }
    }

    /// The graph behind the oracle. Offline harness code may inspect it;
    /// samplers must not.
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Snapshot of the query counters.
    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    fn check_vertex(&self, v: u32) -> Result<(), OracleError> {
        if (v as usize) < self.graph.n() {
            Ok(())
        } else {
            Err(OracleError::VertexOutOfRange {
                v,
                n: self.graph.n(),
            })
        }
    }

    /// Degree query `deg(v)`. Counted.
    pub fn degree(&mut self, v: u32) -> Result<usize, OracleError> {
        self.check_vertex(v)?;
        self.counts.degree += 1;
        Ok(self.graph.degree(v))
    }

    /// Neighbor query `nbr(v, i)` with 1-based `i`. Counted.
    ///
    /// Returns `None` (the special "absent" symbol) when `i > d(v)`; that is
    /// a legitimate answer, not an error.
    pub fn neighbor(&mut self, v: u32, i: usize) -> Result<Option<u32>, OracleError> {
        self.check_vertex(v)?;
        if i == 0 {
            return Err(OracleError::ZeroNeighborIndex);
        }
        self.counts.neighbor += 1;
        Ok(self.graph.neighbors(v).get(i - 1).copied())
    }

    /// Pair query `pair(u, v)`: is `{u,v}` an edge. Counted.
    ///
    /// Implemented for completeness of the query model; the walk sampler
    /// never issues one.
    pub fn pair(&mut self, u: u32, v: u32) -> Result<bool, OracleError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(OracleError::PairNotDistinct { v });
        }
        self.counts.pair += 1;
        Ok(self.graph.has_edge(u, v))
    }

    /// Uniform vertex draw over `[0, n)`. Counted.
    pub fn uniform_vertex(&mut self) -> Result<u32, OracleError> {
        if self.graph.n() == 0 {
            return Err(OracleError::EmptyVertexSet);
        }
        self.counts.uniform += 1;
        Ok(self.oracle_rng.gen_range(0..self.graph.n() as u64) as u32)
    }

    /// Caller-side uniform draw in `[0, bound)`. Not a query; separate stream.
    pub fn uniform_index(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.coin_rng.gen_range(0..bound)
    }

    /// Caller-side coin that is heads with probability exactly `num/den`
    /// (an integer draw, so no floating-point bias). Not a query.
    pub fn coin(&mut self, num: u64, den: u64) -> bool {
        debug_assert!(den > 0);
        self.coin_rng.gen_range(0..den) < num
    }
}
