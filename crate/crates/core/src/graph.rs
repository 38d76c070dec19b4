//! Immutable labeled graph storage.
//!
//! A [`Graph`] is a simple undirected graph over vertices `0..n` with a
//! per-vertex neighbor list whose order is fixed at construction time. That
//! order defines the answer to "what is the i-th neighbor of v" and never
//! changes afterwards, so every downstream consumer (oracle sessions, the
//! exact analyzer, generators) sees the same labeling.

use std::fmt::Write as _;

use thiserror::Error;

/// Errors from building or parsing a graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed edge line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: u32 },
    #[error("line {line}: duplicate edge {{{u},{v}}}")]
    DuplicateEdge { line: usize, u: u32, v: u32 },
    #[error("line {line}: vertex id {v} out of range for declared n={n}")]
    VertexOutOfRange { line: usize, v: u32, n: usize },
    #[error("line {line}: invalid header {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("edge list is empty and no n=<int> header was given")]
    Empty,
}

/// Simple undirected graph with stable neighbor ordering.
///
/// Invariants (enforced at construction):
/// - no self-loops, no parallel edges;
/// - symmetry: `v` appears exactly once in `adjacency(u)` iff `u` appears
///   exactly once in `adjacency(v)`;
/// - neighbor lists keep first-appearance order of the source edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl Graph {
    /// Builds a graph over `n` vertices from an unordered edge list.
    ///
    /// Neighbor lists record endpoints in the order edges are supplied, so
    /// generators control the canonical neighbor order by emission order.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let line = idx + 1;
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            for &w in &[u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange { line, v: w, n });
                }
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    /// Parses the edge-list text format.
    ///
    /// One `u v` pair of decimal integers per line, whitespace-separated.
    /// Lines starting with `#` are ignored. An optional `n=<int>` header
    /// line declares the vertex count (allowing isolated vertices); without
    /// it, `n` is inferred as `max id + 1`.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut declared_n: Option<usize> = None;
        let mut edges: Vec<(u32, u32, usize)> = Vec::new();
        let mut max_id: Option<u32> = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            if let Some(rest) = s.strip_prefix("n=") {
                let n: usize = rest.trim().parse().map_err(|_| GraphError::BadHeader {
                    line,
                    text: s.to_string(),
                })?;
                declared_n = Some(n);
                continue;
            }
            let mut it = s.split_whitespace();
            let (a, b, extra) = (it.next(), it.next(), it.next());
            let (a, b) = match (a, b, extra) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(GraphError::Malformed {
                        line,
                        text: s.to_string(),
                    })
                }
            };
            let parse = |t: &str| -> Result<u32, GraphError> {
                t.parse().map_err(|_| GraphError::Malformed {
                    line,
                    text: s.to_string(),
                })
            };
            let (u, v) = (parse(a)?, parse(b)?);
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push((u, v, line));
        }

        let n = match declared_n {
            Some(n) => n,
            None => match max_id {
                Some(m) => m as usize + 1,
                None => return Err(GraphError::Empty),
            },
        };

        // Re-run the edge validation with real line numbers.
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(u, v, line) in &edges {
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            for &w in &[u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange { line, v: w, n });
                }
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    /// Serializes to the edge-list format, always with the `n=` header so
    /// isolated vertices round-trip.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.n());
        for (u, v) in self.unordered_edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Unordered edge count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree of `v`.
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Neighbor list of `v` in stable order.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Maximum degree, 0 for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Average degree `2m/n`.
    pub fn avg_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.m as f64 / self.n() as f64
        }
    }

    /// True iff `{u,v}` is an edge (linear scan; desk-scale graphs).
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].contains(&v)
    }

    /// All unordered edges `(u,v)` with `u < v`, sorted.
    pub fn unordered_edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() as u32 {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All ordered edges `(u,v)`, i.e. both orientations, sorted. There are
    /// `2m` of them; this is the sampler's native outcome space.
    pub fn ordered_edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(2 * self.m);
        for u in 0..self.n() as u32 {
            for &v in self.neighbors(u) {
                out.push((u, v));
            }
        }
        out.sort_unstable();
        out
    }
}
