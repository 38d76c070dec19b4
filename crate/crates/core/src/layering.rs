//! Degree-threshold layering, degeneracy, and a tiny-graph arboricity oracle.
//!
//! A `(theta, beta)`-layering puts every vertex of degree at most `theta`
//! in level 0, and assigns a vertex to level `i+1` when `i` is the smallest
//! index for which at least a `(1-beta)` fraction of its neighbors sits in
//! levels `0..=i`. The sampler itself never builds this partition; it exists
//! for offline certification of the walk-distribution bounds.
//!
//! Fraction comparisons are done in exact rational arithmetic on the given
//! `beta`, so boundary cases (`count == (1-beta) * d` exactly) never depend
//! on float rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq)]
pub enum LayeringError {
    /// The greedy fixed point stalled with vertices still unassigned: the
    /// graph admits no layered partition at these parameters.
    #[error("no (theta,beta)-layered partition exists: {unassigned} vertices unassigned after a stalled sweep")]
    NotCovered { unassigned: usize },
    #[error("theta must be at least 1")]
    ZeroTheta,
    #[error("beta must lie strictly inside (0, 1), got {0}")]
    BetaOutOfRange(f64),
}

/// A level assignment `L_0..L_depth` covering every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredPartition {
    levels: Vec<u32>,
    depth: u32,
    theta: u64,
    beta: f64,
}

impl LayeredPartition {
    /// Level of vertex `v`.
    pub fn level(&self, v: u32) -> u32 {
        self.levels[v as usize]
    }

    /// Maximum level.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn theta(&self) -> u64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// All levels, indexed by vertex.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Sizes of the residual sets `W_i = V \ L_{<i}` for `i = 0..=depth+1`,
    /// i.e. `w[i] = #{v : level(v) >= i}`. `w[0] = n` and `w[depth+1] = 0`.
    pub fn w_sizes(&self) -> Vec<usize> {
        let mut w = vec![0usize; self.depth as usize + 2];
        for &lv in &self.levels {
            for slot in w.iter_mut().take(lv as usize + 1) {
                *slot += 1;
            }
        }
        w
    }
}

/// True iff `count >= (1 - beta) * d`, evaluated exactly as
/// `(d - count) * beta.denom <= beta.numer * d`.
fn meets_fraction(count: usize, d: usize, beta: &BigRational) -> bool {
    debug_assert!(count <= d);
    BigInt::from(d - count) * beta.denom() <= beta.numer() * BigInt::from(d)
}

/// Greedy fixed-point computation of the `(theta, beta)`-layering.
///
/// Level-synchronous sweeps: a sweep assigns level `i+1` to every still
/// unassigned vertex whose assigned-neighbor count already meets the
/// threshold against levels `0..=i`. A sweep that assigns nothing while
/// vertices remain proves no partition exists ([`LayeringError::NotCovered`]).
pub fn compute_layering(g: &Graph, theta: u64, beta: f64) -> Result<LayeredPartition, LayeringError> {
    if theta == 0 {
        return Err(LayeringError::ZeroTheta);
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(LayeringError::BetaOutOfRange(beta));
    }
    let beta_exact = BigRational::from_float(beta).expect("beta is finite");
    let n = g.n();
    let unset = u32::MAX;
    let mut levels = vec![unset; n];
    // Count of already-assigned neighbors, maintained incrementally.
    let mut below = vec![0usize; n];
    let mut assigned = 0usize;

    let mut frontier: Vec<u32> = Vec::new();
    for v in 0..n as u32 {
        if g.degree(v) as u64 <= theta {
            levels[v as usize] = 0;
            frontier.push(v);
        }
    }

    let depth;
    let mut current = 0u32;
    loop {
        assigned += frontier.len();
        if assigned == n {
            depth = current;
            break;
        }
        for &v in &frontier {
            for &w in g.neighbors(v) {
                if levels[w as usize] == unset {
                    below[w as usize] += 1;
                }
            }
        }
        let mut next: Vec<u32> = Vec::new();
        for v in 0..n as u32 {
            if levels[v as usize] == unset
                && meets_fraction(below[v as usize], g.degree(v), &beta_exact)
            {
                next.push(v);
            }
        }
        if next.is_empty() {
            return Err(LayeringError::NotCovered {
                unassigned: n - assigned,
            });
        }
        current += 1;
        for &v in &next {
            levels[v as usize] = current;
        }
        frontier = next;
    }

    Ok(LayeredPartition {
        levels,
        depth,
        theta,
        beta,
    })
}

/// Exact degeneracy by iterative min-degree peeling: the largest degree a
/// minimum-degree vertex has at the moment it is removed.
pub fn degeneracy(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let maxd = g.max_degree();
    let mut bins: Vec<Vec<u32>> = vec![Vec::new(); maxd + 1];
    for v in 0..n as u32 {
        bins[deg[v as usize]].push(v);
    }
    let mut removed = vec![false; n];
    let mut delta = 0usize;
    let mut cur = 0usize;
    let mut processed = 0usize;
    while processed < n {
        // Entries go stale when a degree drops; skip them.
        while cur <= maxd && bins[cur].is_empty() {
            cur += 1;
        }
        let v = match bins[cur].pop() {
            Some(v) => v,
            None => continue,
        };
        if removed[v as usize] || deg[v as usize] != cur {
            continue;
        }
        removed[v as usize] = true;
        processed += 1;
        delta = delta.max(cur);
        for &w in g.neighbors(v) {
            if !removed[w as usize] {
                deg[w as usize] -= 1;
                bins[deg[w as usize]].push(w);
            }
        }
        // A neighbor's degree can drop one below the current scan point.
        cur = cur.saturating_sub(1);
    }
    delta
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArboricityError {
    #[error("brute-force arboricity is limited to n <= 16, got n={0}")]
    TooLarge(usize),
}

/// Exact arboricity of a tiny graph by the Nash-Williams density maximum
/// `max_H ceil(m_H / (n_H - 1))` over all induced vertex subsets of size
/// at least 2 (the maximum is always attained on an induced subgraph).
///
/// Returns 0 for an edgeless graph.
pub fn arboricity_bruteforce(g: &Graph) -> Result<u64, ArboricityError> {
    let n = g.n();
    if n > 16 {
        return Err(ArboricityError::TooLarge(n));
    }
    let mut masks = vec![0u32; n];
    for v in 0..n as u32 {
        for &w in g.neighbors(v) {
            masks[v as usize] |= 1 << w;
        }
    }
    let mut best = 0u64;
    for subset in 0u32..(1u32 << n) {
        let k = subset.count_ones();
        if k < 2 {
            continue;
        }
        let mut twice_edges = 0u32;
        let mut rest = subset;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice_edges += (masks[v] & subset).count_ones();
        }
        let edges = (twice_edges / 2) as u64;
        let dens = edges.div_ceil(k as u64 - 1);
        best = best.max(dens);
    }
    Ok(best)
}
