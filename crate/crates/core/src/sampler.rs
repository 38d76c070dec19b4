//! The walk-based edge sampler and the two rejection baselines.
//!
//! Everything here touches the graph only through an [`OracleSession`]; the
//! per-kind query counters therefore account for the full cost of a sample.
//! One attempt of the walk sampler costs at most `2 + 2*ell + 1` queries:
//! a uniform draw plus a degree query to find a start vertex, one neighbor
//! plus one degree query per walk step (the step degree doubles as the
//! low-degree failure test and the next step's neighbor bound), and a final
//! neighbor query to pick the reported edge.
//!
//! All acceptance coins are integer draws (`uniform_index`), so acceptance
//! probabilities like `d(u)/theta` hold exactly rather than up to float
//! rounding.

use thiserror::Error;

use crate::oracle::{OracleError, OracleSession, QueryCounts};
use crate::params::SamplerParams;

/// An ordered edge: the sampler's native outcome.
pub type OrderedEdge = (u32, u32);

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("no edge returned after {attempts} attempts (is m zero, or far below rho/attempts?)")]
    Exhausted { attempts: u64 },
    #[error("vertex {vertex} has degree {degree} > dmax={dmax}; the rejection baseline's cap is a caller contract")]
    DegreeExceedsCap { vertex: u32, degree: usize, dmax: u64 },
    #[error("eps must lie strictly inside (0, 1), got {0}")]
    EpsOutOfRange(f64),
}

/// Record of a single `sample_edge_once` attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkOutcome {
    /// The returned ordered edge, or `None` on FAIL.
    pub result: Option<OrderedEdge>,
    /// Queries this attempt consumed, by kind.
    pub queries: QueryCounts,
    /// The walk length `j` drawn for this attempt.
    pub walk_length: u32,
}

/// Successful result of the repeat-until-success wrapper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSuccess {
    pub edge: OrderedEdge,
    /// Number of attempts including the successful one.
    pub attempts: u64,
    /// Total queries across all attempts.
    pub queries: QueryCounts,
}

impl SampleSuccess {
    /// The edge with orientation discarded, as `(min, max)`.
    pub fn unordered_edge(&self) -> (u32, u32) {
        let (u, v) = self.edge;
        (u.min(v), u.max(v))
    }
}

/// Start-vertex selection: a uniform vertex, kept with probability
/// `d(u)/theta` (vertices above the threshold always fail). Returns the
/// vertex and its already-queried degree.
fn sample_a_leaf_inner(
    session: &mut OracleSession,
    theta: u64,
) -> Result<Option<(u32, usize)>, SamplerError> {
    let u = session.uniform_vertex()?;
    let d = session.degree(u)?;
    if d as u64 > theta {
        return Ok(None);
    }
    if session.coin(d as u64, theta) {
        Ok(Some((u, d)))
    } else {
        Ok(None)
    }
}

/// One rejection-sampling draw of a low-degree start vertex.
/// Costs exactly 1 uniform draw + 1 degree query.
pub fn sample_a_leaf(
    session: &mut OracleSession,
    theta: u64,
) -> Result<Option<u32>, SamplerError> {
    Ok(sample_a_leaf_inner(session, theta)?.map(|(v, _)| v))
}

fn random_walk_inner(
    session: &mut OracleSession,
    params: &SamplerParams,
    j: u32,
) -> Result<Option<(u32, usize)>, SamplerError> {
    let (mut v, mut d) = match sample_a_leaf_inner(session, params.theta)? {
        Some(start) => start,
        None => return Ok(None),
    };
    for _ in 0..j {
        // d >= 1 here: a degree-0 start never passes the acceptance coin,
        // and later vertices were reached over an edge.
        let idx = session.uniform_index(d as u64) as usize + 1;
        let next = session
            .neighbor(v, idx)?
            .expect("neighbor index drawn within degree");
        let nd = session.degree(next)?;
        // Re-entering the low-degree level kills the walk; the degree
        // query doubles as that membership test.
        if nd as u64 <= params.theta {
            return Ok(None);
        }
        v = next;
        d = nd;
    }
    Ok(Some((v, d)))
}

/// Random walk of length `j` from a threshold-accepted start vertex,
/// aborting if any later step lands on a vertex of degree at most `theta`.
pub fn random_walk(
    session: &mut OracleSession,
    params: &SamplerParams,
    j: u32,
) -> Result<Option<u32>, SamplerError> {
    debug_assert!(j <= params.ell);
    Ok(random_walk_inner(session, params, j)?.map(|(v, _)| v))
}

/// One full sampling attempt: draw `j` uniform in `[0, ell]`, run the walk,
/// and on success report the walk's endpoint together with a uniform
/// neighbor as an ordered edge.
pub fn sample_edge_once(
    session: &mut OracleSession,
    params: &SamplerParams,
) -> Result<WalkOutcome, SamplerError> {
    let before = session.counts();
    let j = session.uniform_index(params.ell as u64 + 1) as u32;
    let result = match random_walk_inner(session, params, j)? {
        None => None,
        Some((v, d)) => {
            let idx = session.uniform_index(d as u64) as usize + 1;
            let w = session
                .neighbor(v, idx)?
                .expect("neighbor index drawn within degree");
            Some((v, w))
        }
    };
    Ok(WalkOutcome {
        result,
        queries: session.counts().since(&before),
        walk_length: j,
    })
}

/// Repeats [`sample_edge_once`] until an edge comes back. Conditioned on
/// success the ordered-edge law is pointwise close to uniform; truncation
/// at `max_attempts` is reported as [`SamplerError::Exhausted`], never
/// silently resampled.
pub fn sample_edge(
    session: &mut OracleSession,
    params: &SamplerParams,
    max_attempts: u64,
) -> Result<SampleSuccess, SamplerError> {
    let mut queries = QueryCounts::default();
    for attempt in 1..=max_attempts {
        let outcome = sample_edge_once(session, params)?;
        queries += outcome.queries;
        if let Some(edge) = outcome.result {
            return Ok(SampleSuccess {
                edge,
                attempts: attempt,
                queries,
            });
        }
    }
    Err(SamplerError::Exhausted {
        attempts: max_attempts,
    })
}

/// One attempt of the max-degree rejection baseline: uniform vertex `u`,
/// coin with bias `d(u)/dmax`, then a uniform incident edge. Per attempt
/// every ordered edge comes out with probability exactly `1/(n*dmax)`.
///
/// `dmax` is a caller contract; observing a larger degree is an error.
pub fn rejection_baseline_once(
    session: &mut OracleSession,
    dmax: u64,
) -> Result<Option<OrderedEdge>, SamplerError> {
    debug_assert!(dmax >= 1);
    let u = session.uniform_vertex()?;
    let d = session.degree(u)?;
    if d as u64 > dmax {
        return Err(SamplerError::DegreeExceedsCap {
            vertex: u,
            degree: d,
            dmax,
        });
    }
    if !session.coin(d as u64, dmax) {
        return Ok(None);
    }
    let idx = session.uniform_index(d as u64) as usize + 1;
    let w = session
        .neighbor(u, idx)?
        .expect("neighbor index drawn within degree");
    Ok(Some((u, w)))
}

/// Repeat wrapper for the rejection baseline; exactly uniform over ordered
/// edges, with expected attempts `n * dmax / (2m)`.
pub fn rejection_baseline(
    session: &mut OracleSession,
    dmax: u64,
    max_attempts: u64,
) -> Result<(OrderedEdge, u64), SamplerError> {
    for attempt in 1..=max_attempts {
        if let Some(edge) = rejection_baseline_once(session, dmax)? {
            return Ok((edge, attempt));
        }
    }
    Err(SamplerError::Exhausted {
        attempts: max_attempts,
    })
}

/// Degree cap used by the TVD baseline: `ceil(1/eps)`.
pub fn tvd_cap(eps: f64) -> Result<u64, SamplerError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(SamplerError::EpsOutOfRange(eps));
    }
    Ok((1.0 / eps).ceil() as u64)
}

/// One attempt of the TVD baseline: ignore vertices of degree above
/// `ceil(1/eps)` entirely, otherwise accept with bias `d(u)/cap` and return
/// a uniform incident edge. Cheap, but only close to uniform in total
/// variation distance: edges at capped vertices are never reported.
pub fn tvd_baseline(
    session: &mut OracleSession,
    eps: f64,
) -> Result<Option<OrderedEdge>, SamplerError> {
    let cap = tvd_cap(eps)?;
    let u = session.uniform_vertex()?;
    let d = session.degree(u)?;
    if d as u64 > cap || !session.coin(d as u64, cap) {
        return Ok(None);
    }
    let idx = session.uniform_index(d as u64) as usize + 1;
    let w = session
        .neighbor(u, idx)?
        .expect("neighbor index drawn within degree");
    Ok(Some((u, w)))
}

/// Repeat wrapper for the TVD baseline.
pub fn tvd_baseline_repeat(
    session: &mut OracleSession,
    eps: f64,
    max_attempts: u64,
) -> Result<(OrderedEdge, u64), SamplerError> {
    for attempt in 1..=max_attempts {
        if let Some(edge) = tvd_baseline(session, eps)? {
            return Ok((edge, attempt));
        }
    }
    Err(SamplerError::Exhausted {
        attempts: max_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_basic, BasicFamily};
    use crate::graph::Graph;
    use crate::oracle::OracleSession;

    fn params_for(n: usize, alpha: u64, eps: f64) -> SamplerParams {
        SamplerParams::derive(n, alpha, eps).unwrap()
    }

    #[test]
    fn leaf_sampler_fails_on_isolated_vertices() {
        let g = Graph::parse_edge_list("n=3\n").unwrap();
        let mut s = OracleSession::new(&g, 1);
        for _ in 0..100 {
            assert_eq!(sample_a_leaf(&mut s, 8).unwrap(), None);
        }
    }

    #[test]
    fn leaf_sampler_always_accepts_at_threshold_degree() {
        // complete(3): every vertex has degree 2 == theta
        let g = gen_basic(BasicFamily::Complete, 3).unwrap().graph;
        let mut s = OracleSession::new(&g, 2);
        for _ in 0..200 {
            assert!(sample_a_leaf(&mut s, 2).unwrap().is_some());
        }
    }

    #[test]
    fn leaf_sampler_single_edge_rate() {
        // Pr[returns vertex 0] = (1/2) * (1/8) = 1/16
        let g = Graph::parse_edge_list("0 1\n").unwrap();
        let mut s = OracleSession::new(&g, 3);
        let trials = 320_000u64;
        let mut hits = 0u64;
        for _ in 0..trials {
            if sample_a_leaf(&mut s, 8).unwrap() == Some(0) {
                hits += 1;
            }
        }
        let p = 1.0 / 16.0;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!(((hits as f64) - trials as f64 * p).abs() <= 5.0 * sigma);
    }

    #[test]
    fn walk_of_length_zero_is_the_leaf_sampler() {
        let g = gen_basic(BasicFamily::Star, 9).unwrap().graph;
        let params = params_for(9, 1, 0.5);
        let mut s1 = OracleSession::new(&g, 77);
        let mut s2 = OracleSession::new(&g, 77);
        for _ in 0..500 {
            let a = random_walk(&mut s1, &params, 0).unwrap();
            let b = sample_a_leaf(&mut s2, params.theta).unwrap();
            assert_eq!(a, b);
        }
        assert_eq!(s1.counts(), s2.counts());
    }

    #[test]
    fn single_edge_walk_length_one_always_fails() {
        // both endpoints have degree 1 <= theta, so step 1 re-enters L_0
        let g = Graph::parse_edge_list("0 1\n").unwrap();
        let params = params_for(2, 1, 0.5);
        assert_eq!(params.theta, 8);
        let mut s = OracleSession::new(&g, 5);
        for _ in 0..500 {
            assert_eq!(random_walk(&mut s, &params, 1).unwrap(), None);
        }
    }

    #[test]
    fn star_walk_length_one_hits_center_at_rate_four_ninths() {
        // theta=2: leaves accepted w.p. 1/2, then step to the center which
        // has degree 8 > theta. Total 8 * (1/9) * (1/2) = 4/9.
        let g = gen_basic(BasicFamily::Star, 9).unwrap().graph;
        let params = SamplerParams {
            n: 9,
            alpha: 1,
            eps: 0.5,
            theta: 2,
            beta: 0.1,
            ell: 4,
            rho: 9 * 2 * 5,
        };
        let mut s = OracleSession::new(&g, 13);
        let trials = 200_000u64;
        let mut center = 0u64;
        for _ in 0..trials {
            match random_walk(&mut s, &params, 1).unwrap() {
                Some(0) => center += 1,
                Some(v) => panic!("walk of length 1 returned a leaf {v}"),
                None => {}
            }
        }
        let p = 4.0 / 9.0;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!(((center as f64) - trials as f64 * p).abs() <= 5.0 * sigma);
    }

    #[test]
    fn attempt_query_budget_and_walk_length_range() {
        let g = gen_basic(BasicFamily::Star, 65).unwrap().graph;
        let params = params_for(65, 1, 0.5);
        let mut s = OracleSession::new(&g, 9);
        let budget = 2 + 2 * params.ell as u64 + 1;
        for _ in 0..2_000 {
            let out = sample_edge_once(&mut s, &params).unwrap();
            assert!(out.walk_length <= params.ell);
            assert!(out.queries.total() <= budget, "{:?}", out.queries);
            assert_eq!(out.queries.pair, 0, "walk sampler must not issue pair queries");
        }
    }

    #[test]
    fn outcome_sequence_is_seed_deterministic() {
        let g = gen_basic(BasicFamily::Star, 9).unwrap().graph;
        let params = params_for(9, 1, 0.5);
        let runs = |seed: u64| -> Vec<WalkOutcome> {
            let mut s = OracleSession::new(&g, seed);
            (0..200)
                .map(|_| sample_edge_once(&mut s, &params).unwrap())
                .collect()
        };
        assert_eq!(runs(21), runs(21));
        assert_ne!(runs(21), runs(22));
    }

    #[test]
    fn low_degree_absorption_on_star() {
        // With theta=2 every successful walk with j >= 1 must end at the
        // center, and no walk with j >= 2 can succeed (the center's
        // neighbors are all leaves).
        let g = gen_basic(BasicFamily::Star, 9).unwrap().graph;
        let params = SamplerParams {
            n: 9,
            alpha: 1,
            eps: 0.5,
            theta: 2,
            beta: 0.1,
            ell: 4,
            rho: 9 * 2 * 5,
        };
        let mut s = OracleSession::new(&g, 31);
        for _ in 0..3_000 {
            let out = sample_edge_once(&mut s, &params).unwrap();
            if let Some((v, _)) = out.result {
                match out.walk_length {
                    0 => assert_ne!(v, 0, "center is above theta, cannot start a walk"),
                    1 => assert_eq!(v, 0),
                    _ => panic!("length-{} walk cannot succeed on a star", out.walk_length),
                }
            }
        }
    }

    #[test]
    fn empty_graph_exhausts() {
        let g = Graph::parse_edge_list("n=4\n").unwrap();
        let params = params_for(4, 1, 0.5);
        let mut s = OracleSession::new(&g, 2);
        let err = sample_edge(&mut s, &params, 100).unwrap_err();
        assert_eq!(err, SamplerError::Exhausted { attempts: 100 });
    }

    #[test]
    fn single_edge_attempts_and_orientation_balance() {
        // success probability 2/32 = 1/16 per attempt
        let g = Graph::parse_edge_list("0 1\n").unwrap();
        let params = params_for(2, 1, 0.5);
        let mut s = OracleSession::new(&g, 17);
        let runs = 4_000u64;
        let mut attempts_total = 0u64;
        let mut forward = 0u64;
        for _ in 0..runs {
            let got = sample_edge(&mut s, &params, 10_000).unwrap();
            attempts_total += got.attempts;
            if got.edge == (0, 1) {
                forward += 1;
            } else {
                assert_eq!(got.edge, (1, 0));
            }
        }
        let mean_attempts = attempts_total as f64 / runs as f64;
        // E[attempts] = 16; sd of the mean ~ sqrt(16*15)/sqrt(runs) ~ 0.245
        assert!((mean_attempts - 16.0).abs() < 1.3, "mean {mean_attempts}");
        let sigma = (runs as f64 * 0.25).sqrt();
        assert!(((forward as f64) - runs as f64 * 0.5).abs() <= 5.0 * sigma);
    }

    #[test]
    fn rejection_baseline_on_single_edge() {
        let g = Graph::parse_edge_list("0 1\n").unwrap();
        let mut s = OracleSession::new(&g, 4);
        let mut seen = [0u64; 2];
        for _ in 0..2_000 {
            let (edge, attempts) = rejection_baseline(&mut s, 1, 10).unwrap();
            assert_eq!(attempts, 1, "dmax equals every degree, no rejections");
            seen[edge.0 as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn rejection_baseline_never_rejects_on_regular_graphs() {
        let g = gen_basic(BasicFamily::Complete, 4).unwrap().graph;
        let mut s = OracleSession::new(&g, 4);
        for _ in 0..500 {
            let (_, attempts) = rejection_baseline(&mut s, 3, 5).unwrap();
            assert_eq!(attempts, 1);
        }
    }

    #[test]
    fn rejection_baseline_detects_cap_violation() {
        // The contract error fires as soon as the over-cap center is drawn.
        let g = gen_basic(BasicFamily::Star, 9).unwrap().graph;
        let mut s = OracleSession::new(&g, 6);
        for _ in 0..100_000 {
            match rejection_baseline_once(&mut s, 2) {
                Ok(_) => continue,
                Err(err) => {
                    assert!(matches!(
                        err,
                        SamplerError::DegreeExceedsCap { vertex: 0, degree: 8, dmax: 2 }
                    ));
                    return;
                }
            }
        }
        panic!("center (degree 8 > dmax 2) was never drawn in 100k attempts");
    }

    #[test]
    fn tvd_baseline_ignores_high_degree_sources() {
        // cap = 2: the star center (degree 8) is never the source
        let g = gen_basic(BasicFamily::Star, 9).unwrap().graph;
        let mut s = OracleSession::new(&g, 8);
        let mut per_leaf = [0u64; 9];
        let mut successes = 0u64;
        for _ in 0..50_000 {
            if let Some((u, v)) = tvd_baseline(&mut s, 0.5).unwrap() {
                assert_ne!(u, 0);
                assert_eq!(v, 0);
                per_leaf[u as usize] += 1;
                successes += 1;
            }
        }
        // conditional law uniform over the 8 leaf-sourced ordered edges
        let p = 1.0 / 8.0;
        for (leaf, &count) in per_leaf.iter().enumerate().skip(1) {
            let c = count as f64;
            let sigma = (successes as f64 * p * (1.0 - p)).sqrt();
            assert!((c - successes as f64 * p).abs() <= 5.0 * sigma, "leaf {leaf}");
        }
    }

    #[test]
    fn tvd_cap_values() {
        assert_eq!(tvd_cap(0.5).unwrap(), 2);
        assert_eq!(tvd_cap(0.1).unwrap(), 10);
        assert_eq!(tvd_cap(0.3).unwrap(), 4);
        assert!(tvd_cap(0.0).is_err());
        assert!(tvd_cap(1.0).is_err());
    }

    #[test]
    fn path_tvd_baseline_covers_all_ordered_edges() {
        let g = gen_basic(BasicFamily::Path, 4).unwrap().graph;
        let mut s = OracleSession::new(&g, 10);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..20_000 {
            if let Some(e) = tvd_baseline(&mut s, 0.5).unwrap() {
                seen.insert(e);
            }
        }
        assert_eq!(seen.len(), 2 * g.m(), "all degrees are below the cap");
    }
}
