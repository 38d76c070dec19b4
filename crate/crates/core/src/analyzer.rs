//! Exact evaluation of the walk distribution and certification of its
//! probability bounds.
//!
//! The table `P_j[v]` is the probability that a length-`j` walk attempt
//! returns `v`. It satisfies
//!
//! - `P_0[v] = d(v) / (n * theta)` when `d(v) <= theta`, else `0`;
//! - `P_j[v] = 0` for `j >= 1` when `d(v) <= theta` (the walk dies on
//!   re-entering the low-degree level);
//! - `P_j[v] = sum_{u in N(v)} P_{j-1}[u] / d(u)` otherwise.
//!
//! Everything is computed in arbitrary-precision rationals, so the
//! certified inequalities are checked with zero tolerance. At desk scale
//! (thousands of vertices, walk bounds around 12) the common denominators
//! stay well within what `BigRational` handles instantly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::layering::LayeredPartition;
use crate::params::SamplerParams;
use crate::sampler::{tvd_cap, OrderedEdge};

#[derive(Debug, Error, PartialEq)]
pub enum AnalyzerError {
    #[error("layering mismatch: {0}")]
    ParamsMismatch(String),
    #[error("law is not normalized: sums to {sum} (must be 1 within 1e-12)")]
    NotNormalized { sum: f64 },
    #[error("law assigns probability to ({0}, {1}), which is not an ordered edge of the graph")]
    UnknownEdge(u32, u32),
    #[error("dmax={dmax} is below the true maximum degree {max_degree}")]
    CapBelowMaxDegree { dmax: u64, max_degree: usize },
    #[error("eps must lie strictly inside (0, 1), got {0}")]
    EpsOutOfRange(f64),
}

/// Exact table of walk return probabilities for one parameter set.
pub struct WalkDistribution<'g> {
    graph: &'g Graph,
    params: SamplerParams,
    rows: Vec<Vec<BigRational>>,
    cumulative: Vec<BigRational>,
}

/// Computes the exact `P_j` table for `j = 0..=ell`.
///
/// The table always uses the params' `ell`, even when the graph's layering
/// has smaller depth: it must model the algorithm as run.
pub fn walk_distribution<'g>(g: &'g Graph, params: &SamplerParams) -> WalkDistribution<'g> {
    let n = g.n();
    let n_theta = BigInt::from(n as u64) * BigInt::from(params.theta);
    let zero = BigRational::zero();

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(params.ell as usize + 1);
    let row0: Vec<BigRational> = (0..n as u32)
        .map(|v| {
            let d = g.degree(v);
            if d as u64 <= params.theta {
                BigRational::new(BigInt::from(d as u64), n_theta.clone())
            } else {
                zero.clone()
            }
        })
        .collect();
    rows.push(row0);

    for _j in 1..=params.ell {
        let prev = rows.last().unwrap();
        // Mass each vertex forwards per incident edge.
        let share: Vec<BigRational> = (0..n as u32)
            .map(|u| {
                let d = g.degree(u);
                if d == 0 || prev[u as usize].is_zero() {
                    zero.clone()
                } else {
                    &prev[u as usize] / BigRational::from_integer(BigInt::from(d as u64))
                }
            })
            .collect();
        let row: Vec<BigRational> = (0..n as u32)
            .map(|v| {
                if g.degree(v) as u64 <= params.theta {
                    zero.clone()
                } else {
                    let mut acc = BigRational::zero();
                    for &u in g.neighbors(v) {
                        if !share[u as usize].is_zero() {
                            acc += &share[u as usize];
                        }
                    }
                    acc
                }
            })
            .collect();
        rows.push(row);
    }

    let cumulative: Vec<BigRational> = (0..n)
        .map(|v| {
            let mut acc = BigRational::zero();
            for row in &rows {
                acc += &row[v];
            }
            acc
        })
        .collect();

    WalkDistribution {
        graph: g,
        params: params.clone(),
        rows,
        cumulative,
    }
}

impl<'g> WalkDistribution<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn params(&self) -> &SamplerParams {
        &self.params
    }

    /// `P_j[v]`.
    pub fn prob(&self, j: u32, v: u32) -> &BigRational {
        &self.rows[j as usize][v as usize]
    }

    /// `P_{<=ell}[v]`.
    pub fn prob_total(&self, v: u32) -> &BigRational {
        &self.cumulative[v as usize]
    }

    /// Exact success probability of one sampling attempt:
    /// `sum_v P_{<=ell}[v] / (ell + 1)`.
    pub fn success_probability(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for c in &self.cumulative {
            acc += c;
        }
        acc / BigRational::from_integer(BigInt::from(self.params.ell as u64 + 1))
    }

    /// Per-ordered-edge return probability of one attempt:
    /// `Pr[(v, w)] = P_{<=ell}[v] / ((ell + 1) * d(v))`.
    pub fn edge_return_probabilities(&self) -> BTreeMap<OrderedEdge, BigRational> {
        let mut out = BTreeMap::new();
        let ell1 = BigInt::from(self.params.ell as u64 + 1);
        for v in 0..self.graph.n() as u32 {
            let d = self.graph.degree(v);
            if d == 0 {
                continue;
            }
            let p = &self.cumulative[v as usize]
                / BigRational::from_integer(&ell1 * BigInt::from(d as u64));
            for &w in self.graph.neighbors(v) {
                out.insert((v, w), p.clone());
            }
        }
        out
    }

    /// The success-conditioned law over ordered edges; `None` when the
    /// success probability is zero (edgeless graph).
    pub fn conditional_law(&self) -> Option<BTreeMap<OrderedEdge, BigRational>> {
        let total = self.success_probability();
        if total.is_zero() {
            return None;
        }
        Some(
            self.edge_return_probabilities()
                .into_iter()
                .map(|(e, p)| (e, p / &total))
                .collect(),
        )
    }
}

/// An exact rational carried into serialized reports, with a float shadow
/// for humans.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RationalValue {
    pub exact: String,
    pub approx: f64,
}

impl From<&BigRational> for RationalValue {
    fn from(r: &BigRational) -> Self {
        RationalValue {
            exact: r.to_string(),
            approx: rational_to_f64(r),
        }
    }
}

/// Lossy conversion for display; exact comparisons never go through this.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `P_{<=ell}[v] > d(v) / (n*theta)`.
    VertexUpperBound,
    /// `P_{<=ell}[v] < (1-beta)^level * d(v) / (n*theta)`.
    VertexLowerBound,
    /// Ordered-edge probability outside `[(1-eps/2)/rho, 1/rho]`.
    EdgeRange,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<OrderedEdge>,
    pub bound: RationalValue,
    pub actual: RationalValue,
    /// How far past the bound the actual value lies (always positive).
    pub slack: RationalValue,
}

/// Outcome of certifying one graph against the walk-distribution bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub upper_bound_ok: bool,
    pub lower_bound_ok: bool,
    pub edge_range_ok: bool,
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub success_probability: RationalValue,
    pub num_vertices: usize,
    pub num_ordered_edges: usize,
    pub layering_depth: u32,
}

/// Certifies the three exact guarantees for a concrete graph:
/// the per-vertex upper bound (which holds for any graph), the per-vertex
/// lower bound `(1-beta)^level(v) * d(v) / (n*theta)` (which holds whenever
/// the layering exists with depth at most `ell`), and the per-ordered-edge
/// probability range `[(1-eps/2)/rho, 1/rho]`.
///
/// The layering must have been computed with the same `theta` and `beta`;
/// anything else is an input error. Bound violations are reported with
/// their slack, never raised as errors.
pub fn certify(
    dist: &WalkDistribution,
    layering: &LayeredPartition,
) -> Result<CertificateReport, AnalyzerError> {
    let params = dist.params();
    if layering.theta() != params.theta {
        return Err(AnalyzerError::ParamsMismatch(format!(
            "layering theta {} != params theta {}",
            layering.theta(),
            params.theta
        )));
    }
    if layering.beta() != params.beta {
        return Err(AnalyzerError::ParamsMismatch(format!(
            "layering beta {} != params beta {}",
            layering.beta(),
            params.beta
        )));
    }
    if layering.depth() > params.ell {
        return Err(AnalyzerError::ParamsMismatch(format!(
            "layering depth {} exceeds walk bound ell {}",
            layering.depth(),
            params.ell
        )));
    }
    let g = dist.graph();
    if layering.levels().len() != g.n() {
        return Err(AnalyzerError::ParamsMismatch(format!(
            "layering covers {} vertices, graph has {}",
            layering.levels().len(),
            g.n()
        )));
    }

    let n_theta = BigInt::from(g.n() as u64) * BigInt::from(params.theta);
    let one_minus_beta = BigRational::one() - params.beta_exact();
    // (1-beta)^level, precomputed per occurring level.
    let mut decay: Vec<BigRational> = Vec::with_capacity(layering.depth() as usize + 1);
    decay.push(BigRational::one());
    for _ in 1..=layering.depth() {
        let next = decay.last().unwrap() * &one_minus_beta;
        decay.push(next);
    }

    let mut violations = Vec::new();
    for v in 0..g.n() as u32 {
        let d = g.degree(v);
        let base = BigRational::new(BigInt::from(d as u64), n_theta.clone());
        let actual = dist.prob_total(v);
        if actual > &base {
            violations.push(Violation {
                kind: ViolationKind::VertexUpperBound,
                vertex: Some(v),
                edge: None,
                bound: RationalValue::from(&base),
                actual: RationalValue::from(actual),
                slack: RationalValue::from(&(actual - &base)),
            });
        }
        let lower = &decay[layering.level(v) as usize] * &base;
        if actual < &lower {
            violations.push(Violation {
                kind: ViolationKind::VertexLowerBound,
                vertex: Some(v),
                edge: None,
                bound: RationalValue::from(&lower),
                actual: RationalValue::from(actual),
                slack: RationalValue::from(&(&lower - actual)),
            });
        }
    }

    let rho = params.rho_exact();
    let upper_edge = rho.recip();
    let lower_edge = (BigRational::one()
        - params.eps_exact() / BigRational::from_integer(BigInt::from(2)))
        / &rho;
    let edge_probs = dist.edge_return_probabilities();
    for (&edge, p) in &edge_probs {
        if p > &upper_edge {
            violations.push(Violation {
                kind: ViolationKind::EdgeRange,
                vertex: None,
                edge: Some(edge),
                bound: RationalValue::from(&upper_edge),
                actual: RationalValue::from(p),
                slack: RationalValue::from(&(p - &upper_edge)),
            });
        } else if p < &lower_edge {
            violations.push(Violation {
                kind: ViolationKind::EdgeRange,
                vertex: None,
                edge: Some(edge),
                bound: RationalValue::from(&lower_edge),
                actual: RationalValue::from(p),
                slack: RationalValue::from(&(&lower_edge - p)),
            });
        }
    }

    let upper_bound_ok = !violations
        .iter()
        .any(|v| v.kind == ViolationKind::VertexUpperBound);
    let lower_bound_ok = !violations
        .iter()
        .any(|v| v.kind == ViolationKind::VertexLowerBound);
    let edge_range_ok = !violations.iter().any(|v| v.kind == ViolationKind::EdgeRange);
    Ok(CertificateReport {
        upper_bound_ok,
        lower_bound_ok,
        edge_range_ok,
        pass: upper_bound_ok && lower_bound_ok && edge_range_ok,
        violations,
        success_probability: RationalValue::from(&dist.success_probability()),
        num_vertices: g.n(),
        num_ordered_edges: 2 * g.m(),
        layering_depth: layering.depth(),
    })
}

fn check_normalized(
    law: &BTreeMap<OrderedEdge, BigRational>,
    g: &Graph,
) -> Result<(), AnalyzerError> {
    let mut sum = BigRational::zero();
    for (&(u, v), p) in law {
        if (u as usize) >= g.n() || !g.has_edge(u, v) {
            return Err(AnalyzerError::UnknownEdge(u, v));
        }
        sum += p;
    }
    let drift = (sum.clone() - BigRational::one()).abs();
    // 1e-12 = 1 / 10^12, compared exactly.
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12));
    if drift > tol {
        return Err(AnalyzerError::NotNormalized {
            sum: rational_to_f64(&sum),
        });
    }
    Ok(())
}

/// Total variation distance of a normalized ordered-edge law from uniform:
/// `(1/2) * sum_e |law(e) - 1/(2m)|`, summed over all `2m` ordered edges
/// (absent entries count as zero).
pub fn tvd_exact(
    law: &BTreeMap<OrderedEdge, BigRational>,
    g: &Graph,
) -> Result<BigRational, AnalyzerError> {
    check_normalized(law, g)?;
    let uniform = BigRational::new(BigInt::one(), BigInt::from(2 * g.m() as u64));
    let zero = BigRational::zero();
    let mut acc = BigRational::zero();
    for e in g.ordered_edges() {
        let p = law.get(&e).unwrap_or(&zero);
        acc += (p - &uniform).abs();
    }
    Ok(acc / BigRational::from_integer(BigInt::from(2)))
}

/// Extremes of `law(e) * 2m` over all ordered edges of the graph; the law's
/// pointwise distortion from uniform. Absent entries count as ratio zero.
pub fn pointwise_ratio_exact(
    law: &BTreeMap<OrderedEdge, BigRational>,
    g: &Graph,
) -> Result<(BigRational, BigRational), AnalyzerError> {
    check_normalized(law, g)?;
    let scale = BigRational::from_integer(BigInt::from(2 * g.m() as u64));
    let zero = BigRational::zero();
    let mut min: Option<BigRational> = None;
    let mut max: Option<BigRational> = None;
    for e in g.ordered_edges() {
        let ratio = law.get(&e).unwrap_or(&zero) * &scale;
        match &mut min {
            Some(m) if *m <= ratio => {}
            _ => min = Some(ratio.clone()),
        }
        match &mut max {
            Some(m) if *m >= ratio => {}
            _ => max = Some(ratio),
        }
    }
    let one = BigRational::one();
    Ok((min.unwrap_or_else(|| one.clone()), max.unwrap_or(one)))
}

/// Closed-form per-attempt law of the max-degree rejection baseline:
/// exactly `1/(n*dmax)` for every ordered edge.
pub fn rejection_attempt_law(
    g: &Graph,
    dmax: u64,
) -> Result<BTreeMap<OrderedEdge, BigRational>, AnalyzerError> {
    if (g.max_degree() as u64) > dmax {
        return Err(AnalyzerError::CapBelowMaxDegree {
            dmax,
            max_degree: g.max_degree(),
        });
    }
    let p = BigRational::new(BigInt::one(), BigInt::from(g.n() as u64) * BigInt::from(dmax));
    Ok(g.ordered_edges().into_iter().map(|e| (e, p.clone())).collect())
}

/// Closed-form per-attempt law of the TVD baseline: `1/(n*cap)` for ordered
/// edges sourced at vertices of degree at most `cap = ceil(1/eps)`, zero
/// elsewhere (zero entries are omitted).
pub fn tvd_attempt_law(
    g: &Graph,
    eps: f64,
) -> Result<BTreeMap<OrderedEdge, BigRational>, AnalyzerError> {
    let cap = tvd_cap(eps).map_err(|_| AnalyzerError::EpsOutOfRange(eps))?;
    let p = BigRational::new(BigInt::one(), BigInt::from(g.n() as u64) * BigInt::from(cap));
    let mut out = BTreeMap::new();
    for u in 0..g.n() as u32 {
        if g.degree(u) as u64 <= cap {
            for &w in g.neighbors(u) {
                out.insert((u, w), p.clone());
            }
        }
    }
    Ok(out)
}

/// Normalizes a sub-probability attempt law into the conditional law over
/// successes; `None` when the attempt never succeeds.
pub fn conditional_of(
    attempt_law: &BTreeMap<OrderedEdge, BigRational>,
) -> Option<BTreeMap<OrderedEdge, BigRational>> {
    let mut total = BigRational::zero();
    for p in attempt_law.values() {
        total += p;
    }
    if total.is_zero() {
        return None;
    }
    Some(
        attempt_law
            .iter()
            .map(|(&e, p)| (e, p / &total))
            .collect(),
    )
}
