//! Deterministic, seedable graph constructors with arboricity certificates.
//!
//! Every generated graph carries a [`GraphMeta`] declaring an arboricity
//! bound, backed either by an explicit forest decomposition (the certificate
//! partitions the edge set into acyclic parts) or by a closed-form bound for
//! the family. Generation is a pure function of `(spec, seed)`.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Hard cap on generated graph size.
const MAX_VERTICES: usize = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("generated graph would have n={0} > 10^7 vertices")]
    TooLarge(usize),
    #[error("missing generator parameter {0:?}")]
    MissingParam(&'static str),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

/// Sidecar metadata shipped with every generated graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphMeta {
    pub family: String,
    pub n: usize,
    pub m: usize,
    /// Arboricity bound guaranteed by construction.
    pub declared_alpha: u64,
    pub seed: u64,
    /// Family parameters, echoed back.
    pub params: BTreeMap<String, u64>,
    /// Explicit forest decomposition, when the family provides one. Parts
    /// partition the edge set and each part is acyclic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forest_certificate: Option<ForestCertificate>,
    /// Per-vertex depth map (tree families).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depths: Option<Vec<u32>>,
    /// Vertex counts at depth <= L and <= 2L for a supplied critical depth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical_counts: Option<CriticalCounts>,
    /// Block accounting for the disjointness-embedding family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlockCounts>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct CriticalCounts {
    pub crit_depth: u32,
    /// Vertices at depth <= crit_depth.
    pub n_critical: usize,
    /// Vertices at depth <= 2 * crit_depth.
    pub n_shallow: usize,
    /// Vertices at depth > 2 * crit_depth.
    pub n_deep: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct BlockCounts {
    /// Vertices in the base block carrying the fixed graph.
    pub base_size: usize,
    /// Vertex count of every indexed block.
    pub block_size: usize,
    /// Number of indexed blocks.
    pub num_blocks: usize,
    /// Indices where both bit vectors are 1 (blocks that received edges).
    pub intersections: usize,
    /// Edges inside the base block.
    pub base_edges: usize,
}

/// Edge partition into acyclic parts, the explicit form of an arboricity
/// certificate.
pub type ForestCertificate = Vec<Vec<(u32, u32)>>;

/// A generated graph plus its declared certificate.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub meta: GraphMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicFamily {
    Path,
    Star,
    Complete,
}

impl BasicFamily {
    fn name(self) -> &'static str {
        match self {
            BasicFamily::Path => "path",
            BasicFamily::Star => "star",
            BasicFamily::Complete => "complete",
        }
    }
}

fn meta_base(family: &str, graph: &Graph, declared_alpha: u64, seed: u64) -> GraphMeta {
    GraphMeta {
        family: family.to_string(),
        n: graph.n(),
        m: graph.m(),
        declared_alpha,
        seed,
        params: BTreeMap::new(),
        forest_certificate: None,
        depths: None,
        critical_counts: None,
        blocks: None,
    }
}

/// Path, star, or complete graph in canonical neighbor order.
pub fn gen_basic(family: BasicFamily, n: usize) -> Result<Generated, GenError> {
    if n < 2 {
        return Err(GenError::InvalidParams(format!(
            "{} needs n >= 2, got {n}",
            family.name()
        )));
    }
    if n > MAX_VERTICES {
        return Err(GenError::TooLarge(n));
    }
    let edges: Vec<(u32, u32)> = match family {
        BasicFamily::Path => (0..n as u32 - 1).map(|i| (i, i + 1)).collect(),
        BasicFamily::Star => (1..n as u32).map(|i| (0, i)).collect(),
        BasicFamily::Complete => {
            let mut e = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    e.push((u, v));
                }
            }
            e
        }
    };
    let graph = Graph::from_edges(n, &edges).expect("basic families are simple by construction");
    let declared_alpha = match family {
        BasicFamily::Path | BasicFamily::Star => 1,
        // Nash-Williams on K_n: density peaks at the whole graph, ceil(n/2).
        BasicFamily::Complete => (n as u64).div_ceil(2),
    };
    let mut meta = meta_base(family.name(), &graph, declared_alpha, 0);
    meta.params.insert("n".into(), n as u64);
    if declared_alpha == 1 {
        meta.forest_certificate = Some(vec![edges]);
    }
    Ok(Generated { graph, meta })
}

/// Complete tree in which every internal vertex is incident to `k` edges:
/// the root has `k` children and every other internal vertex `k - 1`.
/// Vertices at depth `delta >= 1` number `k * (k-1)^(delta-1)`.
///
/// `crit_depth`, when supplied, adds critical/shallow/deep vertex counts to
/// the metadata.
pub fn gen_kary_tree(k: usize, depth: u32, crit_depth: Option<u32>) -> Result<Generated, GenError> {
    if k < 2 {
        return Err(GenError::InvalidParams(format!("kary_tree needs k >= 2, got {k}")));
    }
    if depth < 1 {
        return Err(GenError::InvalidParams("kary_tree needs depth >= 1".into()));
    }
    // n = 1 + sum_{delta=1..depth} k (k-1)^(delta-1)
    let mut n: usize = 1;
    let mut level = k;
    for _ in 1..=depth {
        n = n
            .checked_add(level)
            .filter(|&t| t <= MAX_VERTICES)
            .ok_or(GenError::TooLarge(usize::MAX))?;
        level = level.saturating_mul(k - 1);
    }
    if n > MAX_VERTICES {
        return Err(GenError::TooLarge(n));
    }

    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(n - 1);
    let mut depths = vec![0u32; n];
    let mut next_id = 1u32;
    let mut frontier = vec![0u32];
    for d in 1..=depth {
        let mut new_frontier = Vec::new();
        for &parent in &frontier {
            let children = if parent == 0 { k } else { k - 1 };
            for _ in 0..children {
                let c = next_id;
                next_id += 1;
                depths[c as usize] = d;
                edges.push((parent, c));
                new_frontier.push(c);
            }
        }
        frontier = new_frontier;
    }
    debug_assert_eq!(next_id as usize, n);
    let graph = Graph::from_edges(n, &edges).expect("tree construction is simple");

    let mut meta = meta_base("kary_tree", &graph, 1, 0);
    meta.params.insert("k".into(), k as u64);
    meta.params.insert("depth".into(), depth as u64);
    meta.forest_certificate = Some(vec![edges]);
    if let Some(l) = crit_depth {
        meta.params.insert("crit_depth".into(), l as u64);
        let n_critical = depths.iter().filter(|&&d| d <= l).count();
        let n_shallow = depths.iter().filter(|&&d| d <= 2 * l).count();
        meta.critical_counts = Some(CriticalCounts {
            crit_depth: l,
            n_critical,
            n_shallow,
            n_deep: n - n_shallow,
        });
    }
    meta.depths = Some(depths);
    Ok(Generated { graph, meta })
}

/// Random tree on `0..n` by random attachment over a random vertex order.
/// Not uniform over labeled trees; only the arboricity certificate matters.
fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut edges = Vec::with_capacity(n - 1);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[j], order[i]));
    }
    edges
}

/// Union of `alpha` random forests with duplicate edges dropped.
///
/// Without `target_m` each forest is a random spanning tree, so
/// `m <= alpha * (n - 1)`. With `target_m`, the forests are grown to hit
/// exactly that many edges in total (split as evenly as possible), which
/// keeps the certificate while decoupling `m` from `alpha`.
pub fn gen_alpha_forests(
    n: usize,
    alpha: u64,
    seed: u64,
    target_m: Option<usize>,
) -> Result<Generated, GenError> {
    if n < 2 {
        return Err(GenError::InvalidParams(format!("alpha_forests needs n >= 2, got {n}")));
    }
    if alpha < 1 {
        return Err(GenError::InvalidParams("alpha_forests needs alpha >= 1".into()));
    }
    if n > MAX_VERTICES {
        return Err(GenError::TooLarge(n));
    }
    let capacity = alpha as usize * (n - 1);
    if let Some(t) = target_m {
        if t > capacity {
            return Err(GenError::InvalidParams(format!(
                "target_m={t} exceeds alpha*(n-1)={capacity}"
            )));
        }
    }
    let cert: Vec<Vec<(u32, u32)>> = match target_m {
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen: HashSet<(u32, u32)> = HashSet::new();
            let mut cert = Vec::with_capacity(alpha as usize);
            for _ in 0..alpha {
                let mut part = Vec::new();
                for (u, v) in random_tree_edges(n, &mut rng) {
                    let key = (u.min(v), u.max(v));
                    if seen.insert(key) {
                        part.push(key);
                    }
                }
                cert.push(part);
            }
            cert
        }
        Some(total) => {
            // Greedy packing can wedge itself near capacity (an earlier
            // forest may leave only cyclic leftovers), so retry a few
            // fresh seeds before declaring the quota unplaceable.
            let mut built = None;
            for round in 0..16u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (round << 48));
                if let Some(cert) = try_pack_forests(n, alpha as usize, total, &mut rng) {
                    built = Some(cert);
                    break;
                }
            }
            built.ok_or_else(|| {
                GenError::InvalidParams(format!(
                    "cannot place {total} edges into {alpha} forests on {n} vertices"
                ))
            })?
        }
    };

    let edges: Vec<(u32, u32)> = cert.iter().flatten().copied().collect();
    let graph = Graph::from_edges(n, &edges).expect("forest union is simple by construction");
    let mut meta = meta_base("alpha_forests", &graph, alpha, seed);
    meta.params.insert("n".into(), n as u64);
    meta.params.insert("alpha".into(), alpha);
    if let Some(t) = target_m {
        meta.params.insert("target_m".into(), t as u64);
    }
    meta.forest_certificate = Some(cert);
    Ok(Generated { graph, meta })
}

/// One packing attempt: `total` edges split as evenly as possible over
/// `alpha` forests (each capped at `n - 1` edges), grown by random pair
/// draws with a systematic sweep once random draws stall. `None` when a
/// forest cannot reach its quota.
fn try_pack_forests(
    n: usize,
    alpha: usize,
    total: usize,
    rng: &mut ChaCha8Rng,
) -> Option<ForestCertificate> {
    let mut quotas = vec![0usize; alpha];
    let mut left = total;
    let mut i = 0usize;
    while left > 0 {
        if quotas[i] < n - 1 {
            quotas[i] += 1;
            left -= 1;
        }
        i = (i + 1) % alpha;
    }
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut cert = Vec::with_capacity(alpha);
    for &quota in &quotas {
        let mut dsu = DisjointSet::new(n);
        let mut part = Vec::with_capacity(quota);
        let mut stall = 0usize;
        while part.len() < quota {
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            let key = (u.min(v), u.max(v));
            if u != v && !seen.contains(&key) && dsu.union(u as usize, v as usize) {
                seen.insert(key);
                part.push(key);
                stall = 0;
            } else {
                stall += 1;
                if stall > 64 * n {
                    complete_forest_systematically(n, quota, &mut dsu, &mut seen, &mut part);
                    break;
                }
            }
        }
        if part.len() < quota {
            return None;
        }
        cert.push(part);
    }
    Some(cert)
}

fn complete_forest_systematically(
    n: usize,
    quota: usize,
    dsu: &mut DisjointSet,
    seen: &mut HashSet<(u32, u32)>,
    part: &mut Vec<(u32, u32)>,
) {
    'outer: for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if part.len() >= quota {
                break 'outer;
            }
            let key = (u, v);
            if !seen.contains(&key) && dsu.union(u as usize, v as usize) {
                seen.insert(key);
                part.push(key);
            }
        }
    }
}

/// Perfect matching over `n - n/alpha_tilde` vertices plus an
/// `alpha_tilde`-regular graph over the remaining `n/alpha_tilde` vertices;
/// the instance whose average degree stays near 2 while its arboricity is
/// `alpha_tilde`.
pub fn gen_matching_plus_regular(n: usize, alpha_tilde: u64) -> Result<Generated, GenError> {
    if alpha_tilde < 1 {
        return Err(GenError::InvalidParams("alpha_tilde must be >= 1".into()));
    }
    if n > MAX_VERTICES {
        return Err(GenError::TooLarge(n));
    }
    let at = alpha_tilde as usize;
    if n == 0 || !n.is_multiple_of(at) {
        return Err(GenError::InvalidParams(format!(
            "alpha_tilde={at} must divide n={n}"
        )));
    }
    let r = n / at;
    if !(at * r).is_multiple_of(2) {
        return Err(GenError::InvalidParams(format!(
            "alpha_tilde * (n/alpha_tilde) = {} must be even",
            at * r
        )));
    }
    if !(n - r).is_multiple_of(2) {
        return Err(GenError::InvalidParams(format!(
            "matching part has odd size {}",
            n - r
        )));
    }
    // Regular part on 0..r, matching on r..n.
    let (reg_edges, mut cert) = circulant_regular(r, at, 0)?;
    let matching: Vec<(u32, u32)> = (0..(n - r) / 2)
        .map(|i| ((r + 2 * i) as u32, (r + 2 * i + 1) as u32))
        .collect();
    // The matching lives on a disjoint vertex set, so folding it into any
    // certificate part keeps that part acyclic.
    cert[0].extend_from_slice(&matching);
    let mut edges = reg_edges;
    edges.extend_from_slice(&matching);

    let graph = Graph::from_edges(n, &edges).expect("construction is simple");
    let mut meta = meta_base("matching_plus_regular", &graph, alpha_tilde, 0);
    meta.params.insert("n".into(), n as u64);
    meta.params.insert("alpha_tilde".into(), alpha_tilde);
    meta.forest_certificate = Some(cert);
    Ok(Generated { graph, meta })
}

/// `d`-regular circulant on vertices `base..base+r`: offsets `1..=d/2`,
/// plus the antipodal matching when `d` is odd (requires even `r`). Returns
/// the edges and a forest decomposition into exactly `d` parts.
fn circulant_regular(
    r: usize,
    d: usize,
    base: usize,
) -> Result<(Vec<(u32, u32)>, ForestCertificate), GenError> {
    if d >= r {
        return Err(GenError::InvalidParams(format!(
            "cannot build a {d}-regular graph on {r} vertices"
        )));
    }
    if d % 2 == 1 && !r.is_multiple_of(2) {
        return Err(GenError::InvalidParams(format!(
            "{d}-regular on odd {r} vertices has odd degree sum"
        )));
    }
    let half = d / 2;
    let vid = |i: usize| (base + i % r) as u32;
    let mut edges = Vec::with_capacity(d * r / 2);
    let mut cert: Vec<Vec<(u32, u32)>> = Vec::with_capacity(d);
    for c in 1..=half {
        if 2 * c >= r {
            return Err(GenError::InvalidParams(format!(
                "offset {c} is not a proper chord on {r} vertices"
            )));
        }
        // Offset c covers the vertices with disjoint cycles; splitting each
        // cycle into a path plus its closing edge yields two forests.
        let mut paths = Vec::new();
        let mut closers = Vec::new();
        let mut visited = vec![false; r];
        for start in 0..r {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !visited[cur] {
                visited[cur] = true;
                cycle.push(cur);
                cur = (cur + c) % r;
            }
            for w in cycle.windows(2) {
                paths.push((vid(w[0]), vid(w[1])));
            }
            closers.push((vid(*cycle.last().unwrap()), vid(cycle[0])));
        }
        edges.extend_from_slice(&paths);
        edges.extend_from_slice(&closers);
        cert.push(paths);
        cert.push(closers);
    }
    if d % 2 == 1 {
        let antipodal: Vec<(u32, u32)> = (0..r / 2).map(|i| (vid(i), vid(i + r / 2))).collect();
        edges.extend_from_slice(&antipodal);
        cert.push(antipodal);
    }
    debug_assert_eq!(cert.len(), d);
    Ok((edges, cert))
}

/// The two-block lower-bound instance `G(x, y)`.
///
/// The base block holds a fixed graph `H` on `n_prime` vertices with exactly
/// `m_prime` edges and arboricity at most `alpha` (built from forests). Each
/// of the `N = n_prime * alpha / (2 * m_prime)` indexed blocks holds
/// `2 * m_prime / alpha` vertices and is either a copy of a fixed graph `K`
/// with `2 * m_prime` edges (when `x_i = y_i = 1`) or isolated vertices.
///
/// `K` is realized as the `2*alpha`-regular circulant, which is the unique
/// way to satisfy both pinned counts (`2m'` edges on `2m'/alpha` vertices);
/// its Nash-Williams density is `alpha + 1`, so instances containing a `K`
/// block declare `alpha + 1`.
pub fn gen_disjointness_embedding(
    n_prime: usize,
    m_prime: usize,
    alpha: u64,
    x: &[bool],
    y: &[bool],
    seed: u64,
) -> Result<Generated, GenError> {
    if n_prime < 2 || m_prime < 1 || alpha < 1 {
        return Err(GenError::InvalidParams(
            "need n_prime >= 2, m_prime >= 1, alpha >= 1".into(),
        ));
    }
    if m_prime > alpha as usize * (n_prime - 1) {
        return Err(GenError::InvalidParams(format!(
            "H is not realizable: m_prime={m_prime} > alpha*(n_prime-1)"
        )));
    }
    if !(2 * m_prime).is_multiple_of(alpha as usize) {
        return Err(GenError::InvalidParams(format!(
            "block size 2*m_prime/alpha = {}/{} is not integral",
            2 * m_prime,
            alpha
        )));
    }
    let q = 2 * m_prime / alpha as usize;
    if q < 2 * alpha as usize + 1 {
        return Err(GenError::InvalidParams(format!(
            "K is not realizable: needs 2*alpha < block size, got block size {q}"
        )));
    }
    if !(n_prime * alpha as usize).is_multiple_of(2 * m_prime) {
        return Err(GenError::InvalidParams(format!(
            "N = n_prime*alpha/(2*m_prime) = {}/{} is not integral",
            n_prime * alpha as usize,
            2 * m_prime
        )));
    }
    let num_blocks = n_prime * alpha as usize / (2 * m_prime);
    if x.len() != num_blocks || y.len() != num_blocks {
        return Err(GenError::InvalidParams(format!(
            "bit vectors must have length N={num_blocks}, got |x|={}, |y|={}",
            x.len(),
            y.len()
        )));
    }
    let n = n_prime + num_blocks * q;
    if n > MAX_VERTICES {
        return Err(GenError::TooLarge(n));
    }

    let base = gen_alpha_forests(n_prime, alpha, seed, Some(m_prime))?;
    let mut edges: Vec<(u32, u32)> = base.graph.unordered_edges();
    let mut intersections = 0usize;
    for i in 0..num_blocks {
        if x[i] && y[i] {
            intersections += 1;
            let offset = n_prime + i * q;
            let (block_edges, _) = circulant_regular(q, 2 * alpha as usize, offset)?;
            edges.extend(block_edges);
        }
    }
    let graph = Graph::from_edges(n, &edges).expect("blocks are vertex-disjoint");

    let declared_alpha = if intersections > 0 { alpha + 1 } else { alpha };
    let mut meta = meta_base("disjointness_embedding", &graph, declared_alpha, seed);
    meta.params.insert("n_prime".into(), n_prime as u64);
    meta.params.insert("m_prime".into(), m_prime as u64);
    meta.params.insert("alpha".into(), alpha);
    meta.blocks = Some(BlockCounts {
        base_size: n_prime,
        block_size: q,
        num_blocks,
        intersections,
        base_edges: m_prime,
    });
    Ok(Generated { graph, meta })
}

/// Data-driven generator spec (bench configs, CLI).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, u64>,
    #[serde(default)]
    pub seed: u64,
}

impl GenSpec {
    fn get(&self, key: &'static str) -> Result<u64, GenError> {
        self.params.get(key).copied().ok_or(GenError::MissingParam(key))
    }
}

/// Dispatches a [`GenSpec`] to the matching family constructor.
///
/// The disjointness family encodes `x`/`y` as bitmask params `x_bits` and
/// `y_bits` (so it is limited to `N <= 64` via this entry point).
pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    match spec.family.as_str() {
        "path" => gen_basic(BasicFamily::Path, spec.get("n")? as usize),
        "star" => gen_basic(BasicFamily::Star, spec.get("n")? as usize),
        "complete" => gen_basic(BasicFamily::Complete, spec.get("n")? as usize),
        "kary_tree" => gen_kary_tree(
            spec.get("k")? as usize,
            spec.get("depth")? as u32,
            spec.params.get("crit_depth").map(|&l| l as u32),
        ),
        "alpha_forests" => gen_alpha_forests(
            spec.get("n")? as usize,
            spec.get("alpha")?,
            spec.seed,
            spec.params.get("target_m").map(|&m| m as usize),
        ),
        "matching_plus_regular" => {
            gen_matching_plus_regular(spec.get("n")? as usize, spec.get("alpha_tilde")?)
        }
        "disjointness_embedding" => {
            let xb = spec.get("x_bits")?;
            let yb = spec.get("y_bits")?;
            let n_prime = spec.get("n_prime")? as usize;
            let m_prime = spec.get("m_prime")? as usize;
            let alpha = spec.get("alpha")?;
            if 2 * m_prime == 0 || alpha == 0 {
                return Err(GenError::InvalidParams("degenerate disjointness params".into()));
            }
            let nb = n_prime * alpha as usize / (2 * m_prime).max(1);
            if nb > 64 {
                return Err(GenError::InvalidParams(format!(
                    "spec-driven disjointness supports N <= 64 blocks, got {nb}"
                )));
            }
            let bits = |word: u64| (0..nb).map(|i| (word >> i) & 1 == 1).collect::<Vec<bool>>();
            gen_disjointness_embedding(n_prime, m_prime, alpha, &bits(xb), &bits(yb), spec.seed)
        }
        other => Err(GenError::UnknownFamily(other.to_string())),
    }
}

/// Checks that a certificate partitions the graph's edge set and that each
/// part is acyclic.
pub fn forest_certificate_is_valid(g: &Graph, cert: &[Vec<(u32, u32)>]) -> bool {
    let mut covered: HashSet<(u32, u32)> = HashSet::new();
    for part in cert {
        let mut dsu = DisjointSet::new(g.n());
        for &(u, v) in part {
            let key = (u.min(v), u.max(v));
            if !g.has_edge(u, v) || !covered.insert(key) {
                return false;
            }
            if !dsu.union(u as usize, v as usize) {
                return false; // cycle inside a part
            }
        }
    }
    covered.len() == g.m()
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let gp = self.parent[self.parent[v] as usize];
            self.parent[v] = gp;
            v = gp as usize;
        }
        v
    }

    /// Unites the components of `a` and `b`; false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb as u32;
            true
        }
    }
}
