use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::RngStream;

/// A node- or subgraph-sampling scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeSpec {
    Uniform,
    /// vertex drawn proportionally to its degree (uniform edge endpoint)
    Degree,
    /// uniform vertex, then its parent (the root maps to itself)
    InDegree,
    /// uniform start, Geometric(1-c)-1 steps towards the root
    PagerankWalk { c: f64 },
    /// uniform start, exactly m steps towards the root
    FixedWalk { m: usize },
    /// retain floor(p n) vertices and the edges among them
    InducedNodes { p: f64 },
    /// retain floor(p |E|) edges and their endpoints
    IncidentEdges { p: f64 },
}

impl SchemeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SchemeSpec::PagerankWalk { c } if !(c > 0.0 && c < 1.0) => Err(Error::MalformedInput(
                format!("walk damping must lie in (0,1), got {c}"),
            )),
            SchemeSpec::InducedNodes { p } | SchemeSpec::IncidentEdges { p }
                if !(p > 0.0 && p <= 1.0) =>
            {
                Err(Error::MalformedInput(format!(
                    "retention proportion must lie in (0,1], got {p}"
                )))
            }
            _ => Ok(()),
        }
    }

    fn needs_tree(&self) -> bool {
        matches!(
            self,
            SchemeSpec::InDegree | SchemeSpec::PagerankWalk { .. } | SchemeSpec::FixedWalk { .. }
        )
    }
}

/// Empirical attribute frequencies under repeated scheme draws.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleReport {
    pub scheme: SchemeSpec,
    pub reps: usize,
    pub attr_freq: Vec<f64>,
    pub stderr: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<Vec<f64>>,
}

/// Prepared sampler: a stub list (one entry per unit of degree) is built
/// once so degree-proportional draws are O(1).
pub struct Sampler<'a> {
    graph: &'a Graph,
    stubs: Vec<usize>,
    is_tree: bool,
}

impl<'a> Sampler<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        let mut stubs = Vec::with_capacity(graph.degree.iter().sum::<u64>() as usize);
        for v in 0..graph.n() {
            for _ in 0..graph.degree[v] {
                stubs.push(v);
            }
        }
        Sampler {
            graph,
            stubs,
            is_tree: graph.is_tree(),
        }
    }

    pub fn draw(&self, scheme: &SchemeSpec, rng: &mut RngStream) -> Result<usize> {
        scheme.validate()?;
        let g = self.graph;
        let n = g.n();
        if n == 0 {
            return Err(Error::EmptySeed);
        }
        if scheme.needs_tree() && !self.is_tree {
            return Err(Error::NotTreeCase);
        }
        let start = rng.gen_range(0..n);
        Ok(match *scheme {
            SchemeSpec::Uniform => start,
            SchemeSpec::Degree => {
                if self.stubs.is_empty() {
                    start
                } else {
                    self.stubs[rng.gen_range(0..self.stubs.len())]
                }
            }
            SchemeSpec::InDegree => *g.out_edges[start].first().unwrap_or(&start),
            SchemeSpec::PagerankWalk { c } => {
                let mut v = start;
                while rng.gen::<f64>() < c {
                    match g.out_edges[v].first() {
                        Some(&p) => v = p,
                        None => break,
                    }
                }
                v
            }
            SchemeSpec::FixedWalk { m } => {
                let mut v = start;
                for _ in 0..m {
                    match g.out_edges[v].first() {
                        Some(&p) => v = p,
                        None => break,
                    }
                }
                v
            }
            SchemeSpec::InducedNodes { .. } | SchemeSpec::IncidentEdges { .. } => {
                return Err(Error::MalformedInput(
                    "subgraph schemes sample graphs, not vertices".into(),
                ))
            }
        })
    }
}

pub fn draw_vertex(graph: &Graph, scheme: &SchemeSpec, rng: &mut RngStream) -> Result<usize> {
    Sampler::new(graph).draw(scheme, rng)
}

pub fn attribute_representation(
    graph: &Graph,
    scheme: &SchemeSpec,
    reps: usize,
    rng: &mut RngStream,
) -> Result<SampleReport> {
    let sampler = Sampler::new(graph);
    let mut counts = vec![0usize; graph.num_attributes];
    for _ in 0..reps {
        let v = sampler.draw(scheme, rng)?;
        counts[graph.attribute[v]] += 1;
    }
    let attr_freq: Vec<f64> = counts.iter().map(|&c| c as f64 / reps as f64).collect();
    let stderr = attr_freq
        .iter()
        .map(|&f| (f * (1.0 - f) / reps as f64).sqrt())
        .collect();
    Ok(SampleReport {
        scheme: scheme.clone(),
        reps,
        attr_freq,
        stderr,
        theory: None,
    })
}

/// Draws k distinct indices from 0..n by partial Fisher-Yates.
fn sample_without_replacement(n: usize, k: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}

fn subgraph_from(graph: &Graph, keep: &[bool], edges: Vec<(usize, usize)>) -> Graph {
    let mut remap = vec![usize::MAX; graph.n()];
    let mut attribute = Vec::new();
    let mut birth_index = Vec::new();
    for v in 0..graph.n() {
        if keep[v] {
            remap[v] = attribute.len();
            attribute.push(graph.attribute[v]);
            birth_index.push(attribute.len() - 1);
        }
    }
    let n = attribute.len();
    let mut out_edges = vec![Vec::new(); n];
    let mut degree = vec![0u64; n];
    for (child, parent) in edges {
        let (c, p) = (remap[child], remap[parent]);
        out_edges[c].push(p);
        degree[c] += 1;
        degree[p] += 1;
    }
    Graph {
        attribute,
        birth_index,
        out_edges,
        degree,
        seed_size: 1.min(n).max(1),
        num_attributes: graph.num_attributes,
    }
}

/// Keeps floor(p n) uniformly chosen vertices and every edge among them;
/// isolated retained vertices stay, with degree zero.
pub fn induced_subgraph(graph: &Graph, p: f64, rng: &mut RngStream) -> Result<Graph> {
    SchemeSpec::InducedNodes { p }.validate()?;
    let n = graph.n();
    let k = ((p * n as f64).floor() as usize).min(n);
    let mut keep = vec![false; n];
    for v in sample_without_replacement(n, k, rng) {
        keep[v] = true;
    }
    let mut edges = Vec::new();
    for (v, out) in graph.out_edges.iter().enumerate() {
        if keep[v] {
            for &q in out {
                if keep[q] {
                    edges.push((v, q));
                }
            }
        }
    }
    Ok(subgraph_from(graph, &keep, edges))
}

/// Bernoulli(p) thinning variant of the induced scheme.
pub fn induced_subgraph_bernoulli(graph: &Graph, p: f64, rng: &mut RngStream) -> Result<Graph> {
    SchemeSpec::InducedNodes { p }.validate()?;
    let keep: Vec<bool> = (0..graph.n()).map(|_| rng.gen::<f64>() < p).collect();
    let mut edges = Vec::new();
    for (v, out) in graph.out_edges.iter().enumerate() {
        if keep[v] {
            for &q in out {
                if keep[q] {
                    edges.push((v, q));
                }
            }
        }
    }
    Ok(subgraph_from(graph, &keep, edges))
}

/// Keeps floor(p |E|) uniformly chosen edges together with their endpoints.
pub fn incident_subgraph(graph: &Graph, p: f64, rng: &mut RngStream) -> Result<Graph> {
    SchemeSpec::IncidentEdges { p }.validate()?;
    let mut all_edges = Vec::new();
    for (v, out) in graph.out_edges.iter().enumerate() {
        for &q in out {
            all_edges.push((v, q));
        }
    }
    let e = all_edges.len();
    let k = ((p * e as f64).floor() as usize).min(e);
    let chosen = sample_without_replacement(e, k, rng);
    let mut keep = vec![false; graph.n()];
    let mut edges = Vec::with_capacity(k);
    for i in chosen {
        let (c, q) = all_edges[i];
        keep[c] = true;
        keep[q] = true;
        edges.push((c, q));
    }
    Ok(subgraph_from(graph, &keep, edges))
}

/// Fraction of type-1 (attribute 0) vertices among the top ceil(alpha n) by
/// degree; ties broken younger-first.
pub fn minority_top_share(graph: &Graph, alpha: f64) -> Result<f64> {
    if graph.num_attributes != 2 {
        return Err(Error::DimensionMismatch(format!(
            "top-share statistic needs exactly two attributes, got {}",
            graph.num_attributes
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::MalformedInput(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    let n = graph.n();
    if n == 0 {
        return Err(Error::EmptySeed);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        graph.degree[b]
            .cmp(&graph.degree[a])
            .then(graph.birth_index[b].cmp(&graph.birth_index[a]))
    });
    let top = ((alpha * n as f64).ceil() as usize).clamp(1, n);
    let minority = order[..top]
        .iter()
        .filter(|&&v| graph.attribute[v] == 0)
        .count();
    Ok(minority as f64 / top as f64)
}

/// Fraction of type-1 (attribute 0) vertices among those whose degree reaches
/// the empirical (1-alpha) percentile. Unlike the fixed-size top list this
/// tail includes the whole tie class at the threshold degree, which is the
/// set whose composition has a clean large-n limit.
fn threshold_tail_share(deg: &[u64], attr: &[usize], alpha: f64) -> f64 {
    let n = deg.len();
    let mut sorted = deg.to_vec();
    sorted.sort_unstable();
    // smallest k with P(degree <= k) >= 1 - alpha
    let rank = ((1.0 - alpha) * n as f64).ceil() as usize;
    let k = sorted[rank.saturating_sub(1).min(n - 1)];
    let mut total = 0usize;
    let mut minority = 0usize;
    for v in 0..n {
        if deg[v] >= k {
            total += 1;
            if attr[v] == 0 {
                minority += 1;
            }
        }
    }
    minority as f64 / total as f64
}

/// Same statistic as [`threshold_tail_share`] on a whole graph.
pub fn minority_tail_share(graph: &Graph, alpha: f64) -> Result<f64> {
    if graph.num_attributes != 2 {
        return Err(Error::DimensionMismatch(format!(
            "tail-share statistic needs exactly two attributes, got {}",
            graph.num_attributes
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::MalformedInput(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    if graph.n() == 0 {
        return Err(Error::EmptySeed);
    }
    Ok(threshold_tail_share(&graph.degree, &graph.attribute, alpha))
}

/// Difference in the minority degree-tail share between a sampled subgraph
/// and the full graph.
///
/// Node sampling ranks the retained vertices by their degree inside the
/// retained set (isolated survivors count with degree zero). Edge sampling
/// keeps every vertex and ranks by the number of retained incident edges, so
/// vertices missing from the kept edges sit at degree zero rather than being
/// dropped; dropping them would skew the quantile by conditioning degrees on
/// being positive.
pub fn empirical_bias(
    graph: &Graph,
    scheme: &SchemeSpec,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    if graph.num_attributes != 2 {
        return Err(Error::DimensionMismatch(format!(
            "bias statistic needs exactly two attributes, got {}",
            graph.num_attributes
        )));
    }
    let sub_share = match *scheme {
        SchemeSpec::InducedNodes { p } => {
            let sub = induced_subgraph(graph, p, rng)?;
            threshold_tail_share(&sub.degree, &sub.attribute, alpha)
        }
        SchemeSpec::IncidentEdges { p } => {
            SchemeSpec::IncidentEdges { p }.validate()?;
            let mut all_edges = Vec::new();
            for (v, out) in graph.out_edges.iter().enumerate() {
                for &q in out {
                    all_edges.push((v, q));
                }
            }
            let e = all_edges.len();
            let k = ((p * e as f64).floor() as usize).min(e);
            let mut deg = vec![0u64; graph.n()];
            for i in sample_without_replacement(e, k, rng) {
                let (c, q) = all_edges[i];
                deg[c] += 1;
                deg[q] += 1;
            }
            threshold_tail_share(&deg, &graph.attribute, alpha)
        }
        _ => {
            return Err(Error::MalformedInput(
                "bias is defined for subgraph schemes only".into(),
            ))
        }
    };
    Ok(sub_share - minority_tail_share(graph, alpha)?)
}
