use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fringe::{fringe_probability, FringeTree};
use crate::generate::generate_p;
use crate::graph::Graph;
use crate::params::ModelParams;
use crate::rng::RngStream;
use crate::theory::TheorySolution;

fn ser_fringe<S: Serializer>(
    map: &BTreeMap<FringeTree, usize>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(map.len()))?;
    for (t, c) in map {
        m.serialize_entry(&t.encode(), c)?;
    }
    m.end()
}

/// One-pass empirical summary of a generated graph.
#[derive(Debug, Clone, Serialize)]
pub struct GraphCensus {
    /// per-attribute degree histograms, k -> count
    pub degree_hist: Vec<BTreeMap<u64, usize>>,
    pub attr_counts: Vec<usize>,
    /// attribute degree shares: sum of degrees over type a, over twice the
    /// vertex count
    pub y_tilde: Vec<f64>,
    /// within-type edge density relative to uniform placement
    #[serde(rename = "homophily_D")]
    pub homophily_d: Vec<f64>,
    /// cross-type edge density relative to uniform placement (K x K,
    /// diagonal repeats homophily numerators over the cross denominator)
    #[serde(rename = "heterophily_H")]
    pub heterophily_h: Vec<Vec<f64>>,
    /// largest degree per attribute
    pub max_deg: Vec<u64>,
    /// degree of the oldest vertex of each attribute (0 if absent)
    pub first_deg: Vec<u64>,
    /// counts of descendant subtrees of size at most the cap, by class
    #[serde(serialize_with = "ser_fringe")]
    pub fringe_counts: BTreeMap<FringeTree, usize>,
    pub fringe_cap: usize,
    pub n: usize,
}

impl GraphCensus {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Computes every census field. A positive `fringe_cap` additionally counts
/// the descendant subtree of each vertex (tree graphs only); pass 0 to skip.
pub fn census(graph: &Graph, fringe_cap: usize) -> Result<GraphCensus> {
    graph.validate()?;
    let n = graph.n();
    let k = graph.num_attributes;
    let mut degree_hist = vec![BTreeMap::new(); k];
    let mut y_num = vec![0.0f64; k];
    let mut max_deg = vec![0u64; k];
    let mut first_deg = vec![0u64; k];
    let mut seen = vec![false; k];
    for v in 0..n {
        let a = graph.attribute[v];
        let d = graph.degree[v];
        *degree_hist[a].entry(d).or_insert(0) += 1;
        y_num[a] += d as f64;
        max_deg[a] = max_deg[a].max(d);
        if !seen[a] {
            seen[a] = true;
            first_deg[a] = d;
        }
    }
    let y_tilde: Vec<f64> = y_num.iter().map(|s| s / (2.0 * n as f64)).collect();
    let attr_counts = graph.attribute_counts();

    // edge counts by unordered attribute pair
    let mut e_pair = vec![vec![0usize; k]; k];
    for (v, out) in graph.out_edges.iter().enumerate() {
        for &p in out {
            let (a, b) = (graph.attribute[v], graph.attribute[p]);
            e_pair[a][b] += 1;
            if a != b {
                e_pair[b][a] += 1;
            }
        }
    }
    let e_total = graph.num_edges() as f64;
    let pairs_n = n as f64 * (n as f64 - 1.0) / 2.0;
    let p_n = if pairs_n > 0.0 { e_total / pairs_n } else { 0.0 };
    let dens = |count: usize, pairs: f64| {
        if p_n > 0.0 && pairs > 0.0 {
            count as f64 / (pairs * p_n)
        } else {
            f64::NAN
        }
    };
    let homophily_d: Vec<f64> = (0..k)
        .map(|a| {
            let na = attr_counts[a] as f64;
            dens(e_pair[a][a], na * (na - 1.0) / 2.0)
        })
        .collect();
    let heterophily_h: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| dens(e_pair[a][b], attr_counts[a] as f64 * attr_counts[b] as f64))
                .collect()
        })
        .collect();

    let mut fringe_counts = BTreeMap::new();
    if fringe_cap > 0 {
        if !graph.is_tree() {
            return Err(Error::NotTreeCase);
        }
        // children have larger indices than parents, so a single descending
        // pass builds every small subtree bottom-up
        let mut children = vec![Vec::new(); n];
        for v in graph.seed_size..n {
            children[graph.out_edges[v][0]].push(v);
        }
        let mut sub: Vec<Option<FringeTree>> = vec![None; n];
        for v in (0..n).rev() {
            if children[v]
                .iter()
                .map(|&c| sub[c].as_ref().map_or(fringe_cap + 1, |t| t.size()))
                .sum::<usize>()
                < fringe_cap
            {
                let kids = children[v].iter().map(|&c| sub[c].clone().unwrap()).collect();
                let t = FringeTree::new(graph.attribute[v], kids);
                *fringe_counts.entry(t.clone()).or_insert(0) += 1;
                sub[v] = Some(t);
            }
        }
    }

    Ok(GraphCensus {
        degree_hist,
        attr_counts,
        y_tilde,
        homophily_d,
        heterophily_h,
        max_deg,
        first_deg,
        fringe_counts,
        fringe_cap,
        n,
    })
}

/// Checkpoint sizes growing geometrically with ratio 2 up to n.
pub fn default_checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = 1usize;
    while c < n {
        out.push(c);
        c *= 2;
    }
    out.push(n);
    out
}

/// Degree-share and extreme-degree trajectories along one growth run.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTrack {
    pub checkpoints: Vec<usize>,
    /// y_tilde[i][a]: attribute degree share at checkpoint i
    pub y_tilde: Vec<Vec<f64>>,
    pub max_deg: Vec<Vec<u64>>,
    pub first_deg: Vec<Vec<u64>>,
    /// per-attribute log-log regression slope of the first-vertex degree
    /// against size, over the final decade of checkpoints
    pub first_deg_slope: Vec<f64>,
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|&(&x, &y)| x > 0.0 && y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}

/// Grows one graph, recording the census extremes at each checkpoint.
pub fn convergence_track(
    params: &ModelParams,
    n: usize,
    checkpoints: &[usize],
    rng: &mut RngStream,
) -> Result<ConvergenceTrack> {
    if params.gamma != 1.0 {
        return Err(Error::BadGamma(params.gamma));
    }
    let mut cks: Vec<usize> = checkpoints
        .iter()
        .copied()
        .filter(|&c| c >= 1 && c <= n)
        .collect();
    cks.sort_unstable();
    cks.dedup();
    if cks.is_empty() {
        return Err(Error::MalformedInput("no usable checkpoints".into()));
    }
    let mut graph = Graph::singleton_seed(0, params.k);
    let mut prev = 0usize;
    let (mut y_tilde, mut max_deg, mut first_deg) = (Vec::new(), Vec::new(), Vec::new());
    for &ck in &cks {
        graph = generate_p(params, ck - prev, &graph, rng)?;
        prev = ck;
        let c = census(&graph, 0)?;
        y_tilde.push(c.y_tilde);
        max_deg.push(c.max_deg);
        first_deg.push(c.first_deg);
    }
    let last = *cks.last().unwrap() as f64;
    let window: Vec<usize> = (0..cks.len()).filter(|&i| cks[i] as f64 >= last / 10.0).collect();
    let first_deg_slope: Vec<f64> = (0..params.k)
        .map(|a| {
            let xs: Vec<f64> = window.iter().map(|&i| cks[i] as f64).collect();
            let ys: Vec<f64> = window.iter().map(|&i| first_deg[i][a] as f64).collect();
            loglog_slope(&xs, &ys)
        })
        .collect();
    Ok(ConvergenceTrack {
        checkpoints: cks,
        y_tilde,
        max_deg,
        first_deg,
        first_deg_slope,
    })
}

/// One realized fringe class compared against its limiting probability.
#[derive(Debug, Clone, Serialize)]
pub struct FringeComparison {
    pub class: String,
    pub size: usize,
    pub count: usize,
    pub empirical: f64,
    pub theory: f64,
    pub z: f64,
}

/// Per-class z-scores of the realized fringe proportions against the
/// limiting law, using the binomial standard error of the theory value.
pub fn compare_fringe(
    census: &GraphCensus,
    sol: &TheorySolution,
    params: &ModelParams,
) -> Result<Vec<FringeComparison>> {
    if census.fringe_cap == 0 || census.fringe_cap > 5 {
        return Err(Error::MalformedInput(format!(
            "fringe comparison needs a cap in 1..=5, census used {}",
            census.fringe_cap
        )));
    }
    let n = census.n as f64;
    let mut out = Vec::new();
    for (t, &count) in &census.fringe_counts {
        let theory = fringe_probability(t, sol, params)?;
        let empirical = count as f64 / n;
        let se = (theory * (1.0 - theory) / n).sqrt();
        out.push(FringeComparison {
            class: t.encode(),
            size: t.size(),
            count,
            empirical,
            theory,
            z: (empirical - theory) / se,
        });
    }
    Ok(out)
}
