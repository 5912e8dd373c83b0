use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact Page-rank scores of a birth-ordered DAG.
#[derive(Debug, Clone)]
pub struct PageRankScores {
    pub c: f64,
    /// raw stationary scores, summing to at most 1
    pub fr: Vec<f64>,
    /// graph-normalized scores r = n * fr
    pub r: Vec<f64>,
    pub n: usize,
}

/// One exact backward pass: every in-neighbor of a vertex is younger, so
/// processing youngest-first finalizes each score before it is pushed to its
/// parents. Vertices without out-edges absorb their mass.
pub fn pagerank_exact(graph: &Graph, c: f64) -> Result<PageRankScores> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::MalformedInput(format!(
            "damping must lie in (0,1), got {c}"
        )));
    }
    let n = graph.n();
    for (v, edges) in graph.out_edges.iter().enumerate() {
        if edges.iter().any(|&p| p >= v) {
            return Err(Error::CycleDetected(format!(
                "vertex {v} has an edge to a non-older vertex"
            )));
        }
    }
    let mut fr = vec![(1.0 - c) / n as f64; n];
    for v in (0..n).rev() {
        let edges = &graph.out_edges[v];
        if edges.is_empty() {
            continue;
        }
        let share = c * fr[v] / edges.len() as f64;
        for &p in edges {
            fr[p] += share;
        }
    }
    let r = fr.iter().map(|&x| x * n as f64).collect();
    Ok(PageRankScores { c, fr, r, n })
}

/// Empirical counterparts of the limiting normalized Page-rank masses:
/// sum_v r(v)/n in total and per attribute.
pub fn normalized_totals(scores: &PageRankScores, graph: &Graph) -> (f64, Vec<f64>) {
    let mut per = vec![0.0; graph.num_attributes];
    for v in 0..graph.n() {
        per[graph.attribute[v]] += scores.r[v];
    }
    let n = graph.n() as f64;
    for p in per.iter_mut() {
        *p /= n;
    }
    (per.iter().sum(), per)
}

pub fn write_scores_csv<W: Write>(scores: &PageRankScores, graph: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "id,attribute,fr,r")?;
    for v in 0..graph.n() {
        writeln!(
            w,
            "{},{},{},{}",
            v, graph.attribute[v], scores.fr[v], scores.r[v]
        )?;
    }
    Ok(())
}

/// Default Hill window: n^(2/3) capped at 5000.
pub fn hill_default_window(n: usize) -> usize {
    ((n as f64).powf(2.0 / 3.0).floor() as usize).min(5000)
}

/// Hill estimate of the tail index over the top-k order statistics, with a
/// 95% normal confidence half-width. For degree data the pmf exponent is
/// about 1 + estimate; for Page-rank the survival exponent is the estimate.
pub fn tail_exponent_estimate(values: &[f64], k: usize) -> Result<(f64, f64)> {
    if k < 50 {
        return Err(Error::InsufficientData(format!(
            "Hill window must be at least 50, got {k}"
        )));
    }
    let mut xs: Vec<f64> = values.iter().copied().filter(|&x| x > 0.0).collect();
    if xs.len() < k + 1 {
        return Err(Error::InsufficientData(format!(
            "need at least {} positive values, got {}",
            k + 1,
            xs.len()
        )));
    }
    xs.sort_by(|a, b| b.total_cmp(a));
    let pivot = xs[k];
    let mean_log: f64 = xs[..k].iter().map(|&x| (x / pivot).ln()).sum::<f64>() / k as f64;
    if mean_log <= 0.0 {
        return Err(Error::InsufficientData(
            "degenerate order statistics: all top values equal the pivot".into(),
        ));
    }
    let alpha = 1.0 / mean_log;
    let half = 1.96 * alpha / (k as f64).sqrt();
    Ok((alpha, half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_p;
    use crate::params::ModelParams;
    use crate::rng::RngStream;
    use rand::Rng;

    #[test]
    fn single_vertex() {
        let g = Graph::singleton_seed(0, 1);
        let s = pagerank_exact(&g, 0.3).unwrap();
        assert!((s.r[0] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn star_scores() {
        let c = 0.4;
        let mut g = Graph::singleton_seed(0, 1);
        for _ in 0..5 {
            g.push_vertex(0, &[0]);
        }
        let s = pagerank_exact(&g, c).unwrap();
        assert!((s.r[0] - (1.0 - c) * (1.0 + 5.0 * c)).abs() < 1e-12);
        for leaf in 1..6 {
            assert!((s.r[leaf] - (1.0 - c)).abs() < 1e-12);
        }
    }

    #[test]
    fn directed_path_scores() {
        let c = 0.25;
        let mut g = Graph::singleton_seed(0, 1);
        g.push_vertex(0, &[0]);
        g.push_vertex(0, &[1]);
        let s = pagerank_exact(&g, c).unwrap();
        assert!((s.r[2] - (1.0 - c)).abs() < 1e-12);
        assert!((s.r[1] - (1.0 - c) * (1.0 + c)).abs() < 1e-12);
        assert!((s.r[0] - (1.0 - c) * (1.0 + c + c * c)).abs() < 1e-12);
    }

    #[test]
    fn matches_fixed_point_iteration() {
        let p = ModelParams::new(
            vec![0.5, 0.5],
            vec![vec![1.0, 2.0], vec![2.0, 1.0]],
            vec![2, 3],
            1.0,
        )
        .unwrap();
        let mut rng = RngStream::new(7, 0);
        let g = generate_p(&p, 300, &Graph::singleton_seed(0, 2), &mut rng).unwrap();
        let c = 0.85;
        let s = pagerank_exact(&g, c).unwrap();
        let n = g.n();
        let mut fr = vec![(1.0 - c) / n as f64; n];
        loop {
            let mut next = vec![(1.0 - c) / n as f64; n];
            for v in 0..n {
                if g.out_edges[v].is_empty() {
                    continue;
                }
                let share = c * fr[v] / g.out_edges[v].len() as f64;
                for &q in &g.out_edges[v] {
                    next[q] += share;
                }
            }
            let diff = next
                .iter()
                .zip(&fr)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            fr = next;
            if diff < 1e-15 {
                break;
            }
        }
        for v in 0..n {
            assert!((fr[v] - s.fr[v]).abs() < 1e-10);
        }
    }

    #[test]
    fn tree_path_count_identity() {
        // on a tree, r(v) = (1-c) sum_l c^l (descendants at depth l)
        let p = ModelParams::tree(vec![0.4, 0.6], vec![vec![1.0, 2.0], vec![2.0, 1.0]], 1.0)
            .unwrap();
        let mut rng = RngStream::new(9, 0);
        let g = generate_p(&p, 150, &Graph::singleton_seed(0, 2), &mut rng).unwrap();
        let c = 0.6;
        let s = pagerank_exact(&g, c).unwrap();
        let n = g.n();
        // depth_counts[v][l] computed by pushing child counts up the tree
        let mut poly: Vec<Vec<f64>> = vec![vec![1.0]; n];
        for v in (1..n).rev() {
            let parent = g.out_edges[v][0];
            let child_poly = poly[v].clone();
            let pp = &mut poly[parent];
            for (l, cnt) in child_poly.iter().enumerate() {
                if pp.len() <= l + 1 {
                    pp.resize(l + 2, 0.0);
                }
                pp[l + 1] += cnt;
            }
        }
        for v in 0..n {
            let want: f64 =
                (1.0 - c) * poly[v].iter().enumerate().map(|(l, p)| c.powi(l as i32) * p).sum::<f64>();
            assert!((s.r[v] - want).abs() < 1e-10);
        }
    }

    #[test]
    fn total_mass_conserved_minus_damping_structure() {
        // raw scores sum to 1 on graphs where every vertex has out-edges or
        // absorbs; with absorption at the root the total stays exactly 1
        // because nothing is ever removed, only left unpushed.
        let p = ModelParams::barabasi_albert();
        let mut rng = RngStream::new(11, 0);
        let g = generate_p(&p, 500, &Graph::singleton_seed(0, 1), &mut rng).unwrap();
        let s = pagerank_exact(&g, 0.85).unwrap();
        let total: f64 = s.fr.iter().sum();
        // root absorbs: total = 1 - c * (mass that would leave the root)
        assert!(total <= 1.0 + 1e-12);
        assert!(total > 1.0 - 0.85 * s.fr[0] / (1.0 - 0.85) - 1e-9);
    }

    #[test]
    fn hill_recovers_pareto_exponent() {
        let mut rng = RngStream::new(13, 0);
        let alpha = 2.0;
        let xs: Vec<f64> = (0..20_000)
            .map(|_| (1.0 - rng.gen::<f64>()).powf(-1.0 / alpha))
            .collect();
        let (est, half) = tail_exponent_estimate(&xs, 500).unwrap();
        assert!((est - alpha).abs() < half, "est {est} +- {half}");
    }

    #[test]
    fn hill_rejects_constant_data() {
        let xs = vec![3.0; 1000];
        assert!(matches!(
            tail_exponent_estimate(&xs, 100),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn rejects_forward_edges() {
        let g = Graph {
            attribute: vec![0, 0],
            birth_index: vec![0, 1],
            out_edges: vec![vec![1], vec![]],
            degree: vec![1, 1],
            seed_size: 1,
            num_attributes: 1,
        };
        assert!(matches!(
            pagerank_exact(&g, 0.5),
            Err(Error::CycleDetected(_))
        ));
    }
}
