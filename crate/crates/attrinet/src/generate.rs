use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fringe::FringeTree;
use crate::graph::Graph;
use crate::params::ModelParams;
use crate::rng::RngStream;

/// Per-attribute attachment weights.
///
/// Preferential attachment keeps a stub list per attribute (vertex id
/// repeated once per degree unit), so a uniform draw from the class-b list
/// selects v with probability deg(v)/D_b; uniform attachment keeps plain
/// vertex lists. Class totals then factor the attachment weight
/// kappa(a(v), a*) deg(v)^gamma into an O(K) categorical draw.
#[derive(Debug, Clone)]
pub struct AttachmentIndex {
    gamma: f64,
    lists: Vec<Vec<usize>>,
}

impl AttachmentIndex {
    pub fn build(graph: &Graph, gamma: f64) -> Self {
        let mut lists = vec![Vec::new(); graph.num_attributes];
        for v in 0..graph.n() {
            if gamma == 1.0 {
                for _ in 0..graph.degree[v] {
                    lists[graph.attribute[v]].push(v);
                }
            } else {
                lists[graph.attribute[v]].push(v);
            }
        }
        AttachmentIndex { gamma, lists }
    }

    /// D_b (stub count) for gamma=1, N_b (vertex count) for gamma=0.
    pub fn class_total(&self, b: usize) -> usize {
        self.lists[b].len()
    }

    fn draw_in_class(&self, b: usize, rng: &mut RngStream) -> usize {
        self.lists[b][rng.gen_range(0..self.lists[b].len())]
    }

    fn push_new_vertex(&mut self, v: usize, attr: usize, out_degree: usize) {
        if self.gamma == 1.0 {
            for _ in 0..out_degree {
                self.lists[attr].push(v);
            }
        } else {
            self.lists[attr].push(v);
        }
    }

    fn push_endpoint(&mut self, v: usize, attr: usize) {
        if self.gamma == 1.0 {
            self.lists[attr].push(v);
        }
    }
}

fn draw_categorical(weights: &[f64], rng: &mut RngStream) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        u -= w;
        if u <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

fn draw_pmf(pmf: &[f64], rng: &mut RngStream) -> usize {
    draw_categorical(pmf, rng)
}

/// Grows the independent-attribute model: each newcomer draws its type from
/// pi, then each of its m edges independently picks a target with weight
/// kappa(target type, newcomer type) * deg^gamma, degrees frozen at the
/// step's start. The newcomer never targets itself.
pub fn generate_p(
    params: &ModelParams,
    n: usize,
    seed_graph: &Graph,
    rng: &mut RngStream,
) -> Result<Graph> {
    if seed_graph.n() == 0 {
        return Err(Error::EmptySeed);
    }
    let mut graph = seed_graph.clone();
    graph.num_attributes = graph.num_attributes.max(params.k);
    let mut index = AttachmentIndex::build(&graph, params.gamma);
    if (0..params.k).all(|b| index.class_total(b) == 0) {
        return Err(Error::EmptySeed);
    }
    let mut class_weights = vec![0.0; params.k];
    let mut parents = Vec::with_capacity(4);
    for _ in 0..n {
        let a_star = draw_pmf(&params.pi, rng);
        for b in 0..params.k {
            class_weights[b] = params.kappa[b][a_star] * index.class_total(b) as f64;
        }
        parents.clear();
        for _ in 0..params.m[a_star] {
            let b = draw_categorical(&class_weights, rng);
            parents.push(index.draw_in_class(b, rng));
        }
        let v = graph.push_vertex(a_star, &parents);
        index.push_new_vertex(v, a_star, parents.len());
        for &p in &parents {
            index.push_endpoint(p, graph.attribute[p]);
        }
    }
    Ok(graph)
}

/// Grows the jointly weighted model: the pair (newcomer type a*, target v) is
/// drawn with probability proportional to nu(a*) kappa(a(v), a*) deg(v)^gamma.
/// nu is normalized internally, so any positive scaling of it produces the
/// identical run under the same rng stream. Tree case only.
pub fn generate_u(
    params: &ModelParams,
    n: usize,
    seed_graph: &Graph,
    rng: &mut RngStream,
) -> Result<Graph> {
    let nu_raw = params.nu.as_ref().ok_or(Error::MissingNu)?;
    if !params.is_tree() {
        return Err(Error::NotTreeCase);
    }
    if seed_graph.n() == 0 {
        return Err(Error::EmptySeed);
    }
    let total: f64 = nu_raw.iter().sum();
    let nu: Vec<f64> = nu_raw.iter().map(|x| x / total).collect();
    let mut graph = seed_graph.clone();
    graph.num_attributes = graph.num_attributes.max(params.k);
    let mut index = AttachmentIndex::build(&graph, params.gamma);
    let mut attr_weights = vec![0.0; params.k];
    let mut class_weights = vec![0.0; params.k];
    for _ in 0..n {
        for a in 0..params.k {
            attr_weights[a] = nu[a]
                * (0..params.k)
                    .map(|b| params.kappa[b][a] * index.class_total(b) as f64)
                    .sum::<f64>();
        }
        let a_star = draw_categorical(&attr_weights, rng);
        for b in 0..params.k {
            class_weights[b] = params.kappa[b][a_star] * index.class_total(b) as f64;
        }
        let b = draw_categorical(&class_weights, rng);
        let parent = index.draw_in_class(b, rng);
        let v = graph.push_vertex(a_star, &[parent]);
        index.push_new_vertex(v, a_star, 1);
        index.push_endpoint(parent, graph.attribute[parent]);
    }
    Ok(graph)
}

/// The local limit object: the progeny tree of the typed branching process
/// stopped at an independent Exp(2) time.
#[derive(Debug, Clone)]
pub struct LocalLimitTree {
    pub tau: f64,
    pub attrs: Vec<usize>,
    /// parent[0] is usize::MAX (the root)
    pub parents: Vec<usize>,
    pub birth_times: Vec<f64>,
}

impl LocalLimitTree {
    pub fn size(&self) -> usize {
        self.attrs.len()
    }

    pub fn fringe(&self) -> FringeTree {
        fn rec(v: usize, kids: &[Vec<usize>], attrs: &[usize]) -> FringeTree {
            FringeTree::new(attrs[v], kids[v].iter().map(|&c| rec(c, kids, attrs)).collect())
        }
        let mut kids = vec![Vec::new(); self.attrs.len()];
        for v in 1..self.attrs.len() {
            kids[self.parents[v]].push(v);
        }
        rec(0, &kids, &self.attrs)
    }

    /// number of children of the root
    pub fn root_offspring(&self) -> usize {
        self.parents.iter().filter(|&&p| p == 0).count()
    }
}

#[derive(PartialEq)]
struct Ev(f64, usize);
impl Eq for Ev {}
impl PartialOrd for Ev {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ev {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

fn exp_time(rate: f64, rng: &mut RngStream) -> f64 {
    -((1.0 - rng.gen::<f64>()).ln()) / rate
}

pub const EXPLOSION_CAP: usize = 10_000_000;

/// Simulates the stopped branching process with birth rates
/// phi_{a',b} (offspring + m_{a'}). A vertex of type a' with xi offspring
/// waits Exp(phi_{a'} (xi + m_{a'})) for its next birth, whose type is b with
/// probability phi_{a',b}/phi_{a'}; memorylessness lets a binary heap of
/// per-vertex next-event times drive the whole process.
pub fn simulate_local_limit(
    params: &ModelParams,
    phi_ab: &[Vec<f64>],
    phi_a: &[f64],
    root_attr: Option<usize>,
    rng: &mut RngStream,
    cap: usize,
) -> Result<LocalLimitTree> {
    if params.gamma != 1.0 {
        return Err(Error::BadGamma(params.gamma));
    }
    let tau = exp_time(2.0, rng);
    let root = match root_attr {
        Some(a) => a,
        None => draw_pmf(&params.pi, rng),
    };
    let mut attrs = vec![root];
    let mut parents = vec![usize::MAX];
    let mut birth_times = vec![0.0];
    let mut offspring = vec![0usize];
    let mut heap = BinaryHeap::new();
    let rate0 = phi_a[root] * params.m[root] as f64;
    heap.push(Reverse(Ev(exp_time(rate0, rng), 0)));
    while let Some(Reverse(Ev(t, v))) = heap.pop() {
        if t >= tau {
            break;
        }
        let a = attrs[v];
        let b = draw_categorical(&phi_ab[a], rng);
        let child = attrs.len();
        attrs.push(b);
        parents.push(v);
        birth_times.push(t);
        offspring.push(0);
        offspring[v] += 1;
        if attrs.len() > cap {
            return Err(Error::ExplosionGuard(cap));
        }
        let child_rate = phi_a[b] * params.m[b] as f64;
        heap.push(Reverse(Ev(t + exp_time(child_rate, rng), child)));
        let v_rate = phi_a[a] * (offspring[v] as f64 + params.m[a] as f64);
        heap.push(Reverse(Ev(t + exp_time(v_rate, rng), v)));
    }
    Ok(LocalLimitTree {
        tau,
        attrs,
        parents,
        birth_times,
    })
}
