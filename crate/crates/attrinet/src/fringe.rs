use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::theory::TheorySolution;

/// Largest fringe size accepted by the probability routines; the history
/// enumeration is factorial in the size.
pub const FRINGE_SIZE_CAP: usize = 6;

/// A rooted attributed tree considered up to order-forgetting isomorphism.
///
/// The constructor sorts children recursively, so structural equality on
/// this type is isomorphism of marked rooted trees and `encode()` is a
/// canonical key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FringeTree {
    pub attr: usize,
    children: Vec<FringeTree>,
}

impl FringeTree {
    pub fn leaf(attr: usize) -> Self {
        FringeTree {
            attr,
            children: Vec::new(),
        }
    }

    pub fn new(attr: usize, mut children: Vec<FringeTree>) -> Self {
        children.sort();
        FringeTree { attr, children }
    }

    pub fn children(&self) -> &[FringeTree] {
        &self.children
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn encode(&self) -> String {
        let mut s = self.attr.to_string();
        s.push('[');
        for c in &self.children {
            s.push_str(&c.encode());
        }
        s.push(']');
        s
    }

    fn attr_counts(&self, counts: &mut Vec<usize>) {
        if self.attr >= counts.len() {
            counts.resize(self.attr + 1, 0);
        }
        counts[self.attr] += 1;
        for c in &self.children {
            c.attr_counts(counts);
        }
    }

    fn max_child_count(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.max_child_count())
            .fold(self.children.len(), usize::max)
    }
}

/// Every isomorphism class of attributed rooted trees with up to `max_size`
/// vertices and attributes in 0..num_attrs, grouped by nothing in particular
/// but sorted canonically.
pub fn all_classes(num_attrs: usize, max_size: usize) -> Vec<FringeTree> {
    // by_size[s] lists all classes of size s (1-indexed)
    let mut by_size: Vec<Vec<FringeTree>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        // flat pool of smaller trees to draw child multisets from
        let pool: Vec<&FringeTree> = by_size[1..s].iter().flatten().collect();
        let mut out = Vec::new();
        for a in 0..num_attrs {
            // non-increasing index sequences keep multisets unique
            fn pick(
                pool: &[&FringeTree],
                start_max: usize,
                remaining: usize,
                acc: &mut Vec<FringeTree>,
                a: usize,
                out: &mut Vec<FringeTree>,
            ) {
                if remaining == 0 {
                    out.push(FringeTree::new(a, acc.clone()));
                    return;
                }
                for i in (0..start_max).rev() {
                    let sz = pool[i].size();
                    if sz <= remaining {
                        acc.push(pool[i].clone());
                        pick(pool, i + 1, remaining - sz, acc, a, out);
                        acc.pop();
                    }
                }
            }
            let mut acc = Vec::new();
            pick(&pool, pool.len(), s - 1, &mut acc, a, &mut out);
        }
        by_size[s] = out;
    }
    let mut all: Vec<FringeTree> = by_size.into_iter().flatten().collect();
    all.sort();
    all
}

fn check_preconditions(t: &FringeTree, sol: &TheorySolution, params: &ModelParams) -> Result<()> {
    if params.gamma != 1.0 {
        return Err(Error::BadGamma(params.gamma));
    }
    if !params.is_tree() || sol.m.iter().any(|&m| m != 1) {
        return Err(Error::NotTreeCase);
    }
    let size = t.size();
    if size > FRINGE_SIZE_CAP {
        return Err(Error::TooLarge {
            size,
            cap: FRINGE_SIZE_CAP,
        });
    }
    let mut counts = Vec::new();
    t.attr_counts(&mut counts);
    if counts.len() > params.k {
        return Err(Error::MalformedInput(
            "fringe tree uses attributes outside the model".into(),
        ));
    }
    Ok(())
}

/// Limiting probability that the fringe at a uniform vertex falls in the
/// isomorphism class of `t`: brute-force sum over all attachment histories.
///
/// Each history picks, step by step, a parent and a child type; its weight is
/// the product of birth odds (rate over rate plus the stopping rate 2), and
/// the class probability sums the weights of histories whose final shape
/// canonicalizes to `t`, times the odds that the stopping clock rings first.
pub fn fringe_probability(
    t: &FringeTree,
    sol: &TheorySolution,
    params: &ModelParams,
) -> Result<f64> {
    check_preconditions(t, sol, params)?;
    let size = t.size();
    let mut target_counts = Vec::new();
    t.attr_counts(&mut target_counts);
    target_counts.resize(params.k, 0);
    let max_children = t.max_child_count();

    // growth state: per-vertex attribute, parent and child count
    struct St<'a> {
        attrs: Vec<usize>,
        parents: Vec<usize>,
        nchild: Vec<usize>,
        counts: Vec<usize>,
        target: &'a FringeTree,
        target_counts: &'a [usize],
        max_children: usize,
        size: usize,
        phi_ab: &'a [Vec<f64>],
        phi_a: &'a [f64],
        total: f64,
    }

    fn weight_now(st: &St) -> f64 {
        // total birth rate: every vertex counts its tree degree with the
        // root's phantom unit, i.e. child count + 1
        st.attrs
            .iter()
            .zip(&st.nchild)
            .map(|(&a, &c)| st.phi_a[a] * (c as f64 + 1.0))
            .sum()
    }

    fn assemble(st: &St) -> FringeTree {
        fn rec(v: usize, kids: &[Vec<usize>], attrs: &[usize]) -> FringeTree {
            FringeTree::new(attrs[v], kids[v].iter().map(|&c| rec(c, kids, attrs)).collect())
        }
        let mut kids = vec![Vec::new(); st.attrs.len()];
        for v in 1..st.attrs.len() {
            kids[st.parents[v]].push(v);
        }
        rec(0, &kids, &st.attrs)
    }

    fn dfs(st: &mut St, weight: f64) {
        if st.attrs.len() == st.size {
            if &assemble(st) == st.target {
                st.total += weight * 2.0 / (2.0 + weight_now(st));
            }
            return;
        }
        let w_now = weight_now(st);
        for p in 0..st.attrs.len() {
            if st.nchild[p] + 1 > st.max_children {
                continue;
            }
            for b in 0..st.target_counts.len() {
                if st.counts[b] + 1 > st.target_counts[b] {
                    continue;
                }
                let rate = st.phi_ab[st.attrs[p]][b] * (st.nchild[p] as f64 + 1.0);
                st.attrs.push(b);
                st.parents.push(p);
                st.nchild.push(0);
                st.nchild[p] += 1;
                st.counts[b] += 1;
                dfs(st, weight * rate / (2.0 + w_now));
                st.counts[b] -= 1;
                st.nchild[p] -= 1;
                st.nchild.pop();
                st.parents.pop();
                st.attrs.pop();
            }
        }
    }

    let root = t.attr;
    let mut counts = vec![0; params.k];
    counts[root] = 1;
    let mut st = St {
        attrs: vec![root],
        parents: vec![usize::MAX],
        nchild: vec![0],
        counts,
        target: t,
        target_counts: &target_counts,
        max_children,
        size,
        phi_ab: &sol.phi_ab,
        phi_a: &sol.phi_a,
        total: 0.0,
    };
    dfs(&mut st, params.pi[root]);
    Ok(st.total)
}

// ---------------------------------------------------------------------------
// independent recursive route over ordered (birth-ordered) representatives
// ---------------------------------------------------------------------------

/// A rooted attributed tree whose children carry a fixed birth order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct OrderedTree {
    attr: usize,
    children: Vec<OrderedTree>,
}

impl OrderedTree {
    fn encode(&self) -> String {
        let mut s = self.attr.to_string();
        s.push('[');
        for c in &self.children {
            s.push_str(&c.encode());
        }
        s.push(']');
        s
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// All ordered trees whose order-forgetting canonical form equals `t`.
fn ordered_variants(t: &FringeTree) -> Vec<OrderedTree> {
    let child_variants: Vec<Vec<OrderedTree>> =
        t.children().iter().map(ordered_variants).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    // choose a variant per child, then every ordering of the chosen sequence
    fn combos(
        idx: usize,
        child_variants: &[Vec<OrderedTree>],
        acc: &mut Vec<OrderedTree>,
        attr: usize,
        seen: &mut HashSet<String>,
        out: &mut Vec<OrderedTree>,
    ) {
        if idx == child_variants.len() {
            for perm in permutations(acc.len()) {
                let ordered = OrderedTree {
                    attr,
                    children: perm.iter().map(|&i| acc[i].clone()).collect(),
                };
                if seen.insert(ordered.encode()) {
                    out.push(ordered);
                }
            }
            return;
        }
        for v in &child_variants[idx] {
            acc.push(v.clone());
            combos(idx + 1, child_variants, acc, attr, seen, out);
            acc.pop();
        }
    }
    let mut acc = Vec::new();
    combos(0, &child_variants, &mut acc, t.attr, &mut seen, &mut out);
    out
}

fn varpi(
    t: &OrderedTree,
    sol: &TheorySolution,
    params: &ModelParams,
    memo: &mut HashMap<String, f64>,
) -> f64 {
    let key = t.encode();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let value = if t.children.is_empty() {
        2.0 * params.pi[t.attr] / (2.0 + sol.phi_a[t.attr])
    } else {
        // numerator: remove the youngest (last-born) leaf child of any vertex
        // and weigh by the birth rate that re-attaches it
        fn walk(
            node: &OrderedTree,
            rebuild: &dyn Fn(OrderedTree) -> OrderedTree,
            sol: &TheorySolution,
            params: &ModelParams,
            memo: &mut HashMap<String, f64>,
        ) -> f64 {
            let mut acc = 0.0;
            if let Some(last) = node.children.last() {
                if last.children.is_empty() {
                    let mut shrunk = node.clone();
                    let young = shrunk.children.pop().unwrap();
                    let reduced = rebuild(shrunk);
                    // degree of the parent after removal: children + 1
                    let deg_after = node.children.len() as f64;
                    acc += varpi(&reduced, sol, params, memo)
                        * (deg_after / 2.0)
                        * sol.phi_ab[node.attr][young.attr];
                }
            }
            for (i, child) in node.children.iter().enumerate() {
                let parent = node.clone();
                let rb = move |replacement: OrderedTree| {
                    let mut p = parent.clone();
                    p.children[i] = replacement;
                    rebuild(p)
                };
                acc += walk(child, &rb, sol, params, memo);
            }
            acc
        }
        fn degree_weight(node: &OrderedTree, sol: &TheorySolution) -> f64 {
            let own = sol.phi_a[node.attr] * (node.children.len() as f64 + 1.0);
            own + node
                .children
                .iter()
                .map(|c| degree_weight(c, sol))
                .sum::<f64>()
        }
        let identity = |x: OrderedTree| x;
        let numer = walk(t, &identity, sol, params, memo);
        numer / (1.0 + degree_weight(t, sol) / 2.0)
    };
    memo.insert(key, value);
    value
}

/// Same probability as [`fringe_probability`], via the youngest-leaf-removal
/// recursion summed over all ordered representatives of the class.
pub fn fringe_probability_recursive(
    t: &FringeTree,
    sol: &TheorySolution,
    params: &ModelParams,
) -> Result<f64> {
    check_preconditions(t, sol, params)?;
    let mut memo = HashMap::new();
    Ok(ordered_variants(t)
        .iter()
        .map(|o| varpi(o, sol, params, &mut memo))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::solve;

    fn ba() -> (ModelParams, TheorySolution) {
        let p = ModelParams::barabasi_albert();
        let sol = solve(&p, 0.5).unwrap();
        (p, sol)
    }

    fn two_type() -> (ModelParams, TheorySolution) {
        let p = ModelParams::tree(vec![0.2, 0.8], vec![vec![1.0, 1.0], vec![0.2, 1.0]], 1.0)
            .unwrap();
        let sol = solve(&p, 0.5).unwrap();
        (p, sol)
    }

    #[test]
    fn canonical_form_ignores_child_order() {
        let a = FringeTree::new(0, vec![FringeTree::leaf(1), FringeTree::leaf(0)]);
        let b = FringeTree::new(0, vec![FringeTree::leaf(0), FringeTree::leaf(1)]);
        assert_eq!(a, b);
        assert_eq!(a.encode(), b.encode());
    }

    #[test]
    fn class_counts_two_types() {
        assert_eq!(all_classes(2, 1).len(), 2);
        assert_eq!(all_classes(2, 2).len(), 6);
        let by_size_3: usize = all_classes(2, 3).iter().filter(|t| t.size() == 3).count();
        assert_eq!(by_size_3, 14);
    }

    #[test]
    fn singleton_probability_closed_form() {
        let (p, sol) = ba();
        let t = FringeTree::leaf(0);
        let got = fringe_probability(&t, &sol, &p).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-12);
        let rec = fringe_probability_recursive(&t, &sol, &p).unwrap();
        assert!((rec - got).abs() < 1e-14);
    }

    #[test]
    fn two_path_single_type() {
        let (p, sol) = ba();
        let t = FringeTree::new(0, vec![FringeTree::leaf(0)]);
        let got = fringe_probability(&t, &sol, &p).unwrap();
        // root weight 2*phi + leaf weight phi with phi = 1
        assert!((got - 2.0 / 15.0).abs() < 1e-12, "got {got}");
        let rec = fringe_probability_recursive(&t, &sol, &p).unwrap();
        assert!((rec - got).abs() < 1e-14);
    }

    #[test]
    fn enumeration_matches_recursion_everywhere() {
        let (p, sol) = two_type();
        for t in all_classes(2, 4) {
            let a = fringe_probability(&t, &sol, &p).unwrap();
            let b = fringe_probability_recursive(&t, &sol, &p).unwrap();
            assert!((a - b).abs() < 1e-13, "{}: {a} vs {b}", t.encode());
        }
    }

    #[test]
    fn partial_sums_increase_and_stay_below_one() {
        let (p, sol) = two_type();
        let mut last = 0.0;
        for cap in 1..=4usize {
            let total: f64 = all_classes(2, cap)
                .iter()
                .map(|t| fringe_probability(t, &sol, &p).unwrap())
                .sum();
            assert!(total > last);
            assert!(total <= 1.0 + 1e-12);
            last = total;
        }
        assert!(last > 0.85, "size-4 classes already cover most mass: {last}");
    }

    #[test]
    fn size_cap_enforced() {
        let (p, sol) = ba();
        let mut t = FringeTree::leaf(0);
        for _ in 0..FRINGE_SIZE_CAP {
            t = FringeTree::new(0, vec![t]);
        }
        assert!(matches!(
            fringe_probability(&t, &sol, &p),
            Err(Error::TooLarge { .. })
        ));
    }
}
