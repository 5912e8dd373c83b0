//! End-to-end acceptance suite: each test prints one PASS/FAIL line for the
//! capability it certifies and fails loudly if the check does not hold.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;

use attrinet::centrality::{
    hill_default_window, normalized_totals, pagerank_exact, tail_exponent_estimate,
};
use attrinet::fringe::{all_classes, fringe_probability, fringe_probability_recursive};
use attrinet::generate::{generate_p, generate_u};
use attrinet::graph::Graph;
use attrinet::params::ModelParams;
use attrinet::rng::RngStream;
use attrinet::sample::{
    attribute_representation, draw_vertex, empirical_bias, SchemeSpec,
};
use attrinet::stats::{census, compare_fringe};
use attrinet::theory;

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "[{}] acceptance {:02} {}: {}",
        if ok { "PASS" } else { "FAIL" },
        id,
        name,
        detail
    );
    assert!(ok, "acceptance {id} {name} failed: {detail}");
}

/// Half the L1 distance between an empirical pmf and a reference pmf on a
/// truncated support.
fn tv_distance(hist: &BTreeMap<u64, usize>, total: usize, pmf: impl Fn(u64) -> f64, kmax: u64) -> f64 {
    let mut tv = 0.0;
    for k in 1..=kmax {
        let emp = *hist.get(&k).unwrap_or(&0) as f64 / total as f64;
        tv += (emp - pmf(k)).abs();
    }
    tv / 2.0
}

fn degree_histogram(g: &Graph, attr: Option<usize>) -> (BTreeMap<u64, usize>, usize) {
    let mut h = BTreeMap::new();
    let mut total = 0;
    for v in 0..g.n() {
        if attr.map_or(true, |a| g.attribute[v] == a) {
            *h.entry(g.degree[v]).or_insert(0) += 1;
            total += 1;
        }
    }
    (h, total)
}

fn sym_params() -> ModelParams {
    ModelParams::tree(vec![0.5, 0.5], vec![vec![2.0, 1.0], vec![1.0, 2.0]], 1.0).unwrap()
}

fn asym_params() -> ModelParams {
    ModelParams::tree(vec![0.2, 0.8], vec![vec![1.0, 1.0], vec![0.2, 1.0]], 1.0).unwrap()
}

#[test]
fn a01_limit_identities_on_random_parameters() {
    let mut rng = RngStream::new(0xA11CE, 0);
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let k = 1 + (trial % 5);
        let mut pi: Vec<f64> = (0..k).map(|_| 0.05 + rng.gen::<f64>()).collect();
        let s: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|x| *x /= s);
        let kappa: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..k).map(|_| 0.2 + 2.8 * rng.gen::<f64>()).collect())
            .collect();
        let m: Vec<u32> = if trial % 2 == 0 {
            vec![1; k]
        } else {
            (0..k).map(|_| 1 + rng.gen_range(0..4u32)).collect()
        };
        let c = 0.1 + 0.85 * rng.gen::<f64>();
        let params = ModelParams::new(pi.clone(), kappa, m.clone(), 1.0).unwrap();
        // solve() already cross-validates the linear-system route against the
        // series route to 1e-9, so a successful solve certifies that part
        let sol = theory::solve(&params, c).unwrap();
        for a in 0..k {
            let alt = 2.0 - m[a] as f64 * pi[a] / sol.eta[a];
            worst = worst.max((sol.phi_a[a] - alt).abs());
        }
        for b in 0..k {
            let dot: f64 = (0..k).map(|a| pi[a] * sol.m_mat[a][b]).sum();
            worst = worst.max((dot - pi[b]).abs());
        }
        let (phi_min, phi_max) = sol
            .phi_a
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        assert!(phi_max < sol.lambda_c + 1e-10 && sol.lambda_c < 2.0 + 1e-12);
        assert!((1.0 + c) * phi_min <= sol.lambda_c + 1e-10);
        assert!(sol.lambda_c <= (1.0 + c) * phi_max + 1e-10);
        let mean: f64 = (0..k).map(|a| pi[a] * sol.expected_pr[a]).sum();
        worst = worst.max((mean - 1.0).abs());
    }
    report(
        1,
        "limit identities on 1000 random parameter sets",
        worst < 1e-10,
        &format!("worst identity residual {worst:.2e}"),
    );
}

#[test]
fn a02_single_type_degree_and_pagerank_tails() {
    let n = 200_000;
    let p = ModelParams::barabasi_albert();
    let mut rng = RngStream::new(2024, 0);
    let g = generate_p(&p, n, &Graph::singleton_seed(0, 1), &mut rng).unwrap();
    let (hist, total) = degree_histogram(&g, None);
    let tv = tv_distance(&hist, total, |k| {
        4.0 / (k as f64 * (k + 1) as f64 * (k + 2) as f64)
    }, 20);
    let degs: Vec<f64> = g.degree.iter().map(|&d| d as f64).collect();
    let (deg_hill, _) = tail_exponent_estimate(&degs, hill_default_window(g.n())).unwrap();
    let c = 0.85;
    let scores = pagerank_exact(&g, c).unwrap();
    let (pr_hill, _) = tail_exponent_estimate(&scores.r, hill_default_window(g.n())).unwrap();
    let want_pr = 2.0 / (1.0 + c);
    let ok = tv < 0.01 && (deg_hill - 2.0).abs() < 0.2 && (pr_hill - want_pr).abs() < 0.25;
    report(
        2,
        "single-type degree law and score tails",
        ok,
        &format!("TV {tv:.4}, degree tail {deg_hill:.3}, score tail {pr_hill:.3} (want {want_pr:.3})"),
    );
}

#[test]
fn a03_two_type_degree_and_score_exponents() {
    let n = 500_000;
    let p = asym_params();
    let mut rng = RngStream::new(33, 0);
    let g = generate_p(&p, n, &Graph::singleton_seed(1, 2), &mut rng).unwrap();
    let sol = theory::solve(&p, 0.85).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for a in 0..2 {
        let law = theory::degree_law(a, &p).unwrap();
        let (hist, total) = degree_histogram(&g, Some(a));
        let tv = tv_distance(&hist, total, |k| law.pmf(k), 20);
        detail.push_str(&format!("TV[{a}] {tv:.4} "));
        ok &= tv < 0.02;
    }
    let scores = pagerank_exact(&g, 0.85).unwrap();
    let mut pr_ci = Vec::new();
    let mut deg_ci = Vec::new();
    // a common tail window keeps the two attribute estimates comparable
    let counts = g.attribute_counts();
    let window = hill_default_window(*counts.iter().min().unwrap());
    for a in 0..2 {
        let rs: Vec<f64> = (0..g.n())
            .filter(|&v| g.attribute[v] == a)
            .map(|v| scores.r[v])
            .collect();
        let ds: Vec<f64> = (0..g.n())
            .filter(|&v| g.attribute[v] == a)
            .map(|v| g.degree[v] as f64)
            .collect();
        pr_ci.push(tail_exponent_estimate(&rs, window).unwrap());
        deg_ci.push(tail_exponent_estimate(&ds, window).unwrap());
    }
    let pr_overlap = (pr_ci[0].0 - pr_ci[1].0).abs() <= pr_ci[0].1 + pr_ci[1].1;
    let phi_gap = (sol.phi_a[0] - sol.phi_a[1]).abs();
    let deg_separate = (deg_ci[0].0 - deg_ci[1].0).abs() > deg_ci[0].1 + deg_ci[1].1;
    ok &= pr_overlap && (phi_gap <= 0.1 || deg_separate);
    detail.push_str(&format!(
        "score tails {:.3}/{:.3} overlap={pr_overlap}, degree tails {:.3}/{:.3} separate={deg_separate} (phi gap {phi_gap:.3})",
        pr_ci[0].0, pr_ci[1].0, deg_ci[0].0, deg_ci[1].0
    ));
    report(3, "two-type tail exponents", ok, &detail);
}

#[test]
fn a04_fringe_distribution_oracle() {
    let p = sym_params();
    let sol = theory::solve(&p, 0.85).unwrap();
    // exhaustive check that the history enumeration and the leaf-removal
    // recursion give identical class probabilities up to size 5
    let mut worst = 0.0f64;
    for t in all_classes(2, 5) {
        let a = fringe_probability(&t, &sol, &p).unwrap();
        let b = fringe_probability_recursive(&t, &sol, &p).unwrap();
        worst = worst.max((a - b).abs());
    }
    let n = 200_000;
    let mut rng = RngStream::new(44, 0);
    let g = generate_p(&p, n, &Graph::singleton_seed(0, 2), &mut rng).unwrap();
    let cen = census(&g, 3).unwrap();
    let rows = compare_fringe(&cen, &sol, &p).unwrap();
    let worst_z = rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
    let ok = worst < 1e-12 && worst_z < 4.0;
    report(
        4,
        "fringe class probabilities",
        ok,
        &format!(
            "max enum-vs-recursion gap {worst:.2e}, worst census z {worst_z:.2} over {} classes",
            rows.len()
        ),
    );
}

#[test]
fn a05_sampling_scheme_limits() {
    let sets = [sym_params(), asym_params(), ModelParams::rare_minority(0.01, 1.0).unwrap()];
    let c = 0.15;
    let n = 200_000;
    let reps = 100_000;
    let seed = 2u64;
    let mut worst_z = 0.0f64;
    for (i, p) in sets.iter().enumerate() {
        let sol = theory::solve(p, c).unwrap();
        let lim = theory::sampling_limits(&sol, p, c, 1).unwrap();
        let mut rng = RngStream::new(seed, i as u64);
        let root = if rng.gen::<f64>() > p.pi[0] { 1 } else { 0 };
        let g = generate_p(p, n, &Graph::singleton_seed(root, 2), &mut rng).unwrap();
        for (j, (scheme, th)) in [
            (SchemeSpec::Uniform, &lim.uniform),
            (SchemeSpec::Degree, &lim.degree),
            (SchemeSpec::InDegree, &lim.in_degree),
            (SchemeSpec::PagerankWalk { c }, &lim.pagerank),
            (SchemeSpec::FixedWalk { m: 1 }, &lim.fixed_walk),
        ]
        .iter()
        .enumerate()
        {
            let mut r2 = RngStream::new(seed, 1000 + 10 * i as u64 + j as u64);
            let rep = attribute_representation(&g, scheme, reps, &mut r2).unwrap();
            let z = ((rep.attr_freq[0] - th[0]) / rep.stderr[0].max(1e-12)).abs();
            worst_z = worst_z.max(z);
        }
    }

    // zero-length walks are uniform draws, realization by realization
    let p = sym_params();
    let mut rng = RngStream::new(55, 0);
    let g = generate_p(&p, 500, &Graph::singleton_seed(0, 2), &mut rng).unwrap();
    let mut exact_match = true;
    let (mut r1, mut r2) = (RngStream::new(56, 0), RngStream::new(56, 0));
    for _ in 0..1000 {
        let a = draw_vertex(&g, &SchemeSpec::FixedWalk { m: 0 }, &mut r1).unwrap();
        let b = draw_vertex(&g, &SchemeSpec::Uniform, &mut r2).unwrap();
        exact_match &= a == b;
    }

    // on a small fixed tree, walk-terminal frequencies reproduce the exact
    // backward-pass scores vertex by vertex
    let mut rng = RngStream::new(57, 0);
    let g = generate_p(&p, 199, &Graph::singleton_seed(0, 2), &mut rng).unwrap();
    let cw = 0.5;
    let scores = pagerank_exact(&g, cw).unwrap();
    let wreps = 200_000usize;
    let mut counts = vec![0usize; g.n()];
    let mut r3 = RngStream::new(58, 0);
    for _ in 0..wreps {
        counts[draw_vertex(&g, &SchemeSpec::PagerankWalk { c: cw }, &mut r3).unwrap()] += 1;
    }
    // a walk that would continue past the root stops there, so the root
    // terminal frequency carries the whole residual mass on top of its score
    let root_mass = 1.0 - scores.fr.iter().skip(1).sum::<f64>();
    let mut worst_vertex_z = 0.0f64;
    for v in 0..g.n() {
        let expect = if v == 0 { root_mass } else { scores.fr[v] };
        let f = counts[v] as f64 / wreps as f64;
        let se = (expect * (1.0 - expect) / wreps as f64).sqrt();
        worst_vertex_z = worst_vertex_z.max(((f - expect) / se).abs());
    }

    let ok = worst_z < 4.0 && exact_match && worst_vertex_z < 4.0;
    report(
        5,
        "sampling scheme limits",
        ok,
        &format!("worst frequency z {worst_z:.2}, zero-walk==uniform {exact_match}, worst per-vertex walk z {worst_vertex_z:.2}"),
    );
}

#[test]
fn a06_rare_minority_asymptotics() {
    let c = 0.85;
    // the balanced point: minority walk representation 1/2 at D = 1/2, with
    // square-root-rate residuals
    let r4 = theory::rare_minority(1e-4, 0.5, c, 1).unwrap();
    let r6 = theory::rare_minority(1e-6, 0.5, c, 1).unwrap();
    let res4 = (r4.exact_stationary - 0.5).abs();
    let res6 = (r6.exact_stationary - 0.5).abs();
    let ratio_ok = res6 < 0.3 * res4 && res4 < 0.01;

    // expansion residual orders across three decades of a
    let mut prev: Option<[f64; 3]> = None;
    let mut orders_ok = true;
    for a in [1e-2, 1e-3, 1e-4] {
        let r = theory::rare_minority(a, 1.0, c, 1).unwrap();
        let res = [
            (r.exact_uniform - r.asym_uniform).abs(),
            (r.exact_degree - r.asym_degree).abs(),
            (r.exact_in_degree - r.asym_in_degree).abs(),
        ];
        if let Some(pr) = prev {
            // uniform and in-degree residuals are first order in a (decade
            // ratio 0.1); the degree residual is order a^(3/2) (ratio 0.032)
            orders_ok &= res[0] < 0.25 * pr[0];
            orders_ok &= res[1] < 0.1 * pr[1];
            orders_ok &= res[2] < 0.25 * pr[2];
        }
        prev = Some(res);
    }
    let ok = ratio_ok && orders_ok;
    report(
        6,
        "rare-minority expansions",
        ok,
        &format!("balance residuals {res4:.2e} -> {res6:.2e}, decade order checks {orders_ok}"),
    );
}

#[test]
fn a07_multi_edge_consistency() {
    let pi = vec![0.3, 0.7];
    let kappa = vec![vec![1.5, 0.8], vec![0.8, 1.2]];
    let tree = ModelParams::tree(pi.clone(), kappa.clone(), 1.0).unwrap();
    let multi = ModelParams::new(pi, kappa, vec![2, 2], 1.0).unwrap();
    let sol_t = theory::solve(&tree, 0.85).unwrap();
    let sol_m = theory::solve(&multi, 0.85).unwrap();
    let phi_gap = (0..2)
        .map(|a| (sol_t.phi_a[a] - sol_m.phi_a[a]).abs())
        .fold(0.0, f64::max);

    let n = 200_000;
    let mut rng = RngStream::new(77, 0);
    let g = generate_p(&multi, n, &Graph::singleton_seed(1, 2), &mut rng).unwrap();
    let mut ok = phi_gap < 1e-10;
    let mut detail = format!("phi gap {phi_gap:.2e} ");
    for a in 0..2 {
        let law = theory::degree_law(a, &multi).unwrap();
        let (hist, total) = degree_histogram(&g, Some(a));
        let tv = tv_distance(&hist, total, |k| law.pmf(k), 20);
        detail.push_str(&format!("TV[{a}] {tv:.4} "));
        ok &= tv < 0.02;
    }
    // the mass identity holds up to the damping mass a walk carries past the
    // last ancestor; on this shallow two-parent DAG that leak stays visible
    // unless the damping is small
    let scores = pagerank_exact(&g, 0.2).unwrap();
    let (total_mass, _) = normalized_totals(&scores, &g);
    ok &= (total_mass - 1.0).abs() < 0.01;
    detail.push_str(&format!("mean score {total_mass:.4}"));
    report(7, "uniform out-degree-2 model", ok, &detail);
}

#[test]
fn a08_uniform_attachment_suite() {
    let n = 200_000;
    let p = ModelParams::tree(vec![0.4, 0.6], vec![vec![2.0, 1.0], vec![1.0, 2.0]], 0.0).unwrap();
    let mut rng = RngStream::new(88, 0);
    let g = generate_p(&p, n, &Graph::singleton_seed(1, 2), &mut rng).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for a in 0..2 {
        let law = theory::degree_law(a, &p).unwrap();
        let (hist, total) = degree_histogram(&g, Some(a));
        let tv = tv_distance(&hist, total, |k| law.pmf(k), 20);
        detail.push_str(&format!("TV[{a}] {tv:.4} "));
        ok &= tv < 0.02;
    }
    // geometric degrees, yet the score tail stays polynomial with index 1/c
    let single = ModelParams::new(vec![1.0], vec![vec![1.0]], vec![1], 0.0).unwrap();
    let mut rng = RngStream::new(89, 0);
    let g1 = generate_p(&single, n, &Graph::singleton_seed(0, 1), &mut rng).unwrap();
    let c = 0.8;
    let scores = pagerank_exact(&g1, c).unwrap();
    let (pr_hill, _) = tail_exponent_estimate(&scores.r, hill_default_window(g1.n())).unwrap();
    ok &= (pr_hill - 1.0 / c).abs() < 0.3;
    detail.push_str(&format!("score tail {pr_hill:.3} (want {:.3})", 1.0 / c));
    report(8, "uniform attachment laws", ok, &detail);
}

#[test]
fn a09_subsampling_bias() {
    let p = asym_params();
    let (pp, alpha) = (0.5, 0.01);
    let limit = theory::bias_limit(&p, pp, alpha).unwrap();
    let n = 100_000;
    let reps = 50;
    let mut ok = true;
    let mut detail = format!("limit {limit:.4} ");
    for (si, scheme) in [
        SchemeSpec::InducedNodes { p: pp },
        SchemeSpec::IncidentEdges { p: pp },
    ]
    .iter()
    .enumerate()
    {
        let mut vals = Vec::with_capacity(reps);
        for r in 0..reps {
            let mut rng = RngStream::new(99, (si * reps + r) as u64);
            let root = if rng.gen::<f64>() > p.pi[0] { 1 } else { 0 };
            let g = generate_p(&p, n, &Graph::singleton_seed(root, 2), &mut rng).unwrap();
            vals.push(empirical_bias(&g, scheme, alpha, &mut rng).unwrap());
        }
        let mean = vals.iter().sum::<f64>() / reps as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt();
        let z = (mean - limit) / se;
        detail.push_str(&format!("scheme{si} mean {mean:.4} z {z:+.2} "));
        ok &= z.abs() < 3.0;
    }
    // full retention has exactly zero bias, empirically and in the limit
    let mut rng = RngStream::new(100, 0);
    let g = generate_p(&p, 5000, &Graph::singleton_seed(1, 2), &mut rng).unwrap();
    let b1 = empirical_bias(&g, &SchemeSpec::InducedNodes { p: 1.0 }, alpha, &mut rng).unwrap();
    let b2 = theory::bias_limit(&p, 1.0, alpha).unwrap();
    ok &= b1 == 0.0 && b2 == 0.0;
    detail.push_str(&format!("full-retention bias {b1}/{b2}"));
    report(9, "subgraph ranking bias", ok, &detail);
}

/// Exact outcome probabilities of three growth steps from a single type-0
/// root, by direct recursion over attribute and parent choices.
fn enumerate_outcomes(p: &ModelParams, steps: usize) -> BTreeMap<String, f64> {
    fn key(attrs: &[usize], parents: &[usize]) -> String {
        format!("{attrs:?}|{parents:?}")
    }
    fn go(
        p: &ModelParams,
        attrs: &mut Vec<usize>,
        parents: &mut Vec<usize>,
        degs: &mut Vec<f64>,
        prob: f64,
        left: usize,
        out: &mut BTreeMap<String, f64>,
    ) {
        if left == 0 {
            *out.entry(key(attrs, &parents[1..])).or_insert(0.0) += prob;
            return;
        }
        for a_new in 0..p.k {
            let weights: Vec<f64> = (0..attrs.len())
                .map(|v| p.kappa[attrs[v]][a_new] * degs[v])
                .collect();
            let total: f64 = weights.iter().sum();
            for v in 0..attrs.len() {
                let step_p = p.pi[a_new] * weights[v] / total;
                attrs.push(a_new);
                parents.push(v);
                degs.push(1.0);
                degs[v] += 1.0;
                go(p, attrs, parents, degs, prob * step_p, left - 1, out);
                degs[v] -= 1.0;
                degs.pop();
                parents.pop();
                attrs.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    let mut attrs = vec![0usize];
    let mut parents = vec![usize::MAX];
    let mut degs = vec![1.0f64];
    go(p, &mut attrs, &mut parents, &mut degs, 1.0, steps, &mut out);
    out
}

#[test]
fn a10_small_instance_exactness() {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let p = asym_params();
    let exact = enumerate_outcomes(&p, 3);
    let total_p: f64 = exact.values().sum();
    assert!((total_p - 1.0).abs() < 1e-12);

    let runs = 1_000_000usize;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut rng = RngStream::new(1010, 0);
    let seed = Graph::singleton_seed(0, 2);
    for _ in 0..runs {
        let g = generate_p(&p, 3, &seed, &mut rng).unwrap();
        let parents: Vec<usize> = (1..4).map(|v| g.out_edges[v][0]).collect();
        let k = format!("{:?}|{:?}", g.attribute, parents);
        *counts.entry(k).or_insert(0) += 1;
    }
    let mut chi2 = 0.0;
    for (k, &prob) in &exact {
        let expected = prob * runs as f64;
        let observed = *counts.get(k).unwrap_or(&0) as f64;
        chi2 += (observed - expected).powi(2) / expected;
    }
    let dof = (exact.len() - 1) as f64;
    let pval = 1.0 - ChiSquared::new(dof).unwrap().cdf(chi2);

    // the joint model with the resolving weight measure reproduces the
    // newcomer attribute proportions
    let sol = theory::solve(&p, 0.85).unwrap();
    let pj = p.clone().with_nu(sol.nu.clone()).unwrap();
    let n = 100_000;
    let mut rng = RngStream::new(1011, 0);
    let g = generate_u(&pj, n, &Graph::singleton_seed(1, 2), &mut rng).unwrap();
    let freq0 = g.attribute.iter().filter(|&&a| a == 0).count() as f64 / g.n() as f64;
    let se = (p.pi[0] * (1.0 - p.pi[0]) / g.n() as f64).sqrt();
    let zj = (freq0 - p.pi[0]) / se;

    let ok = pval > 0.001 && zj.abs() < 3.0;
    report(
        10,
        "small-instance exactness",
        ok,
        &format!(
            "chi-square {chi2:.1} on {dof} dof (p {pval:.4}), joint-model attribute z {zj:+.2}"
        ),
    );
}

#[test]
fn a11_performance_budget() {
    let p = ModelParams::tree(
        vec![0.2, 0.3, 0.5],
        vec![
            vec![1.5, 0.8, 1.0],
            vec![0.8, 1.2, 0.9],
            vec![1.0, 0.9, 1.1],
        ],
        1.0,
    )
    .unwrap();
    let mut rng = RngStream::new(111, 0);
    let t0 = Instant::now();
    let g = generate_p(&p, 1_000_000, &Graph::singleton_seed(0, 3), &mut rng).unwrap();
    let gen_s = t0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    let scores = pagerank_exact(&g, 0.85).unwrap();
    let pr_s = t0.elapsed().as_secs_f64();
    assert!(scores.r.len() == g.n());
    let ok = gen_s < 10.0 && pr_s < 5.0;
    report(
        11,
        "million-vertex performance",
        ok,
        &format!("generate {gen_s:.2}s (<10s), scores {pr_s:.2}s (<5s)"),
    );
}
