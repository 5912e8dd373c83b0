use attrinet::generate::generate_p;
use attrinet::sample::{induced_subgraph, SchemeSpec};
use attrinet::theory;
use attrinet::{Graph, ModelParams, RngStream};
use proptest::prelude::*;

fn params_strategy() -> impl Strategy<Value = ModelParams> {
    (2usize..=4).prop_flat_map(|k| {
        (
            proptest::collection::vec(0.05f64..1.0, k),
            proptest::collection::vec(0.05f64..3.0, k * k),
        )
            .prop_map(move |(raw_pi, raw_kappa)| {
                let s: f64 = raw_pi.iter().sum();
                let pi: Vec<f64> = raw_pi.iter().map(|x| x / s).collect();
                let kappa: Vec<Vec<f64>> =
                    (0..k).map(|a| raw_kappa[a * k..(a + 1) * k].to_vec()).collect();
                ModelParams::tree(pi, kappa, 1.0).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // the limit quantities satisfy their defining identities for any
    // admissible parameters
    #[test]
    fn limit_identities(params in params_strategy(), c in 0.05f64..0.95) {
        let sol = theory::solve(&params, c).unwrap();
        let k = params.k;
        for b in 0..k {
            let lhs: f64 = (0..k).map(|a| params.pi[a] * sol.m_mat[a][b]).sum();
            prop_assert!((lhs - params.pi[b]).abs() < 1e-8);
        }
        let mean_r: f64 = (0..k).map(|a| params.pi[a] * sol.expected_pr[a]).sum();
        prop_assert!((mean_r - 1.0).abs() < 1e-8);
        prop_assert!(sol.lambda_c < 2.0);
        let eta_sum: f64 = sol.eta.iter().sum();
        prop_assert!((eta_sum - 1.0).abs() < 1e-8);
    }

    // CSV serialization is lossless
    #[test]
    fn csv_roundtrip(seed in 0u64..1000, n in 1usize..400) {
        let params =
            ModelParams::tree(vec![0.5, 0.5], vec![vec![2.0, 1.0], vec![1.0, 2.0]], 1.0)
                .unwrap();
        let mut rng = RngStream::new(seed, 0);
        let g = generate_p(&params, n, &Graph::singleton_seed(0, 2), &mut rng).unwrap();
        let (mut v, mut e) = (Vec::new(), Vec::new());
        g.write_vertices_csv(&mut v).unwrap();
        g.write_edges_csv(&mut e).unwrap();
        let mut back = Graph::read_csv(&v[..], &e[..]).unwrap();
        // the CSV format carries no attribute-count header, so the reader
        // infers it from the attributes actually present
        prop_assert!(back.num_attributes <= g.num_attributes);
        back.num_attributes = g.num_attributes;
        prop_assert_eq!(back, g);
    }

    // keeping every vertex reproduces the graph's edge and degree structure
    #[test]
    fn full_induced_subgraph_is_identity(seed in 0u64..1000, n in 1usize..300) {
        let params =
            ModelParams::tree(vec![0.5, 0.5], vec![vec![2.0, 1.0], vec![1.0, 2.0]], 1.0)
                .unwrap();
        let mut rng = RngStream::new(seed, 1);
        let g = generate_p(&params, n, &Graph::singleton_seed(0, 2), &mut rng).unwrap();
        let s = induced_subgraph(&g, 1.0, &mut rng).unwrap();
        prop_assert_eq!(s.n(), g.n());
        prop_assert_eq!(s.num_edges(), g.num_edges());
        // vertices come back in birth order, so degrees line up directly;
        // the subgraph drops the root's bookkeeping half-edge
        prop_assert_eq!(s.degree[0] + 1, g.degree[0]);
        for v in 1..g.n() {
            prop_assert_eq!(s.degree[v], g.degree[v]);
        }
    }

    // generated trees satisfy the handshake identity with the root's
    // bookkeeping half-edge
    #[test]
    fn degree_sum_identity(seed in 0u64..1000, n in 0usize..500) {
        let params =
            ModelParams::tree(vec![0.3, 0.7], vec![vec![1.0, 2.0], vec![2.0, 1.0]], 1.0)
                .unwrap();
        let mut rng = RngStream::new(seed, 2);
        let g = generate_p(&params, n, &Graph::singleton_seed(1, 2), &mut rng).unwrap();
        prop_assert_eq!(g.degree.iter().sum::<u64>(), 2 * n as u64 + 1);
        let _ = SchemeSpec::Uniform.validate();
    }
}
