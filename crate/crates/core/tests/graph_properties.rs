use proptest::prelude::*;
use tractable_ising::graph::{biconnected_decompose, build_graph, planar_embed, Graph};
use tractable_ising::testkit::minors::is_planar_by_minors;

fn random_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (Just(n), proptest::collection::vec(0.0f64..1.0, m), 0.15f64..0.85).prop_map(|(n, coins, density)| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let chosen: Vec<_> = pairs.zip(coins).filter(|&(_, c)| c < density).map(|(p, _)| p).collect();
            build_graph(n, &chosen).unwrap()
        })
    })
}

fn reachable_without(g: &Graph, removed: usize) -> usize {
    let start = (0..g.num_vertices()).find(|&v| v != removed).unwrap();
    let mut seen = vec![false; g.num_vertices()];
    seen[removed] = true;
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(w, _) in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn planarity_matches_minor_search(g in random_graph(9)) {
        let verdict = planar_embed(&g);
        prop_assert_eq!(verdict.is_ok(), is_planar_by_minors(&g));
        if let Ok(emb) = verdict {
            prop_assert!(emb.is_planar());
            if g.is_connected() {
                prop_assert_eq!(emb.faces().len() + g.num_vertices(), 2 + g.num_edges());
            }
        }
    }

    #[test]
    fn biconnected_blocks_partition_edges(g in random_graph(14)) {
        prop_assume!(g.is_connected());
        let d = biconnected_decompose(&g).unwrap();
        let mut count = vec![0usize; g.num_edges()];
        for b in &d.blocks {
            for e in &b.edges {
                count[e.index()] += 1;
            }
        }
        prop_assert!(count.iter().all(|&c| c == 1));
        for &v in &d.articulation_points {
            prop_assert!(reachable_without(&g, v) < g.num_vertices() - 1);
        }
        for v in 0..g.num_vertices() {
            if g.num_vertices() > 2 && !d.articulation_points.contains(&v) {
                prop_assert_eq!(reachable_without(&g, v), g.num_vertices() - 1);
            }
        }
        let roots = d.parent.iter().filter(|p| p.is_none()).count();
        prop_assert_eq!(roots, 1);
    }
}
