use proptest::prelude::*;
use tractable_ising::decomp::{build_tricon_tree, triconnected_decompose, ComponentKind, RootPolicy};
use tractable_ising::graph::{build_graph, Graph};
use tractable_ising::testkit::split_oracle::{brute_triconnected, canonical_components};

/// Biconnected graph grown by ears: start from a triangle and repeatedly
/// attach a path of 0..=3 new vertices between two existing vertices.
fn ear_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    proptest::collection::vec((any::<u32>(), any::<u32>(), 0usize..4), 1..24).prop_map(move |ears| {
        let mut n = 3;
        let mut edges = vec![(0, 1), (1, 2), (0, 2)];
        for (x, y, len) in ears {
            let u = x as usize % n;
            let v = y as usize % n;
            if u == v {
                continue;
            }
            let len = len.min(max_n - n);
            if len == 0 {
                if !edges.contains(&(u.min(v), u.max(v))) {
                    edges.push((u.min(v), u.max(v)));
                }
                continue;
            }
            let mut prev = u;
            for k in 0..len {
                edges.push((prev, n + k));
                prev = n + k;
            }
            edges.push((prev.min(v), prev.max(v)));
            n += len;
        }
        build_graph(n, &edges).unwrap()
    })
}

fn permuted(g: &Graph, keys: &[u32]) -> (Graph, Vec<usize>) {
    let mut order: Vec<usize> = (0..g.num_edges()).collect();
    order.sort_by_key(|&i| (keys[i % keys.len()].wrapping_mul(i as u32 + 7), i));
    let edges: Vec<_> = order.iter().map(|&i| g.endpoints(tractable_ising::graph::EdgeId(i))).collect();
    (build_graph(g.num_vertices(), &edges).unwrap(), order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn matches_exhaustive_splitting(g in ear_graph(16)) {
        let fast = canonical_components(&triconnected_decompose(&g).unwrap());
        prop_assert_eq!(fast, brute_triconnected(&g));
    }

    #[test]
    fn tree_round_trip_and_edge_budget(g in ear_graph(40)) {
        let comps = triconnected_decompose(&g).unwrap();
        let total: usize = comps.iter().map(|c| c.graph.num_edges()).sum();
        prop_assert!(total <= 3 * g.num_edges() - 6);
        for c in &comps {
            match c.kind {
                ComponentKind::Bond => prop_assert!(c.graph.num_vertices() == 2 && c.graph.num_edges() >= 3),
                ComponentKind::Cycle => prop_assert_eq!(c.graph.num_vertices(), c.graph.num_edges()),
                ComponentKind::Triconnected => prop_assert!(c.graph.num_vertices() >= 4),
            }
        }
        let tree = build_tricon_tree(comps, RootPolicy::PreferNonBond).unwrap();
        if tree.nodes.iter().any(|c| c.kind != ComponentKind::Bond) {
            prop_assert_ne!(tree.nodes[tree.root].kind, ComponentKind::Bond);
        }
        let merged = tree.merged_edges();
        prop_assert_eq!(merged.len(), g.num_edges());
        for (id, a, b) in merged {
            let (u, v) = g.endpoints(id);
            prop_assert_eq!((u.min(v), u.max(v)), (a, b));
        }
    }

    #[test]
    fn independent_of_edge_order(g in ear_graph(30), keys in proptest::collection::vec(any::<u32>(), 1..8)) {
        let base = canonical_components(&triconnected_decompose(&g).unwrap());
        let (h, order) = permuted(&g, &keys);
        let mut again = canonical_components(&triconnected_decompose(&h).unwrap());
        for comp in &mut again {
            for id in &mut comp.1 {
                *id = order[*id];
            }
            comp.1.sort_unstable();
        }
        again.sort();
        prop_assert_eq!(base, again);
    }
}

#[test]
fn dense_random_blocks_match_exhaustive_splitting() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 300 {
        let n = rng.random_range(4..11);
        let p = rng.random_range(0.3..0.8);
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|_| rng.random::<f64>() < p)
            .collect();
        let g = build_graph(n, &edges).unwrap();
        if !g.is_connected() {
            continue;
        }
        let d = tractable_ising::graph::biconnected_decompose(&g).unwrap();
        for block in d.blocks.iter().filter(|b| b.graph.num_vertices() >= 3) {
            let fast = canonical_components(&triconnected_decompose(&block.graph).unwrap());
            assert_eq!(fast, brute_triconnected(&block.graph));
            checked += 1;
        }
    }
}

#[test]
fn generated_k33free_graphs_round_trip_with_k5_only() {
    use tractable_ising::graph::is_planar;
    use tractable_ising::testkit::{gen_random_k33free, GeneratorConfig};
    for seed in 0..200 {
        let n = 5 + (seed as usize * 7) % 36;
        let m = gen_random_k33free(&GeneratorConfig::new(n, seed)).unwrap();
        let g = m.graph();
        let comps = triconnected_decompose(g).unwrap();
        for c in comps.iter().filter(|c| c.kind == ComponentKind::Triconnected && !is_planar(&c.graph)) {
            assert_eq!((c.graph.num_vertices(), c.graph.num_edges()), (5, 10), "seed {seed}");
        }
        let tree = build_tricon_tree(comps, RootPolicy::PreferNonBond).unwrap();
        let merged: Vec<(usize, usize)> = tree.merged_edges().into_iter().map(|(_, a, b)| (a, b)).collect();
        let mut original: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        original.sort_unstable();
        let mut merged_sorted = merged;
        merged_sorted.sort_unstable();
        assert_eq!(merged_sorted, original, "seed {seed}");
    }
}
