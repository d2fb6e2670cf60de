use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tractable_ising::decomp::{
    build_tricon_tree, triconnected_decompose, ComponentClass, EdgeOrigin, RootPolicy, DEFAULT_SIZE_BOUND,
};
use tractable_ising::engine::{infer_log_z, process_node_pi, root_partition, NodeContext, PiTable};
use tractable_ising::graph::{biconnected_decompose, EdgeId, Graph};
use tractable_ising::model::IsingModel;
use tractable_ising::planar::PlanarPipeline;
use tractable_ising::testkit::{
    brute_log_z, brute_pi, brute_pm_partition, gen_k5_necklace_model, gen_random_k33free, gen_random_planar_model,
    GeneratorConfig,
};

fn cfg(n: usize, seed: u64, stddev: f64) -> GeneratorConfig {
    GeneratorConfig { target_size: n, coupling_stddev: stddev, seed }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * b.abs().max(1.0)
}

/// Walks every block's component tree bottom up and checks each node's
/// table, and the root's partition sum, against enumeration. Returns the
/// number of nodes checked.
fn check_nodes(m: &IsingModel) -> usize {
    let bic = biconnected_decompose(m.graph()).unwrap();
    let mut checked = 0;
    for block in bic.blocks.iter().filter(|b| b.graph.num_vertices() > 2) {
        let coupling_of = |e: EdgeId| m.coupling(block.edges[e.0]);
        let tree = build_tricon_tree(triconnected_decompose(&block.graph).unwrap(), RootPolicy::PreferNonBond).unwrap();
        let mut pis: Vec<Option<PiTable>> = vec![None; tree.nodes.len()];
        for &a in tree.top_down_order().iter().rev() {
            let comp = &tree.nodes[a];
            let children: Vec<(EdgeId, PiTable)> = tree.children[a]
                .iter()
                .map(|&c| (tree.parent[c].unwrap().edge_in_parent, pis[c].unwrap()))
                .collect();
            let sum_a: f64 = children.iter().map(|(_, pi)| pi.a()).sum();
            let parent_edge = tree.parent[a].map(|l| l.edge_in_child);
            let node = NodeContext::new(comp, parent_edge, &coupling_of, &children, DEFAULT_SIZE_BOUND).unwrap();
            if a == tree.root {
                let z = root_partition(&node).unwrap();
                assert!(close(z, brute_log_z(node.local_model().unwrap()).unwrap() + sum_a));
                let js = block.edges.iter().map(|&e| m.coupling(e)).collect();
                let whole = IsingModel::new(block.graph.clone(), js).unwrap();
                assert!(close(z, brute_log_z(&whole).unwrap()));
            } else {
                let pi = process_node_pi(&node).unwrap();
                let (p, t) = comp.graph.endpoints(parent_edge.unwrap());
                let (equal, unequal) = if node.class() == ComponentClass::MultipleBond {
                    let total: f64 = (0..comp.graph.num_edges())
                        .filter(|&i| Some(EdgeId(i)) != parent_edge)
                        .map(|i| match comp.origin[i] {
                            EdgeOrigin::Real(id) => coupling_of(id),
                            EdgeOrigin::Virtual(_) => children.iter().find(|(e, _)| e.0 == i).unwrap().1.b(),
                        })
                        .sum();
                    (sum_a + total, sum_a - total)
                } else {
                    let brute = brute_pi(node.local_model().unwrap(), p, t).unwrap();
                    (brute.log_pi_equal + sum_a, brute.log_pi_unequal + sum_a)
                };
                assert!(close(pi.log_pi_equal, equal), "node {a}: {} vs {equal}", pi.log_pi_equal);
                assert!(close(pi.log_pi_unequal, unequal), "node {a}: {} vs {unequal}", pi.log_pi_unequal);
                pis[a] = Some(pi);
            }
            checked += 1;
        }
    }
    checked
}

#[test]
fn node_tables_match_enumeration() {
    let mut checked = 0;
    for seed in 0..12 {
        for n in [6, 9, 13, 18] {
            checked += check_nodes(&gen_random_k33free(&cfg(n, seed, 1.0)).unwrap());
        }
    }
    for k in 2..=4 {
        checked += check_nodes(&gen_k5_necklace_model(&cfg(5 * k, k as u64, 0.8)).unwrap());
    }
    assert!(checked > 100, "only {checked} nodes");
}

#[test]
fn disjoint_union_adds_log_z() {
    for seed in 0..6 {
        let a = gen_random_k33free(&cfg(40, seed, 1.0)).unwrap();
        let b = gen_random_planar_model(&cfg(25, seed + 100, 2.0)).unwrap();
        let shift = a.num_vertices();
        let mut triples = a.triples();
        triples.extend(b.triples().into_iter().map(|(u, v, j)| (u + shift, v + shift, j)));
        let union = IsingModel::from_triples(shift + b.num_vertices(), &triples).unwrap();
        let sum = infer_log_z(&a).unwrap() + infer_log_z(&b).unwrap();
        assert!(close(infer_log_z(&union).unwrap(), sum));
    }
}

#[test]
fn oracles_ignore_edge_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..8 {
        let m = gen_random_k33free(&cfg(11, seed, 1.0)).unwrap();
        let mut triples = m.triples();
        triples.shuffle(&mut rng);
        let shuffled = IsingModel::from_triples(m.num_vertices(), &triples).unwrap();
        assert!(close(brute_log_z(&shuffled).unwrap(), brute_log_z(&m).unwrap()));

        let host = PlanarPipeline::new(&gen_random_planar_model(&cfg(5, seed, 1.0)).unwrap()).unwrap();
        let dual = host.dual();
        let mut order: Vec<usize> = (0..dual.graph().num_edges()).collect();
        order.shuffle(&mut rng);
        let edges: Vec<(usize, usize)> = order
            .iter()
            .map(|&e| {
                let (u, v) = dual.graph().endpoints(EdgeId(e));
                (v, u)
            })
            .collect();
        let weights: Vec<f64> = order.iter().map(|&e| dual.weights()[e]).collect();
        let permuted = Graph::new(dual.graph().num_vertices(), &edges).unwrap();
        let direct = brute_pm_partition(dual.graph(), dual.weights()).unwrap();
        assert!(close(brute_pm_partition(&permuted, &weights).unwrap(), direct));
    }
}
