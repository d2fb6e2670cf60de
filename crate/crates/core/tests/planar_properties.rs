use proptest::prelude::*;

use tractable_ising::graph::{enumerate_faces, planar_embed, EdgeId, Graph};
use tractable_ising::model::IsingModel;
use tractable_ising::planar::{log_pm_partition, PlanarPipeline};
use tractable_ising::testkit::{brute_log_z, gen_random_planar_model, GeneratorConfig};

fn model(n: usize, seed: u64, stddev: f64) -> IsingModel {
    gen_random_planar_model(&GeneratorConfig { target_size: n, coupling_stddev: stddev, seed }).unwrap()
}

/// Random planar graph: a triangulation with some edges removed, kept
/// only when still connected.
fn connected_planar(n: usize, seed: u64, keep: &[bool]) -> Option<Graph> {
    let base = model(n, seed, 0.0);
    let edges: Vec<(usize, usize)> = base
        .triples()
        .iter()
        .zip(keep.iter().cycle())
        .filter(|(_, &k)| k)
        .map(|(&(u, v, _), _)| (u, v))
        .collect();
    let g = Graph::new(n, &edges).ok()?;
    (g.connected_components().1 == 1).then_some(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_formula(n in 3usize..40, seed in any::<u64>(), keep in proptest::collection::vec(any::<bool>(), 1..12)) {
        if let Some(g) = connected_planar(n, seed, &keep) {
            let emb = planar_embed(&g).unwrap();
            let faces = enumerate_faces(&emb);
            prop_assert_eq!(g.num_vertices() + faces.len(), g.num_edges() + 2);
        }
    }

    #[test]
    fn one_coupling_moves_one_weight(n in 3usize..11, seed in any::<u64>(), pick in any::<usize>(), delta in -1.0f64..1.0) {
        let m = model(n, seed, 1.0);
        let e = pick % m.num_edges();
        let mut js = m.couplings().to_vec();
        js[e] += delta;
        let moved = IsingModel::new(m.graph().clone(), js).unwrap();
        let (a, b) = (PlanarPipeline::new(&m).unwrap(), PlanarPipeline::new(&moved).unwrap());
        let (wa, wb) = (a.dual().weights(), b.dual().weights());
        prop_assert_eq!(wa.len(), wb.len());
        let target = a.dual().intercity_of(EdgeId(e)).0;
        for (i, (x, y)) in wa.iter().zip(wb).enumerate() {
            let expected = if i == target { x * (2.0 * delta).exp() } else { *x };
            prop_assert!((y - expected).abs() <= 1e-12 * expected, "weight {} moved", i);
        }
        let shift = b.log_z().unwrap().log_z - a.log_z().unwrap().log_z;
        let brute_shift = brute_log_z(&moved).unwrap() - brute_log_z(&m).unwrap();
        prop_assert!((shift - brute_shift).abs() < 1e-9);
    }

    #[test]
    fn determinant_is_positive(n in 3usize..300, seed in any::<u64>(), stddev in 0.0f64..3.0) {
        let p = PlanarPipeline::new(&model(n, seed, stddev)).unwrap();
        let z = log_pm_partition(p.kasteleyn()).unwrap();
        prop_assert!(z.log_z.is_finite());
        prop_assert!(!z.dense_fallback);
    }

    #[test]
    fn log_z_is_gauge_invariant(n in 3usize..400, seed in any::<u64>(), stddev in 0.0f64..3.0, flips in proptest::collection::vec(any::<bool>(), 400)) {
        let m = model(n, seed, stddev);
        let sign = |v: usize| if flips[v] { -1.0 } else { 1.0 };
        let js: Vec<f64> = m.triples().iter().map(|&(u, v, j)| j * sign(u) * sign(v)).collect();
        let flipped = IsingModel::new(m.graph().clone(), js).unwrap();
        let a = PlanarPipeline::new(&m).unwrap().log_z().unwrap().log_z;
        let b = PlanarPipeline::new(&flipped).unwrap().log_z().unwrap().log_z;
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{} vs {}", a, b);
    }
}
