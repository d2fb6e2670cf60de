use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tractable_ising::graph::EdgeId;
use tractable_ising::planar::{pm_to_spins, PlanarPipeline};
use tractable_ising::testkit::{brute_perfect_matchings, gen_random_planar_model, GeneratorConfig};
use tractable_ising::wilson::sample_pm;

fn pipeline(n: usize, seed: u64, stddev: f64) -> PlanarPipeline {
    PlanarPipeline::new(&gen_random_planar_model(&GeneratorConfig { target_size: n, coupling_stddev: stddev, seed }).unwrap())
        .unwrap()
}

fn sorted(mut edges: Vec<EdgeId>) -> Vec<EdgeId> {
    edges.sort_unstable();
    edges
}

#[test]
fn every_matching_drawn_at_its_weight() {
    const DRAWS: usize = 100_000;
    for seed in 0..3 {
        let p = pipeline(4, seed, 0.7);
        let (host, weights) = (p.dual().graph(), p.dual().weights());
        assert!(host.num_vertices() <= 12);
        let all = brute_perfect_matchings(host).unwrap();
        let mass: Vec<f64> = all.iter().map(|pm| pm.iter().map(|e| weights[e.0]).product()).collect();
        let total: f64 = mass.iter().sum();
        let mut counts: HashMap<Vec<EdgeId>, usize> = HashMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..DRAWS {
            *counts.entry(sorted(sample_pm(p.kasteleyn(), &mut rng).unwrap().edges().to_vec())).or_default() += 1;
        }
        let mut seen = 0;
        for (pm, w) in all.into_iter().zip(mass) {
            let prob = w / total;
            let observed = counts.get(&sorted(pm)).copied().unwrap_or(0);
            seen += observed;
            let se = (DRAWS as f64 * prob * (1.0 - prob)).sqrt().max(1.0);
            let z = (observed as f64 - DRAWS as f64 * prob).abs() / se;
            assert!(z < 4.0, "seed {seed}: expected {prob}, saw {observed} of {DRAWS}");
        }
        assert_eq!(seen, DRAWS, "drew a matching outside the enumeration");
    }
}

#[test]
fn large_host_draws_are_valid_and_reproducible() {
    let p = pipeline(3000, 4, 1.0);
    let draw = |seed| sample_pm(p.kasteleyn(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let first = draw(11);
    assert_eq!(first.len() * 2, p.dual().graph().num_vertices());
    assert_eq!(first, draw(11));
    assert_ne!(first, draw(12));
    let spins = pm_to_spins(p.dual(), &first).unwrap();
    assert_eq!(spins.len(), 3000);
}
