use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, PlanarEmbedding};
use crate::model::IsingModel;
use crate::planar::triangulate;

/// Size, coupling spread and seed of a random instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub target_size: usize,
    pub coupling_stddev: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(target_size: usize, seed: u64) -> Self {
        GeneratorConfig { target_size, coupling_stddev: 0.1, seed }
    }
}

/// Random embedded tree grown leaf by leaf, each new edge inserted at a
/// random position of its parent's rotation.
fn random_tree(n: usize, rng: &mut impl Rng) -> Result<PlanarEmbedding> {
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for v in 1..n {
        let parent = rng.random_range(0..v);
        let e = EdgeId(edges.len());
        edges.push((parent, v));
        let at = rng.random_range(0..=rotation[parent].len());
        rotation[parent].insert(at, e);
        rotation[v].push(e);
    }
    PlanarEmbedding::new(Graph::new(n, &edges)?, rotation)
}

fn planar_with(n: usize, rng: &mut impl Rng) -> Result<PlanarEmbedding> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("planar generation needs 3 vertices, got {n}")));
    }
    let tree = random_tree(n, rng)?;
    let zero = IsingModel::new(tree.graph().clone(), vec![0.0; n - 1])?;
    // chords are only added where no edge exists yet, so the result is simple
    let (_, emb) = triangulate(&zero, &tree)?;
    Ok(emb)
}

/// Random simple triangulation on `target_size` vertices with its embedding.
pub fn gen_random_planar(cfg: &GeneratorConfig) -> Result<(Graph, PlanarEmbedding)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let emb = planar_with(cfg.target_size, &mut rng)?;
    Ok((emb.graph().clone(), emb))
}

fn normal(cfg: &GeneratorConfig) -> Result<Normal<f64>> {
    Normal::new(0.0, cfg.coupling_stddev)
        .map_err(|e| Error::InvalidArgument(format!("coupling spread {}: {e}", cfg.coupling_stddev)))
}

/// Random planar model: a [`gen_random_planar`] graph with normal couplings.
pub fn gen_random_planar_model(cfg: &GeneratorConfig) -> Result<IsingModel> {
    let (g, _) = gen_random_planar(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let dist = normal(cfg)?;
    let couplings = (0..g.num_edges()).map(|_| dist.sample(&mut rng)).collect();
    IsingModel::new(g, couplings)
}

/// One piece of the attachment tree: its edges in global vertex ids and
/// which of them already carry an attachment.
struct Piece {
    edges: Vec<(usize, usize)>,
    used: Vec<bool>,
}

/// Random K33-free model: a K5 root and then K5 or random planar pieces,
/// each glued along one edge to a not yet used edge of an existing piece,
/// until the graph has `target_size` vertices.
pub fn gen_random_k33free(cfg: &GeneratorConfig) -> Result<IsingModel> {
    let n = cfg.target_size;
    if n < 5 {
        return Err(Error::InvalidArgument(format!("K33-free generation needs 5 vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k5: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let mut pieces = vec![Piece { edges: k5.clone(), used: vec![false; k5.len()] }];
    let mut size = 5;
    while size < n {
        let room = n - size;
        let (local_n, local_edges) = if room >= 3 && rng.random_bool(0.5) {
            (5, k5.clone())
        } else {
            let m = rng.random_range(3..=room + 2);
            let emb = planar_with(m, &mut rng)?;
            (m, emb.graph().edges().iter().map(|e| (e.u, e.v)).collect())
        };
        let open: Vec<usize> = (0..pieces.len()).filter(|&p| pieces[p].used.contains(&false)).collect();
        let &host = open.choose(&mut rng).expect("every new piece brings unused edges");
        let free: Vec<usize> = (0..pieces[host].edges.len()).filter(|&e| !pieces[host].used[e]).collect();
        let &he = free.choose(&mut rng).expect("host has an unused edge");
        pieces[host].used[he] = true;
        let (a, b) = pieces[host].edges[he];
        let (a, b) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };

        let glue = rng.random_range(0..local_edges.len());
        let (la, lb) = local_edges[glue];
        let mut map = vec![usize::MAX; local_n];
        map[la] = a;
        map[lb] = b;
        for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = size;
            size += 1;
        }
        let edges: Vec<(usize, usize)> = local_edges.iter().map(|&(u, v)| (map[u], map[v])).collect();
        let mut used = vec![false; edges.len()];
        used[glue] = true;
        pieces.push(Piece { edges, used });
    }

    // the glued edge appears in both pieces; keep the first copy
    let mut seen = std::collections::HashSet::new();
    let mut triples = Vec::new();
    let dist = normal(cfg)?;
    for p in &pieces {
        for &(u, v) in &p.edges {
            if seen.insert((u.min(v), u.max(v))) {
                triples.push((u, v, dist.sample(&mut rng)));
            }
        }
    }
    IsingModel::from_triples(n, &triples)
}

/// Cycle of length `2n` with a K5 glued on every other edge. For `n = 1`
/// the cycle degenerates to the glued edge and the graph is K5.
pub fn gen_k5_necklace(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("necklace needs at least one K5".into()));
    }
    let cycle = 2 * n;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut add = |u: usize, v: usize, edges: &mut Vec<(usize, usize)>| {
        if seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    };
    for i in 0..cycle {
        add(i, (i + 1) % cycle, &mut edges);
    }
    for k in 0..n {
        let ring = [2 * k, 2 * k + 1, cycle + 3 * k, cycle + 3 * k + 1, cycle + 3 * k + 2];
        for a in 0..5 {
            for b in a + 1..5 {
                add(ring[a], ring[b], &mut edges);
            }
        }
    }
    Graph::new(5 * n, &edges)
}

/// [`gen_k5_necklace`] with normal couplings; `target_size` counts vertices
/// and must be a positive multiple of 5.
pub fn gen_k5_necklace_model(cfg: &GeneratorConfig) -> Result<IsingModel> {
    if cfg.target_size == 0 || !cfg.target_size.is_multiple_of(5) {
        return Err(Error::InvalidArgument(format!("necklace size {} is not a multiple of 5", cfg.target_size)));
    }
    let g = gen_k5_necklace(cfg.target_size / 5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dist = normal(cfg)?;
    let couplings = (0..g.num_edges()).map(|_| dist.sample(&mut rng)).collect();
    IsingModel::new(g, couplings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{biconnected_decompose, planar_embed};

    #[test]
    fn planar_sizes_and_faces() {
        for seed in 0..100 {
            let (g, emb) = gen_random_planar(&GeneratorConfig::new(30, seed)).unwrap();
            assert_eq!(g.num_vertices(), 30);
            assert_eq!(g.num_edges(), 3 * 30 - 6);
            assert!(emb.is_planar());
            assert!(emb.faces().iter().all(|f| f.len() == 3));
            assert_eq!(biconnected_decompose(&g).unwrap().blocks.len(), 1);
        }
        let (k3, _) = gen_random_planar(&GeneratorConfig::new(3, 7)).unwrap();
        assert_eq!(k3.num_edges(), 3);
        assert!(planar_embed(&k3).is_ok());
    }

    #[test]
    fn k33free_sizes_are_exact() {
        assert_eq!(gen_random_k33free(&GeneratorConfig::new(5, 1)).unwrap().num_edges(), 10);
        for seed in 0..50 {
            let m = gen_random_k33free(&GeneratorConfig::new(5 + seed as usize % 20, seed)).unwrap();
            assert_eq!(m.num_vertices(), 5 + seed as usize % 20);
            assert_eq!(biconnected_decompose(m.graph()).unwrap().blocks.len(), 1);
        }
    }

    #[test]
    fn necklace_sizes() {
        assert_eq!(gen_k5_necklace(1).unwrap().num_edges(), 10);
        let g = gen_k5_necklace(3).unwrap();
        assert_eq!(g.num_vertices(), 15);
        // 6 cycle edges, 3 of them inside a K5
        assert_eq!(g.num_edges(), 3 + 30);
        let m = gen_k5_necklace_model(&GeneratorConfig::new(15, 2)).unwrap();
        assert_eq!(m.graph().edges(), g.edges());
        assert!(gen_k5_necklace_model(&GeneratorConfig::new(12, 2)).is_err());
    }
}
