use std::collections::VecDeque;
use std::ops::Range;

use super::matching::PerfectMatching;
use crate::error::{Error, Result};
use crate::graph::{dart_edge, Dart, EdgeId, Graph, PlanarEmbedding};
use crate::model::{IsingModel, SpinConfiguration};

/// Expanded dual of a triangulated model: every primal face becomes a
/// triangle of city vertices, one per boundary dart.
///
/// Vertex `d` of the dual is the city vertex for primal dart `d`, so the
/// intercity edge of primal edge `e` has id `e` and joins `2e` and `2e + 1`.
/// City edges follow, three per face.
#[derive(Clone, Debug)]
pub struct ExpandedDual {
    primal: PlanarEmbedding,
    couplings: Vec<f64>,
    dual: PlanarEmbedding,
    faces: Vec<[Dart; 3]>,
    weights: Vec<f64>,
}

impl ExpandedDual {
    pub fn embedding(&self) -> &PlanarEmbedding {
        &self.dual
    }

    pub fn graph(&self) -> &Graph {
        self.dual.graph()
    }

    /// The triangulated primal.
    pub fn primal(&self) -> &PlanarEmbedding {
        &self.primal
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn num_primal_edges(&self) -> usize {
        self.primal.graph().num_edges()
    }

    pub fn intercity_edges(&self) -> Range<usize> {
        0..self.num_primal_edges()
    }

    pub fn city_edges(&self) -> Range<usize> {
        self.num_primal_edges()..self.graph().num_edges()
    }

    pub fn is_intercity(&self, e: EdgeId) -> bool {
        e.0 < self.num_primal_edges()
    }

    /// Primal edge crossed by an intercity edge.
    pub fn primal_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.is_intercity(e).then_some(e)
    }

    /// Intercity edge crossing a primal edge.
    pub fn intercity_of(&self, primal_edge: EdgeId) -> EdgeId {
        primal_edge
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Primal faces as dart triples in boundary order.
    pub fn faces(&self) -> &[[Dart; 3]] {
        &self.faces
    }
}

/// Builds the expanded dual of a triangulated embedded model.
/// Intercity weights are `exp(2 J)`, city weights are 1.
pub fn build_expanded_dual(model: &IsingModel, primal: &PlanarEmbedding) -> Result<ExpandedDual> {
    let g = primal.graph();
    if g.num_edges() != model.num_edges() {
        return Err(Error::InvalidArgument("embedding does not match the model".into()));
    }
    let num_edges = g.num_edges();
    let mut faces = Vec::new();
    for f in primal.faces() {
        if f.len() != 3 {
            return Err(Error::InvalidArgument(format!("face of length {} is not a triangle", f.len())));
        }
        faces.push([f.darts[0], f.darts[1], f.darts[2]]);
    }

    let num_darts = 2 * num_edges;
    let mut edges: Vec<(usize, usize)> = (0..num_edges).map(|e| (2 * e, 2 * e + 1)).collect();
    // city edge from dart d to the next dart of its face, and back
    let mut to_next = vec![0; num_darts];
    let mut to_prev = vec![0; num_darts];
    for f in &faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            to_next[a] = edges.len();
            to_prev[b] = edges.len();
            edges.push((a, b));
        }
    }
    let graph = Graph::new(num_darts, &edges)?;

    let rotation_with = |flip: bool| -> Vec<Vec<EdgeId>> {
        (0..num_darts)
            .map(|d| {
                let (x, y) = if flip { (to_prev[d], to_next[d]) } else { (to_next[d], to_prev[d]) };
                vec![dart_edge(d), EdgeId(x), EdgeId(y)]
            })
            .collect()
    };
    let mut dual = PlanarEmbedding::new(graph.clone(), rotation_with(false))?;
    if !dual.is_planar() {
        dual = PlanarEmbedding::new(graph, rotation_with(true))?;
        if !dual.is_planar() {
            return Err(Error::InconsistentRotation("expanded dual is not planar".into()));
        }
    }

    let mut weights: Vec<f64> = model.couplings().iter().map(|j| (2.0 * j).exp()).collect();
    weights.resize(edges.len(), 1.0);
    Ok(ExpandedDual { primal: primal.clone(), couplings: model.couplings().to_vec(), dual, faces, weights })
}

/// The perfect matching of a spin configuration: intercity edges whose
/// primal endpoints agree, completed inside every city.
pub fn spins_to_pm(d: &ExpandedDual, x: &SpinConfiguration) -> Result<PerfectMatching> {
    let g = d.primal.graph();
    if x.len() != g.num_vertices() {
        return Err(Error::InvalidArgument("configuration length differs from the primal".into()));
    }
    let agree = |e: EdgeId| {
        let (u, v) = g.endpoints(e);
        x.get(u) == x.get(v)
    };
    let mut edges: Vec<EdgeId> = g.edge_ids().filter(|&e| agree(e)).collect();
    let base = d.num_primal_edges();
    for (fi, f) in d.faces.iter().enumerate() {
        let open: Vec<usize> = (0..3).filter(|&k| !agree(dart_edge(f[k]))).collect();
        match open.as_slice() {
            [] => {}
            &[a, b] => {
                // city edge k joins darts k and k + 1 of the face
                let k = if (a + 1) % 3 == b { a } else { b };
                edges.push(EdgeId(base + 3 * fi + k));
            }
            _ => return Err(Error::ParityMismatch),
        }
    }
    PerfectMatching::new(d.graph(), edges)
}

/// Inverse of [`spins_to_pm`] on the half of configurations with `x_0 = +1`.
pub fn pm_to_spins(d: &ExpandedDual, pm: &PerfectMatching) -> Result<SpinConfiguration> {
    let checked = PerfectMatching::new(d.graph(), pm.edges().to_vec())?;
    let mut equal = vec![false; d.num_primal_edges()];
    for &e in checked.edges() {
        if d.is_intercity(e) {
            equal[e.0] = true;
        }
    }
    spins_from_agreement(d.primal.graph(), &equal)
}

/// Spin configuration with `x_0 = +1` from the matched intercity edges,
/// given as a partner array over the dual vertices.
pub(crate) fn spins_from_partners(d: &ExpandedDual, partner: &[usize]) -> Result<SpinConfiguration> {
    let equal: Vec<bool> = (0..d.num_primal_edges()).map(|e| partner[2 * e] == 2 * e + 1).collect();
    spins_from_agreement(d.primal.graph(), &equal)
}

fn spins_from_agreement(g: &Graph, equal: &[bool]) -> Result<SpinConfiguration> {
    let n = g.num_vertices();
    let mut spin = vec![0i8; n];
    for root in 0..n {
        if spin[root] != 0 {
            continue;
        }
        spin[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in g.neighbors(v) {
                let want = if equal[e.0] { spin[v] } else { -spin[v] };
                if spin[w] == 0 {
                    spin[w] = want;
                    queue.push_back(w);
                } else if spin[w] != want {
                    return Err(Error::ParityMismatch);
                }
            }
        }
    }
    SpinConfiguration::new(spin)
}
