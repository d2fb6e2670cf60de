use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};

/// A set of pairwise disjoint edges covering every vertex of its host.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerfectMatching(Vec<EdgeId>);

impl PerfectMatching {
    /// Checks the edge set against `host` and stores it sorted.
    pub fn new(host: &Graph, mut edges: Vec<EdgeId>) -> Result<Self> {
        edges.sort_unstable();
        let mut covered = vec![false; host.num_vertices()];
        for &e in &edges {
            if e.0 >= host.num_edges() {
                return Err(Error::NotPerfectMatching(format!("unknown edge {}", e.0)));
            }
            let (u, v) = host.endpoints(e);
            for x in [u, v] {
                if covered[x] {
                    return Err(Error::NotPerfectMatching(format!("vertex {x} covered twice")));
                }
                covered[x] = true;
            }
        }
        if let Some(x) = covered.iter().position(|&c| !c) {
            return Err(Error::NotPerfectMatching(format!("vertex {x} uncovered")));
        }
        Ok(PerfectMatching(edges))
    }

    /// Matching given as a partner array (`partner[partner[v]] == v`).
    pub fn from_partners(host: &Graph, partner: &[usize]) -> Result<Self> {
        if partner.len() != host.num_vertices() {
            return Err(Error::NotPerfectMatching("partner array has the wrong length".into()));
        }
        let mut edges = Vec::with_capacity(partner.len() / 2);
        for (v, &w) in partner.iter().enumerate() {
            if w >= partner.len() || partner[w] != v {
                return Err(Error::NotPerfectMatching(format!("vertex {v} has no consistent partner")));
            }
            if v < w {
                let e = host
                    .neighbors(v)
                    .iter()
                    .find(|&&(x, _)| x == w)
                    .map(|&(_, e)| e)
                    .ok_or_else(|| Error::NotPerfectMatching(format!("{v} and {w} are not adjacent")))?;
                edges.push(e);
            }
        }
        PerfectMatching::new(host, edges)
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn partners(&self, host: &Graph) -> Vec<usize> {
        let mut partner = vec![usize::MAX; host.num_vertices()];
        for &e in &self.0 {
            let (u, v) = host.endpoints(e);
            partner[u] = v;
            partner[v] = u;
        }
        partner
    }
}
