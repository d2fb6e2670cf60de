//! Undirected (multi)graphs with stable edge ids, connectivity helpers,
//! rotation-system embeddings and the LR planarity test.

mod bicon;
mod embedding;
mod planarity;

pub use bicon::{biconnected_decompose, Block, BiconnectedDecomposition};
pub use embedding::{dart_edge, enumerate_faces, twin, Dart, Face, PlanarEmbedding};
pub use planarity::{is_planar, planar_embed};

use crate::error::{Error, Result};

/// Stable edge identifier, assigned in input order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Real,
    Virtual,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn real(u: usize, v: usize) -> Self {
        Edge { u, v, kind: EdgeKind::Real }
    }

    /// The endpoint opposite to `x`.
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// An undirected graph stored with a CSR adjacency.
///
/// Parallel edges are only accepted when the graph is flagged as a
/// multigraph or when at least one of the copies is virtual.
#[derive(Clone, Debug)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<Edge>,
    multigraph: bool,
    offsets: Vec<usize>,
    adjacency: Vec<(usize, EdgeId)>,
}

/// Builds a normal graph; edge ids follow the input order.
pub fn build_graph(num_vertices: usize, edge_list: &[(usize, usize)]) -> Result<Graph> {
    Graph::new(num_vertices, edge_list)
}

impl Graph {
    pub fn new(num_vertices: usize, edge_list: &[(usize, usize)]) -> Result<Graph> {
        let edges = edge_list.iter().map(|&(u, v)| Edge::real(u, v)).collect();
        Graph::from_edges(num_vertices, edges, false)
    }

    pub fn from_edges(num_vertices: usize, edges: Vec<Edge>, multigraph: bool) -> Result<Graph> {
        for e in &edges {
            for x in [e.u, e.v] {
                if x >= num_vertices {
                    return Err(Error::VertexOutOfRange { vertex: x, num_vertices });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u));
            }
        }
        if !multigraph {
            let mut seen = std::collections::HashSet::with_capacity(edges.len());
            for e in &edges {
                if e.kind == EdgeKind::Virtual {
                    continue;
                }
                let key = (e.u.min(e.v), e.u.max(e.v));
                if !seen.insert(key) {
                    return Err(Error::DuplicateEdge(key.0, key.1));
                }
            }
        }
        Ok(Graph::assemble(num_vertices, edges, multigraph))
    }


    fn assemble(num_vertices: usize, edges: Vec<Edge>, multigraph: bool) -> Graph {
        let mut offsets = vec![0usize; num_vertices + 1];
        for e in &edges {
            offsets[e.u + 1] += 1;
            offsets[e.v + 1] += 1;
        }
        for i in 0..num_vertices {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0usize, EdgeId(0)); offsets[num_vertices]];
        for (i, e) in edges.iter().enumerate() {
            adjacency[fill[e.u]] = (e.v, EdgeId(i));
            fill[e.u] += 1;
            adjacency[fill[e.v]] = (e.u, EdgeId(i));
            fill[e.v] += 1;
        }
        Graph { num_vertices, edges, multigraph, offsets, adjacency }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        let edge = &self.edges[e.0];
        (edge.u, edge.v)
    }

    /// Incident `(neighbor, edge)` pairs of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    /// Some edge joining `u` and `v`, if any.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    /// Component label for every vertex and the number of components.
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        const UNSEEN: usize = usize::MAX;
        let mut label = vec![UNSEEN; self.num_vertices];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.num_vertices {
            if label[s] != UNSEEN {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &(w, _) in self.neighbors(v) {
                    if label[w] == UNSEEN {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices <= 1 || self.connected_components().1 == 1
    }

    /// Subgraph induced by `vertices`, relabelled in the given order.
    /// Returns the subgraph and the original id of every kept edge.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<EdgeId>) {
        let mut local = vec![usize::MAX; self.num_vertices];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if local[e.u] != usize::MAX && local[e.v] != usize::MAX {
                edges.push(Edge { u: local[e.u], v: local[e.v], kind: e.kind });
                origin.push(EdgeId(i));
            }
        }
        (Graph::assemble(vertices.len(), edges, self.multigraph), origin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_small_graphs() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (2, 1));
        let k3 = build_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((0..3).all(|v| k3.degree(v) == 2));
        let pairs: Vec<_> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let k5 = build_graph(5, &pairs).unwrap();
        assert_eq!(k5.num_edges(), 10);
        assert_eq!(k5.endpoints(EdgeId(4)), (1, 2));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            build_graph(2, &[(0, 2)]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 2, num_vertices: 2 }
        );
        assert_eq!(build_graph(2, &[(1, 1)]).unwrap_err(), Error::SelfLoop(1));
        assert_eq!(build_graph(2, &[(0, 1), (1, 0)]).unwrap_err(), Error::DuplicateEdge(0, 1));
    }

    #[test]
    fn virtual_copies_may_be_parallel() {
        let edges = vec![Edge::real(0, 1), Edge { u: 1, v: 0, kind: EdgeKind::Virtual }];
        let g = Graph::from_edges(2, edges, false).unwrap();
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn components_and_induced_subgraph() {
        let g = build_graph(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let (label, count) = g.connected_components();
        assert_eq!(count, 2);
        assert_eq!(label[2], label[0]);
        let (sub, origin) = g.induced_subgraph(&[2, 1, 4]);
        assert_eq!(sub.num_edges(), 1);
        assert_eq!(origin, vec![EdgeId(1)]);
        assert_eq!(sub.endpoints(EdgeId(0)), (1, 0));
    }
}
