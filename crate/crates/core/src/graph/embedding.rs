use super::{EdgeId, Graph};
use crate::error::{Error, Result};

/// A directed copy of an edge. Edge `e` with endpoints `(u, v)` owns darts
/// `2e` (leaving `u`) and `2e + 1` (leaving `v`).
pub type Dart = usize;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn dart_edge(d: Dart) -> EdgeId {
    EdgeId(d >> 1)
}

/// A face as the cyclic list of darts walked along its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Boundary as `(origin vertex, edge)` pairs.
    pub fn boundary(&self, emb: &PlanarEmbedding) -> Vec<(usize, EdgeId)> {
        self.darts.iter().map(|&d| (emb.origin(d), dart_edge(d))).collect()
    }
}

/// Combinatorial embedding: a cyclic order of darts around every vertex.
#[derive(Clone, Debug)]
pub struct PlanarEmbedding {
    graph: Graph,
    order: Vec<Dart>,
    offsets: Vec<usize>,
    position: Vec<usize>,
}

impl PlanarEmbedding {
    /// Builds an embedding from per-vertex cyclic orders of edge ids.
    /// The rotation system is checked for consistency, not for genus.
    pub fn new(graph: Graph, rotation: Vec<Vec<EdgeId>>) -> Result<Self> {
        if rotation.len() != graph.num_vertices() {
            return Err(Error::InconsistentRotation("one cyclic order per vertex expected".into()));
        }
        let mut darts = Vec::with_capacity(rotation.len());
        for (v, list) in rotation.into_iter().enumerate() {
            let mut row = Vec::with_capacity(list.len());
            for e in list {
                if e.0 >= graph.num_edges() {
                    return Err(Error::InconsistentRotation(format!("unknown edge {}", e.0)));
                }
                let (a, b) = graph.endpoints(e);
                if a == v {
                    row.push(2 * e.0);
                } else if b == v {
                    row.push(2 * e.0 + 1);
                } else {
                    return Err(Error::InconsistentRotation(format!(
                        "edge {} is not incident to vertex {v}",
                        e.0
                    )));
                }
            }
            darts.push(row);
        }
        Self::from_darts(graph, darts)
    }

    /// Builds an embedding from per-vertex cyclic orders of darts.
    pub fn from_darts(graph: Graph, rotation: Vec<Vec<Dart>>) -> Result<Self> {
        let n = graph.num_vertices();
        if rotation.len() != n {
            return Err(Error::InconsistentRotation("one cyclic order per vertex expected".into()));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut order = Vec::with_capacity(2 * graph.num_edges());
        let mut position = vec![usize::MAX; 2 * graph.num_edges()];
        for (v, row) in rotation.iter().enumerate() {
            if row.len() != graph.degree(v) {
                return Err(Error::InconsistentRotation(format!(
                    "vertex {v} lists {} darts but has degree {}",
                    row.len(),
                    graph.degree(v)
                )));
            }
            for &d in row {
                if d >= position.len() || position[d] != usize::MAX {
                    return Err(Error::InconsistentRotation(format!("dart {d} repeated or unknown")));
                }
                let (a, b) = graph.endpoints(dart_edge(d));
                let origin = if d & 1 == 0 { a } else { b };
                if origin != v {
                    return Err(Error::InconsistentRotation(format!("dart {d} does not leave {v}")));
                }
                position[d] = order.len();
                order.push(d);
            }
            offsets.push(order.len());
        }
        Ok(PlanarEmbedding { graph, order, offsets, position })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    #[inline]
    pub fn origin(&self, d: Dart) -> usize {
        let e = self.graph.edge(dart_edge(d));
        if d & 1 == 0 {
            e.u
        } else {
            e.v
        }
    }

    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.origin(twin(d))
    }

    /// The dart leaving `v` along edge `e`.
    #[inline]
    pub fn dart_from(&self, e: EdgeId, v: usize) -> Dart {
        if self.graph.edge(e).u == v {
            2 * e.0
        } else {
            2 * e.0 + 1
        }
    }

    /// Darts leaving `v` in cyclic order.
    #[inline]
    pub fn darts_around(&self, v: usize) -> &[Dart] {
        &self.order[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn rotation(&self, v: usize) -> Vec<EdgeId> {
        self.darts_around(v).iter().map(|&d| dart_edge(d)).collect()
    }

    #[inline]
    pub fn next_around(&self, d: Dart) -> Dart {
        let p = self.position[d];
        let v = self.origin(d);
        let next = if p + 1 == self.offsets[v + 1] { self.offsets[v] } else { p + 1 };
        self.order[next]
    }

    #[inline]
    pub fn prev_around(&self, d: Dart) -> Dart {
        let p = self.position[d];
        let v = self.origin(d);
        let prev = if p == self.offsets[v] { self.offsets[v + 1] - 1 } else { p - 1 };
        self.order[prev]
    }

    /// Successor of `d` on the boundary of the face it bounds.
    #[inline]
    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.next_around(twin(d))
    }

    pub fn num_darts(&self) -> usize {
        self.order.len()
    }

    /// Face index of every dart and the number of faces.
    pub fn face_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.num_darts()];
        let mut count = 0;
        for start in 0..self.num_darts() {
            if label[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while label[d] == usize::MAX {
                label[d] = count;
                d = self.next_in_face(d);
            }
            count += 1;
        }
        (label, count)
    }

    pub fn faces(&self) -> Vec<Face> {
        enumerate_faces(self)
    }

    /// True when every connected component with an edge satisfies
    /// `V - E + F = 2`.
    pub fn is_planar(&self) -> bool {
        let (comp, ncomp) = self.graph.connected_components();
        let (face_of, num_faces) = self.face_labels();
        let mut chi = vec![0i64; ncomp];
        let mut has_edge = vec![false; ncomp];
        for v in 0..self.graph.num_vertices() {
            chi[comp[v]] += 1;
        }
        for e in self.graph.edges() {
            chi[comp[e.u]] -= 1;
            has_edge[comp[e.u]] = true;
        }
        let mut seen_face = vec![false; num_faces];
        for d in 0..self.num_darts() {
            let f = face_of[d];
            if !seen_face[f] {
                seen_face[f] = true;
                chi[comp[self.origin(d)]] += 1;
            }
        }
        (0..ncomp).all(|c| !has_edge[c] || chi[c] == 2)
    }

    /// Embedding of the subgraph induced by `vertices` (relabelled in the
    /// given order) and the source id of each kept edge.
    pub fn restrict(&self, vertices: &[usize]) -> (PlanarEmbedding, Vec<EdgeId>) {
        let (sub, origin) = self.graph.induced_subgraph(vertices);
        let mut new_id = vec![usize::MAX; self.graph.num_edges()];
        for (i, e) in origin.iter().enumerate() {
            new_id[e.0] = i;
        }
        let rotation = vertices
            .iter()
            .map(|&v| {
                self.darts_around(v)
                    .iter()
                    .filter(|&&d| new_id[d >> 1] != usize::MAX)
                    .map(|&d| EdgeId(new_id[d >> 1]))
                    .collect()
            })
            .collect();
        let emb = PlanarEmbedding::new(sub, rotation).expect("restriction keeps rotation consistent");
        (emb, origin)
    }
}

/// Faces of an embedding, each as the closed walk of its darts.
pub fn enumerate_faces(e: &PlanarEmbedding) -> Vec<Face> {
    let mut seen = vec![false; e.num_darts()];
    let mut faces = Vec::new();
    for start in 0..e.num_darts() {
        if seen[start] {
            continue;
        }
        let mut darts = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            darts.push(d);
            d = e.next_in_face(d);
        }
        faces.push(Face { darts });
    }
    faces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn cycle(n: usize) -> PlanarEmbedding {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = build_graph(n, &edges).unwrap();
        let rotation = (0..n).map(|v| g.neighbors(v).iter().map(|&(_, e)| e).collect()).collect();
        PlanarEmbedding::new(g, rotation).unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let faces = enumerate_faces(&cycle(3));
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn four_cycle_has_two_square_faces() {
        let emb = cycle(4);
        let faces = enumerate_faces(&emb);
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 4));
        assert!(emb.is_planar());
    }

    #[test]
    fn k4_embedding_has_four_triangles() {
        // 0 in the middle of triangle 1-2-3.
        let g = build_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]).unwrap();
        let rotation = vec![
            vec![EdgeId(0), EdgeId(1), EdgeId(2)],
            vec![EdgeId(0), EdgeId(5), EdgeId(3)],
            vec![EdgeId(1), EdgeId(3), EdgeId(4)],
            vec![EdgeId(2), EdgeId(4), EdgeId(5)],
        ];
        let emb = PlanarEmbedding::new(g, rotation).unwrap();
        let faces = emb.faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
        assert!(emb.is_planar());
        let boundary = faces[0].boundary(&emb);
        assert_eq!(boundary.len(), 3);
    }

    #[test]
    fn rejects_rotation_missing_an_edge() {
        let g = build_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let rotation = vec![vec![EdgeId(0)], vec![EdgeId(0), EdgeId(1)], vec![EdgeId(1), EdgeId(2)]];
        assert!(matches!(
            PlanarEmbedding::new(g, rotation),
            Err(Error::InconsistentRotation(_))
        ));
    }
}
