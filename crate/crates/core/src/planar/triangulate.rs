use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Dart, Edge, Graph, PlanarEmbedding};
use crate::model::IsingModel;

/// Adds zero-coupling chords until every face is a triangle.
///
/// Original edges keep their ids; chords are appended. Every face is cut by
/// ears `(w_{i-1}, w_i, w_{i+1})` whose chord is not yet present, so the
/// result stays simple. Works for any connected simple embedding with at
/// least three vertices.
pub fn triangulate(model: &IsingModel, emb: &PlanarEmbedding) -> Result<(IsingModel, PlanarEmbedding)> {
    let g = emb.graph();
    if g.num_edges() != model.num_edges() || g.num_vertices() != model.num_vertices() {
        return Err(Error::InvalidArgument("embedding does not match the model".into()));
    }
    if g.num_vertices() < 3 || !g.is_connected() {
        return Err(Error::InvalidArgument(
            "triangulation needs a connected graph with at least 3 vertices".into(),
        ));
    }

    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut present: HashSet<(usize, usize)> = edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
    let mut origin: Vec<usize> = (0..emb.num_darts()).map(|d| emb.origin(d)).collect();

    // rotation as a linked list over darts
    let mut next_rot = vec![0; emb.num_darts()];
    let mut prev_rot = vec![0; emb.num_darts()];
    for d in 0..emb.num_darts() {
        next_rot[d] = emb.next_around(d);
        prev_rot[d] = emb.prev_around(d);
    }

    for face in emb.faces() {
        let k = face.len();
        if k < 3 {
            return Err(Error::InconsistentRotation(format!("face of length {k}")));
        }
        if k == 3 {
            continue;
        }
        // cyclic list of face nodes; node i holds the dart leaving w_i
        let mut dart: Vec<Dart> = face.darts.clone();
        let mut nxt: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        let mut prv: Vec<usize> = (0..k).map(|i| (i + k - 1) % k).collect();
        let mut len = k;
        let mut cur = 0;
        let mut misses = 0;
        while len > 3 {
            let before = prv[cur];
            let after = nxt[cur];
            let a = origin[dart[before]];
            let b = origin[dart[after]];
            let key = (a.min(b), a.max(b));
            if a == b || present.contains(&key) {
                cur = after;
                misses += 1;
                if misses > len {
                    return Err(Error::InconsistentRotation("no ear can be cut".into()));
                }
                continue;
            }
            misses = 0;
            let id = edges.len();
            edges.push(Edge::real(a, b));
            present.insert(key);
            let (ab, ba) = (2 * id, 2 * id + 1);
            origin.push(a);
            origin.push(b);
            next_rot.extend([0, 0]);
            prev_rot.extend([0, 0]);
            insert_before(&mut next_rot, &mut prev_rot, ab, dart[before]);
            insert_before(&mut next_rot, &mut prev_rot, ba, dart[after]);
            // node `before` now carries the chord, node `cur` leaves the face
            dart[before] = ab;
            nxt[before] = after;
            prv[after] = before;
            len -= 1;
            cur = nxt[after];
        }
    }

    let n = g.num_vertices();
    let mut first = vec![usize::MAX; n];
    for d in 0..origin.len() {
        if first[origin[d]] == usize::MAX {
            first[origin[d]] = d;
        }
    }
    let rotation = (0..n)
        .map(|v| {
            let mut row = vec![first[v]];
            let mut d = next_rot[first[v]];
            while d != first[v] {
                row.push(d);
                d = next_rot[d];
            }
            row
        })
        .collect();
    let mut couplings = model.couplings().to_vec();
    couplings.resize(edges.len(), 0.0);
    let graph = Graph::from_edges(n, edges, false)?;
    let tri = PlanarEmbedding::from_darts(graph.clone(), rotation)?;
    Ok((IsingModel::new(graph, couplings)?, tri))
}

fn insert_before(next_rot: &mut [Dart], prev_rot: &mut [Dart], new: Dart, at: Dart) {
    let p = prev_rot[at];
    next_rot[p] = new;
    prev_rot[new] = p;
    next_rot[new] = at;
    prev_rot[at] = new;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::planar_embed;

    fn run(n: usize, edges: &[(usize, usize)]) -> (IsingModel, PlanarEmbedding) {
        let triples: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 0.3)).collect();
        let m = IsingModel::from_triples(n, &triples).unwrap();
        let emb = planar_embed(m.graph()).unwrap();
        triangulate(&m, &emb).unwrap()
    }

    fn check(m: &IsingModel, emb: &PlanarEmbedding, original: usize) {
        let n = m.num_vertices();
        assert_eq!(m.num_edges(), 3 * n - 6);
        assert!(emb.is_planar());
        assert!(emb.faces().iter().all(|f| f.len() == 3));
        assert!(m.couplings()[original..].iter().all(|&j| j == 0.0));
        assert!(m.couplings()[..original].iter().all(|&j| j == 0.3));
    }

    #[test]
    fn triangle_is_unchanged() {
        let (m, emb) = run(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(m.num_edges(), 3);
        assert_eq!(emb.faces().len(), 2);
    }

    #[test]
    fn four_cycle_gets_one_diagonal_per_side() {
        let (m, emb) = run(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        check(&m, &emb, 4);
    }

    #[test]
    fn six_cycle_and_trees() {
        let (m, emb) = run(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        check(&m, &emb, 6);
        let (m, emb) = run(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        check(&m, &emb, 4);
        let (m, emb) = run(4, &[(0, 1), (1, 2), (2, 3)]);
        check(&m, &emb, 3);
    }
}
