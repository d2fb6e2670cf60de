use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{dart_edge, twin, Dart, PlanarEmbedding};

/// Orientation with an odd number of edges directed along the boundary
/// walk of every face except one root face per connected component.
///
/// `orient[e] == true` directs edge `e` from its first endpoint to its
/// second. Tree edges of a BFS forest are fixed first; the remaining edges
/// form a spanning forest of the faces and are fixed leaf first.
pub fn pfaffian_orient(emb: &PlanarEmbedding) -> Result<Vec<bool>> {
    if !emb.is_planar() {
        return Err(Error::NonPlanar);
    }
    let g = emb.graph();
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut orient = vec![true; m];
    let mut in_tree = vec![false; m];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e.0] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let (face_of, num_faces) = emb.face_labels();
    let mut face_darts: Vec<Vec<Dart>> = vec![Vec::new(); num_faces];
    for d in 0..emb.num_darts() {
        face_darts[face_of[d]].push(d);
    }

    // spanning forest of faces across non-tree edges
    let mut parent_dart = vec![usize::MAX; num_faces];
    let mut visited = vec![false; num_faces];
    let mut order = Vec::with_capacity(num_faces);
    for root in 0..num_faces {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for &d in &face_darts[f] {
                if in_tree[dart_edge(d).0] {
                    continue;
                }
                let h = face_of[twin(d)];
                if !visited[h] {
                    visited[h] = true;
                    parent_dart[h] = twin(d);
                    queue.push_back(h);
                }
            }
        }
    }

    let along = |orient: &[bool], d: Dart| (d & 1 == 0) == orient[d >> 1];
    for &f in order.iter().rev() {
        let pd = parent_dart[f];
        if pd == usize::MAX {
            continue;
        }
        let others = face_darts[f].iter().filter(|&&d| d != pd && along(&orient, d)).count();
        let want_along = others % 2 == 0;
        orient[pd >> 1] = if pd & 1 == 0 { want_along } else { !want_along };
    }
    Ok(orient)
}

/// Number of boundary darts of every face directed along the walk.
pub fn face_along_counts(emb: &PlanarEmbedding, orient: &[bool]) -> Vec<usize> {
    emb.faces()
        .iter()
        .map(|f| f.darts.iter().filter(|&&d| (d & 1 == 0) == orient[d >> 1]).count())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, planar_embed};

    #[test]
    fn all_but_one_face_odd() {
        let wheel: Vec<_> = (1..7).flat_map(|i| [(0, i), (i, i % 6 + 1)]).collect();
        let emb = planar_embed(&build_graph(7, &wheel).unwrap()).unwrap();
        let orient = pfaffian_orient(&emb).unwrap();
        let counts = face_along_counts(&emb, &orient);
        assert!(counts.iter().filter(|&&c| c % 2 == 0).count() <= 1);
    }

    #[test]
    fn four_cycle_is_odd_oriented() {
        let emb = planar_embed(&build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()).unwrap();
        let orient = pfaffian_orient(&emb).unwrap();
        let counts = face_along_counts(&emb, &orient);
        // both faces walk the same cycle in opposite directions: 1 + 3 or 3 + 1
        assert_eq!(counts.iter().sum::<usize>(), 4);
        assert!(counts.iter().all(|c| c % 2 == 1));
    }

    #[test]
    fn single_edge() {
        let emb = planar_embed(&build_graph(2, &[(0, 1)]).unwrap()).unwrap();
        assert_eq!(pfaffian_orient(&emb).unwrap().len(), 1);
    }
}
