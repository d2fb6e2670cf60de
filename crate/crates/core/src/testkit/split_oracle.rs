//! Slow reference for triconnected components: split at any separation
//! pair until none is left, then merge adjacent bonds and adjacent cycles.

use crate::decomp::{ComponentKind, EdgeOrigin, TriconComponent};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Label {
    Real(usize),
    Virtual(usize),
}

#[derive(Clone, Debug)]
struct Piece {
    edges: Vec<(Label, usize, usize)>,
}

impl Piece {
    fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().flat_map(|&(_, a, b)| [a, b]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn kind(&self) -> ComponentKind {
        let n = self.vertices().len();
        if n == 2 {
            ComponentKind::Bond
        } else if n == self.edges.len() {
            ComponentKind::Cycle
        } else {
            ComponentKind::Triconnected
        }
    }

    /// Separation classes with respect to `{a, b}`, as edge index lists.
    fn classes(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let verts = self.vertices();
        let idx = |x: usize| verts.binary_search(&x).unwrap();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(_, u, v) in &self.edges {
            if u != a && u != b && v != a && v != b {
                let (ru, rv) = (find(&mut parent, idx(u)), find(&mut parent, idx(v)));
                parent[ru] = rv;
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, &(_, u, v)) in self.edges.iter().enumerate() {
            let inner = if u != a && u != b {
                Some(u)
            } else if v != a && v != b {
                Some(v)
            } else {
                None
            };
            match inner {
                Some(x) => {
                    let r = find(&mut parent, idx(x));
                    match groups.iter_mut().find(|g| g.0 == r) {
                        Some(g) => g.1.push(i),
                        None => groups.push((r, vec![i])),
                    }
                }
                None => groups.push((usize::MAX, vec![i])),
            }
        }
        groups.into_iter().map(|g| g.1).collect()
    }

    /// Some split along a separation pair, if one exists.
    fn split(&self, next_virtual: &mut usize) -> Option<(Piece, Piece)> {
        if self.edges.len() <= 3 {
            return None;
        }
        let verts = self.vertices();
        for (i, &a) in verts.iter().enumerate() {
            for &b in &verts[i + 1..] {
                let classes = self.classes(a, b);
                let k = classes.len();
                let singles = classes.iter().filter(|c| c.len() == 1).count();
                if k < 2 || (k == 2 && singles >= 1) || (k == 3 && singles == 3) {
                    continue;
                }
                let m = self.edges.len();
                let side: Vec<usize> = match classes.iter().find(|c| c.len() >= 2 && m - c.len() >= 2) {
                    Some(c) => c.clone(),
                    None => classes.iter().take(2).flatten().copied().collect(),
                };
                let label = Label::Virtual(*next_virtual);
                *next_virtual += 1;
                let mut left = Piece { edges: Vec::new() };
                let mut right = Piece { edges: Vec::new() };
                for (j, &e) in self.edges.iter().enumerate() {
                    if side.contains(&j) {
                        left.edges.push(e);
                    } else {
                        right.edges.push(e);
                    }
                }
                left.edges.push((label, a, b));
                right.edges.push((label, a, b));
                return Some((left, right));
            }
        }
        None
    }
}

/// Canonical description of one component: kind, sorted real edge ids and
/// sorted virtual edge endpoint pairs (source vertex ids).
pub type CanonicalComponent = (ComponentKind, Vec<usize>, Vec<(usize, usize)>);

/// Triconnected components of a biconnected normal graph by exhaustive
/// splitting, in canonical sorted form.
pub fn brute_triconnected(g: &Graph) -> Vec<CanonicalComponent> {
    let start = Piece {
        edges: g.edges().iter().enumerate().map(|(i, e)| (Label::Real(i), e.u, e.v)).collect(),
    };
    let mut next_virtual = 0;
    let mut todo = vec![start];
    let mut done: Vec<Piece> = Vec::new();
    while let Some(p) = todo.pop() {
        match p.split(&mut next_virtual) {
            Some((l, r)) => {
                todo.push(l);
                todo.push(r);
            }
            None => done.push(p),
        }
    }

    // merge bonds with bonds and cycles with cycles
    loop {
        let mut merged = false;
        'outer: for i in 0..done.len() {
            for j in i + 1..done.len() {
                let ki = done[i].kind();
                if ki == ComponentKind::Triconnected || ki != done[j].kind() {
                    continue;
                }
                let shared = done[i].edges.iter().find_map(|&(l, _, _)| match l {
                    Label::Virtual(_) if done[j].edges.iter().any(|&(m, _, _)| m == l) => Some(l),
                    _ => None,
                });
                if let Some(l) = shared {
                    let other = done.remove(j);
                    done[i].edges.retain(|&(m, _, _)| m != l);
                    done[i].edges.extend(other.edges.into_iter().filter(|&(m, _, _)| m != l));
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let mut out: Vec<CanonicalComponent> = done
        .iter()
        .map(|p| {
            let mut real = Vec::new();
            let mut virt = Vec::new();
            for &(l, a, b) in &p.edges {
                match l {
                    Label::Real(id) => real.push(id),
                    Label::Virtual(_) => virt.push((a.min(b), a.max(b))),
                }
            }
            real.sort_unstable();
            virt.sort_unstable();
            (p.kind(), real, virt)
        })
        .collect();
    out.sort();
    out
}

/// The same canonical form for components produced by the decomposition.
pub fn canonical_components(comps: &[TriconComponent]) -> Vec<CanonicalComponent> {
    let mut out: Vec<CanonicalComponent> = comps
        .iter()
        .map(|c| {
            let mut real = Vec::new();
            let mut virt = Vec::new();
            for (i, o) in c.origin.iter().enumerate() {
                let (a, b) = c.source_endpoints(crate::graph::EdgeId(i));
                match o {
                    EdgeOrigin::Real(id) => real.push(id.0),
                    EdgeOrigin::Virtual(_) => virt.push((a.min(b), a.max(b))),
                }
            }
            real.sort_unstable();
            virt.sort_unstable();
            (c.kind, real, virt)
        })
        .collect();
    out.sort();
    out
}
