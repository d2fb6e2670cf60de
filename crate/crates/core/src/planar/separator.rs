use super::rotation::Rotation;
use crate::error::{Error, Result};
use crate::graph::PlanarEmbedding;

const NONE: usize = usize::MAX;

/// A vertex partition with no edge between `part1` and `part2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub separator: Vec<usize>,
}

/// Stamp-marked scratch arrays shared by every separator call on one host,
/// so a call costs time proportional to the vertex set it is given.
pub(crate) struct Work {
    stamp: u32,
    set: Vec<u32>,
    cut: Vec<u32>,
    seen: Vec<u32>,
    level: Vec<usize>,
    parent: Vec<usize>,
    dart_seen: Vec<u32>,
    dart_tri: Vec<usize>,
    once: Vec<u32>,
}

impl Work {
    pub fn new(rot: &Rotation) -> Self {
        let n = rot.num_vertices();
        Work {
            stamp: 0,
            set: vec![0; n],
            cut: vec![0; n],
            seen: vec![0; n],
            level: vec![0; n],
            parent: vec![NONE; n],
            dart_seen: vec![0; rot.num_entries()],
            dart_tri: vec![0; rot.num_entries()],
            once: vec![0; n],
        }
    }

    pub fn bump(&mut self) -> u32 {
        self.stamp = self.stamp.checked_add(1).expect("stamp overflow");
        self.stamp
    }

    /// True the first time `v` is seen under stamp `s`.
    pub fn mark_once(&mut self, v: usize, s: u32) -> bool {
        let fresh = self.once[v] != s;
        self.once[v] = s;
        fresh
    }

    /// Marks `xs` as the current set and returns its stamp.
    fn mark_set(&mut self, xs: &[usize]) -> u32 {
        let s = self.bump();
        for &v in xs {
            self.set[v] = s;
        }
        s
    }
}

/// Connected components of `xs` minus `removed`, each in BFS order.
pub(crate) fn components(rot: &Rotation, work: &mut Work, xs: &[usize], removed: &[usize]) -> Vec<Vec<usize>> {
    let s_in = work.mark_set(xs);
    let s_cut = work.bump();
    for &v in removed {
        work.cut[v] = s_cut;
    }
    let s_seen = work.bump();
    let mut out = Vec::new();
    for &root in xs {
        if work.cut[root] == s_cut || work.seen[root] == s_seen {
            continue;
        }
        work.seen[root] = s_seen;
        let mut comp = vec![root];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for k in rot.entries(v) {
                let w = rot.head[k];
                if work.set[w] == s_in && work.cut[w] != s_cut && work.seen[w] != s_seen {
                    work.seen[w] = s_seen;
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Separator of the connected vertex set `xs`.
///
/// BFS levels first: the median level if it is small, otherwise two cheap
/// levels around it. If the band between those levels is still too heavy it
/// is cut by a short fundamental cycle of a BFS tree, found on a face
/// triangulation in which every long face gets a fresh centre vertex.
pub(crate) fn find_separator(rot: &Rotation, work: &mut Work, xs: &[usize]) -> Vec<usize> {
    let n = xs.len();
    if n <= 2 {
        return xs[..1].to_vec();
    }
    let s_in = work.mark_set(xs);
    let s_seen = work.bump();
    let root = xs[0];
    let mut order = Vec::with_capacity(n);
    order.push(root);
    work.seen[root] = s_seen;
    work.level[root] = 0;
    work.parent[root] = NONE;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for k in rot.entries(v) {
            let w = rot.head[k];
            if work.set[w] == s_in && work.seen[w] != s_seen {
                work.seen[w] = s_seen;
                work.level[w] = work.level[v] + 1;
                work.parent[w] = k;
                order.push(w);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "separator input must be connected");

    let depth = work.level[*order.last().unwrap()];
    let mut start = vec![0usize; depth + 3];
    for &v in &order {
        start[work.level[v] + 1] += 1;
    }
    for l in 1..start.len() {
        start[l] += start[l - 1];
    }
    // levels -1 and depth + 1 are empty
    let count = |l: isize| -> usize {
        if l < 0 || l as usize > depth {
            0
        } else {
            start[l as usize + 1] - start[l as usize]
        }
    };
    let level_vertices = |l: isize| -> &[usize] {
        if l < 0 || l as usize > depth {
            &[]
        } else {
            &order[start[l as usize]..start[l as usize + 1]]
        }
    };

    let mut l1 = 0isize;
    while 2 * start[l1 as usize + 1] <= n {
        l1 += 1;
    }
    let bound = 2.0 * (n as f64).sqrt();
    if count(l1) as f64 <= bound {
        return level_vertices(l1).to_vec();
    }

    let mut l0 = l1;
    let mut best = count(l1);
    for l in (-1..l1).rev() {
        let cost = count(l) + 2 * (l1 - l) as usize;
        if cost < best {
            best = cost;
            l0 = l;
        }
    }
    let mut l2 = l1 + 1;
    let mut best = count(l2);
    for l in l1 + 2..=depth as isize + 1 {
        let cost = count(l) + 2 * (l - l1 - 1) as usize;
        if cost < best {
            best = cost;
            l2 = l;
        }
    }

    let mut sep: Vec<usize> = level_vertices(l0).to_vec();
    sep.extend_from_slice(level_vertices(l2));
    let middle = start[l2.min(depth as isize + 1) as usize] - start[(l0 + 1) as usize];
    if 3 * middle > 2 * n {
        let prefix = &order[..start[l2.min(depth as isize + 1) as usize]];
        sep.extend(cycle_cut(rot, work, s_in, prefix, l0, l2));
    }
    if sep.is_empty() {
        return level_vertices(l1).to_vec();
    }
    sep
}

/// Middle-level vertices of a balanced fundamental cycle of the BFS tree
/// restricted to `prefix` (all levels below `l2`, in BFS order).
fn cycle_cut(rot: &Rotation, work: &mut Work, s_in: u32, prefix: &[usize], l0: isize, l2: isize) -> Vec<usize> {
    if prefix.len() < 3 {
        return Vec::new();
    }
    let inside = |work: &Work, v: usize| work.set[v] == s_in && (work.level[v] as isize) < l2;
    let middle = |work: &Work, v: usize| (work.level[v] as isize) > l0 && (work.level[v] as isize) < l2;

    // faces of the prefix subgraph and the triangles covering them
    let s_dart = work.bump();
    let mut tri_count = 0usize;
    let mut links: Vec<(usize, usize, usize, usize)> = Vec::new();
    // centre c hangs below centre_root[c] in the spanning tree
    let mut centre_root: Vec<usize> = Vec::new();
    let mut face = Vec::new();
    for &v in prefix {
        for k0 in rot.entries(v) {
            if !inside(work, rot.head[k0]) || work.dart_seen[k0] == s_dart {
                continue;
            }
            face.clear();
            let mut k = k0;
            loop {
                work.dart_seen[k] = s_dart;
                face.push(k);
                // next dart of the face: first inside entry after rev[k]
                let mut j = rot.next_around(rot.rev[k]);
                while !inside(work, rot.head[j]) {
                    j = rot.next_around(j);
                }
                k = j;
                if k == k0 {
                    break;
                }
            }
            let len = face.len();
            if len <= 3 {
                for &d in &face {
                    work.dart_tri[d] = tri_count;
                }
                tri_count += 1;
            } else {
                let c = centre_root.len();
                centre_root.push(rot.tail[face[0]]);
                for (i, &d) in face.iter().enumerate() {
                    work.dart_tri[d] = tri_count + i;
                }
                for i in 1..len {
                    links.push((tri_count + i - 1, tri_count + i, rot.tail[face[i]], NONE - 1 - c));
                }
                tri_count += len;
            }
        }
    }
    for &v in prefix {
        for k in rot.entries(v) {
            let w = rot.head[k];
            if !inside(work, w) || k > rot.rev[k] {
                continue;
            }
            if work.parent[w] == k || work.parent[v] == rot.rev[k] {
                continue;
            }
            links.push((work.dart_tri[k], work.dart_tri[rot.rev[k]], v, w));
        }
    }

    // rooted spanning tree of the triangles
    let mut deg = vec![0usize; tri_count + 1];
    for &(a, b, _, _) in &links {
        deg[a + 1] += 1;
        deg[b + 1] += 1;
    }
    for t in 1..deg.len() {
        deg[t] += deg[t - 1];
    }
    let mut fill = deg.clone();
    let mut adj = vec![(0usize, 0usize); 2 * links.len()];
    for (li, &(a, b, _, _)) in links.iter().enumerate() {
        adj[fill[a]] = (b, li);
        fill[a] += 1;
        adj[fill[b]] = (a, li);
        fill[b] += 1;
    }
    let mut weight = vec![0usize; tri_count];
    let mut total = 0usize;
    for &v in prefix {
        if middle(work, v) {
            if let Some(k) = rot.entries(v).find(|&k| inside(work, rot.head[k])) {
                weight[work.dart_tri[k]] += 1;
                total += 1;
            }
        }
    }
    let mut tparent = vec![(NONE, NONE); tri_count];
    let mut torder = Vec::with_capacity(tri_count);
    let mut tseen = vec![false; tri_count];
    torder.push(0);
    tseen[0] = true;
    let mut i = 0;
    while i < torder.len() {
        let t = torder[i];
        i += 1;
        for &(u, li) in &adj[deg[t]..deg[t + 1]] {
            if !tseen[u] {
                tseen[u] = true;
                tparent[u] = (t, li);
                torder.push(u);
            }
        }
    }
    let mut best = (usize::MAX, NONE);
    for &t in torder.iter().rev() {
        let (p, li) = tparent[t];
        if p == NONE {
            continue;
        }
        let side = weight[t];
        let worst = side.max(total - side);
        if worst < best.0 {
            best = (worst, li);
        }
        weight[p] += weight[t];
    }
    if best.1 == NONE {
        return Vec::new();
    }

    // walk both endpoints up to their common ancestor
    let (_, _, x, y) = links[best.1];
    let real = |node: usize| node < NONE - 1 - centre_root.len();
    let depth_of = |work: &Work, node: usize| {
        if real(node) {
            work.level[node]
        } else {
            work.level[centre_root[NONE - 1 - node]] + 1
        }
    };
    let up = |work: &Work, node: usize| {
        if real(node) {
            rot.tail[work.parent[node]]
        } else {
            centre_root[NONE - 1 - node]
        }
    };
    let mut out = Vec::new();
    let mut keep = |work: &Work, node: usize| {
        if real(node) && middle(work, node) {
            out.push(node);
        }
    };
    let (mut a, mut b) = (x, y);
    while depth_of(work, a) > depth_of(work, b) {
        keep(work, a);
        a = up(work, a);
    }
    while depth_of(work, b) > depth_of(work, a) {
        keep(work, b);
        b = up(work, b);
    }
    while a != b {
        keep(work, a);
        keep(work, b);
        a = up(work, a);
        b = up(work, b);
    }
    keep(work, a);
    out
}

/// Splits the components of `xs` minus `sep` into two groups, largest first
/// into the lighter group.
pub(crate) fn balance(comps: Vec<Vec<usize>>) -> (Vec<usize>, Vec<usize>) {
    let mut comps = comps;
    comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for c in comps {
        if a.len() <= b.len() {
            a.extend(c);
        } else {
            b.extend(c);
        }
    }
    (a, b)
}

/// Separation of a planar embedding with both parts at most two thirds of
/// the vertices.
pub fn planar_separator(emb: &PlanarEmbedding) -> Result<Separation> {
    if !emb.is_planar() {
        return Err(Error::NonPlanar);
    }
    let rot = Rotation::new(emb);
    let mut work = Work::new(&rot);
    let n = rot.num_vertices();
    let all: Vec<usize> = (0..n).collect();
    let mut separator: Vec<usize> = Vec::new();
    loop {
        let comps = components(&rot, &mut work, &all, &separator);
        let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
        if 3 * largest <= 2 * n || largest <= 1 {
            let (part1, part2) = balance(comps);
            separator.sort_unstable();
            return Ok(Separation { part1, part2, separator });
        }
        let big = comps.into_iter().max_by_key(Vec::len).unwrap();
        separator.extend(find_separator(&rot, &mut work, &big));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, planar_embed};

    fn grid(w: usize, h: usize) -> PlanarEmbedding {
        let mut edges = Vec::new();
        for r in 0..h {
            for c in 0..w {
                let v = r * w + c;
                if c + 1 < w {
                    edges.push((v, v + 1));
                }
                if r + 1 < h {
                    edges.push((v, v + w));
                }
            }
        }
        planar_embed(&build_graph(w * h, &edges).unwrap()).unwrap()
    }

    fn check(emb: &PlanarEmbedding, sep: &Separation) {
        let n = emb.graph().num_vertices();
        let mut side = vec![0u8; n];
        for &v in &sep.part1 {
            side[v] = 1;
        }
        for &v in &sep.part2 {
            side[v] = 2;
        }
        for &v in &sep.separator {
            assert_eq!(side[v], 0);
            side[v] = 3;
        }
        assert!(side.iter().all(|&s| s != 0));
        for e in emb.graph().edges() {
            assert!(!(side[e.u] == 1 && side[e.v] == 2 || side[e.u] == 2 && side[e.v] == 1));
        }
        assert!(3 * sep.part1.len().max(sep.part2.len()) <= 2 * n);
        assert!(sep.separator.len() as f64 <= 2f64.powf(1.5) * (n as f64).sqrt());
    }

    #[test]
    fn path_of_three() {
        let emb = planar_embed(&build_graph(3, &[(0, 1), (1, 2)]).unwrap()).unwrap();
        let sep = planar_separator(&emb).unwrap();
        assert_eq!(sep.separator, vec![1]);
        check(&emb, &sep);
    }

    #[test]
    fn grids() {
        for (w, h) in [(10, 10), (3, 40), (25, 25), (1, 30)] {
            let emb = grid(w, h);
            check(&emb, &planar_separator(&emb).unwrap());
        }
    }
}
