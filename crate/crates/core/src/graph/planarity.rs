//! Left-right planarity test with embedding extraction (Brandes' variant
//! of the de Fraysseix–Rosenstiehl criterion). All DFS passes are
//! iterative so deep graphs do not exhaust the call stack.

use super::{Dart, EdgeId, Graph, PlanarEmbedding};
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn single(e: usize) -> Self {
        Interval { low: Some(e), high: Some(e) }
    }

    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState<'a> {
    g: &'a Graph,
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    roots: Vec<usize>,
    oriented: Vec<bool>,
    src: Vec<usize>,
    dst: Vec<usize>,
    out: Vec<Vec<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    refs: Vec<usize>,
    side: Vec<i64>,
    lowpt_edge: Vec<usize>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

impl<'a> LrState<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.num_vertices();
        let m = g.num_edges();
        LrState {
            g,
            height: vec![NONE; n],
            parent_edge: vec![NONE; n],
            roots: Vec::new(),
            oriented: vec![false; m],
            src: vec![NONE; m],
            dst: vec![NONE; m],
            out: vec![Vec::new(); n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting: vec![0; m],
            refs: vec![NONE; m],
            side: vec![1; m],
            lowpt_edge: vec![NONE; m],
            stack_bottom: vec![0; m],
            stack: Vec::new(),
        }
    }

    fn orient(&mut self, root: usize) {
        self.height[root] = 0;
        self.roots.push(root);
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(frame) = frames.last_mut() {
            let (v, pos) = *frame;
            if pos < self.g.degree(v) {
                frame.1 += 1;
                let (w, e) = self.g.neighbors(v)[pos];
                let e = e.0;
                if self.oriented[e] {
                    continue;
                }
                self.oriented[e] = true;
                self.src[e] = v;
                self.dst[e] = w;
                self.out[v].push(e);
                self.lowpt[e] = self.height[v];
                self.lowpt2[e] = self.height[v];
                if self.height[w] == NONE {
                    self.parent_edge[w] = e;
                    self.height[w] = self.height[v] + 1;
                    frames.push((w, 0));
                    continue;
                }
                self.lowpt[e] = self.height[w];
                self.finish_orientation(e);
            } else {
                frames.pop();
                let pe = self.parent_edge[v];
                if pe != NONE {
                    self.finish_orientation(pe);
                }
            }
        }
    }

    fn finish_orientation(&mut self, e: usize) {
        let v = self.src[e];
        self.nesting[e] = 2 * self.lowpt[e] as i64;
        if self.lowpt2[e] < self.height[v] {
            self.nesting[e] += 1;
        }
        let pe = self.parent_edge[v];
        if pe == NONE {
            return;
        }
        if self.lowpt[e] < self.lowpt[pe] {
            self.lowpt2[pe] = self.lowpt[pe].min(self.lowpt2[e]);
            self.lowpt[pe] = self.lowpt[e];
        } else if self.lowpt[e] > self.lowpt[pe] {
            self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt[e]);
        } else {
            self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt2[e]);
        }
    }

    fn conflicting(&self, interval: &Interval, b: usize) -> bool {
        match interval.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => NONE,
        }
    }

    fn test(&mut self, root: usize) -> bool {
        // (vertex, next position in its ordered out-list)
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, pos)) = frames.last() {
            if pos < self.out[v].len() {
                let ei = self.out[v][pos];
                let w = self.dst[ei];
                self.stack_bottom[ei] = self.stack.len();
                if self.parent_edge[w] == ei {
                    frames.push((w, 0));
                    continue;
                }
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair { left: Interval::default(), right: Interval::single(ei) });
                if !self.integrate(v, pos, ei) {
                    return false;
                }
                frames.last_mut().unwrap().1 += 1;
            } else {
                frames.pop();
                let e = self.parent_edge[v];
                if e != NONE {
                    self.remove_back_edges(e);
                    let (u, upos) = *frames.last().expect("tree edge has a parent frame");
                    if !self.integrate(u, upos, e) {
                        return false;
                    }
                    frames.last_mut().unwrap().1 += 1;
                }
            }
        }
        true
    }

    fn integrate(&mut self, v: usize, pos: usize, ei: usize) -> bool {
        if self.lowpt[ei] < self.height[v] {
            let e = self.parent_edge[v];
            if pos == 0 {
                self.lowpt_edge[e] = self.lowpt_edge[ei];
            } else if !self.add_constraints(ei, e) {
                return false;
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let mut q = self.stack.pop().expect("return edges of ei are on the stack");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.unwrap();
            if self.lowpt[q_low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    self.refs[p.right.low.unwrap()] = q.right.high.unwrap();
                }
                p.right.low = q.right.low;
            } else {
                self.refs[q_low] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(prl) = p.right.low {
                self.refs[prl] = q.right.high.unwrap_or(NONE);
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pll) = p.left.low {
                self.refs[pll] = q.left.high.unwrap_or(NONE);
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.dst[h] != u {
                    break;
                }
                p.left.high = opt(self.refs[h]);
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low.unwrap_or(NONE);
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.dst[h] != u {
                    break;
                }
                p.right.high = opt(self.refs[h]);
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low.unwrap_or(NONE);
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            let top = self.stack.last().expect("e has a return edge");
            let hl = top.left.high;
            let hr = top.right.high;
            self.refs[e] = match (hl, hr) {
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => l,
                (Some(l), None) => l,
                (_, Some(r)) => r,
                (None, None) => NONE,
            };
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        let mut chain = vec![e];
        let mut cur = e;
        while self.refs[cur] != NONE {
            cur = self.refs[cur];
            chain.push(cur);
        }
        for i in (0..chain.len() - 1).rev() {
            let (a, b) = (chain[i], chain[i + 1]);
            self.side[a] *= self.side[b];
            self.refs[a] = NONE;
        }
        self.side[e]
    }

    fn embed(mut self) -> Vec<Vec<Dart>> {
        let n = self.g.num_vertices();
        let m = self.g.num_edges();
        for e in 0..m {
            let s = self.sign(e);
            self.nesting[e] *= s;
        }
        for v in 0..n {
            let nesting = &self.nesting;
            self.out[v].sort_by_key(|&e| nesting[e]);
        }
        let g = self.g;
        let dart_from = |e: usize, v: usize| if g.edge(EdgeId(e)).u == v { 2 * e } else { 2 * e + 1 };
        let mut cw = vec![NONE; 2 * m];
        let mut ccw = vec![NONE; 2 * m];
        let mut first = vec![NONE; n];
        for v in 0..n {
            let mut prev = NONE;
            for &e in &self.out[v] {
                let d = dart_from(e, v);
                if prev == NONE {
                    cw[d] = d;
                    ccw[d] = d;
                    first[v] = d;
                } else {
                    insert_cw(&mut cw, &mut ccw, d, prev);
                }
                prev = d;
            }
        }
        let mut left_ref = vec![NONE; n];
        let mut right_ref = vec![NONE; n];
        for &root in &self.roots {
            let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(frame) = frames.last_mut() {
                let (v, pos) = *frame;
                if pos == self.out[v].len() {
                    frames.pop();
                    continue;
                }
                frame.1 += 1;
                let ei = self.out[v][pos];
                let w = self.dst[ei];
                let d = dart_from(ei, w);
                if self.parent_edge[w] == ei {
                    if first[w] == NONE {
                        cw[d] = d;
                        ccw[d] = d;
                    } else {
                        let reference = ccw[first[w]];
                        insert_cw(&mut cw, &mut ccw, d, reference);
                    }
                    first[w] = d;
                    left_ref[v] = dart_from(ei, v);
                    right_ref[v] = dart_from(ei, v);
                    frames.push((w, 0));
                } else if self.side[ei] == 1 {
                    insert_cw(&mut cw, &mut ccw, d, right_ref[w]);
                } else {
                    let r = left_ref[w];
                    let reference = ccw[r];
                    insert_cw(&mut cw, &mut ccw, d, reference);
                    if r == first[w] {
                        first[w] = d;
                    }
                    left_ref[w] = d;
                }
            }
        }
        (0..n)
            .map(|v| {
                let mut row = Vec::with_capacity(self.g.degree(v));
                if first[v] != NONE {
                    let mut d = first[v];
                    loop {
                        row.push(d);
                        d = cw[d];
                        if d == first[v] {
                            break;
                        }
                    }
                }
                row
            })
            .collect()
    }
}

fn opt(x: usize) -> Option<usize> {
    if x == NONE {
        None
    } else {
        Some(x)
    }
}

fn insert_cw(cw: &mut [usize], ccw: &mut [usize], d: Dart, reference: Dart) {
    let after = cw[reference];
    cw[reference] = d;
    cw[d] = after;
    ccw[after] = d;
    ccw[d] = reference;
}

fn run(g: &Graph) -> Option<LrState<'_>> {
    let n = g.num_vertices();
    if n > 2 && g.num_edges() > 3 * n - 6 {
        return None;
    }
    let mut state = LrState::new(g);
    for v in 0..n {
        if state.height[v] == NONE {
            state.orient(v);
        }
    }
    for v in 0..n {
        let nesting = &state.nesting;
        state.out[v].sort_by_key(|&e| nesting[e]);
    }
    let roots = state.roots.clone();
    for root in roots {
        if !state.test(root) {
            return None;
        }
    }
    Some(state)
}

/// Planarity verdict without building an embedding.
pub fn is_planar(g: &Graph) -> bool {
    run(g).is_some()
}

/// Rotation system of a planar drawing of `g`, or `NonPlanar`.
pub fn planar_embed(g: &Graph) -> Result<PlanarEmbedding> {
    let state = run(g).ok_or(Error::NonPlanar)?;
    let rotation = state.embed();
    let emb = PlanarEmbedding::from_darts(g.clone(), rotation)?;
    debug_assert!(emb.is_planar(), "LR embedding violates Euler's formula");
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn complete(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        build_graph(n, &pairs).unwrap()
    }

    #[test]
    fn k4_embeds_with_four_faces() {
        let emb = planar_embed(&complete(4)).unwrap();
        assert!(emb.is_planar());
        assert_eq!(emb.faces().len(), 4);
    }

    #[test]
    fn k5_and_k33_are_nonplanar() {
        assert_eq!(planar_embed(&complete(5)).unwrap_err(), Error::NonPlanar);
        let pairs: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        let k33 = build_graph(6, &pairs).unwrap();
        assert_eq!(planar_embed(&k33).unwrap_err(), Error::NonPlanar);
        let mut sub = pairs.clone();
        sub.pop();
        assert!(is_planar(&build_graph(6, &sub).unwrap()));
    }

    #[test]
    fn grid_and_wheel_embed() {
        let side = 7;
        let mut edges = Vec::new();
        for r in 0..side {
            for c in 0..side {
                let v = r * side + c;
                if c + 1 < side {
                    edges.push((v, v + 1));
                }
                if r + 1 < side {
                    edges.push((v, v + side));
                }
            }
        }
        let emb = planar_embed(&build_graph(side * side, &edges).unwrap()).unwrap();
        assert_eq!(emb.faces().len(), 2 + edges.len() - side * side);
        let mut wheel: Vec<_> = (1..9).map(|i| (0, i)).collect();
        wheel.extend((1..9).map(|i| (i, i % 8 + 1)));
        let emb = planar_embed(&build_graph(9, &wheel).unwrap()).unwrap();
        assert_eq!(emb.faces().len(), 9);
    }

    #[test]
    fn long_path_does_not_overflow() {
        let n = 200_000;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let emb = planar_embed(&build_graph(n, &edges).unwrap()).unwrap();
        assert_eq!(emb.faces().len(), 1);
    }
}
