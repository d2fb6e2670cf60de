//! Linear-time split-component search (Hopcroft–Tarjan path search with the
//! Gutwenger–Mutzel corrections) followed by merging of adjacent cycles and
//! adjacent bonds. Input is a simple biconnected graph; all recursion is
//! replaced by explicit frames.

use crate::graph::Graph;

const NIL: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SplitKind {
    Bond,
    Cycle,
    Rigid,
}

/// Raw result: edges `0..num_real` are the input edges, the rest are
/// virtual. Every virtual edge lies in exactly two components.
#[derive(Debug)]
pub(crate) struct SplitComponents {
    pub num_real: usize,
    pub ends: Vec<[usize; 2]>,
    pub components: Vec<(SplitKind, Vec<usize>)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arc {
    Unseen,
    Tree,
    Frond,
}

/// Pool of cyclic doubly linked lists. Nodes `0..=n` are list heads (one per
/// vertex), node `n + 1 + e` stands for edge `e`.
struct ListPool {
    links: Vec<[usize; 2]>,
    base: usize,
}

impl ListPool {
    fn new(heads: usize, edges: usize) -> Self {
        ListPool { links: (0..heads + edges).map(|u| [u, u]).collect(), base: heads }
    }

    fn ensure(&mut self, e: usize) {
        while self.links.len() <= self.base + e {
            let u = self.links.len();
            self.links.push([u, u]);
        }
    }

    fn push_back(&mut self, head: usize, e: usize) {
        self.ensure(e);
        let u = self.base + e;
        let last = self.links[head][0];
        self.links[last][1] = u;
        self.links[u] = [last, head];
        self.links[head][0] = u;
    }

    fn push_front(&mut self, head: usize, e: usize) {
        self.ensure(e);
        let u = self.base + e;
        let first = self.links[head][1];
        self.links[head][1] = u;
        self.links[u] = [head, first];
        self.links[first][0] = u;
    }

    /// Puts `e` in the slot currently held by `old` and unlinks `old`.
    /// Returns false when `old` was in no list.
    fn replace(&mut self, old: usize, e: usize) -> bool {
        self.ensure(e);
        let o = self.base + old;
        let [a, b] = self.links[o];
        if a == o {
            return false;
        }
        let u = self.base + e;
        self.links[a][1] = u;
        self.links[b][0] = u;
        self.links[u] = [a, b];
        self.links[o] = [o, o];
        true
    }

    fn unlink(&mut self, e: usize) {
        let u = self.base + e;
        if u >= self.links.len() {
            return;
        }
        let [a, b] = self.links[u];
        if a == u {
            return;
        }
        self.links[a][1] = b;
        self.links[b][0] = a;
        self.links[u] = [u, u];
    }

    fn first(&self, head: usize) -> Option<usize> {
        let f = self.links[head][1];
        (f != head).then(|| f - self.base)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Triple {
    h: usize,
    a: usize,
    b: usize,
}

const EOS: Triple = Triple { h: 0, a: 0, b: 0 };

struct PathSearch {
    // vertices are numbered 1..=n by their path-search number
    ends: Vec<[usize; 2]>,
    arc: Vec<Arc>,
    alive: Vec<bool>,
    start: Vec<bool>,
    adj: Vec<Vec<usize>>,
    father: Vec<usize>,
    tree_arc: Vec<usize>,
    nd: Vec<usize>,
    low1: Vec<usize>,
    low2: Vec<usize>,
    degree: Vec<usize>,
    unvisited_tree: Vec<usize>,
    out_lists: ListPool,
    high_lists: ListPool,
    tstack: Vec<Triple>,
    estack: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl PathSearch {
    fn high(&self, v: usize) -> usize {
        match self.high_lists.first(v) {
            Some(e) => self.ends[e][0],
            None => 0,
        }
    }

    fn new_component(&mut self) -> usize {
        self.components.push(Vec::new());
        self.components.len() - 1
    }

    fn new_virtual(&mut self, comp: usize, u: usize, v: usize) -> usize {
        let e = self.ends.len();
        self.ends.push([u, v]);
        self.arc.push(Arc::Unseen);
        self.alive.push(false);
        self.start.push(false);
        self.components[comp].push(e);
        e
    }

    /// Moves `e` into component `comp`, removing it from the working graph.
    fn take(&mut self, comp: usize, e: usize) {
        self.out_lists.unlink(e);
        self.high_lists.unlink(e);
        if self.alive[e] {
            self.alive[e] = false;
            let [x, y] = self.ends[e];
            self.degree[x] -= 1;
            self.degree[y] -= 1;
        }
        self.components[comp].push(e);
    }

    fn place(&mut self, e: usize, arc: Arc) {
        let [x, y] = self.ends[e];
        self.arc[e] = arc;
        self.alive[e] = true;
        self.degree[x] += 1;
        self.degree[y] += 1;
        self.out_lists.push_back(x, e);
    }

    fn first_out_target(&self, w: usize) -> usize {
        self.out_lists.first(w).map_or(0, |e| self.ends[e][1])
    }

    fn run(&mut self) {
        let root = 1;
        self.tstack.push(EOS);
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, i)) = frames.last() {
            if i == self.adj[v].len() {
                frames.pop();
                if let Some(&(u, j)) = frames.last() {
                    let e = self.adj[u][j];
                    self.after_tree_arc(u, e, v);
                    frames.last_mut().unwrap().1 += 1;
                }
                continue;
            }
            let e = self.adj[v][i];
            let w = self.ends[e][1];
            if self.arc[e] == Arc::Tree {
                self.unvisited_tree[v] -= 1;
                if self.start[e] {
                    let mut y = 0;
                    let top = *self.tstack.last().unwrap();
                    if top.a > self.low1[w] {
                        let mut b = 0;
                        while self.tstack.last().unwrap().a > self.low1[w] {
                            let t = self.tstack.pop().unwrap();
                            y = y.max(t.h);
                            b = t.b;
                        }
                        self.tstack.push(Triple { h: y.max(w + self.nd[w] - 1), a: self.low1[w], b });
                    } else {
                        self.tstack.push(Triple { h: w + self.nd[w] - 1, a: self.low1[w], b: v });
                    }
                    self.tstack.push(EOS);
                }
                frames.push((w, 0));
            } else {
                if self.start[e] {
                    let top = *self.tstack.last().unwrap();
                    if top.a > w {
                        let mut y = 0;
                        let mut b = 0;
                        while self.tstack.last().unwrap().a > w {
                            let t = self.tstack.pop().unwrap();
                            y = y.max(t.h);
                            b = t.b;
                        }
                        self.tstack.push(Triple { h: y, a: w, b });
                    } else {
                        self.tstack.push(Triple { h: v, a: w, b: v });
                    }
                }
                self.estack.push(e);
                frames.last_mut().unwrap().1 += 1;
            }
        }
        if !self.estack.is_empty() {
            let c = self.new_component();
            while let Some(e) = self.estack.pop() {
                self.take(c, e);
            }
        }
    }

    fn after_tree_arc(&mut self, v: usize, e: usize, child: usize) {
        let mut w = child;
        self.estack.push(self.tree_arc[w]);

        // separation pairs of type 2
        loop {
            if v == 1 {
                break;
            }
            let top = *self.tstack.last().unwrap();
            let case1 = top.a == v;
            let case2 = self.degree[w] == 2 && self.first_out_target(w) > w;
            if !(case1 || case2) {
                break;
            }
            if case1 && self.father[top.b] == top.a {
                self.tstack.pop();
                continue;
            }
            let mut e_ab = NIL;
            let x;
            let mut e_virt;
            if case2 {
                let e1 = self.estack.pop().unwrap();
                let e2 = self.estack.pop().unwrap();
                x = self.ends[e2][1];
                let c = self.new_component();
                self.take(c, e1);
                self.take(c, e2);
                e_virt = self.new_virtual(c, v, x);
                if let Some(&top_e) = self.estack.last() {
                    if self.ends[top_e] == [x, v] {
                        e_ab = self.estack.pop().unwrap();
                    }
                }
            } else {
                let Triple { h, a, b } = self.tstack.pop().unwrap();
                let c = self.new_component();
                while let Some(&xy) = self.estack.last() {
                    let [s, t] = self.ends[xy];
                    if !(a <= s && s <= h && a <= t && t <= h) {
                        break;
                    }
                    self.estack.pop();
                    if (s == a && t == b) || (s == b && t == a) {
                        e_ab = xy;
                    } else {
                        self.take(c, xy);
                    }
                }
                e_virt = self.new_virtual(c, a, b);
                x = b;
            }
            if e_ab != NIL {
                let c = self.new_component();
                self.take(c, e_ab);
                self.components[c].push(e_virt);
                e_virt = self.new_virtual(c, v, x);
            }
            self.estack.push(e_virt);
            self.place(e_virt, Arc::Tree);
            self.father[x] = v;
            self.tree_arc[x] = e_virt;
            w = x;
        }

        // separation pair of type 1
        if self.low2[w] >= v
            && self.low1[w] < v
            && (self.father[v] != 1 || self.unvisited_tree[v] >= 1)
        {
            let c = self.new_component();
            let (lo, hi) = (w, w + self.nd[w]);
            while let Some(&xy) = self.estack.last() {
                let [s, t] = self.ends[xy];
                if !((lo <= s && s < hi) || (lo <= t && t < hi)) {
                    break;
                }
                self.estack.pop();
                self.take(c, xy);
            }
            let z = self.low1[w];
            let mut e_virt = self.new_virtual(c, v, z);
            let mut inherited_high = false;
            if let Some(&top_e) = self.estack.last() {
                if self.ends[top_e] == [v, z] {
                    self.estack.pop();
                    let bond = self.new_component();
                    let old = e_virt;
                    e_virt = self.new_virtual(bond, v, z);
                    inherited_high = self.high_lists.replace(top_e, e_virt);
                    self.take(bond, top_e);
                    self.components[bond].push(old);
                }
            }
            if z != self.father[v] {
                self.estack.push(e_virt);
                self.place(e_virt, Arc::Frond);
                if !inherited_high && self.high(z) < v {
                    self.high_lists.push_front(z, e_virt);
                }
            } else {
                let bond = self.new_component();
                self.high_lists.unlink(e_virt);
                self.components[bond].push(e_virt);
                let ta = self.tree_arc[v];
                self.take(bond, ta);
                let e_new = self.new_virtual(bond, z, v);
                self.place(e_new, Arc::Tree);
                self.tree_arc[v] = e_new;
            }
        }

        if self.start[e] {
            while self.tstack.pop().is_some_and(|t| t != EOS) {}
        }
        while let Some(&t) = self.tstack.last() {
            if t == EOS || t.a == v || t.b == v || self.high(v) <= t.h {
                break;
            }
            self.tstack.pop();
        }
    }
}

/// Split components of a simple biconnected graph with at least 3 vertices,
/// with adjacent cycles and adjacent bonds already merged.
pub(crate) fn split_components(g: &Graph) -> SplitComponents {
    let n = g.num_vertices();
    let m = g.num_edges();
    assert!(n >= 3, "split component search needs at least three vertices");

    // First DFS: numbering, lowpoints, subtree sizes, arc orientation.
    let mut number = vec![0usize; n];
    let mut father0 = vec![NIL; n];
    let mut low1 = vec![0usize; n];
    let mut low2 = vec![0usize; n];
    let mut nd = vec![1usize; n];
    let mut arc = vec![Arc::Unseen; m];
    let mut ends0 = vec![[0usize; 2]; m];
    let mut count = 0;
    let mut frames: Vec<(usize, usize)> = vec![(0, 0)];
    count += 1;
    number[0] = count;
    low1[0] = count;
    low2[0] = count;
    while let Some(frame) = frames.last_mut() {
        let (v, pos) = *frame;
        if pos < g.degree(v) {
            frame.1 += 1;
            let (w, e) = g.neighbors(v)[pos];
            let e = e.index();
            if arc[e] != Arc::Unseen {
                continue;
            }
            ends0[e] = [v, w];
            if number[w] == 0 {
                arc[e] = Arc::Tree;
                father0[w] = v;
                count += 1;
                number[w] = count;
                low1[w] = count;
                low2[w] = count;
                frames.push((w, 0));
            } else {
                arc[e] = Arc::Frond;
                let nw = number[w];
                if nw < low1[v] {
                    low2[v] = low1[v];
                    low1[v] = nw;
                } else if nw > low1[v] {
                    low2[v] = low2[v].min(nw);
                }
            }
        } else {
            frames.pop();
            if let Some(&(u, _)) = frames.last() {
                if low1[v] < low1[u] {
                    low2[u] = low1[u].min(low2[v]);
                    low1[u] = low1[v];
                } else if low1[v] == low1[u] {
                    low2[u] = low2[u].min(low2[v]);
                } else {
                    low2[u] = low2[u].min(low1[v]);
                }
                nd[u] += nd[v];
            }
        }
    }

    // Acceptable adjacency structure: out-arcs ordered by phi.
    let mut adj0: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut keyed: Vec<(usize, usize)> = (0..m)
        .map(|e| {
            let [v, w] = ends0[e];
            let phi = match arc[e] {
                Arc::Frond => 3 * number[w] + 1,
                _ if low2[w] < number[v] => 3 * low1[w],
                _ => 3 * low1[w] + 2,
            };
            (phi, e)
        })
        .collect();
    keyed.sort_unstable();
    for &(_, e) in &keyed {
        adj0[ends0[e][0]].push(e);
    }

    // Second DFS: path-search numbering and path starts.
    let mut newnum = vec![0usize; n];
    let mut start = vec![false; m];
    let mut num_count = n;
    let mut new_path = true;
    let mut frond_order: Vec<usize> = Vec::new();
    let mut frames: Vec<(usize, usize)> = vec![(0, 0)];
    newnum[0] = num_count - nd[0] + 1;
    while let Some(frame) = frames.last_mut() {
        let (v, pos) = *frame;
        if pos == adj0[v].len() {
            frames.pop();
            if !frames.is_empty() {
                num_count -= 1;
            }
            continue;
        }
        frame.1 += 1;
        let e = adj0[v][pos];
        let w = ends0[e][1];
        if new_path {
            new_path = false;
            start[e] = true;
        }
        if arc[e] == Arc::Tree {
            newnum[w] = num_count - nd[w] + 1;
            frames.push((w, 0));
        } else {
            frond_order.push(e);
            new_path = true;
        }
    }
    let mut old_to_new = vec![0usize; n + 1];
    for v in 0..n {
        old_to_new[number[v]] = newnum[v];
    }

    // Relabel everything by path-search number (1-based).
    let mut ends: Vec<[usize; 2]> = ends0.iter().map(|&[a, b]| [newnum[a], newnum[b]]).collect();
    ends.reserve(2 * m);
    let mut ps = PathSearch {
        arc: arc.clone(),
        alive: vec![true; m],
        start,
        adj: vec![Vec::new(); n + 1],
        father: vec![0; n + 1],
        tree_arc: vec![NIL; n + 1],
        nd: vec![0; n + 1],
        low1: vec![0; n + 1],
        low2: vec![0; n + 1],
        degree: vec![0; n + 1],
        unvisited_tree: vec![0; n + 1],
        out_lists: ListPool::new(n + 1, 3 * m),
        high_lists: ListPool::new(n + 1, 3 * m),
        tstack: Vec::new(),
        estack: Vec::new(),
        components: Vec::new(),
        ends: Vec::new(),
    };
    for v in 0..n {
        let x = newnum[v];
        ps.nd[x] = nd[v];
        ps.low1[x] = old_to_new[low1[v]];
        ps.low2[x] = old_to_new[low2[v]];
        ps.degree[x] = g.degree(v);
        ps.father[x] = if father0[v] == NIL { 0 } else { newnum[father0[v]] };
        ps.adj[x] = adj0[v].clone();
        for &e in &adj0[v] {
            ps.out_lists.push_back(x, e);
            if arc[e] == Arc::Tree {
                ps.unvisited_tree[x] += 1;
                ps.tree_arc[ends[e][1]] = e;
            }
        }
    }
    for &e in &frond_order {
        ps.high_lists.push_back(ends[e][1], e);
    }
    ps.ends = std::mem::take(&mut ends);
    ps.run();

    // Back to source vertex ids.
    let mut source = vec![0usize; n + 1];
    for v in 0..n {
        source[newnum[v]] = v;
    }
    let ends: Vec<[usize; 2]> = ps.ends.iter().map(|&[a, b]| [source[a], source[b]]).collect();
    let raw: Vec<Vec<usize>> = std::mem::take(&mut ps.components);
    merge(m, ends, raw)
}

fn classify(ends: &[[usize; 2]], edges: &[usize]) -> SplitKind {
    let mut vertices: Vec<usize> = edges.iter().flat_map(|&e| ends[e]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.len() == 2 {
        SplitKind::Bond
    } else if vertices.len() == edges.len() {
        SplitKind::Cycle
    } else {
        SplitKind::Rigid
    }
}

fn merge(num_real: usize, ends: Vec<[usize; 2]>, raw: Vec<Vec<usize>>) -> SplitComponents {
    let kinds: Vec<SplitKind> = raw.iter().map(|c| classify(&ends, c)).collect();
    let mut owners = vec![[NIL; 2]; ends.len()];
    for (c, edges) in raw.iter().enumerate() {
        for &e in edges {
            let slot = if owners[e][0] == NIL { 0 } else { 1 };
            owners[e][slot] = c;
        }
    }
    let mut parent: Vec<usize> = (0..raw.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut dropped = vec![false; ends.len()];
    for e in num_real..ends.len() {
        let [a, b] = owners[e];
        debug_assert!(a != NIL && b != NIL, "virtual edge must join two split components");
        if kinds[a] == kinds[b] && kinds[a] != SplitKind::Rigid {
            dropped[e] = true;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut slot = vec![NIL; raw.len()];
    let mut components: Vec<(SplitKind, Vec<usize>)> = Vec::new();
    for c in 0..raw.len() {
        let r = find(&mut parent, c);
        if slot[r] == NIL {
            slot[r] = components.len();
            components.push((kinds[c], Vec::new()));
        }
        let target = slot[r];
        components[target].1.extend(raw[c].iter().copied().filter(|&e| !dropped[e]));
    }
    for comp in &mut components {
        comp.1.sort_unstable();
    }
    SplitComponents { num_real, ends, components }
}
