//! Triconnected components of biconnected graphs and the tree they form.

mod split;

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{biconnected_decompose, is_planar, Edge, EdgeId, EdgeKind, Graph};
use split::SplitKind;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Triconnected,
    Cycle,
    Bond,
}

/// Where a component edge comes from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeOrigin {
    Real(EdgeId),
    /// Virtual edge; both copies carry the same id.
    Virtual(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct VirtualLink {
    pub peer: usize,
    pub peer_edge: EdgeId,
}

#[derive(Clone, Debug)]
pub struct TriconComponent {
    pub kind: ComponentKind,
    /// Local graph; virtual edges are flagged `EdgeKind::Virtual`.
    pub graph: Graph,
    /// Local vertex to source vertex, ascending.
    pub vertices: Vec<usize>,
    /// Origin of every local edge.
    pub origin: Vec<EdgeOrigin>,
    /// Local virtual edge to its copy in the neighbouring component.
    pub virtual_links: BTreeMap<EdgeId, VirtualLink>,
}

impl TriconComponent {
    /// Local index of source vertex `v`, if present.
    pub fn local_vertex(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn num_real_edges(&self) -> usize {
        self.origin.iter().filter(|o| matches!(o, EdgeOrigin::Real(_))).count()
    }

    /// Endpoints of a local edge as source vertices.
    pub fn source_endpoints(&self, e: EdgeId) -> (usize, usize) {
        let (a, b) = self.graph.endpoints(e);
        (self.vertices[a], self.vertices[b])
    }
}

/// Splits a normal biconnected graph with at least three vertices into its
/// triconnected components.
pub fn triconnected_decompose(g: &Graph) -> Result<Vec<TriconComponent>> {
    if g.num_vertices() < 3 {
        return Err(Error::InvalidArgument("decomposition needs at least three vertices".into()));
    }
    let mut pairs: Vec<(usize, usize)> =
        g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
    pairs.sort_unstable();
    if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEdge(w[0].0, w[0].1));
    }
    let blocks = biconnected_decompose(g).map_err(|_| Error::NotBiconnected)?;
    if blocks.blocks.len() != 1 {
        return Err(Error::NotBiconnected);
    }
    let raw = split::split_components(g);
    Ok(assemble_components(&raw))
}

fn assemble_components(raw: &split::SplitComponents) -> Vec<TriconComponent> {
    let mut location: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); raw.ends.len()];
    let mut out = Vec::with_capacity(raw.components.len());
    for (c, (kind, edges)) in raw.components.iter().enumerate() {
        let mut vertices: Vec<usize> = edges.iter().flat_map(|&e| raw.ends[e]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let local = |x: usize| vertices.binary_search(&x).unwrap();
        let mut local_edges = Vec::with_capacity(edges.len());
        let mut origin = Vec::with_capacity(edges.len());
        for (i, &e) in edges.iter().enumerate() {
            let [a, b] = raw.ends[e];
            let virt = e >= raw.num_real;
            local_edges.push(Edge {
                u: local(a),
                v: local(b),
                kind: if virt { EdgeKind::Virtual } else { EdgeKind::Real },
            });
            origin.push(if virt { EdgeOrigin::Virtual(e - raw.num_real) } else { EdgeOrigin::Real(EdgeId(e)) });
            if virt {
                location[e].push((c, EdgeId(i)));
            }
        }
        let kind = match kind {
            SplitKind::Bond => ComponentKind::Bond,
            SplitKind::Cycle => ComponentKind::Cycle,
            SplitKind::Rigid => ComponentKind::Triconnected,
        };
        let graph = Graph::from_edges(vertices.len(), local_edges, kind == ComponentKind::Bond)
            .expect("split components are well formed");
        out.push(TriconComponent { kind, graph, vertices, origin, virtual_links: BTreeMap::new() });
    }
    for copies in &location {
        if let [(c1, e1), (c2, e2)] = copies[..] {
            out[c1].virtual_links.insert(e1, VirtualLink { peer: c2, peer_edge: e2 });
            out[c2].virtual_links.insert(e2, VirtualLink { peer: c1, peer_edge: e1 });
        }
    }
    out
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum RootPolicy {
    /// Lowest-id component that is not a multiple bond.
    #[default]
    PreferNonBond,
}

/// Link from a tree node to its parent.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ParentLink {
    pub parent: usize,
    /// The shared virtual edge, in the parent's local ids.
    pub edge_in_parent: EdgeId,
    /// The shared virtual edge, in the child's local ids.
    pub edge_in_child: EdgeId,
}

#[derive(Clone, Debug)]
pub struct TriconTree {
    pub nodes: Vec<TriconComponent>,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
    pub parent: Vec<Option<ParentLink>>,
    pub children: Vec<Vec<usize>>,
}

pub fn build_tricon_tree(components: Vec<TriconComponent>, policy: RootPolicy) -> Result<TriconTree> {
    let n = components.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no components".into()));
    }
    let mut edges = Vec::new();
    for (c, comp) in components.iter().enumerate() {
        for (&e, link) in &comp.virtual_links {
            if !matches!(comp.origin.get(e.0), Some(EdgeOrigin::Virtual(_))) {
                return Err(Error::InconsistentPairing(format!("component {c} edge {} is not virtual", e.0)));
            }
            let back = components
                .get(link.peer)
                .and_then(|p| p.virtual_links.get(&link.peer_edge))
                .copied();
            if back != Some(VirtualLink { peer: c, peer_edge: e }) || link.peer == c {
                return Err(Error::InconsistentPairing(format!("component {c} edge {} has no peer copy", e.0)));
            }
            if c < link.peer {
                edges.push((c, link.peer));
            }
        }
        let virtual_count = comp.origin.iter().filter(|o| matches!(o, EdgeOrigin::Virtual(_))).count();
        if virtual_count != comp.virtual_links.len() {
            return Err(Error::InconsistentPairing(format!("component {c} has unpaired virtual edges")));
        }
    }
    if edges.len() + 1 != n {
        return Err(Error::InconsistentPairing("virtual edges do not form a tree".into()));
    }
    let root = match policy {
        RootPolicy::PreferNonBond => {
            components.iter().position(|c| c.kind != ComponentKind::Bond).unwrap_or(0)
        }
    };
    let mut parent: Vec<Option<ParentLink>> = vec![None; n];
    let mut children = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(c) = queue.pop_front() {
        for (&e, link) in &components[c].virtual_links {
            if seen[link.peer] {
                continue;
            }
            seen[link.peer] = true;
            parent[link.peer] = Some(ParentLink { parent: c, edge_in_parent: e, edge_in_child: link.peer_edge });
            children[c].push(link.peer);
            queue.push_back(link.peer);
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InconsistentPairing("virtual edges do not form a tree".into()));
    }
    Ok(TriconTree { nodes: components, edges, root, parent, children })
}

impl TriconTree {
    /// Nodes with every parent before its children.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut queue = VecDeque::from([self.root]);
        while let Some(c) = queue.pop_front() {
            order.push(c);
            queue.extend(self.children[c].iter().copied());
        }
        order
    }

    /// Merges all components along their virtual edges. Returns the real
    /// edges as `(source edge id, u, v)` with source vertex ids, sorted.
    pub fn merged_edges(&self) -> Vec<(EdgeId, usize, usize)> {
        let mut out: Vec<(EdgeId, usize, usize)> = self
            .nodes
            .iter()
            .flat_map(|c| {
                c.origin.iter().enumerate().filter_map(move |(i, o)| match o {
                    EdgeOrigin::Real(id) => {
                        let (a, b) = c.source_endpoints(EdgeId(i));
                        Some((*id, a.min(b), a.max(b)))
                    }
                    EdgeOrigin::Virtual(_) => None,
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tricon {\n");
        for (i, c) in self.nodes.iter().enumerate() {
            let kind = match c.kind {
                ComponentKind::Triconnected => "R",
                ComponentKind::Cycle => "S",
                ComponentKind::Bond => "P",
            };
            let _ = writeln!(
                s,
                "  n{i} [label=\"{kind} {}v/{}e\"{}];",
                c.graph.num_vertices(),
                c.graph.num_edges(),
                if i == self.root { ", shape=box" } else { "" }
            );
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    Planar,
    SmallNonplanar,
    MultipleBond,
}

/// Default bound on the vertex count of nonplanar components (covers K5).
pub const DEFAULT_SIZE_BOUND: usize = 5;

pub fn classify_component(c: &TriconComponent, size_bound: usize) -> Result<ComponentClass> {
    match c.kind {
        ComponentKind::Bond => Ok(ComponentClass::MultipleBond),
        ComponentKind::Cycle => Ok(ComponentClass::Planar),
        ComponentKind::Triconnected if is_planar(&c.graph) => Ok(ComponentClass::Planar),
        ComponentKind::Triconnected if c.graph.num_vertices() <= size_bound => {
            Ok(ComponentClass::SmallNonplanar)
        }
        ComponentKind::Triconnected => Err(Error::UnsupportedTopology(format!(
            "nonplanar triconnected component with {} vertices exceeds the bound {size_bound}",
            c.graph.num_vertices()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    }

    fn kinds(comps: &[TriconComponent]) -> Vec<(ComponentKind, usize)> {
        let mut k: Vec<_> = comps.iter().map(|c| (c.kind, c.graph.num_edges())).collect();
        k.sort();
        k
    }

    #[test]
    fn k4_is_one_component() {
        let g = build_graph(4, &complete(4)).unwrap();
        let comps = triconnected_decompose(&g).unwrap();
        assert_eq!(kinds(&comps), vec![(ComponentKind::Triconnected, 6)]);
        let tree = build_tricon_tree(comps, RootPolicy::PreferNonBond).unwrap();
        assert_eq!(tree.root, 0);
        assert!(tree.edges.is_empty());
    }

    #[test]
    fn cycle_is_one_component() {
        let edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let comps = triconnected_decompose(&build_graph(6, &edges).unwrap()).unwrap();
        assert_eq!(kinds(&comps), vec![(ComponentKind::Cycle, 6)]);
        assert_eq!(classify_component(&comps[0], 5).unwrap(), ComponentClass::Planar);
    }

    #[test]
    fn square_with_diagonal() {
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let comps = triconnected_decompose(&g).unwrap();
        assert_eq!(
            kinds(&comps),
            vec![(ComponentKind::Cycle, 3), (ComponentKind::Cycle, 3), (ComponentKind::Bond, 3)]
        );
        let tree = build_tricon_tree(comps, RootPolicy::PreferNonBond).unwrap();
        assert_ne!(tree.nodes[tree.root].kind, ComponentKind::Bond);
        assert_eq!(tree.merged_edges().len(), 5);
        assert!(tree.to_dot().contains("--"));
    }

    #[test]
    fn two_k5_glued_on_an_edge() {
        let mut edges = complete(5);
        edges.extend(complete(5).into_iter().filter(|&p| p != (0, 1)).map(|(a, b)| {
            let m = |x: usize| if x < 2 { x } else { x + 3 };
            (m(a), m(b))
        }));
        let g = build_graph(8, &edges).unwrap();
        let comps = triconnected_decompose(&g).unwrap();
        assert_eq!(
            kinds(&comps),
            vec![
                (ComponentKind::Triconnected, 10),
                (ComponentKind::Triconnected, 10),
                (ComponentKind::Bond, 3)
            ]
        );
        for c in &comps {
            let class = classify_component(c, DEFAULT_SIZE_BOUND).unwrap();
            if c.kind == ComponentKind::Triconnected {
                assert_eq!(class, ComponentClass::SmallNonplanar);
                assert!(matches!(classify_component(c, 4), Err(Error::UnsupportedTopology(_))));
            } else {
                assert_eq!(class, ComponentClass::MultipleBond);
            }
        }
    }

    #[test]
    fn rejects_non_biconnected_input() {
        let g = build_graph(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(triconnected_decompose(&g).unwrap_err(), Error::NotBiconnected);
    }

    #[test]
    fn rejects_broken_pairing() {
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let mut comps = triconnected_decompose(&g).unwrap();
        let first = *comps[0].virtual_links.keys().next().unwrap();
        comps[0].virtual_links.remove(&first);
        assert!(matches!(
            build_tricon_tree(comps, RootPolicy::PreferNonBond),
            Err(Error::InconsistentPairing(_))
        ));
    }
}
