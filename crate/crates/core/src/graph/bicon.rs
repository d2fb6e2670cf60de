use super::{Edge, EdgeId, Graph};
use crate::error::{Error, Result};

/// One biconnected component with its maps back to the source graph.
#[derive(Clone, Debug)]
pub struct Block {
    pub graph: Graph,
    /// Local vertex index to source vertex, ascending.
    pub vertices: Vec<usize>,
    /// Local edge id to source edge id, ascending.
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct BiconnectedDecomposition {
    pub blocks: Vec<Block>,
    pub articulation_points: Vec<usize>,
    /// Block tree rooted at block 0: parent block and the shared vertex.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl BiconnectedDecomposition {
    /// Blocks in an order where every parent precedes its children.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut children = vec![Vec::new(); self.blocks.len()];
        let mut roots = Vec::new();
        for (b, p) in self.parent.iter().enumerate() {
            match p {
                Some((q, _)) => children[*q].push(b),
                None => roots.push(b),
            }
        }
        let mut order = Vec::with_capacity(self.blocks.len());
        let mut queue = std::collections::VecDeque::from(roots);
        while let Some(b) = queue.pop_front() {
            order.push(b);
            queue.extend(children[b].iter().copied());
        }
        order
    }
}

/// Splits a connected graph into biconnected components (Tarjan's
/// lowpoint method, iterative).
pub fn biconnected_decompose(g: &Graph) -> Result<BiconnectedDecomposition> {
    let n = g.num_vertices();
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut block_edges: Vec<Vec<EdgeId>> = Vec::new();
    let mut time = 0;
    // (vertex, edge used to enter it, next adjacency position)
    let mut frames: Vec<(usize, Option<EdgeId>, usize)> = Vec::new();

    if n > 0 && g.num_edges() > 0 {
        let root = 0;
        let mut root_children = 0;
        disc[root] = time;
        low[root] = time;
        time += 1;
        frames.push((root, None, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, via, pos) = *frame;
            if pos < g.degree(v) {
                frame.2 += 1;
                let (w, e) = g.neighbors(v)[pos];
                if Some(e) == via {
                    continue;
                }
                if disc[w] == UNSEEN {
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    frames.push((w, Some(e), 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }
            frames.pop();
            let Some(enter) = via else { continue };
            let parent = g.edge(enter).other(v);
            low[parent] = low[parent].min(low[v]);
            if low[v] >= disc[parent] {
                if parent != root {
                    is_cut[parent] = true;
                }
                let mut edges = Vec::new();
                while let Some(e) = edge_stack.pop() {
                    edges.push(e);
                    if e == enter {
                        break;
                    }
                }
                block_edges.push(edges);
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }

    let mut blocks = Vec::with_capacity(block_edges.len());
    let mut local = vec![UNSEEN; n];
    for mut edges in block_edges {
        edges.sort_unstable();
        let mut vertices: Vec<usize> = edges
            .iter()
            .flat_map(|&e| {
                let (a, b) = g.endpoints(e);
                [a, b]
            })
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let local_edges = edges
            .iter()
            .map(|&e| {
                let edge = g.edge(e);
                Edge { u: local[edge.u], v: local[edge.v], kind: edge.kind }
            })
            .collect();
        let graph = Graph::assemble(vertices.len(), local_edges, g.is_multigraph());
        blocks.push(Block { graph, vertices, edges });
    }

    let articulation_points: Vec<usize> = (0..n).filter(|&v| is_cut[v]).collect();
    let mut blocks_at = vec![Vec::new(); n];
    for (b, block) in blocks.iter().enumerate() {
        for &v in &block.vertices {
            if is_cut[v] {
                blocks_at[v].push(b);
            }
        }
    }
    let mut parent = vec![None; blocks.len()];
    let mut seen = vec![false; blocks.len()];
    let mut queue = std::collections::VecDeque::new();
    if !blocks.is_empty() {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(b) = queue.pop_front() {
        for &v in &blocks[b].vertices {
            for &c in &blocks_at[v] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = Some((b, v));
                    queue.push_back(c);
                }
            }
        }
    }
    Ok(BiconnectedDecomposition { blocks, articulation_points, parent })
}
