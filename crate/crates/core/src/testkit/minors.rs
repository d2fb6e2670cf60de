//! Brute-force minor tests for small graphs, used as an independent
//! planarity oracle (Wagner: planar iff neither K5 nor K3,3 is a minor).

use crate::graph::Graph;

/// Largest vertex count the bitmask search accepts.
pub const MAX_MINOR_VERTICES: usize = 16;

fn masks(g: &Graph) -> Vec<u32> {
    assert!(g.num_vertices() <= MAX_MINOR_VERTICES, "minor search is exponential");
    let mut nbr = vec![0u32; g.num_vertices()];
    for e in g.edges() {
        nbr[e.u] |= 1 << e.v;
        nbr[e.v] |= 1 << e.u;
    }
    nbr
}

fn connected(mask: u32, nbr: &[u32]) -> bool {
    if mask == 0 {
        return false;
    }
    let mut reached = 1u32 << mask.trailing_zeros();
    loop {
        let mut grown = reached;
        let mut rest = reached;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grown |= nbr[v] & mask;
        }
        if grown == reached {
            return reached == mask;
        }
        reached = grown;
    }
}

/// Visits every partition of the vertices of a connected graph into
/// exactly `k` connected branch sets and reports their adjacency matrix.
/// Unused vertices never help in a connected graph: they can always be
/// absorbed into a neighbouring branch set.
fn any_partition(g: &Graph, k: usize, accept: &dyn Fn(&[[bool; 6]; 6]) -> bool) -> bool {
    let n = g.num_vertices();
    if n < k {
        return false;
    }
    let nbr = masks(g);
    let mut label = vec![0usize; n];
    fn rec(
        i: usize,
        used: usize,
        k: usize,
        label: &mut [usize],
        nbr: &[u32],
        accept: &dyn Fn(&[[bool; 6]; 6]) -> bool,
    ) -> bool {
        let n = label.len();
        if n - i < k - used {
            return false;
        }
        if i == n {
            let mut sets = [0u32; 6];
            for (v, &l) in label.iter().enumerate() {
                sets[l] |= 1 << v;
            }
            if !sets[..k].iter().all(|&s| connected(s, nbr)) {
                return false;
            }
            let mut adj = [[false; 6]; 6];
            for a in 0..k {
                let mut reach = 0u32;
                let mut rest = sets[a];
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    reach |= nbr[v];
                }
                for b in 0..k {
                    adj[a][b] = a != b && reach & sets[b] != 0;
                }
            }
            return accept(&adj);
        }
        let top = if used < k { used + 1 } else { k };
        for l in 0..top {
            label[i] = l;
            let now_used = used.max(l + 1);
            if rec(i + 1, now_used, k, label, nbr, accept) {
                return true;
            }
        }
        false
    }
    rec(0, 0, k, &mut label, &nbr, accept)
}

fn components(g: &Graph) -> Vec<Graph> {
    let (label, count) = g.connected_components();
    (0..count)
        .map(|c| {
            let vertices: Vec<usize> = (0..g.num_vertices()).filter(|&v| label[v] == c).collect();
            g.induced_subgraph(&vertices).0
        })
        .collect()
}

pub fn has_k5_minor(g: &Graph) -> bool {
    components(g).iter().any(|c| {
        any_partition(c, 5, &|adj| (0..5).all(|a| (0..5).all(|b| a == b || adj[a][b])))
    })
}

pub fn has_k33_minor(g: &Graph) -> bool {
    components(g).iter().any(|c| {
        any_partition(c, 6, &|adj| {
            // side A always contains branch set 0
            for x in 1..6 {
                for y in x + 1..6 {
                    let side_a = [0, x, y];
                    let side_b: Vec<usize> = (0..6).filter(|t| !side_a.contains(t)).collect();
                    if side_a.iter().all(|&a| side_b.iter().all(|&b| adj[a][b])) {
                        return true;
                    }
                }
            }
            false
        })
    })
}

/// Planarity by exhaustive minor search.
pub fn is_planar_by_minors(g: &Graph) -> bool {
    !has_k5_minor(g) && !has_k33_minor(g)
}
