use super::rotation::Rotation;
use super::separator::{components, find_separator, Work};
use crate::error::{Error, Result};
use crate::graph::PlanarEmbedding;

/// Sets at or below this size are eliminated as one dense front.
pub(crate) const LEAF_SIZE: usize = 64;

#[derive(Clone, Debug)]
pub(crate) struct Front {
    /// Variables eliminated here; partners are adjacent when a pairing is used.
    pub vars: Vec<usize>,
    pub children: Vec<usize>,
    /// First front of the subtree in postorder.
    pub lo: usize,
}

/// Nested dissection tree in postorder; the last front is the root and
/// holds the forced set.
#[derive(Clone, Debug)]
pub(crate) struct Dissection {
    pub fronts: Vec<Front>,
}

impl Dissection {
    pub fn order(&self) -> Vec<usize> {
        self.fronts.iter().flat_map(|f| f.vars.iter().copied()).collect()
    }
}

struct Builder<'a> {
    rot: &'a Rotation,
    work: &'a mut Work,
    pairing: Option<&'a [usize]>,
    fronts: Vec<Front>,
    leaf: usize,
}

impl Builder<'_> {
    fn pair_closed(&mut self, xs: &[usize]) -> Vec<usize> {
        let Some(pairing) = self.pairing else {
            return xs.to_vec();
        };
        let s = self.work.bump();
        let mut out = Vec::with_capacity(2 * xs.len());
        for &v in xs {
            for x in [v, pairing[v]] {
                if self.work.mark_once(x, s) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Builds the subtree of a connected set and returns its root front.
    fn build(&mut self, xs: Vec<usize>) -> usize {
        if xs.len() <= self.leaf {
            let vars = self.pair_closed(&xs);
            let id = self.fronts.len();
            self.fronts.push(Front { vars, children: Vec::new(), lo: id });
            return id;
        }
        let sep = find_separator(self.rot, self.work, &xs);
        let sep = self.pair_closed(&sep);
        let comps = components(self.rot, self.work, &xs, &sep);
        let children: Vec<usize> = comps.into_iter().map(|c| self.build(c)).collect();
        let id = self.fronts.len();
        let lo = children.first().map_or(id, |&c| self.fronts[c].lo);
        self.fronts.push(Front { vars: sep, children, lo });
        id
    }
}

/// Dissection of the `active` vertices with `forced` kept for the root.
/// With a pairing, every separator is closed under it, so partners are
/// always eliminated in the same front.
pub(crate) fn dissect(
    rot: &Rotation,
    work: &mut Work,
    active: &[usize],
    forced: &[usize],
    pairing: Option<&[usize]>,
) -> Dissection {
    let s = work.bump();
    for &v in forced {
        work.mark_once(v, s);
    }
    let rest: Vec<usize> = active.iter().copied().filter(|&v| work.mark_once(v, s)).collect();
    let tops = components(rot, work, &rest, &[]);
    let mut b = Builder { rot, work, pairing, fronts: Vec::new(), leaf: LEAF_SIZE };
    let children: Vec<usize> = tops.into_iter().map(|c| b.build(c)).collect();
    // the caller closes the forced set; its partners may lie outside `active`
    let vars = forced.to_vec();
    let id = b.fronts.len();
    let lo = children.first().map_or(id, |&c| b.fronts[c].lo);
    b.fronts.push(Front { vars, children, lo });
    Dissection { fronts: b.fronts }
}

/// Nested dissection ordering of a planar graph: every part precedes its
/// separator, and a forced separator takes the last positions.
pub fn nested_dissection_order(emb: &PlanarEmbedding, forced: Option<&[usize]>) -> Result<Vec<usize>> {
    let n = emb.graph().num_vertices();
    let forced = forced.unwrap_or(&[]);
    let bound = (12.0 * (n as f64).sqrt()).floor() as usize;
    if forced.len() > bound {
        return Err(Error::SeparatorTooLarge { size: forced.len(), bound });
    }
    if let Some(&v) = forced.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, num_vertices: n });
    }
    let rot = Rotation::new(emb);
    let mut work = Work::new(&rot);
    let all: Vec<usize> = (0..n).collect();
    Ok(dissect(&rot, &mut work, &all, forced, None).order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, planar_embed};

    fn grid(w: usize) -> PlanarEmbedding {
        let mut edges = Vec::new();
        for r in 0..w {
            for c in 0..w {
                let v = r * w + c;
                if c + 1 < w {
                    edges.push((v, v + 1));
                }
                if r + 1 < w {
                    edges.push((v, v + w));
                }
            }
        }
        planar_embed(&build_graph(w * w, &edges).unwrap()).unwrap()
    }

    /// Nonzeros of the Cholesky factor of the grid Laplacian pattern under
    /// `order`, by symbolic elimination.
    fn fill(emb: &PlanarEmbedding, order: &[usize]) -> usize {
        let n = order.len();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
        for e in emb.graph().edges() {
            let (a, b) = (pos[e.u].min(pos[e.v]), pos[e.u].max(pos[e.v]));
            rows[a].insert(b);
        }
        let mut total = 0;
        for i in 0..n {
            let row: Vec<usize> = rows[i].iter().copied().collect();
            total += row.len();
            if let Some((&first, rest)) = row.split_first() {
                for &j in rest {
                    rows[first].insert(j);
                }
            }
        }
        total
    }

    #[test]
    fn path_puts_middle_last() {
        let emb = planar_embed(&build_graph(3, &[(0, 1), (1, 2)]).unwrap()).unwrap();
        let order = nested_dissection_order(&emb, Some(&[1])).unwrap();
        assert_eq!(order[2], 1);
    }

    #[test]
    fn forced_separator_is_last_and_bounded() {
        let emb = grid(12);
        let forced: Vec<usize> = (0..12).map(|r| r * 12 + 6).collect();
        let order = nested_dissection_order(&emb, Some(&forced)).unwrap();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..144).collect::<Vec<_>>());
        assert_eq!(&order[132..], &forced[..]);
        let big = grid(15);
        let too_many: Vec<usize> = (0..181).collect();
        assert!(matches!(
            nested_dissection_order(&big, Some(&too_many)),
            Err(Error::SeparatorTooLarge { .. })
        ));
    }

    #[test]
    fn grid_fill_stays_near_n_log_n() {
        let w = 40;
        let emb = grid(w);
        let n = w * w;
        let nd = fill(&emb, &nested_dissection_order(&emb, None).unwrap());
        let natural = fill(&emb, &(0..n).collect::<Vec<_>>());
        let budget = 8.0 * n as f64 * (n as f64).log2();
        assert!((nd as f64) < budget, "fill {nd} over budget {budget}");
        assert!(nd < natural, "nd {nd} natural {natural}");
    }
}
