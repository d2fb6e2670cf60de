use super::dense::{eliminate_pivoted, invert, log_abs_det};
use super::matching::PerfectMatching;
use super::nd::{dissect, Dissection};
use super::rotation::Rotation;
use super::separator::Work;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, PlanarEmbedding};

const NONE: usize = usize::MAX;

/// Largest vertex count handled by the dense fallback.
const DENSE_LIMIT: usize = 3000;

/// Skew-symmetric signed weight matrix of a Pfaffian-oriented planar host,
/// with a base perfect matching that fixes the elimination pairs.
///
/// `K[u][v] = c_e` when edge `e` is directed from `u` to `v`, `-c_e` in the
/// opposite direction, and 0 for non-adjacent vertices.
#[derive(Clone, Debug)]
pub struct KasteleynSystem {
    embedding: PlanarEmbedding,
    weights: Vec<f64>,
    orientation: Vec<bool>,
    pairing: Vec<usize>,
    rot: Rotation,
    /// `K[tail][head]` per rotation entry.
    val: Vec<f64>,
}

/// Result of a matching-partition computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PmPartition {
    pub log_z: f64,
    /// Set when the sparse elimination rejected a pivot and a dense
    /// factorisation was used instead.
    pub dense_fallback: bool,
}

/// Builds the Kasteleyn system of an embedded host.
pub fn build_kasteleyn(
    embedding: &PlanarEmbedding,
    weights: &[f64],
    orientation: &[bool],
    base_matching: &PerfectMatching,
) -> Result<KasteleynSystem> {
    let g = embedding.graph();
    if weights.len() != g.num_edges() || orientation.len() != g.num_edges() {
        return Err(Error::InvalidArgument("weights and orientation must have one entry per edge".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidArgument(format!("edge weight {w} is not positive")));
    }
    let checked = PerfectMatching::new(g, base_matching.edges().to_vec())?;
    let pairing = checked.partners(g);
    let rot = Rotation::new(embedding);
    let val = (0..rot.num_entries())
        .map(|k| {
            let e = rot.edge[k];
            let forward = g.edge(EdgeId(e)).u == rot.tail[k];
            let c = weights[e];
            if forward == orientation[e] {
                c
            } else {
                -c
            }
        })
        .collect();
    Ok(KasteleynSystem {
        embedding: embedding.clone(),
        weights: weights.to_vec(),
        orientation: orientation.to_vec(),
        pairing,
        rot,
        val,
    })
}

/// Reusable scratch space for factorisations on one host.
pub(crate) struct Scratch {
    pub work: Work,
    owner: Vec<usize>,
    loc: Vec<usize>,
}

impl Scratch {
    pub fn new(ks: &KasteleynSystem) -> Self {
        let n = ks.num_vertices();
        Scratch { work: Work::new(&ks.rot), owner: vec![NONE; n], loc: vec![NONE; n] }
    }
}

/// A sub-host: the active vertices (all when `None`) with one edge removed.
/// The pairing must match every active vertex outside the forced set to an
/// active partner.
#[derive(Clone, Copy)]
pub(crate) struct Subhost<'a> {
    pub active: Option<&'a [usize]>,
    pub pairing: &'a [usize],
    pub excluded: Option<usize>,
}

impl KasteleynSystem {
    pub fn embedding(&self) -> &PlanarEmbedding {
        &self.embedding
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn orientation(&self) -> &[bool] {
        &self.orientation
    }

    pub fn num_vertices(&self) -> usize {
        self.rot.num_vertices()
    }

    /// Partner of every vertex under the base matching.
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub(crate) fn rotation(&self) -> &Rotation {
        &self.rot
    }

    /// `K[tail][head]` of rotation entry `k`.
    pub(crate) fn entry_value(&self, k: usize) -> f64 {
        self.val[k]
    }

    /// Matrix entry `K[u][v]`.
    pub fn entry(&self, u: usize, v: usize) -> f64 {
        self.rot.entries(u).filter(|&k| self.rot.head[k] == v).map(|k| self.val[k]).sum()
    }

    /// Dense row-major copy of `K`.
    pub fn dense_matrix(&self) -> Vec<f64> {
        let n = self.num_vertices();
        let mut out = vec![0.0; n * n];
        for k in 0..self.rot.num_entries() {
            out[self.rot.tail[k] * n + self.rot.head[k]] += self.val[k];
        }
        out
    }

    /// Dense `K` restricted to `verts`, in that order, without `excluded`.
    fn dense_sub(&self, verts: &[usize], excluded: Option<usize>, loc: &mut [usize]) -> Vec<f64> {
        let n = verts.len();
        for (i, &v) in verts.iter().enumerate() {
            loc[v] = i;
        }
        let mut out = vec![0.0; n * n];
        for (i, &v) in verts.iter().enumerate() {
            for k in self.rot.entries(v) {
                let j = loc[self.rot.head[k]];
                if j != NONE && Some(self.rot.edge[k]) != excluded {
                    out[i * n + j] += self.val[k];
                }
            }
        }
        for &v in verts {
            loc[v] = NONE;
        }
        out
    }

    /// Multifrontal pair elimination of the sub-host with `forced` left
    /// uneliminated. Returns the log Pfaffian magnitude of the eliminated
    /// part and the Schur complement on `forced`.
    fn factorize(&self, sc: &mut Scratch, sub: Subhost<'_>, forced: &[usize]) -> Result<(f64, Vec<f64>)> {
        let all: Vec<usize>;
        let active = match sub.active {
            Some(a) => a,
            None => {
                all = (0..self.num_vertices()).collect();
                &all
            }
        };
        let dis = dissect(&self.rot, &mut sc.work, active, forced, Some(sub.pairing));
        for (f, front) in dis.fronts.iter().enumerate() {
            for &v in &front.vars {
                sc.owner[v] = f;
            }
        }
        let out = self.multifrontal(sc, &dis, sub);
        for front in &dis.fronts {
            for &v in &front.vars {
                sc.owner[v] = NONE;
            }
        }
        out
    }

    fn multifrontal(&self, sc: &mut Scratch, dis: &Dissection, sub: Subhost<'_>) -> Result<(f64, Vec<f64>)> {
        let root = dis.fronts.len() - 1;
        let rot = &self.rot;
        // per finished front: its remaining vertices, their Schur complement
        // and how many leading ones it failed to eliminate
        let mut stack: Vec<(Vec<usize>, Vec<f64>, usize)> = Vec::new();
        let mut log_pf = 0.0;
        for (f, front) in dis.fronts.iter().enumerate() {
            let kids = stack.split_off(stack.len() - front.children.len());
            let nv = front.vars.len();
            let mut idx: Vec<usize> = kids.iter().flat_map(|(b, _, nd)| b[..*nd].iter().copied()).collect();
            let nd = idx.len();
            idx.extend_from_slice(&front.vars);
            for (i, &v) in idx.iter().enumerate() {
                sc.loc[v] = i;
            }
            for (b, _, _) in &kids {
                for &u in b {
                    if sc.loc[u] == NONE {
                        sc.loc[u] = idx.len();
                        idx.push(u);
                    }
                }
            }
            for &v in &front.vars {
                for k in rot.entries(v) {
                    let u = rot.head[k];
                    let o = sc.owner[u];
                    if o != NONE && o > f && sc.loc[u] == NONE && Some(rot.edge[k]) != sub.excluded {
                        sc.loc[u] = idx.len();
                        idx.push(u);
                    }
                }
            }
            let m = idx.len();
            let mut mat = vec![0.0; m * m];
            let own = nd..nd + nv;
            for (i, &v) in front.vars.iter().enumerate() {
                let i = nd + i;
                for k in rot.entries(v) {
                    let u = rot.head[k];
                    let o = sc.owner[u];
                    if o == NONE || o < f || Some(rot.edge[k]) == sub.excluded {
                        continue;
                    }
                    let j = sc.loc[u];
                    mat[i * m + j] += self.val[k];
                    if !own.contains(&j) {
                        mat[j * m + i] -= self.val[k];
                    }
                }
            }
            for (b, upd, _) in &kids {
                let bm = b.len();
                let map: Vec<usize> = b.iter().map(|&u| sc.loc[u]).collect();
                for r in 0..bm {
                    let row = &mut mat[map[r] * m..(map[r] + 1) * m];
                    for (c, &x) in upd[r * bm..(r + 1) * bm].iter().enumerate() {
                        row[map[c]] += x;
                    }
                }
            }
            for &v in &idx {
                sc.loc[v] = NONE;
            }
            let nf = if f == root { nd } else { nd + nv };
            let (part, done) = eliminate_pivoted(&mut mat, m, nf, &mut idx, f == root)?;
            log_pf += part;
            let bm = m - done;
            let mut upd = vec![0.0; bm * bm];
            for r in 0..bm {
                upd[r * bm..(r + 1) * bm].copy_from_slice(&mat[(done + r) * m + done..(done + r + 1) * m]);
            }
            if f == root {
                debug_assert_eq!(&idx[done..], &front.vars[..]);
                return Ok((log_pf, upd));
            }
            idx.drain(..done);
            stack.push((idx, upd, nf - done));
        }
        unreachable!("dissection has a root front")
    }

    /// `ln` of the matching partition function of a sub-host.
    pub(crate) fn log_pm_sub(&self, sc: &mut Scratch, sub: Subhost<'_>) -> Result<PmPartition> {
        match self.factorize(sc, sub, &[]) {
            Ok((log_z, _)) => Ok(PmPartition { log_z, dense_fallback: false }),
            Err(Error::Numerical(_)) => {
                let verts = self.active_list(sub);
                if verts.len() > DENSE_LIMIT {
                    return Err(Error::TooLarge(format!("dense fallback on {} vertices", verts.len())));
                }
                let k = self.dense_sub(&verts, sub.excluded, &mut sc.loc);
                Ok(PmPartition { log_z: 0.5 * log_abs_det(k, verts.len())?, dense_fallback: true })
            }
            Err(e) => Err(e),
        }
    }

    /// `[K_UU^{-1}]` on `corner`, where `U` is the sub-host and the
    /// pairing matches `U \ corner` within itself. The flag reports the
    /// dense fallback.
    pub(crate) fn corner_inverse_sub(
        &self,
        sc: &mut Scratch,
        sub: Subhost<'_>,
        corner: &[usize],
    ) -> Result<(Vec<f64>, bool)> {
        let t = corner.len();
        match self.factorize(sc, sub, corner) {
            Ok((_, schur)) => Ok((if t == 0 { schur } else { invert(schur, t)? }, false)),
            Err(Error::Numerical(_)) => {
                // corner first, so the block is the leading one
                let mut verts = corner.to_vec();
                for &v in corner {
                    sc.owner[v] = 0;
                }
                verts.extend(self.active_list(sub).into_iter().filter(|&v| sc.owner[v] == NONE));
                for &v in corner {
                    sc.owner[v] = NONE;
                }
                let n = verts.len();
                if n > DENSE_LIMIT {
                    return Err(Error::TooLarge(format!("dense fallback on {n} vertices")));
                }
                let inv = invert(self.dense_sub(&verts, sub.excluded, &mut sc.loc), n)?;
                let mut d = vec![0.0; t * t];
                for r in 0..t {
                    d[r * t..(r + 1) * t].copy_from_slice(&inv[r * n..r * n + t]);
                }
                Ok((d, true))
            }
            Err(e) => Err(e),
        }
    }

    fn active_list(&self, sub: Subhost<'_>) -> Vec<usize> {
        sub.active.map_or_else(|| (0..self.num_vertices()).collect(), <[usize]>::to_vec)
    }
}

/// `ln` of the weighted count of perfect matchings, `sum_M prod_{e in M} c_e`.
pub fn log_pm_partition(ks: &KasteleynSystem) -> Result<PmPartition> {
    let mut sc = Scratch::new(ks);
    ks.log_pm_sub(&mut sc, Subhost { active: None, pairing: &ks.pairing, excluded: None })
}

/// Block of `K^{-1}` on `corner`, row-major in the given order. The corner
/// must contain the base partner of each of its vertices.
pub fn corner_inverse(ks: &KasteleynSystem, corner: &[usize]) -> Result<Vec<f64>> {
    let n = ks.num_vertices();
    let mut inside = vec![false; n];
    for &v in corner {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, num_vertices: n });
        }
        if std::mem::replace(&mut inside[v], true) {
            return Err(Error::InvalidArgument(format!("vertex {v} repeated in the corner")));
        }
    }
    if let Some(&v) = corner.iter().find(|&&v| !inside[ks.pairing[v]]) {
        return Err(Error::InconsistentPairing(format!("partner of corner vertex {v} is outside the corner")));
    }
    let mut sc = Scratch::new(ks);
    Ok(ks.corner_inverse_sub(&mut sc, Subhost { active: None, pairing: &ks.pairing, excluded: None }, corner)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, planar_embed};
    use crate::planar::pfaffian_orient;

    fn system(n: usize, edges: &[(usize, usize)], weights: &[f64], pm: &[usize]) -> KasteleynSystem {
        let emb = planar_embed(&build_graph(n, edges).unwrap()).unwrap();
        let orient = pfaffian_orient(&emb).unwrap();
        let pm = PerfectMatching::new(emb.graph(), pm.iter().map(|&e| EdgeId(e)).collect()).unwrap();
        build_kasteleyn(&emb, weights, &orient, &pm).unwrap()
    }

    #[test]
    fn single_edge() {
        let ks = system(2, &[(0, 1)], &[2.5], &[0]);
        let k = ks.dense_matrix();
        assert_eq!(k[1], -k[2]);
        assert_eq!(k[1].abs(), 2.5);
        let z = log_pm_partition(&ks).unwrap();
        assert!((z.log_z - 2.5f64.ln()).abs() < 1e-14);
        assert!(!z.dense_fallback);
        let d = corner_inverse(&ks, &[0, 1]).unwrap();
        assert!((d[1] - 1.0 / k[2]).abs() < 1e-14);
    }

    #[test]
    fn four_cycle_counts_two() {
        let ks = system(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[1.0; 4], &[0, 2]);
        let k = ks.dense_matrix();
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(k[u * 4 + v], -k[v * 4 + u]);
            }
        }
        assert!((log_abs_det(k, 4).unwrap() - 4f64.ln()).abs() < 1e-12);
        assert!((log_pm_partition(&ks).unwrap().log_z - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn corner_matches_dense_inverse() {
        let ks = system(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[1.0, 2.0, 3.0, 0.5], &[0, 2]);
        let inv = invert(ks.dense_matrix(), 4).unwrap();
        let corner = [3, 2];
        let d = corner_inverse(&ks, &corner).unwrap();
        for (r, &a) in corner.iter().enumerate() {
            for (c, &b) in corner.iter().enumerate() {
                assert!((d[r * 2 + c] - inv[a * 4 + b]).abs() < 1e-12);
            }
        }
        assert!(matches!(corner_inverse(&ks, &[1, 2]), Err(Error::InconsistentPairing(_))));
    }
}
