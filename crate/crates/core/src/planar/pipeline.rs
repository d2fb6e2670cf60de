use std::f64::consts::LN_2;

use super::dual::{build_expanded_dual, spins_to_pm, ExpandedDual};
use super::kasteleyn::{build_kasteleyn, KasteleynSystem, PmPartition, Scratch, Subhost};
use super::pfaffian::pfaffian_orient;
use super::triangulate::triangulate;
use crate::error::{Error, Result};
use crate::graph::{planar_embed, EdgeId, PlanarEmbedding};
use crate::model::{IsingModel, SpinConfiguration};

/// Constraint on the two endpoints of one primal edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeCondition {
    pub edge: EdgeId,
    /// Endpoints carry equal spins when true, opposite spins otherwise.
    pub agree: bool,
}

/// Matching host of a conditioned model, as a view of the full host.
pub(crate) struct ConditionedHost {
    pub active: Option<Vec<usize>>,
    pub pairing: Vec<usize>,
    pub excluded: Option<usize>,
    /// Intercity edge forced into every matching.
    pub forced_edge: Option<usize>,
}

impl ConditionedHost {
    pub fn subhost(&self) -> Subhost<'_> {
        Subhost { active: self.active.as_deref(), pairing: &self.pairing, excluded: self.excluded }
    }
}

/// Triangulated model, its expanded dual and the Kasteleyn system of the
/// dual, for a connected planar model with at least three vertices.
#[derive(Clone, Debug)]
pub struct PlanarPipeline {
    num_edges: usize,
    couplings: Vec<f64>,
    dual: ExpandedDual,
    ks: KasteleynSystem,
}

impl PlanarPipeline {
    pub fn new(model: &IsingModel) -> Result<Self> {
        let emb = planar_embed(model.graph())?;
        Self::with_embedding(model, &emb)
    }

    pub fn with_embedding(model: &IsingModel, emb: &PlanarEmbedding) -> Result<Self> {
        if model.num_vertices() < 3 {
            return Err(Error::InvalidArgument("the dual pipeline needs at least three vertices".into()));
        }
        if !model.graph().is_connected() {
            return Err(Error::Disconnected);
        }
        let (tri, tri_emb) = triangulate(model, emb)?;
        let dual = build_expanded_dual(&tri, &tri_emb)?;
        let orient = pfaffian_orient(dual.embedding())?;
        let base = spins_to_pm(&dual, &SpinConfiguration::all_up(model.num_vertices()))?;
        let ks = build_kasteleyn(dual.embedding(), dual.weights(), &orient, &base)?;
        Ok(PlanarPipeline { num_edges: model.num_edges(), couplings: tri.couplings().to_vec(), dual, ks })
    }

    pub fn dual(&self) -> &ExpandedDual {
        &self.dual
    }

    pub fn kasteleyn(&self) -> &KasteleynSystem {
        &self.ks
    }

    fn sum_couplings(&self) -> f64 {
        self.couplings.iter().sum()
    }

    /// Converts a matching partition of a (sub-)host to the spin partition.
    fn spin_log_z(&self, pm: PmPartition, extra: f64) -> PmPartition {
        PmPartition { log_z: LN_2 + pm.log_z + extra - self.sum_couplings(), dense_fallback: pm.dense_fallback }
    }

    /// `ln Z` of the model.
    pub fn log_z(&self) -> Result<PmPartition> {
        let mut sc = Scratch::new(&self.ks);
        let host = self.host(None)?;
        Ok(self.spin_log_z(self.ks.log_pm_sub(&mut sc, host.subhost())?, 0.0))
    }

    /// `ln` of the partition sum restricted to configurations meeting `cond`.
    pub fn log_z_conditioned(&self, cond: EdgeCondition) -> Result<PmPartition> {
        let mut sc = Scratch::new(&self.ks);
        let host = self.host(Some(cond))?;
        let extra = if cond.agree { 2.0 * self.couplings[cond.edge.0] } else { 0.0 };
        Ok(self.spin_log_z(self.ks.log_pm_sub(&mut sc, host.subhost())?, extra))
    }

    /// Matchings of the host in bijection with the configurations of `C+`
    /// meeting the condition (minus the forced intercity edge, if any).
    pub(crate) fn host(&self, cond: Option<EdgeCondition>) -> Result<ConditionedHost> {
        let pairing = self.ks.pairing().to_vec();
        let Some(cond) = cond else {
            return Ok(ConditionedHost { active: None, pairing, excluded: None, forced_edge: None });
        };
        let e = cond.edge.0;
        if e >= self.num_edges {
            return Err(Error::InvalidArgument(format!("edge {e} is not an edge of the model")));
        }
        let ic = self.dual.intercity_of(cond.edge).0;
        if cond.agree {
            let active = (0..self.ks.num_vertices()).filter(|&v| v != 2 * ic && v != 2 * ic + 1).collect();
            Ok(ConditionedHost { active: Some(active), pairing, excluded: None, forced_edge: Some(ic) })
        } else {
            // any configuration splitting the edge gives a base matching
            let g = self.dual.primal().graph();
            let (u, _) = g.endpoints(cond.edge);
            let mut x = SpinConfiguration::all_up(g.num_vertices());
            x.set(u, -1);
            let pm = spins_to_pm(&self.dual, &x)?;
            let pairing = pm.partners(self.dual.graph());
            Ok(ConditionedHost { active: None, pairing, excluded: Some(ic), forced_edge: None })
        }
    }
}

/// `ln Z` of a planar model, through the matching count of its expanded
/// dual. Connected components are handled separately.
pub fn log_partition_planar_ising(m: &IsingModel) -> Result<f64> {
    let (comp, count) = m.graph().connected_components();
    let mut total = 0.0;
    for c in 0..count {
        let verts: Vec<usize> = (0..m.num_vertices()).filter(|&v| comp[v] == c).collect();
        let (g, ids) = m.graph().induced_subgraph(&verts);
        let couplings: Vec<f64> = ids.iter().map(|&e| m.coupling(e)).collect();
        total += match verts.len() {
            1 => LN_2,
            2 => LN_2 + (2.0 * couplings[0].cosh()).ln(),
            _ => PlanarPipeline::new(&IsingModel::new(g, couplings)?)?.log_z()?.log_z,
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let edge = IsingModel::from_triples(2, &[(0, 1, 0.5)]).unwrap();
        assert!((log_partition_planar_ising(&edge).unwrap() - (4.0 * 0.5f64.cosh()).ln()).abs() < 1e-12);
        let tri = IsingModel::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let want = (2.0 * 3f64.exp() + 6.0 * (-1f64).exp()).ln();
        assert!((log_partition_planar_ising(&tri).unwrap() - want).abs() < 1e-12);
        let free = IsingModel::from_triples(3, &[]).unwrap();
        assert!((log_partition_planar_ising(&free).unwrap() - 3.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn triangle_dual_counts_four_matchings() {
        let tri = IsingModel::from_triples(3, &[(0, 1, 0.0), (1, 2, 0.0), (2, 0, 0.0)]).unwrap();
        let p = PlanarPipeline::new(&tri).unwrap();
        let z = crate::planar::log_pm_partition(p.kasteleyn()).unwrap();
        assert!((z.log_z - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn conditioned_sums_split_the_total() {
        let m = IsingModel::from_triples(
            4,
            &[(0, 1, 0.3), (1, 2, -0.7), (2, 3, 1.1), (3, 0, 0.2), (0, 2, -0.4)],
        )
        .unwrap();
        let p = PlanarPipeline::new(&m).unwrap();
        let total = p.log_z().unwrap().log_z;
        for e in 0..5 {
            let agree = p.log_z_conditioned(EdgeCondition { edge: EdgeId(e), agree: true }).unwrap().log_z;
            let split = p.log_z_conditioned(EdgeCondition { edge: EdgeId(e), agree: false }).unwrap().log_z;
            assert!((agree.exp() + split.exp() - total.exp()).abs() < 1e-10 * total.exp());
            // direct sum over the 16 configurations with the edge condition
            let (u, v) = m.graph().endpoints(EdgeId(e));
            let mut same = 0.0;
            for bits in 0..16u64 {
                let x = SpinConfiguration::from_bits(4, bits);
                if x.get(u) == x.get(v) {
                    same += m.log_weight(&x).exp();
                }
            }
            assert!((agree - same.ln()).abs() < 1e-10);
        }
    }
}
