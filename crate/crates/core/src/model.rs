//! Zero-field Ising models and spin configurations.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph};

/// A graph with one coupling per edge and no external field.
#[derive(Clone, Debug)]
pub struct IsingModel {
    graph: Graph,
    couplings: Vec<f64>,
}

impl IsingModel {
    pub fn new(graph: Graph, couplings: Vec<f64>) -> Result<Self> {
        if couplings.len() != graph.num_edges() {
            return Err(Error::InvalidArgument(format!(
                "{} couplings for {} edges",
                couplings.len(),
                graph.num_edges()
            )));
        }
        if let Some(j) = couplings.iter().find(|j| !j.is_finite()) {
            return Err(Error::InvalidArgument(format!("coupling {j} is not finite")));
        }
        let mut seen = HashSet::with_capacity(graph.num_edges());
        for e in graph.edges() {
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::DuplicateEdge(e.u.min(e.v), e.u.max(e.v)));
            }
        }
        Ok(IsingModel { graph, couplings })
    }

    /// Model from `(u, v, j)` triples; edge ids follow the input order.
    pub fn from_triples(num_vertices: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        let edges = triples.iter().map(|&(u, v, _)| Edge::real(u, v)).collect();
        let graph = Graph::from_edges(num_vertices, edges, false)?;
        IsingModel::new(graph, triples.iter().map(|t| t.2).collect())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    #[inline]
    pub fn coupling(&self, e: EdgeId) -> f64 {
        self.couplings[e.0]
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// `(u, v, j)` for every edge, in id order.
    pub fn triples(&self) -> Vec<(usize, usize, f64)> {
        self.graph.edges().iter().zip(&self.couplings).map(|(e, &j)| (e.u, e.v, j)).collect()
    }

    /// Unnormalised log-probability `sum_e J_e x_u x_v`.
    pub fn log_weight(&self, x: &SpinConfiguration) -> f64 {
        self.graph
            .edges()
            .iter()
            .zip(&self.couplings)
            .map(|(e, &j)| j * f64::from(x.get(e.u) * x.get(e.v)))
            .sum()
    }
}

/// One spin in {-1, +1} per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfiguration(Vec<i8>);

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(s) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!("spin value {s}")));
        }
        Ok(SpinConfiguration(spins))
    }

    pub fn all_up(n: usize) -> Self {
        SpinConfiguration(vec![1; n])
    }

    /// Bit `i` set means vertex `i` is down.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        SpinConfiguration((0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn to_bits(&self) -> u64 {
        assert!(self.0.len() <= 64, "configuration does not fit in a word");
        self.0.iter().enumerate().filter(|(_, &s)| s < 0).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> i8 {
        self.0[v]
    }

    #[inline]
    pub fn set(&mut self, v: usize, s: i8) {
        debug_assert!(s == 1 || s == -1);
        self.0[v] = s;
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn negate(&mut self) {
        for s in &mut self.0 {
            *s = -*s;
        }
    }

    pub fn negated(&self) -> Self {
        let mut x = self.clone();
        x.negate();
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_parallel_and_nonfinite() {
        assert!(matches!(
            IsingModel::from_triples(2, &[(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(IsingModel::from_triples(2, &[(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn weight_and_bits() {
        let m = IsingModel::from_triples(3, &[(0, 1, 0.5), (1, 2, -1.0)]).unwrap();
        let x = SpinConfiguration::from_bits(3, 0b100);
        assert_eq!(x.as_slice(), &[1, 1, -1]);
        assert_eq!(x.to_bits(), 0b100);
        assert!((m.log_weight(&x) - 1.5).abs() < 1e-15);
        assert_eq!(m.log_weight(&x), m.log_weight(&x.negated()));
    }
}
