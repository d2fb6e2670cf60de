use std::collections::HashMap;

use crate::engine::PiTable;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::model::{IsingModel, SpinConfiguration};

/// Largest model handled by the enumeration oracles.
pub const BRUTE_MAX_VERTICES: usize = 25;

/// Running `ln sum exp` of a stream of terms.
#[derive(Clone, Copy, Debug)]
struct LogSum {
    max: f64,
    scaled: f64,
}

impl LogSum {
    fn new() -> Self {
        LogSum { max: f64::NEG_INFINITY, scaled: 0.0 }
    }

    fn add(&mut self, x: f64) {
        if x <= self.max {
            self.scaled += (x - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    fn value(&self) -> f64 {
        self.max + self.scaled.ln()
    }
}

/// `ln Z` by summing over every configuration, walking them in Gray code
/// order so each step updates the energy in O(degree).
pub fn brute_log_z(m: &IsingModel) -> Result<f64> {
    let n = m.num_vertices();
    if n > BRUTE_MAX_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices for enumeration")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let g = m.graph();
    let mut spin = vec![1.0f64; n];
    let mut energy: f64 = m.couplings().iter().sum();
    let mut acc = LogSum::new();
    acc.add(energy);
    // vertex 0 stays +1; the mirror half has the same weights
    for step in 1u64..1 << (n - 1) {
        let v = step.trailing_zeros() as usize + 1;
        let field: f64 = g.neighbors(v).iter().map(|&(w, e)| m.coupling(e) * spin[w]).sum();
        energy -= 2.0 * spin[v] * field;
        spin[v] = -spin[v];
        acc.add(energy);
    }
    Ok(acc.value() + std::f64::consts::LN_2)
}

/// Exact probability of every configuration, indexed by
/// [`SpinConfiguration::to_bits`].
pub fn brute_distribution(m: &IsingModel) -> Result<Vec<f64>> {
    let n = m.num_vertices();
    if n > 20 {
        return Err(Error::TooLarge(format!("{n} vertices for a full table")));
    }
    let log_z = brute_log_z(m)?;
    Ok((0..1u64 << n).map(|b| (m.log_weight(&SpinConfiguration::from_bits(n, b)) - log_z).exp()).collect())
}

/// Every perfect matching of `host`, each as a sorted edge list.
pub fn brute_perfect_matchings(host: &Graph) -> Result<Vec<Vec<EdgeId>>> {
    let n = host.num_vertices();
    if n > 2 * BRUTE_MAX_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices for matching enumeration")));
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        let mut matched = vec![false; n];
        let mut chosen = Vec::with_capacity(n / 2);
        extend(host, &mut matched, &mut chosen, &mut out);
    }
    Ok(out)
}

fn extend(host: &Graph, matched: &mut [bool], chosen: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
    let Some(v) = matched.iter().position(|&b| !b) else {
        let mut pm = chosen.clone();
        pm.sort_unstable();
        out.push(pm);
        return;
    };
    matched[v] = true;
    for &(w, e) in host.neighbors(v) {
        if !matched[w] {
            matched[w] = true;
            chosen.push(e);
            extend(host, matched, chosen, out);
            chosen.pop();
            matched[w] = false;
        }
    }
    matched[v] = false;
}

/// `ln` of the weighted matching count by enumeration.
pub fn brute_pm_partition(host: &Graph, weights: &[f64]) -> Result<f64> {
    if weights.len() != host.num_edges() {
        return Err(Error::InvalidArgument("one weight per edge expected".into()));
    }
    let pms = brute_perfect_matchings(host)?;
    if pms.is_empty() {
        return Err(Error::EmptyPmSet);
    }
    let mut acc = LogSum::new();
    for pm in &pms {
        acc.add(pm.iter().map(|e| weights[e.0].ln()).sum());
    }
    Ok(acc.value())
}

/// `KL(empirical || model)` over the observed configurations, with exact
/// probabilities from enumeration.
pub fn kl_divergence_empirical(model: &IsingModel, samples: &[SpinConfiguration]) -> Result<f64> {
    let n = model.num_vertices();
    if n > 20 {
        return Err(Error::TooLarge(format!("{n} vertices for exact probabilities")));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let log_z = brute_log_z(model)?;
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for x in samples {
        if x.len() != n {
            return Err(Error::InvalidArgument("sample length differs from the model".into()));
        }
        *counts.entry(x.to_bits()).or_default() += 1;
    }
    let m = samples.len() as f64;
    let kl: f64 = counts
        .iter()
        .map(|(&bits, &c)| {
            let p_hat = c as f64 / m;
            let log_p = model.log_weight(&SpinConfiguration::from_bits(n, bits)) - log_z;
            p_hat * (p_hat.ln() - log_p)
        })
        .sum();
    Ok(kl.max(0.0))
}

/// `pi` table of a node model by enumeration: sums over the other vertices
/// with `p` and `t` fixed, ignoring any edge between `p` and `t`.
pub fn brute_pi(node_model: &IsingModel, p: usize, t: usize) -> Result<PiTable> {
    let n = node_model.num_vertices();
    if n > 20 {
        return Err(Error::TooLarge(format!("{n} vertices for a node table")));
    }
    if p >= n || t >= n || p == t {
        return Err(Error::InvalidArgument(format!("bad parent pair ({p}, {t})")));
    }
    let edges: Vec<(usize, usize, f64)> =
        node_model.triples().into_iter().filter(|&(u, v, _)| !(u.min(v) == p.min(t) && u.max(v) == p.max(t))).collect();
    let mut sums = [LogSum::new(), LogSum::new()];
    for bits in 0..1u64 << n {
        let x = SpinConfiguration::from_bits(n, bits);
        if x.get(p) != 1 {
            continue;
        }
        let energy: f64 = edges.iter().map(|&(u, v, j)| j * f64::from(x.get(u) * x.get(v))).sum();
        sums[usize::from(x.get(t) != 1)].add(energy);
    }
    Ok(PiTable { log_pi_equal: sums[0].value(), log_pi_unequal: sums[1].value() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let edge = IsingModel::from_triples(2, &[(0, 1, 0.5)]).unwrap();
        assert!((brute_log_z(&edge).unwrap() - (4.0 * 0.5f64.cosh()).ln()).abs() < 1e-14);
        let k5: Vec<_> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b, 0.0))).collect();
        let k5 = IsingModel::from_triples(5, &k5).unwrap();
        assert!((brute_log_z(&k5).unwrap() - 32f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn gray_walk_matches_direct_sum() {
        let m = IsingModel::from_triples(4, &[(0, 1, 0.3), (1, 2, -1.2), (2, 3, 0.7), (0, 3, 2.0), (1, 3, -0.1)])
            .unwrap();
        let direct: f64 = (0..16u64).map(|b| m.log_weight(&SpinConfiguration::from_bits(4, b)).exp()).sum();
        assert!((brute_log_z(&m).unwrap() - direct.ln()).abs() < 1e-13);
    }

    #[test]
    fn matching_counts() {
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!((brute_pm_partition(&c4, &[1.0; 4]).unwrap() - 2f64.ln()).abs() < 1e-15);
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!((brute_pm_partition(&k4, &[1.0; 6]).unwrap() - 3f64.ln()).abs() < 1e-15);
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(brute_pm_partition(&path, &[1.0; 2]), Err(Error::EmptyPmSet)));
    }

    #[test]
    fn pi_closed_forms() {
        let tri = IsingModel::from_triples(3, &[(0, 1, 5.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let pi = brute_pi(&tri, 0, 1).unwrap();
        assert!((pi.log_pi_equal - (2f64.exp() + (-2f64).exp()).ln()).abs() < 1e-14);
        assert!((pi.log_pi_unequal - 2f64.ln()).abs() < 1e-14);
        let pair = IsingModel::from_triples(2, &[]).unwrap();
        assert_eq!(brute_pi(&pair, 0, 1).unwrap(), PiTable { log_pi_equal: 0.0, log_pi_unequal: 0.0 });
    }

    #[test]
    fn kl_of_point_mass_on_uniform() {
        let m = IsingModel::from_triples(3, &[(0, 1, 0.0)]).unwrap();
        let samples = vec![SpinConfiguration::all_up(3); 10];
        let kl = kl_divergence_empirical(&m, &samples).unwrap();
        assert!((kl - 3.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }
}
