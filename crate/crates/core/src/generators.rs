//! Random network models: fixed-link-count Erdős–Rényi and Barabási–Albert
//! style preferential attachment.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{slot_count, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    ErdosRenyi,
    PreferentialAttachment,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightModel {
    #[default]
    Unit,
    /// Uniform on the open interval (0, 1).
    Uniform01,
    /// Absolute value of a standard normal draw.
    NormalMean0,
}

impl WeightModel {
    pub(crate) fn sample<R: Rng>(self, rng: &mut R) -> f64 {
        match self {
            WeightModel::Unit => 1.0,
            WeightModel::Uniform01 => loop {
                let x: f64 = rng.random();
                if x > 0.0 {
                    break x;
                }
            },
            WeightModel::NormalMean0 => loop {
                let x: f64 = rng.sample(StandardNormal);
                if x != 0.0 {
                    break x.abs();
                }
            },
        }
    }
}

/// What to do when a new node draws the same target twice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicatePolicy {
    /// Draw again until `m` distinct targets are found.
    #[default]
    Redraw,
    /// Keep only the distinct targets among `m` draws.
    Drop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub model: Model,
    pub n: usize,
    /// Link count for Erdős–Rényi, links per new node for attachment.
    pub l_or_m: usize,
    pub directed: bool,
    pub weight_model: WeightModel,
    pub seed: u64,
    /// Attachment only: size of the fully linked starting clique.
    pub seed_clique: usize,
    pub duplicates: DuplicatePolicy,
}

impl GeneratorSpec {
    pub fn erdos_renyi(n: usize, links: usize, directed: bool, seed: u64) -> Self {
        GeneratorSpec {
            model: Model::ErdosRenyi,
            n,
            l_or_m: links,
            directed,
            weight_model: WeightModel::Unit,
            seed,
            seed_clique: 1,
            duplicates: DuplicatePolicy::Redraw,
        }
    }

    pub fn preferential_attachment(n: usize, m: usize, directed: bool, seed: u64) -> Self {
        GeneratorSpec {
            model: Model::PreferentialAttachment,
            ..GeneratorSpec::erdos_renyi(n, m, directed, seed)
        }
    }

    pub fn with_weights(mut self, weight_model: WeightModel) -> Self {
        self.weight_model = weight_model;
        self
    }

    pub fn generate(&self) -> Result<Network> {
        match self.model {
            Model::ErdosRenyi => erdos_renyi(self),
            Model::PreferentialAttachment => preferential_attachment(self),
        }
    }
}

/// Picks `count` distinct slots uniformly at random: by rejection while the
/// fill fraction stays at or below `dense_fraction`, otherwise by shuffling
/// the full slot list.
pub(crate) fn sample_slots<R: Rng>(
    rng: &mut R,
    n: usize,
    directed: bool,
    loops: bool,
    count: usize,
    dense_fraction: f64,
) -> Result<Vec<(usize, usize)>> {
    let slots = slot_count(n, directed, loops);
    if count as u64 > slots {
        return Err(Error::Infeasible {
            links: count as u64,
            slots,
        });
    }
    if count as f64 <= dense_fraction * slots as f64 {
        let mut taken = HashSet::with_capacity(count);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v && !loops {
                continue;
            }
            let key = if directed || u <= v { (u, v) } else { (v, u) };
            // An unordered pair is hit by two ordered draws, a loop by one.
            if !directed && u == v && rng.random_bool(0.5) {
                continue;
            }
            if taken.insert(key) {
                out.push(key);
            }
        }
        Ok(out)
    } else {
        let mut all: Vec<(usize, usize)> = Network::new(n, directed, loops)?.slots().collect();
        let (chosen, _) = all.partial_shuffle(rng, count);
        Ok(chosen.to_vec())
    }
}

pub fn erdos_renyi(spec: &GeneratorSpec) -> Result<Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pairs = sample_slots(&mut rng, spec.n, spec.directed, false, spec.l_or_m, 0.5)?;
    let mut net = Network::new(spec.n, spec.directed, false)?;
    for (u, v) in pairs {
        let w = spec.weight_model.sample(&mut rng);
        net.add_link(u, v, w)?;
    }
    Ok(net)
}

/// Nodes arrive one at a time and link to `m` existing nodes picked with
/// probability proportional to degree + 1. Directed links point from the
/// new node to its targets.
pub fn preferential_attachment(spec: &GeneratorSpec) -> Result<Network> {
    let m = spec.l_or_m;
    let clique = spec.seed_clique.max(1);
    if m == 0 || spec.n <= m || clique > spec.n {
        return Err(Error::InvalidArgument(format!(
            "attachment needs 1 <= m < n and a seed clique of at most n nodes (n = {}, m = {m}, clique = {clique})",
            spec.n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut net = Network::new(spec.n, spec.directed, false)?;
    // Node v appears degree(v) + 1 times.
    let mut pool: Vec<usize> = Vec::with_capacity(spec.n * (2 * m + 1));
    for v in 0..clique {
        pool.push(v);
        for u in 0..v {
            let w = spec.weight_model.sample(&mut rng);
            net.add_link(v, u, w)?;
            pool.push(u);
            pool.push(v);
        }
    }
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for v in clique..spec.n {
        let want = m.min(v);
        targets.clear();
        match spec.duplicates {
            DuplicatePolicy::Redraw => {
                while targets.len() < want {
                    let t = pool[rng.random_range(0..pool.len())];
                    if !targets.contains(&t) {
                        targets.push(t);
                    }
                }
            }
            DuplicatePolicy::Drop => {
                for _ in 0..want {
                    let t = pool[rng.random_range(0..pool.len())];
                    if !targets.contains(&t) {
                        targets.push(t);
                    }
                }
            }
        }
        pool.push(v);
        for &t in &targets {
            let w = spec.weight_model.sample(&mut rng);
            net.add_link(v, t, w)?;
            pool.push(t);
            pool.push(v);
        }
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_degree(net: &Network) -> usize {
        let mut deg = vec![0; net.node_count()];
        for l in net.links() {
            deg[l.source] += 1;
            deg[l.target] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    #[test]
    fn erdos_renyi_examples() {
        let full = erdos_renyi(&GeneratorSpec::erdos_renyi(8, 28, false, 1)).unwrap();
        assert_eq!(full.link_count(), 28);
        assert!(full.same_as(&Network::new(8, false, false).unwrap().complement()));
        let empty = erdos_renyi(&GeneratorSpec::erdos_renyi(8, 0, false, 1)).unwrap();
        assert_eq!(empty.link_count(), 0);
        let a = erdos_renyi(&GeneratorSpec::erdos_renyi(30, 40, true, 9)).unwrap();
        let b = erdos_renyi(&GeneratorSpec::erdos_renyi(30, 40, true, 9)).unwrap();
        assert!(a.same_as(&b));
        assert_eq!(a.links(), b.links());
        assert!(matches!(
            erdos_renyi(&GeneratorSpec::erdos_renyi(4, 7, false, 0)),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn erdos_renyi_counts_are_exact() {
        for seed in 0..50 {
            for (n, l, directed) in [(10, 3, false), (10, 40, false), (10, 80, true), (50, 60, true)] {
                let net = erdos_renyi(&GeneratorSpec::erdos_renyi(n, l, directed, seed)).unwrap();
                assert_eq!(net.link_count(), l);
                assert!(!net.has_self_loop_links());
            }
        }
    }

    #[test]
    fn erdos_renyi_is_roughly_uniform_over_slots() {
        // Each of the 6 undirected slots on 4 nodes is picked with
        // probability 1/2 when drawing 3 of them.
        let mut hits = [0usize; 6];
        let trials = 6000;
        for seed in 0..trials {
            let net = erdos_renyi(&GeneratorSpec::erdos_renyi(4, 3, false, seed)).unwrap();
            let slots: Vec<_> = net.slots().collect();
            for (i, (u, v)) in slots.into_iter().enumerate() {
                if net.has_link(u, v) {
                    hits[i] += 1;
                }
            }
        }
        for h in hits {
            let p = h as f64 / trials as f64;
            assert!((p - 0.5).abs() < 0.03, "{p}");
        }
    }

    #[test]
    fn attachment_link_counts() {
        let pa1 = GeneratorSpec::preferential_attachment(100, 1, true, 4)
            .with_weights(WeightModel::Uniform01)
            .generate()
            .unwrap();
        assert_eq!(pa1.link_count(), 99);
        assert!(pa1.weights().iter().all(|&w| w > 0.0 && w < 1.0));
        let pa3 = GeneratorSpec::preferential_attachment(100, 3, true, 4).generate().unwrap();
        assert_eq!(pa3.link_count(), 1 + 2 + 3 * 97);
        let mut clique = GeneratorSpec::preferential_attachment(100, 3, true, 4);
        clique.seed_clique = 3;
        assert_eq!(clique.generate().unwrap().link_count(), 3 + 3 * 97);
        let mut dropped = GeneratorSpec::preferential_attachment(100, 3, true, 4);
        dropped.duplicates = DuplicatePolicy::Drop;
        assert!(dropped.generate().unwrap().link_count() <= 294);
        assert!(GeneratorSpec::preferential_attachment(3, 3, true, 0).generate().is_err());
    }

    #[test]
    fn single_attachment_is_a_forest_rooted_at_zero() {
        let net = GeneratorSpec::preferential_attachment(60, 1, true, 17).generate().unwrap();
        let mut out = vec![0; 60];
        for l in net.links() {
            assert!(l.source > l.target);
            out[l.source] += 1;
        }
        assert_eq!(out[0], 0);
        assert!(out[1..].iter().all(|&d| d == 1));
    }

    #[test]
    fn attachment_is_heavy_tailed() {
        let mut wins = 0;
        for seed in 0..100 {
            let pa = GeneratorSpec::preferential_attachment(1000, 1, false, seed).generate().unwrap();
            let er = GeneratorSpec::erdos_renyi(1000, 999, false, seed + 10_000).generate().unwrap();
            if max_degree(&pa) > max_degree(&er) {
                wins += 1;
            }
        }
        assert!(wins >= 95, "{wins}");
    }
}
