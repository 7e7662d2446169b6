//! Link-shuffled null ensembles and the significance of a network's
//! complexity against them.
//!
//! A shuffled replica keeps the node count, the link count, and the exact
//! multiset of link weights, but reattaches every link to a uniformly random
//! free slot. Complexities of the replicas are summarised on a log scale:
//! the surplus is `C − exp⟨ln C⟩` and sigma is `|ln C − ⟨ln C⟩| / σ(ln C)`.


use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::complexity::{complexity_with, weighted_complexity_with, ComplexityOptions};
use crate::error::{Error, Result};
use crate::generators::sample_slots;
use crate::graph::{slot_count, Network};

/// Fill fraction above which shuffles enumerate the free slots instead of
/// drawing by rejection.
pub const DENSE_FRACTION: f64 = 0.9;

pub const DEFAULT_SAMPLES: usize = 100;

/// SplitMix64 finaliser.
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replica `k` in an ensemble seeded with `seed`.
pub fn replica_seed(seed: u64, k: u64) -> u64 {
    mix64(seed ^ k)
}

/// Parses a seed written in decimal or as `0x`-prefixed hex.
pub fn parse_seed(text: &str) -> Result<u64> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| Error::InvalidArgument(format!("bad seed {text:?}")))
}

/// Reattaches every link to a random free slot, all links at once, keeping
/// each link's weight.
pub fn shuffle_links(net: &Network, seed: u64) -> Result<Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, directed, loops) = (net.node_count(), net.is_directed(), net.allows_self_loops());
    let slots = sample_slots(&mut rng, n, directed, loops, net.link_count(), DENSE_FRACTION)?;
    let mut out = Network::new(n, directed, loops)?;
    for (link, (u, v)) in net.links().iter().zip(slots) {
        out.add_link(u, v, link.weight)?;
    }
    Ok(out)
}

/// How networks and their replicas are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scoring {
    Weighted,
    Unweighted,
}

impl Scoring {
    /// Weighted unless every link has weight 1.
    pub fn for_network(net: &Network) -> Scoring {
        if net.is_unit_weighted() {
            Scoring::Unweighted
        } else {
            Scoring::Weighted
        }
    }

    pub fn score(self, net: &Network, opts: &ComplexityOptions) -> Result<f64> {
        match self {
            Scoring::Weighted => weighted_complexity_with(net, opts),
            Scoring::Unweighted => Ok(complexity_with(net, opts)?.total_bits),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub samples: usize,
    pub ln_c_values: Vec<f64>,
    pub mean_ln_c: f64,
    /// Population standard deviation.
    pub std_ln_c: f64,
    pub geometric_mean_c: f64,
}

impl EnsembleStats {
    pub fn from_ln_values(ln_c_values: Vec<f64>) -> Self {
        let samples = ln_c_values.len();
        // Identical replicas report their common value and exactly zero spread.
        let (mean, std) = if !ln_c_values.is_empty() && ln_c_values.iter().all(|&x| x == ln_c_values[0]) {
            (ln_c_values[0], 0.0)
        } else {
            let mean = ln_c_values.iter().sum::<f64>() / samples as f64;
            let var = ln_c_values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / samples as f64;
            (mean, var.sqrt())
        };
        EnsembleStats {
            samples,
            ln_c_values,
            mean_ln_c: mean,
            std_ln_c: std,
            geometric_mean_c: mean.exp(),
        }
    }

    /// Density at `c` of the log-normal with this ensemble's parameters.
    pub fn lognormal_density(&self, c: f64) -> f64 {
        if c <= 0.0 || self.std_ln_c == 0.0 {
            return 0.0;
        }
        let z = (c.ln() - self.mean_ln_c) / self.std_ln_c;
        (-0.5 * z * z).exp() / (c * self.std_ln_c * (2.0 * std::f64::consts::PI).sqrt())
    }
}

/// Scores `samples` shuffled replicas; replica `k` uses [`replica_seed`].
pub fn ensemble_stats(
    net: &Network,
    samples: usize,
    seed: u64,
    scoring: Scoring,
    opts: &ComplexityOptions,
) -> Result<EnsembleStats> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "an ensemble needs at least 2 samples, got {samples}"
        )));
    }
    if net.link_count() == 0 {
        return Err(Error::NoLinks);
    }
    let mut ln_values = Vec::with_capacity(samples);
    for k in 0..samples {
        let replica = shuffle_links(net, replica_seed(seed, k as u64))?;
        let c = scoring.score(&replica, opts).map_err(|e| {
            Error::InvalidArgument(format!("replica {k} of {samples} could not be scored: {e}"))
        })?;
        ln_values.push(c.ln());
    }
    Ok(EnsembleStats::from_ln_values(ln_values))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceReport {
    pub c_real: f64,
    pub surplus: f64,
    /// `+inf` whenever the ensemble has zero spread.
    pub sigma: f64,
}

pub fn significance(c_real: f64, stats: &EnsembleStats) -> SignificanceReport {
    let sigma = if stats.std_ln_c == 0.0 {
        f64::INFINITY
    } else {
        (c_real.ln() - stats.mean_ln_c).abs() / stats.std_ln_c
    };
    SignificanceReport {
        c_real,
        surplus: c_real - stats.geometric_mean_c,
        sigma,
    }
}

/// Everything a null-model run produces for one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullModelRun {
    pub nodes: usize,
    pub links: usize,
    pub scoring: Scoring,
    pub significance: SignificanceReport,
    pub stats: EnsembleStats,
    /// Replicas whose complexity exceeded the original's.
    pub replicas_exceeding: usize,
}

pub fn null_model(
    net: &Network,
    samples: usize,
    seed: u64,
    scoring: Scoring,
    opts: &ComplexityOptions,
) -> Result<NullModelRun> {
    let c_real = scoring.score(net, opts)?;
    let stats = ensemble_stats(net, samples, seed, scoring, opts)?;
    let exceeding = stats.ln_c_values.iter().filter(|&&x| x > c_real.ln()).count();
    Ok(NullModelRun {
        nodes: net.node_count(),
        links: net.link_count(),
        scoring,
        significance: significance(c_real, &stats),
        stats,
        replicas_exceeding: exceeding,
    })
}

/// Random digraph whose link weights are normal with mean 0: `l` distinct
/// node pairs, each linked from lower to higher index when its weight is
/// positive and the other way when negative, storing the absolute value.
pub fn normal_weight_null(n: usize, l: usize, seed: u64, std_dev: f64) -> Result<Network> {
    if !(std_dev > 0.0 && std_dev.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad standard deviation {std_dev}")));
    }
    let slots = slot_count(n, false, false);
    if l as u64 > slots {
        return Err(Error::Infeasible {
            links: l as u64,
            slots,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = sample_slots(&mut rng, n, false, false, l, 0.5)?;
    let mut net = Network::new(n, true, false)?;
    for (u, v) in pairs {
        let z: f64 = loop {
            let z: f64 = rng.sample(StandardNormal);
            if z != 0.0 {
                break z;
            }
        };
        let w = std_dev * z;
        if w > 0.0 {
            net.add_link(u, v, w)?;
        } else {
            net.add_link(v, u, -w)?;
        }
    }
    Ok(net)
}

/// Whether every sampled pair of [`normal_weight_null`] drew a positive
/// weight for this seed.
pub fn normal_null_all_positive(n: usize, l: usize, seed: u64) -> Result<bool> {
    let net = normal_weight_null(n, l, seed, 1.0)?;
    Ok(net.links().iter().all(|link| link.source < link.target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use crate::complexity::weighted_complexity;

    fn multiset(net: &Network) -> Vec<u64> {
        let mut w: Vec<u64> = net.weights().iter().map(|x| x.to_bits()).collect();
        w.sort_unstable();
        w
    }

    fn distinct_pairs(net: &Network) -> bool {
        let set: HashSet<_> = net.links().iter().map(|l| (l.source, l.target)).collect();
        set.len() == net.link_count()
    }

    #[test]
    fn seeds_parse_in_both_radices() {
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert_eq!(parse_seed("0x2a").unwrap(), 42);
        assert_eq!(parse_seed("0XFF").unwrap(), 255);
        assert!(parse_seed("forty").is_err());
        assert_ne!(replica_seed(1, 0), replica_seed(1, 1));
        assert_eq!(replica_seed(5, 3), mix64(5 ^ 3));
    }

    #[test]
    fn mix64_reference_values() {
        // SplitMix64 outputs for state 0 after one increment.
        assert_eq!(mix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn complete_digraph_shuffles_to_itself() {
        let full = Network::new(6, true, false).unwrap().complement();
        for seed in 0..5 {
            let s = shuffle_links(&full, seed).unwrap();
            assert_eq!(s.link_count(), full.link_count());
            for l in full.links() {
                assert!(s.has_link(l.source, l.target));
            }
        }
    }

    #[test]
    fn shuffle_keeps_weights_and_is_deterministic() {
        let net = Network::from_links(
            6,
            true,
            true,
            [(0, 1, 0.3), (1, 2, 1.7), (2, 2, 0.2), (3, 0, 0.3), (5, 4, 9.0)],
        )
        .unwrap();
        let a = shuffle_links(&net, 77).unwrap();
        let b = shuffle_links(&net, 77).unwrap();
        assert_eq!(a.links(), b.links());
        assert_eq!(multiset(&a), multiset(&net));
        assert!(distinct_pairs(&a));
        assert!(a.is_directed() && a.allows_self_loops());
    }

    #[test]
    fn shuffle_rejects_infeasible() {
        // A network cannot hold more links than slots, so only empty input
        // and valid input exist; an empty one shuffles to empty.
        let empty = Network::new(4, false, false).unwrap();
        assert_eq!(shuffle_links(&empty, 1).unwrap().link_count(), 0);
    }

    #[test]
    fn dense_shuffles_use_the_enumerating_path() {
        let mut net = Network::new(8, false, false).unwrap().complement();
        let weights: Vec<f64> = (1..=28).map(|i| i as f64).collect();
        net = Network::from_links(
            8,
            false,
            false,
            net.links().iter().zip(&weights).map(|(l, &w)| (l.source, l.target, w)),
        )
        .unwrap();
        // Drop two links: 26/28 > 0.9.
        let sparse = Network::from_links(
            8,
            false,
            false,
            net.links()[2..].iter().map(|l| (l.source, l.target, l.weight)),
        )
        .unwrap();
        let s = shuffle_links(&sparse, 3).unwrap();
        assert_eq!(multiset(&s), multiset(&sparse));
        assert!(distinct_pairs(&s));
    }

    #[test]
    fn ensemble_examples() {
        let full = Network::new(5, true, false).unwrap().complement();
        let stats = ensemble_stats(&full, 10, 1, Scoring::Unweighted, &Default::default()).unwrap();
        assert_eq!(stats.std_ln_c, 0.0);
        let c = complexity_with(&full, &Default::default()).unwrap().total_bits;
        assert_eq!(stats.mean_ln_c, c.ln());
        assert_eq!(significance(c, &stats).sigma, f64::INFINITY);

        let net = Network::from_links(8, true, false, [(0, 1, 0.2), (1, 2, 0.5), (3, 4, 0.3), (4, 3, 0.7)]).unwrap();
        let a = ensemble_stats(&net, 20, 9, Scoring::Weighted, &Default::default()).unwrap();
        let b = ensemble_stats(&net, 20, 9, Scoring::Weighted, &Default::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 20);
        assert_eq!(a.ln_c_values.len(), 20);
        assert!((a.geometric_mean_c - a.mean_ln_c.exp()).abs() < 1e-12);
        assert!(ensemble_stats(&net, 1, 9, Scoring::Weighted, &Default::default()).is_err());
    }

    #[test]
    fn identical_replicas_have_zero_spread() {
        let stats = EnsembleStats::from_ln_values(vec![2.5f64.ln(), 2.5f64.ln()]);
        assert_eq!(stats.std_ln_c, 0.0);
        assert_eq!(stats.mean_ln_c, 2.5f64.ln());
    }

    #[test]
    fn significance_examples() {
        let stats = EnsembleStats::from_ln_values(vec![1.0, 2.0, 3.0]);
        let at_mean = significance(stats.geometric_mean_c, &stats);
        assert!(at_mean.surplus.abs() < 1e-12);
        assert!(at_mean.sigma.abs() < 1e-12);
        let above = significance(3.0f64.exp(), &stats);
        let std = (2.0f64 / 3.0).sqrt();
        assert!((above.sigma - 1.0 / std).abs() < 1e-12);
        let flat = EnsembleStats::from_ln_values(vec![1.0, 1.0]);
        assert_eq!(significance(10.0, &flat).sigma, f64::INFINITY);
    }

    #[test]
    fn lognormal_density_integrates_to_one() {
        let stats = EnsembleStats::from_ln_values(vec![3.0, 3.2, 3.4, 2.9]);
        let (lo, hi, steps) = (1e-3, 400.0, 400_000);
        let h = (hi - lo) / steps as f64;
        let total: f64 = (0..steps).map(|i| stats.lognormal_density(lo + (i as f64 + 0.5) * h) * h).sum();
        assert!((total - 1.0).abs() < 1e-4, "{total}");
    }

    #[test]
    fn normal_null_examples() {
        let empty = normal_weight_null(10, 0, 1, 1.0).unwrap();
        assert_eq!(empty.link_count(), 0);
        let net = normal_weight_null(35, 219, 5, 1.0).unwrap();
        assert_eq!(net.link_count(), 219);
        assert!(net.is_directed());
        assert!(matches!(normal_weight_null(4, 7, 0, 1.0), Err(Error::Infeasible { .. })));

        // Find a seed whose draws are all positive, then check orientation.
        let seed = (0..10_000u64).find(|&s| normal_null_all_positive(4, 2, s).unwrap()).unwrap();
        let net = normal_weight_null(4, 2, seed, 1.0).unwrap();
        assert!(net.links().iter().all(|l| l.source < l.target));
    }

    #[test]
    fn normal_null_is_scale_free() {
        for seed in 0..5 {
            let a = normal_weight_null(20, 40, seed, 1.0).unwrap();
            let b = normal_weight_null(20, 40, seed, 7.5).unwrap();
            let ca = weighted_complexity(&a).unwrap();
            let cb = weighted_complexity(&b).unwrap();
            assert!((ca - cb).abs() < 1e-9, "{ca} vs {cb}");
        }
    }
}
