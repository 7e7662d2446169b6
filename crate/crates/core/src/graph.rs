//! The network model shared by every measure.
//!
//! Nodes are dense indices `0..n`. Links carry a positive weight and are
//! never merged: inserting an existing `(source, target)` pair is an error.
//! Undirected links are stored with `source < target`.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct Network {
    n: usize,
    directed: bool,
    allow_self_loops: bool,
    links: Vec<Link>,
    index: HashMap<(usize, usize), usize>,
}

/// Number of link slots available to a network with the given policies.
pub fn slot_count(n: usize, directed: bool, allow_self_loops: bool) -> u64 {
    let n = n as u64;
    match (directed, allow_self_loops) {
        (false, false) => n * n.saturating_sub(1) / 2,
        (false, true) => n * (n + 1) / 2,
        (true, false) => n * n.saturating_sub(1),
        (true, true) => n * n,
    }
}

impl Network {
    pub fn new(n: usize, directed: bool, allow_self_loops: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoNodes);
        }
        Ok(Network {
            n,
            directed,
            allow_self_loops,
            links: Vec::new(),
            index: HashMap::new(),
        })
    }

    /// Builds a network from `(source, target, weight)` triples.
    pub fn from_links<I>(n: usize, directed: bool, allow_self_loops: bool, links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut net = Network::new(n, directed, allow_self_loops)?;
        for (u, v, w) in links {
            net.add_link(u, v, w)?;
        }
        Ok(net)
    }

    /// Unit-weight network from plain pairs.
    pub fn from_pairs<I>(n: usize, directed: bool, allow_self_loops: bool, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Network::from_links(
            n,
            directed,
            allow_self_loops,
            pairs.into_iter().map(|(u, v)| (u, v, 1.0)),
        )
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn allows_self_loops(&self) -> bool {
        self.allow_self_loops
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Maximum possible link count `L` under this network's policies.
    pub fn slot_count(&self) -> u64 {
        slot_count(self.n, self.directed, self.allow_self_loops)
    }

    fn key(&self, u: usize, v: usize) -> (usize, usize) {
        if !self.directed && u > v {
            (v, u)
        } else {
            (u, v)
        }
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node >= self.n {
            Err(Error::NodeOutOfRange { node, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn add_link(&mut self, u: usize, v: usize, weight: f64) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::BadWeight(weight));
        }
        if u == v && !self.allow_self_loops {
            return Err(Error::SelfLoopNotAllowed(u));
        }
        let (source, target) = self.key(u, v);
        if self.index.contains_key(&(source, target)) {
            return Err(Error::DuplicateLink(source, target));
        }
        self.index.insert((source, target), self.links.len());
        self.links.push(Link {
            source,
            target,
            weight,
        });
        Ok(())
    }

    pub fn has_link(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&self.key(u, v))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.index.get(&self.key(u, v)).map(|&i| self.links[i].weight)
    }

    pub fn has_self_loop_links(&self) -> bool {
        self.links.iter().any(|l| l.source == l.target)
    }

    pub fn total_weight(&self) -> f64 {
        self.links.iter().map(|l| l.weight).sum()
    }

    /// True when every link has weight exactly 1.
    pub fn is_unit_weighted(&self) -> bool {
        self.links.iter().all(|l| l.weight == 1.0)
    }

    /// Weights in link-insertion order.
    pub fn weights(&self) -> Vec<f64> {
        self.links.iter().map(|l| l.weight).collect()
    }

    fn empty_like(&self) -> Network {
        Network {
            n: self.n,
            directed: self.directed,
            allow_self_loops: self.allow_self_loops,
            links: Vec::new(),
            index: HashMap::new(),
        }
    }

    // Internal insertion for links already known to be valid.
    fn push_unchecked(&mut self, source: usize, target: usize, weight: f64) {
        self.index.insert((source, target), self.links.len());
        self.links.push(Link {
            source,
            target,
            weight,
        });
    }

    /// Iterates over every slot `(source, target)` in a fixed order.
    pub fn slots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        let directed = self.directed;
        let loops = self.allow_self_loops;
        (0..n).flat_map(move |u| {
            let start = if directed { 0 } else { u };
            (start..n)
                .filter(move |&v| loops || u != v)
                .map(move |v| (u, v))
        })
    }

    /// The unweighted complement: a unit link wherever this network has none.
    pub fn complement(&self) -> Network {
        let mut out = self.empty_like();
        let slots: Vec<_> = self.slots().filter(|&(u, v)| !self.has_link(u, v)).collect();
        for (u, v) in slots {
            out.push_unchecked(u, v, 1.0);
        }
        out
    }

    /// Keeps the links with weight `<= t`; every node is retained.
    pub fn threshold_subnetwork(&self, t: f64) -> Network {
        let mut out = self.empty_like();
        for l in self.links.iter().filter(|l| l.weight <= t) {
            out.push_unchecked(l.source, l.target, l.weight);
        }
        out
    }

    pub fn normalize_weights(&self) -> Result<Network> {
        if self.links.is_empty() {
            return Err(Error::NoLinks);
        }
        let total = self.total_weight();
        let mut out = self.clone();
        for l in &mut out.links {
            l.weight /= total;
        }
        Ok(out)
    }

    /// Same structure with every weight set to 1.
    pub fn unweighted(&self) -> Network {
        let mut out = self.clone();
        for l in &mut out.links {
            l.weight = 1.0;
        }
        out
    }

    /// Renames node `i` to `perm[i]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Network> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let mut out = self.empty_like();
        for l in &self.links {
            let (s, t) = out.key(perm[l.source], perm[l.target]);
            out.push_unchecked(s, t, l.weight);
        }
        Ok(out)
    }

    /// Same structure and weights, ignoring link insertion order.
    pub fn same_as(&self, other: &Network) -> bool {
        self.n == other.n
            && self.directed == other.directed
            && self.allow_self_loops == other.allow_self_loops
            && self.links.len() == other.links.len()
            && self
                .links
                .iter()
                .all(|l| other.weight(l.source, l.target) == Some(l.weight))
    }

    /// Links as a sorted list, for deterministic output.
    pub fn sorted_links(&self) -> Vec<Link> {
        let mut links = self.links.clone();
        links.sort_by_key(|l| (l.source, l.target));
        links
    }
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
