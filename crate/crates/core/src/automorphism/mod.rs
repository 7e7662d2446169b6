//! Order of the automorphism group of a network.
//!
//! Link weights are ignored; link direction and self-loops are respected.
//! [`aut_order`] reduces tree-like parts of the network exactly and runs an
//! individualization-refinement search on what remains.
//! [`aut_order_bruteforce`] enumerates permutations and serves as an oracle.

mod reduce;
mod search;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Link, Network};
use crate::numeric::{log2_biguint, log2_factorial};
use search::{automorphism_order, ColoredDigraph};

/// Largest node count accepted by [`aut_order_bruteforce`].
pub const BRUTE_FORCE_MAX_NODES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutResult {
    #[serde(serialize_with = "serialize_biguint")]
    pub order: BigUint,
    pub generators_found: usize,
    pub nodes_searched: u64,
}

fn serialize_biguint<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl AutResult {
    pub fn log2_order(&self) -> f64 {
        log2_biguint(&self.order)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AutOptions {
    /// Abort with [`Error::BudgetExceeded`] after this many search nodes.
    pub node_budget: Option<u64>,
    /// Count tree-like parts directly instead of searching them.
    pub reduce: bool,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions {
            node_budget: None,
            reduce: true,
        }
    }
}

pub fn aut_order(net: &Network) -> Result<AutResult> {
    aut_order_with(net, &AutOptions::default())
}

pub fn aut_order_with(net: &Network, opts: &AutOptions) -> Result<AutResult> {
    if opts.reduce {
        return reduce::reduced_order(net.node_count(), net.is_directed(), net.links(), opts.node_budget);
    }
    let mut colors = vec![0u64; net.node_count()];
    let mut arcs = Vec::with_capacity(net.link_count());
    for l in net.links() {
        if l.source == l.target {
            colors[l.source] = 1;
        } else {
            arcs.push((l.source as u32, l.target as u32));
        }
    }
    let g = ColoredDigraph::new(colors, net.is_directed(), &arcs);
    let out = automorphism_order(&g, opts.node_budget)?;
    Ok(AutResult {
        order: out.order,
        generators_found: out.generators,
        nodes_searched: out.nodes,
    })
}

/// Reduced search over a link slice; used for partial networks.
pub(crate) fn aut_order_of_links(
    n: usize,
    directed: bool,
    links: &[Link],
    budget: Option<u64>,
) -> Result<AutResult> {
    reduce::reduced_order(n, directed, links, budget)
}

/// Counts permutations mapping the link set onto itself, by enumeration.
pub fn aut_order_bruteforce(net: &Network) -> Result<AutResult> {
    let n = net.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_NODES,
        });
    }
    let links: Vec<(usize, usize)> = net.links().iter().map(|l| (l.source, l.target)).collect();
    let mut adjacent = vec![false; n * n];
    for &(u, v) in &links {
        adjacent[u * n + v] = true;
        if !net.is_directed() {
            adjacent[v * n + u] = true;
        }
    }
    let preserves = |perm: &[usize]| links.iter().all(|&(u, v)| adjacent[perm[u] * n + perm[v]]);

    // Heap's algorithm.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut count: u64 = u64::from(preserves(&perm));
    let mut visited: u64 = 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visited += 1;
            if preserves(&perm) {
                count += 1;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(AutResult {
        order: BigUint::from(count),
        generators_found: 0,
        nodes_searched: visited,
    })
}

/// log₂ of the number of distinct renumberings, `n! / |Aut|`.
pub fn renumbering_count_log2(net: &Network) -> Result<f64> {
    let aut = aut_order(net)?;
    Ok(renumbering_log2_from(net.node_count(), &aut))
}

pub(crate) fn renumbering_log2_from(n: usize, aut: &AutResult) -> f64 {
    (log2_factorial(n as u64) - aut.log2_order()).max(0.0)
}

/// `n! / |Aut|` as an exact integer.
pub fn renumbering_count(net: &Network) -> Result<BigUint> {
    let aut = aut_order(net)?;
    let fact = crate::numeric::factorial(net.node_count() as u64);
    debug_assert!((&fact % &aut.order) == BigUint::ZERO);
    Ok(fact / aut.order.max(BigUint::one()))
}
