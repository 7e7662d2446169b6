//! Information-content complexity of networks.
//!
//! A network on `n` nodes with `l` of its `L` possible links is described by
//! a self-delimiting prefix holding `n` and `l`, followed by the rank of its
//! link list among all `Ω = C(L, l)` lists with `l` links. Of those lists,
//! `ω = n!/|Aut|` describe the same unlabelled network, so the complexity is
//!
//! ```text
//! C = prefix + log₂Ω − log₂ω
//! ```
//!
//! Weighted networks integrate the complexity of the partial networks formed
//! by their lightest links over the normalised weight threshold.

use serde::{Deserialize, Serialize};

use crate::automorphism::{aut_order_of_links, renumbering_log2_from};
use crate::error::{Error, Result};
use crate::graph::{slot_count, Link, Network};
use crate::numeric::{binomial, ceil_log2, ceil_log2_biguint, log2_biguint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub nodes: usize,
    pub links: usize,
    pub prefix_bits: u64,
    pub log2_omega_linklists: f64,
    pub log2_renumberings: f64,
    pub total_bits: f64,
    pub ceil_variant: bool,
    pub labelled_variant: bool,
}

/// How link weights are scaled onto `[0, 1]` before integrating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightNormalization {
    /// Weights sum to 1.
    #[default]
    Sum,
    /// The heaviest link has weight 1.
    Max,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComplexityOptions {
    /// Round the link-list payload up to whole bits.
    pub ceil: bool,
    /// Abort the automorphism search after this many nodes.
    pub node_budget: Option<u64>,
    /// Weight scaling for the weighted integral.
    pub normalization: WeightNormalization,
}

/// Length of the prefix encoding the node and link counts:
/// `2⌈log₂n⌉ + ⌈log₂L⌉ + 1`.
pub fn prefix_bits(n: u64, slots: u64) -> u64 {
    2 * ceil_log2(n) as u64 + ceil_log2(slots) as u64 + 1
}

/// log₂ of the binomial coefficient `C(slots, links)`.
pub fn log2_binomial(slots: u64, links: u64) -> Result<f64> {
    if links > slots {
        return Err(Error::InvalidArgument(format!(
            "{links} links exceed {slots} slots"
        )));
    }
    Ok(log2_biguint(&binomial(slots, links)))
}

fn payload_bits(slots: u64, links: u64, ceil: bool) -> f64 {
    let omega = binomial(slots, links);
    if ceil {
        ceil_log2_biguint(&omega) as f64
    } else {
        log2_biguint(&omega)
    }
}

pub fn complexity(net: &Network) -> Result<ComplexityReport> {
    complexity_with(net, &ComplexityOptions::default())
}

pub fn complexity_with(net: &Network, opts: &ComplexityOptions) -> Result<ComplexityReport> {
    links_complexity(
        net.node_count(),
        net.is_directed(),
        net.allows_self_loops(),
        net.links(),
        opts,
    )
}

fn links_complexity(
    n: usize,
    directed: bool,
    loops: bool,
    links: &[Link],
    opts: &ComplexityOptions,
) -> Result<ComplexityReport> {
    let slots = slot_count(n, directed, loops);
    let prefix = prefix_bits(n as u64, slots);
    let payload = payload_bits(slots, links.len() as u64, opts.ceil);
    let aut = aut_order_of_links(n, directed, links, opts.node_budget)?;
    let renumberings = renumbering_log2_from(n, &aut);
    Ok(ComplexityReport {
        nodes: n,
        links: links.len(),
        prefix_bits: prefix,
        log2_omega_linklists: payload,
        log2_renumberings: renumberings,
        total_bits: prefix as f64 + payload - renumberings,
        ceil_variant: opts.ceil,
        labelled_variant: false,
    })
}

/// Complexity of a network whose nodes are labelled: no renumbering term,
/// and the payload is rounded up to whole bits.
///
/// Callers wanting the `L = n²` encoding should pass a directed network that
/// allows self-loops; the slot count follows the network's policies.
pub fn labelled_complexity(net: &Network) -> ComplexityReport {
    let slots = net.slot_count();
    let prefix = prefix_bits(net.node_count() as u64, slots);
    let payload = payload_bits(slots, net.link_count() as u64, true);
    ComplexityReport {
        nodes: net.node_count(),
        links: net.link_count(),
        prefix_bits: prefix,
        log2_omega_linklists: payload,
        log2_renumberings: 0.0,
        total_bits: prefix as f64 + payload,
        ceil_variant: true,
        labelled_variant: true,
    }
}

pub fn weighted_complexity(net: &Network) -> Result<f64> {
    weighted_complexity_with(net, &ComplexityOptions::default())
}

/// Integral over `w ∈ [0, 1]` of the complexity of the partial network
/// holding the links lighter than `w`, after normalising weights to sum 1
/// (or, with [`WeightNormalization::Max`], to a largest weight of 1).
///
/// Ties collapse into one threshold and the node set is the same for every
/// partial network.
pub fn weighted_complexity_with(net: &Network, opts: &ComplexityOptions) -> Result<f64> {
    if net.link_count() == 0 {
        return Err(Error::NoLinks);
    }
    let total: f64 = match opts.normalization {
        WeightNormalization::Sum => net.total_weight(),
        WeightNormalization::Max => net.links().iter().map(|l| l.weight).fold(0.0, f64::max),
    };
    let mut sorted: Vec<Link> = net.links().to_vec();
    for l in &mut sorted {
        l.weight /= total;
    }
    sorted.sort_by(|a, b| a.weight.total_cmp(&b.weight));

    let (n, directed, loops) = (net.node_count(), net.is_directed(), net.allows_self_loops());
    let score = |k: usize| -> Result<f64> {
        Ok(links_complexity(n, directed, loops, &sorted[..k], opts)?.total_bits)
    };

    let mut integral = 0.0;
    let mut lower = 0.0;
    let mut current = score(0)?;
    let mut k = 0;
    while k < sorted.len() {
        let t = sorted[k].weight;
        while k < sorted.len() && sorted[k].weight == t {
            k += 1;
        }
        let upper = t.min(1.0);
        if upper > lower {
            integral += (upper - lower) * current;
            lower = upper;
        }
        if t >= 1.0 {
            break;
        }
        current = score(k)?;
    }
    if lower < 1.0 {
        integral += (1.0 - lower) * current;
    }
    Ok(integral)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    fn ln_scale(self) -> f64 {
        match self {
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::E => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaResult {
    pub mutual_information: f64,
    pub entropy: f64,
    pub ma: f64,
}

/// Medium articulation `I·(H − I)` of the normalised flow matrix, where `I`
/// is the mutual information between link sources and targets and `H` the
/// joint entropy of the link weights.
///
/// An undirected link contributes its weight in both directions.
pub fn medium_articulation(net: &Network, base: LogBase) -> Result<MaResult> {
    if net.link_count() == 0 {
        return Err(Error::NoLinks);
    }
    let n = net.node_count();
    let mut flows: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * net.link_count());
    for l in net.links() {
        flows.push((l.source, l.target, l.weight));
        if !net.is_directed() && l.source != l.target {
            flows.push((l.target, l.source, l.weight));
        }
    }
    let total: f64 = flows.iter().map(|f| f.2).sum();
    let mut row = vec![0.0; n];
    let mut col = vec![0.0; n];
    for f in &mut flows {
        f.2 /= total;
        row[f.0] += f.2;
        col[f.1] += f.2;
    }
    let scale = base.ln_scale();
    let mut mi = 0.0;
    let mut h = 0.0;
    for &(i, j, w) in &flows {
        if w > 0.0 {
            mi += w * (w / (row[i] * col[j])).ln();
            h -= w * w.ln();
        }
    }
    let (mi, h) = (mi / scale, h / scale);
    Ok(MaResult {
        mutual_information: mi,
        entropy: h,
        ma: mi * (h - mi),
    })
}
