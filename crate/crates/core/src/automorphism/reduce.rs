//! Structural reduction ahead of the search.
//!
//! Sparse networks are mostly trees: isolated nodes, pendant chains, stars.
//! Their automorphisms are counted exactly without search:
//!
//! * every tree hanging off a vertex gets a canonical code (AHU style), and
//!   the number of ways to permute identical sibling subtrees is multiplied
//!   into the order directly;
//! * tree components are grouped by their code (rooted at the centre or the
//!   bicentre edge) and each group of `k` identical trees contributes `k!`;
//! * what remains are the 2-cores of the cyclic components, searched with
//!   each vertex coloured by the code of the tree hanging from it.
//!
//! Networks with more than half of their slots filled are complemented first,
//! which leaves the group unchanged.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use super::search::{automorphism_order, ColoredDigraph};
use super::AutResult;
use crate::error::Result;
use crate::graph::Link;

const OUT: u8 = 0;
const IN: u8 = 1;
const BOTH: u8 = 2;

fn flip(label: u8) -> u8 {
    match label {
        OUT => IN,
        IN => OUT,
        other => other,
    }
}

#[derive(Hash, PartialEq, Eq)]
enum TreeKey {
    Centre(u32),
    Bicentre((u32, u8), (u32, u8)),
}

struct Interner {
    ids: HashMap<(bool, Vec<(u8, u32)>), u32>,
}

impl Interner {
    fn id(&mut self, looped: bool, children: Vec<(u8, u32)>) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry((looped, children)).or_insert(next)
    }
}

fn multiply_factorial(order: &mut BigUint, k: usize) {
    for j in 2..=k as u64 {
        *order *= j;
    }
}

/// Underlying simple graph: per vertex a sorted list of `(neighbour, label)`
/// where the label says which arcs join them, seen from the vertex.
struct Underlying {
    adj: Vec<Vec<(u32, u8)>>,
    looped: Vec<bool>,
    directed: bool,
    arcs: Vec<(u32, u32)>,
}

fn underlying(n: usize, directed: bool, links: &[Link]) -> Underlying {
    let mut looped = vec![false; n];
    let mut arcs: Vec<(u32, u32)> = Vec::with_capacity(links.len());
    for l in links {
        if l.source == l.target {
            looped[l.source] = true;
        } else {
            arcs.push((l.source as u32, l.target as u32));
        }
    }
    let pairs = if directed { n * n.saturating_sub(1) } else { n * n.saturating_sub(1) / 2 };
    if arcs.len() * 2 > pairs {
        let mut present = vec![false; n * n];
        for &(u, v) in &arcs {
            present[u as usize * n + v as usize] = true;
        }
        arcs.clear();
        for u in 0..n {
            let start = if directed { 0 } else { u + 1 };
            for v in start..n {
                if u != v && !present[u * n + v] {
                    arcs.push((u as u32, v as u32));
                }
            }
        }
    }
    let mut adj: Vec<Vec<(u32, u8)>> = vec![Vec::new(); n];
    for &(u, v) in &arcs {
        // Undirected links are symmetric, so they read as BOTH from either end.
        let (fwd, back) = if directed { (OUT, IN) } else { (BOTH, BOTH) };
        adj[u as usize].push((v, fwd));
        adj[v as usize].push((u, back));
    }
    for list in &mut adj {
        list.sort_unstable();
        // A reciprocal pair shows up as OUT and IN for the same neighbour.
        let mut merged: Vec<(u32, u8)> = Vec::with_capacity(list.len());
        for &(v, lab) in list.iter() {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 = BOTH,
                _ => merged.push((v, lab)),
            }
        }
        *list = merged;
    }
    Underlying {
        adj,
        looped,
        directed,
        arcs,
    }
}

/// `links` must be a valid link set for a network on `n` nodes.
pub(crate) fn reduced_order(
    n: usize,
    directed: bool,
    links: &[Link],
    budget: Option<u64>,
) -> Result<AutResult> {
    let g = underlying(n, directed, links);

    // Components.
    let mut comp = vec![u32::MAX; n];
    let mut comp_nodes: Vec<usize> = Vec::new();
    let mut comp_edges: Vec<usize> = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        let id = comp_nodes.len() as u32;
        let (mut nodes, mut degree_sum) = (0, 0);
        comp[s] = id;
        stack.push(s);
        while let Some(u) = stack.pop() {
            nodes += 1;
            degree_sum += g.adj[u].len();
            for &(v, _) in &g.adj[u] {
                if comp[v as usize] == u32::MAX {
                    comp[v as usize] = id;
                    stack.push(v as usize);
                }
            }
        }
        comp_nodes.push(nodes);
        comp_edges.push(degree_sum / 2);
    }

    // Layered leaf peeling. Tree components stop at their centre or
    // bicentre; cyclic components stop at their 2-core.
    let mut degree: Vec<usize> = g.adj.iter().map(Vec::len).collect();
    let mut alive_in_comp = comp_nodes.clone();
    let mut removed = vec![false; n];
    let mut children: Vec<Vec<(u8, u32)>> = vec![Vec::new(); n];
    let mut code = vec![0u32; n];
    let mut interner = Interner { ids: HashMap::new() };
    let mut order = BigUint::one();

    let mut leaves: Vec<usize> = (0..n)
        .filter(|&v| degree[v] == 1 && alive_in_comp[comp[v] as usize] > 2)
        .collect();
    while !leaves.is_empty() {
        // Code this round's leaves before detaching any of them.
        let mut detach = Vec::with_capacity(leaves.len());
        for &v in &leaves {
            let mut kids = std::mem::take(&mut children[v]);
            kids.sort_unstable();
            order_from_siblings(&mut order, &kids);
            code[v] = interner.id(g.looped[v], kids);
            let &(p, lab) = g.adj[v]
                .iter()
                .find(|&&(p, _)| !removed[p as usize])
                .expect("a leaf has one live neighbour");
            detach.push((v, p as usize, lab));
        }
        for &(v, p, lab) in &detach {
            removed[v] = true;
            alive_in_comp[comp[v] as usize] -= 1;
            degree[p] -= 1;
            // Label of the link as seen from the parent.
            children[p].push((flip(lab), code[v]));
        }
        let mut next: Vec<usize> = detach
            .iter()
            .map(|&(_, p, _)| p)
            .filter(|&p| degree[p] == 1 && alive_in_comp[comp[p] as usize] > 2)
            .collect();
        next.sort_unstable();
        next.dedup();
        leaves = next;
    }

    // Remaining vertices: centres, bicentres, and cores.
    for v in 0..n {
        if !removed[v] {
            let mut kids = std::mem::take(&mut children[v]);
            kids.sort_unstable();
            order_from_siblings(&mut order, &kids);
            code[v] = interner.id(g.looped[v], kids);
        }
    }

    let mut tree_classes: HashMap<TreeKey, usize> = HashMap::new();
    let mut core_index = vec![u32::MAX; n];
    let mut core_colors: Vec<u64> = Vec::new();
    let mut seen_comp = vec![false; comp_nodes.len()];
    for v in 0..n {
        if removed[v] {
            continue;
        }
        let c = comp[v] as usize;
        if comp_edges[c] + 1 == comp_nodes[c] {
            if std::mem::replace(&mut seen_comp[c], true) {
                continue;
            }
            let key = if alive_in_comp[c] == 1 {
                TreeKey::Centre(code[v])
            } else {
                let &(w, lab) = g.adj[v]
                    .iter()
                    .find(|&&(w, _)| !removed[w as usize])
                    .expect("bicentre partner");
                let a = (code[v], lab);
                let b = (code[w as usize], flip(lab));
                if a == b {
                    order *= 2u32;
                }
                TreeKey::Bicentre(a.min(b), a.max(b))
            };
            *tree_classes.entry(key).or_insert(0) += 1;
        } else {
            core_index[v] = core_colors.len() as u32;
            core_colors.push(code[v] as u64);
        }
    }
    for &k in tree_classes.values() {
        multiply_factorial(&mut order, k);
    }

    let mut nodes = 0;
    let mut generators = 0;
    if !core_colors.is_empty() {
        let arcs: Vec<(u32, u32)> = g
            .arcs
            .iter()
            .filter_map(|&(u, v)| {
                let (a, b) = (core_index[u as usize], core_index[v as usize]);
                (a != u32::MAX && b != u32::MAX).then_some((a, b))
            })
            .collect();
        let core = ColoredDigraph::new(core_colors, g.directed, &arcs);
        let outcome = automorphism_order(&core, budget)?;
        order *= outcome.order;
        nodes = outcome.nodes;
        generators = outcome.generators;
    }
    Ok(AutResult {
        order,
        generators_found: generators,
        nodes_searched: nodes,
    })
}

// Identical sibling subtrees can be permuted freely.
fn order_from_siblings(order: &mut BigUint, sorted_kids: &[(u8, u32)]) {
    let mut i = 0;
    while i < sorted_kids.len() {
        let mut j = i + 1;
        while j < sorted_kids.len() && sorted_kids[j] == sorted_kids[i] {
            j += 1;
        }
        multiply_factorial(order, j - i);
        i = j;
    }
}
