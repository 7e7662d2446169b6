//! Individualization-refinement search for the order of the automorphism
//! group of a vertex-coloured digraph.
//!
//! The first path of the search tree individualizes the lowest-numbered
//! vertex of the first non-singleton cell at every level until the partition
//! is discrete. Walking back up the path, each level computes the orbit of
//! the individualized vertex under the pointwise stabilizer of the vertices
//! above it; the group order is the product of those orbit sizes.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Vertex-coloured digraph on `0..n`. Self-loops are carried as colours,
/// never as arcs.
#[derive(Debug, Clone)]
pub(crate) struct ColoredDigraph {
    directed: bool,
    colors: Vec<u64>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
}

impl ColoredDigraph {
    /// `arcs` must not contain loops or duplicates. For undirected graphs
    /// pass each edge once.
    pub(crate) fn new(colors: Vec<u64>, directed: bool, arcs: &[(u32, u32)]) -> Self {
        let n = colors.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in arcs {
            debug_assert_ne!(u, v);
            out_adj[u as usize].push(v);
            if directed {
                in_adj[v as usize].push(u);
            } else {
                out_adj[v as usize].push(u);
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        ColoredDigraph {
            directed,
            colors,
            out_adj,
            in_adj,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.colors.len()
    }

    fn has_arc(&self, u: u32, v: u32) -> bool {
        self.out_adj[u as usize].binary_search(&v).is_ok()
    }

    // Vertices with an arc into `w`.
    fn predecessors(&self, w: u32) -> &[u32] {
        if self.directed {
            &self.in_adj[w as usize]
        } else {
            &self.out_adj[w as usize]
        }
    }

    fn successors(&self, w: u32) -> &[u32] {
        &self.out_adj[w as usize]
    }

    fn is_automorphism(&self, perm: &[u32]) -> bool {
        (0..self.len()).all(|u| {
            let pu = perm[u];
            self.colors[u] == self.colors[pu as usize]
                && self.out_adj[u].len() == self.out_adj[pu as usize].len()
                && self.out_adj[u].iter().all(|&v| self.has_arc(pu, perm[v as usize]))
        })
    }
}

#[derive(Debug, Clone)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    // Start position of the cell holding each vertex.
    cell_of: Vec<u32>,
    // Indexed by cell start: one past the last position of that cell.
    cell_end: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn by_color(colors: &[u64]) -> Self {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0; n];
        let mut cell_of = vec![0; n];
        let mut cell_end = vec![0; n];
        let mut cells = 0;
        let mut start = 0;
        for i in 0..n {
            pos[lab[i] as usize] = i as u32;
            if i > 0 && colors[lab[i] as usize] != colors[lab[i - 1] as usize] {
                cell_end[start] = i as u32;
                start = i;
            }
            if i == start {
                cells += 1;
            }
            cell_of[lab[i] as usize] = start as u32;
        }
        if n > 0 {
            cell_end[start] = n as u32;
        }
        Partition {
            lab,
            pos,
            cell_of,
            cell_end,
            cells,
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    fn cell_starts(&self) -> Vec<u32> {
        let mut starts = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.lab.len() {
            starts.push(s as u32);
            s = self.cell_end[s] as usize;
        }
        starts
    }

    fn first_nonsingleton(&self) -> Option<u32> {
        let mut s = 0;
        while s < self.lab.len() {
            let e = self.cell_end[s] as usize;
            if e - s > 1 {
                return Some(s as u32);
            }
            s = e;
        }
        None
    }

    fn cell(&self, start: u32) -> &[u32] {
        &self.lab[start as usize..self.cell_end[start as usize] as usize]
    }

    /// Moves `v` to the front of its cell as a singleton. Returns its start.
    fn individualize(&mut self, v: u32) -> u32 {
        let s = self.cell_of[v as usize];
        let e = self.cell_end[s as usize];
        debug_assert!(e - s > 1);
        let pv = self.pos[v as usize];
        let first = self.lab[s as usize];
        self.lab.swap(s as usize, pv as usize);
        self.pos[first as usize] = pv;
        self.pos[v as usize] = s;
        self.cell_end[s as usize] = s + 1;
        self.cell_end[s as usize + 1] = e;
        for p in s + 1..e {
            self.cell_of[self.lab[p as usize] as usize] = s + 1;
        }
        self.cells += 1;
        s
    }
}

fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Scratch buffers reused across refinements of one graph.
struct Refiner {
    count: Vec<u32>,
    touched_cells: Vec<u32>,
    cell_touched: Vec<bool>,
    in_queue: Vec<bool>,
    queue: VecDeque<u32>,
    splitter: Vec<u32>,
}

impl Refiner {
    fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            touched_cells: Vec::new(),
            cell_touched: vec![false; n],
            in_queue: vec![false; n],
            queue: VecDeque::new(),
            splitter: Vec::new(),
        }
    }

    /// Refines `part` to the coarsest equitable partition finer than it,
    /// starting from the given splitter cells. Returns a trace hash that is
    /// invariant under relabelling of the graph.
    fn refine(&mut self, g: &ColoredDigraph, part: &mut Partition, splitters: &[u32]) -> u64 {
        let mut trace = 0x5151_u64;
        for &s in splitters {
            if !self.in_queue[s as usize] {
                self.in_queue[s as usize] = true;
                self.queue.push_back(s);
            }
        }
        while let Some(s) = self.queue.pop_front() {
            self.in_queue[s as usize] = false;
            if part.is_discrete() {
                continue;
            }
            self.splitter.clear();
            self.splitter.extend_from_slice(part.cell(s));
            trace = mix(trace, s as u64);
            let passes = if g.directed { 2 } else { 1 };
            for pass in 0..passes {
                for i in 0..self.splitter.len() {
                    let w = self.splitter[i];
                    let nbrs = if pass == 0 { g.predecessors(w) } else { g.successors(w) };
                    for &v in nbrs {
                        self.count[v as usize] += 1;
                        let c = part.cell_of[v as usize];
                        if !self.cell_touched[c as usize] {
                            self.cell_touched[c as usize] = true;
                            self.touched_cells.push(c);
                        }
                    }
                }
                self.touched_cells.sort_unstable();
                let touched = std::mem::take(&mut self.touched_cells);
                for &c in &touched {
                    self.cell_touched[c as usize] = false;
                    trace = self.split_cell(part, c, trace);
                }
                // Counts were cleared by split_cell for every touched vertex.
                self.touched_cells = touched;
                self.touched_cells.clear();
            }
        }
        mix(trace, part.cells as u64)
    }

    fn split_cell(&mut self, part: &mut Partition, c: u32, mut trace: u64) -> u64 {
        let s = c as usize;
        let e = part.cell_end[s] as usize;
        if e - s == 1 {
            let v = part.lab[s];
            trace = mix(trace, mix(c as u64, self.count[v as usize] as u64));
            self.count[v as usize] = 0;
            return trace;
        }
        let count = &self.count;
        part.lab[s..e].sort_unstable_by_key(|&v| (count[v as usize], v));
        let first = count[part.lab[s] as usize];
        let last = count[part.lab[e - 1] as usize];
        if first == last {
            trace = mix(trace, mix(c as u64, first as u64));
            for p in s..e {
                self.count[part.lab[p] as usize] = 0;
            }
            return trace;
        }
        // Split into fragments of equal count, in increasing count order.
        let was_queued = self.in_queue[s];
        let mut frags: Vec<(usize, usize)> = Vec::new();
        let mut start = s;
        for p in s..=e {
            if p == e || (p > start && count[part.lab[p] as usize] != count[part.lab[start] as usize])
            {
                frags.push((start, p));
                trace = mix(trace, mix(p as u64, count[part.lab[start] as usize] as u64));
                start = p;
            }
        }
        for &(fs, fe) in &frags {
            part.cell_end[fs] = fe as u32;
            for p in fs..fe {
                let v = part.lab[p] as usize;
                part.pos[v] = p as u32;
                part.cell_of[v] = fs as u32;
                self.count[v] = 0;
            }
        }
        part.cells += frags.len() - 1;
        let largest = frags
            .iter()
            .enumerate()
            .max_by_key(|&(i, &(fs, fe))| (fe - fs, std::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .unwrap();
        for (i, &(fs, _)) in frags.iter().enumerate() {
            if (was_queued || i != largest) && !self.in_queue[fs] {
                self.in_queue[fs] = true;
                self.queue.push_back(fs as u32);
            }
        }
        trace
    }
}

struct Level {
    part: Partition,
    target: u32,
    chosen: u32,
    // Trace of refining after individualizing `chosen`.
    trace: u64,
}

pub(crate) struct SearchOutcome {
    pub order: BigUint,
    pub generators: usize,
    pub nodes: u64,
}

struct Searcher<'a> {
    g: &'a ColoredDigraph,
    refiner: Refiner,
    levels: Vec<Level>,
    first_leaf: Vec<u32>,
    nodes: u64,
    budget: Option<u64>,
}

impl Searcher<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        match self.budget {
            Some(b) if self.nodes > b => Err(Error::BudgetExceeded(b)),
            _ => Ok(()),
        }
    }

    // Looks for a leaf below `part` (at depth `depth`, after individualizing
    // `w`) that is the image of the first leaf under an automorphism.
    fn find_image(&mut self, part: &Partition, depth: usize, w: u32) -> Result<Option<Vec<u32>>> {
        self.tick()?;
        let mut q = part.clone();
        let s = q.individualize(w);
        let trace = self.refiner.refine(self.g, &mut q, &[s]);
        if trace != self.levels[depth].trace {
            return Ok(None);
        }
        if depth + 1 == self.levels.len() {
            debug_assert!(q.is_discrete());
            let mut perm = vec![0u32; q.lab.len()];
            for (p, &v) in self.first_leaf.iter().enumerate() {
                perm[v as usize] = q.lab[p];
            }
            return Ok(self.g.is_automorphism(&perm).then_some(perm));
        }
        let target = self.levels[depth + 1].target;
        let mut candidates = q.cell(target).to_vec();
        candidates.sort_unstable();
        for u in candidates {
            if let Some(perm) = self.find_image(&q, depth + 1, u)? {
                return Ok(Some(perm));
            }
        }
        Ok(None)
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn merge_perm(parent: &mut [u32], perm: &[u32]) {
    for (u, &v) in perm.iter().enumerate() {
        let a = find(parent, u as u32);
        let b = find(parent, v);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi as usize] = lo;
        }
    }
}

/// Exact automorphism group order of a coloured digraph.
pub(crate) fn automorphism_order(g: &ColoredDigraph, budget: Option<u64>) -> Result<SearchOutcome> {
    let n = g.len();
    if n <= 1 {
        return Ok(SearchOutcome {
            order: BigUint::one(),
            generators: 0,
            nodes: 1,
        });
    }
    let mut refiner = Refiner::new(n);
    let mut part = Partition::by_color(&g.colors);
    let starts = part.cell_starts();
    refiner.refine(g, &mut part, &starts);

    let mut searcher = Searcher {
        g,
        refiner,
        levels: Vec::new(),
        first_leaf: Vec::new(),
        nodes: 0,
        budget,
    };
    searcher.tick()?;
    while let Some(target) = part.first_nonsingleton() {
        searcher.tick()?;
        let chosen = *part.cell(target).iter().min().unwrap();
        let mut next = part.clone();
        let s = next.individualize(chosen);
        let trace = searcher.refiner.refine(g, &mut next, &[s]);
        searcher.levels.push(Level {
            part,
            target,
            chosen,
            trace,
        });
        part = next;
    }
    searcher.first_leaf = part.lab;

    let mut orbits: Vec<u32> = (0..n as u32).collect();
    let mut generators = 0;
    let mut order = BigUint::one();
    for depth in (0..searcher.levels.len()).rev() {
        let level = &searcher.levels[depth];
        let chosen = level.chosen;
        let mut cell = level.part.cell(level.target).to_vec();
        let level_part = level.part.clone();
        cell.sort_unstable();
        let mut failed: Vec<u32> = Vec::new();
        for &w in &cell {
            if w == chosen {
                continue;
            }
            let rw = find(&mut orbits, w);
            if rw == find(&mut orbits, chosen) {
                continue;
            }
            if failed.iter().any(|&f| find(&mut orbits, f) == rw) {
                continue;
            }
            match searcher.find_image(&level_part, depth, w)? {
                Some(perm) => {
                    generators += 1;
                    merge_perm(&mut orbits, &perm);
                }
                None => failed.push(w),
            }
        }
        let root = find(&mut orbits, chosen);
        let orbit_size = cell.iter().filter(|&&w| find(&mut orbits, w) == root).count();
        order *= orbit_size as u64;
    }
    Ok(SearchOutcome {
        order,
        generators,
        nodes: searcher.nodes,
    })
}
