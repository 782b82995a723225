//! The Penrose partition scheme.
//!
//! For a tree rooted at `r`, let `d(i)` be the tree distance from `r` and `i'`
//! the predecessor of `i`. The completion `R(τ)` adds every non-tree pair
//! `{i, j}` with
//!
//! * `d(i) = d(j)`, or
//! * `d(j) = d(i) - 1` and `i' < j`.
//!
//! The intervals `[τ, R(τ)]` over all spanning trees of `[n]` (rooted at 1)
//! partition the connected graphs on `[n]`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_connected, enumerate_trees, EdgeSet, LabeledGraph, LabeledTree};

/// Largest `n` accepted by [`verify_partition`].
pub const MAX_PARTITION_N: usize = 6;

/// A tree together with the extra edges of its Penrose completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PenroseCompletion {
    pub tree: LabeledTree,
    pub root: usize,
    pub extra: EdgeSet,
}

impl PenroseCompletion {
    /// Edge set of `R(τ)`.
    pub fn completed(&self) -> EdgeSet {
        self.tree.edges().union(&self.extra)
    }

    /// Number of graphs in the interval `[τ, R(τ)]`.
    pub fn interval_size(&self) -> u64 {
        1u64 << self.extra.len()
    }

    pub fn interval_contains(&self, g: &EdgeSet) -> bool {
        self.tree.edges().is_subset(g) && g.is_subset(&self.completed())
    }
}

/// Completion of a spanning tree, rooted at label 1.
pub fn penrose_completion(tree: &LabeledTree) -> PenroseCompletion {
    completion_rooted(tree, tree.min_vertex())
}

/// Completion of a tree measured from an arbitrary root vertex of it.
pub fn completion_rooted(tree: &LabeledTree, root: usize) -> PenroseCompletion {
    let view = tree.bfs(root);
    let verts: Vec<usize> = tree.vertices().collect();
    let mut extra = EdgeSet::empty(tree.n());
    for (a, &i) in verts.iter().enumerate() {
        for &j in &verts[a + 1..] {
            if tree.edges().contains(i, j) {
                continue;
            }
            let (di, dj) = (view.depth[i].unwrap(), view.depth[j].unwrap());
            let same_generation = di == dj;
            let older = (dj + 1 == di && (view.parent[i] as usize) < j)
                || (di + 1 == dj && (view.parent[j] as usize) < i);
            if same_generation || older {
                extra.insert(i, j);
            }
        }
    }
    PenroseCompletion { tree: *tree, root, extra }
}

/// All spanning trees of `[n]` with their completions, for repeated lookups.
#[derive(Debug, Clone)]
pub struct PenroseIndex {
    n: usize,
    completions: Vec<PenroseCompletion>,
}

impl PenroseIndex {
    pub fn new(n: usize) -> Result<Self> {
        let completions = enumerate_trees(n)?.map(|t| penrose_completion(&t)).collect();
        Ok(PenroseIndex { n, completions })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn completions(&self) -> &[PenroseCompletion] {
        &self.completions
    }

    /// The unique tree whose interval holds `g`.
    pub fn tree_of(&self, g: &LabeledGraph) -> Result<LabeledTree> {
        if g.n() != self.n {
            return Err(Error::InvalidArgument(format!("graph on [{}] looked up in index for [{}]", g.n(), self.n)));
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut hits = self.completions.iter().filter(|c| c.interval_contains(g.edges()));
        match (hits.next(), hits.next()) {
            (Some(c), None) => Ok(c.tree),
            (None, _) => Err(Error::SchemeViolation(format!("no interval contains {:?}", g.edges()))),
            (Some(_), Some(_)) => {
                Err(Error::SchemeViolation(format!("several intervals contain {:?}", g.edges())))
            }
        }
    }
}

/// The unique `τ` with `E(τ) ⊆ E(G) ⊆ E(R(τ))`, found by scanning all trees.
pub fn penrose_tree_of_graph(g: &LabeledGraph) -> Result<LabeledTree> {
    PenroseIndex::new(g.n())?.tree_of(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub n: usize,
    /// Number of trees per interval size `2^|extra|`.
    pub interval_sizes: BTreeMap<u64, u64>,
    pub interval_total: u64,
    pub connected_count: u64,
    /// Connected graphs assigned to exactly one interval by both checks.
    pub covered: u64,
    pub violations: Vec<String>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.covered == self.connected_count && self.interval_total == self.connected_count
    }

    pub fn summary(&self) -> String {
        format!(
            "{}/{} covered, {} violations",
            self.covered,
            self.connected_count,
            self.violations.len()
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n = {}\n", self.n);
        for (size, count) in &self.interval_sizes {
            out.push_str(&format!("interval size {size}: {count} trees\n"));
        }
        out.push_str(&format!("sum of interval sizes: {}\n", self.interval_total));
        out.push_str(&format!("connected graphs: {}\n", self.connected_count));
        for v in &self.violations {
            out.push_str(&format!("violation: {v}\n"));
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

/// Checks that the intervals `[τ, R(τ)]` partition the connected graphs on
/// `[n]`: sizes add up, every connected graph is hit exactly once when the
/// intervals are expanded, and the inverse lookup agrees with that owner.
pub fn verify_partition(n: usize, parallel: bool) -> Result<PartitionReport> {
    verify_with(n, parallel, None)
}

/// As [`verify_partition`], but with the interval of tree number `drop`
/// removed; used for negative self-tests.
pub fn verify_partition_dropping(n: usize, parallel: bool, drop: usize) -> Result<PartitionReport> {
    verify_with(n, parallel, Some(drop))
}

fn verify_with(n: usize, parallel: bool, drop: Option<usize>) -> Result<PartitionReport> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::SizeOutOfRange { what: "partition verification", n, max: MAX_PARTITION_N });
    }
    let mut index = PenroseIndex::new(n)?;
    if let Some(k) = drop {
        if k < index.completions.len() {
            index.completions.remove(k);
        }
    }

    let mut interval_sizes = BTreeMap::new();
    let mut interval_total = 0u64;
    for c in &index.completions {
        *interval_sizes.entry(c.interval_size()).or_insert(0) += 1;
        interval_total += c.interval_size();
    }

    // Expand each interval into a dense owner table over all edge subsets.
    let width = crate::graph::pair_count(n);
    let mut hits = vec![0u8; 1usize << width];
    let mut owner = vec![u32::MAX; 1usize << width];
    for (k, c) in index.completions.iter().enumerate() {
        let base = c.tree.edges().bits();
        let extra = c.extra.bits();
        let mut sub = extra;
        loop {
            let g = (base | sub) as usize;
            hits[g] = hits[g].saturating_add(1);
            owner[g] = k as u32;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & extra;
        }
    }

    let graphs: Vec<LabeledGraph> = enumerate_connected(n)?.collect();
    let check = |g: &LabeledGraph| -> Option<String> {
        let bits = g.edges().bits() as usize;
        match hits[bits] {
            0 => return Some(format!("graph {} lies in no interval", g.edges().to_hex())),
            1 => {}
            k => return Some(format!("graph {} lies in {k} intervals", g.edges().to_hex())),
        }
        match index.tree_of(g) {
            Ok(t) if t == index.completions[owner[bits] as usize].tree => None,
            Ok(_) => Some(format!("inverse lookup of {} disagrees with interval owner", g.edges().to_hex())),
            Err(e) => Some(format!("inverse lookup of {} failed: {e}", g.edges().to_hex())),
        }
    };
    let mut violations: Vec<String> = if parallel {
        graphs.par_iter().filter_map(check).collect()
    } else {
        graphs.iter().filter_map(check).collect()
    };

    let connected_count = graphs.len() as u64;
    let covered = connected_count - violations.len() as u64;
    let hit_total: u64 = hits.iter().map(|&h| h as u64).sum();
    if hit_total != interval_total {
        violations.push(format!("interval expansion produced {hit_total} graphs, expected {interval_total}"));
    }
    if interval_total != connected_count {
        violations.push(format!("sum of interval sizes {interval_total} != {connected_count} connected graphs"));
    }
    Ok(PartitionReport { n, interval_sizes, interval_total, connected_count, covered, violations })
}
