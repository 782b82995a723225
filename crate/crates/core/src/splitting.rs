//! Merging and splitting of labeled trees with respect to the Penrose scheme.
//!
//! A splitting of `τ` is a collection of subtrees whose edge sets partition
//! `E(τ)` and whose Penrose completions together produce exactly the extra
//! edges of `R(τ)`. Each part is measured from its attachment vertex, the
//! part's vertex closest to the root of `τ`; with that convention a part is
//! order-isomorphic to a tree rooted at 1 and its completion is the
//! restriction of `R(τ)`.
//!
//! Siblings of any vertex are joined by an extra edge of `R(τ)`, so in a
//! faithful splitting all child edges of a vertex lie in the same part. The
//! only candidates are therefore the cuts at subsets of the internal
//! non-root vertices, separating a vertex's parent edge from its child edges.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{enumerate_trees, reach, EdgeSet, LabeledTree, MAX_LABEL, MAX_TREE_N};
use crate::penrose::{completion_rooted, penrose_completion};

/// Edge-multiset union of a collection of trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeResult {
    pub n: usize,
    pub vertices: u16,
    pub multiplicities: BTreeMap<(usize, usize), u32>,
}

impl MergeResult {
    pub fn is_simple(&self) -> bool {
        self.multiplicities.values().all(|&m| m == 1)
    }

    fn support(&self) -> EdgeSet {
        let mut e = EdgeSet::empty(self.n);
        for &(i, j) in self.multiplicities.keys() {
            e.insert(i, j);
        }
        e
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let adj = self.support().adjacency();
        reach(&adj, self.vertices.trailing_zeros() as usize, self.vertices) == self.vertices
    }

    pub fn is_acyclic(&self) -> bool {
        if !self.is_simple() {
            return false;
        }
        let adj = self.support().adjacency();
        let mut seen = 0u16;
        let mut components = 0;
        let mut rest = self.vertices;
        while rest & !seen != 0 {
            let v = (rest & !seen).trailing_zeros() as usize;
            seen |= reach(&adj, v, self.vertices);
            components += 1;
            rest &= !seen;
        }
        self.multiplicities.len() + components == self.vertices.count_ones() as usize
    }

    /// Simple, connected and acyclic.
    pub fn is_proper(&self) -> bool {
        self.is_simple() && self.is_connected() && self.is_acyclic()
    }

    pub fn as_tree(&self) -> Option<LabeledTree> {
        if !self.is_proper() {
            return None;
        }
        LabeledTree::on_vertices(self.vertices, self.support()).ok()
    }
}

/// Union of the parts' edge multisets over the largest ambient label set.
pub fn merge_trees(parts: &[LabeledTree]) -> MergeResult {
    let n = parts.iter().map(LabeledTree::n).max().unwrap_or(0);
    let mut multiplicities = BTreeMap::new();
    let mut vertices = 0u16;
    for p in parts {
        vertices |= p.vertex_mask();
        for e in p.edges().iter() {
            *multiplicities.entry(e).or_insert(0) += 1;
        }
    }
    MergeResult { n, vertices, multiplicities }
}

/// Bipartite graph between parts and the labels they share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergingGraph {
    pub parts: usize,
    /// Shared labels with the indices of the parts containing them.
    pub junctions: Vec<(usize, Vec<usize>)>,
}

impl MergingGraph {
    pub fn vertex_count(&self) -> usize {
        self.parts + self.junctions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.junctions.iter().map(|(_, ps)| ps.len()).sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.parts == 0 {
            return false;
        }
        let mut root: Vec<usize> = (0..self.parts).collect();
        fn find(r: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while r[x] != x {
                r[x] = r[r[x]];
                x = r[x];
            }
            x
        }
        for (_, ps) in &self.junctions {
            for w in ps.windows(2) {
                let (a, b) = (find(&mut root, w[0]), find(&mut root, w[1]));
                root[a] = b;
            }
        }
        let r0 = find(&mut root, 0);
        (0..self.parts).all(|p| find(&mut root, p) == r0)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }
}

/// Merging graph of a family of label sets (bit masks).
pub fn merging_graph(vertex_sets: &[u16]) -> Result<MergingGraph> {
    for (a, &va) in vertex_sets.iter().enumerate() {
        for (b, &vb) in vertex_sets.iter().enumerate().skip(a + 1) {
            let shared = (va & vb).count_ones() as usize;
            if shared >= 2 {
                return Err(Error::OverlappingParts { first: a, second: b, shared });
            }
        }
    }
    let mut junctions = Vec::new();
    for label in 1..=MAX_LABEL {
        let holders: Vec<usize> =
            vertex_sets.iter().enumerate().filter(|(_, &v)| v >> label & 1 == 1).map(|(k, _)| k).collect();
        if holders.len() >= 2 {
            junctions.push((label, holders));
        }
    }
    Ok(MergingGraph { parts: vertex_sets.len(), junctions })
}

/// A tree cut into parts, with the verdict on faithfulness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDecomposition {
    pub whole: LabeledTree,
    pub parts: Vec<LabeledTree>,
    pub merging_graph: MergingGraph,
    pub faithful: bool,
}

/// The vertex of `part` closest to the root (minimum label) of `whole`.
pub fn attachment_vertex(whole: &LabeledTree, part: &LabeledTree) -> usize {
    let view = whole.bfs(whole.min_vertex());
    attachment_in(&view.depth, part)
}

fn attachment_in(depth: &[Option<u8>], part: &LabeledTree) -> usize {
    part.vertices().min_by_key(|&v| (depth[v].unwrap_or(u8::MAX), v)).unwrap()
}

/// Condition (ii) of a faithful merging, assuming the parts already merge
/// properly into `whole`.
fn completions_agree(whole: &LabeledTree, parts: &[LabeledTree], depth: &[Option<u8>]) -> bool {
    let target = completion_rooted(whole, whole.min_vertex()).extra;
    let mut union = EdgeSet::empty(whole.n());
    for p in parts {
        let c = completion_rooted(p, attachment_in(depth, p));
        union = union.union(&c.extra.widen(whole.n()));
        if !union.is_subset(&target) {
            return false;
        }
    }
    union == target
}

/// Whether `parts` is a faithful splitting of `whole`: the parts merge
/// properly into `whole` and the union of their completions' extra edges is
/// the extra edge set of `R(whole)`.
pub fn is_faithful(whole: &LabeledTree, parts: &[LabeledTree]) -> Result<bool> {
    let merged = merge_trees(parts);
    let same_edges = merged.as_tree().map(|t| t.edges().widen(whole.n()) == *whole.edges());
    if same_edges != Some(true) || merged.vertices != whole.vertex_mask() {
        return Err(Error::NotProperMerging);
    }
    let view = whole.bfs(whole.min_vertex());
    Ok(completions_agree(whole, parts, &view.depth))
}

/// Non-root vertices with at least one child, as a label mask.
pub fn internal_vertices(tree: &LabeledTree) -> u16 {
    let view = tree.bfs(tree.min_vertex());
    let mut mask = 0u16;
    for v in tree.vertices() {
        if v != view.root {
            mask |= 1 << view.parent[v];
        }
    }
    mask & !(1 << view.root)
}

/// Parts obtained by cutting `tree` at each vertex of `cuts` (a subset of the
/// internal vertices): the parent edge of a cut vertex is separated from its
/// child edges.
pub fn cut_parts(tree: &LabeledTree, cuts: u16) -> Vec<LabeledTree> {
    let view = tree.bfs(tree.min_vertex());
    // Each edge is identified by its child endpoint; label edges by part id.
    let mut part_of = [usize::MAX; MAX_LABEL + 1];
    let mut parts: Vec<EdgeSet> = Vec::new();
    for &v in view.order.iter().skip(1) {
        let p = view.parent[v] as usize;
        let id = if p == view.root || cuts >> p & 1 == 1 {
            // First child edge of p in this part opens it unless a sibling did.
            match (view.order.iter().skip(1))
                .find(|&&w| view.parent[w] as usize == p && part_of[w] != usize::MAX)
            {
                Some(&w) => part_of[w],
                None => {
                    parts.push(EdgeSet::empty(tree.n()));
                    parts.len() - 1
                }
            }
        } else {
            part_of[p]
        };
        part_of[v] = id;
        parts[id].insert(p, v);
    }
    parts.into_iter().map(|e| LabeledTree::from_parts_unchecked(e.vertex_mask(), e)).collect()
}

/// Decomposition of `tree` along `cuts`, with merging graph and verdict.
pub fn split_at(tree: &LabeledTree, cuts: u16) -> SplitDecomposition {
    let parts = cut_parts(tree, cuts);
    let masks: Vec<u16> = parts.iter().map(LabeledTree::vertex_mask).collect();
    let merging_graph = merging_graph(&masks).expect("cut parts share at most one label");
    let view = tree.bfs(tree.min_vertex());
    let faithful = completions_agree(tree, &parts, &view.depth);
    SplitDecomposition { whole: *tree, parts, merging_graph, faithful }
}

fn subsets_by_size_desc(mask: u16) -> Vec<u16> {
    let bits: Vec<u16> = (0..16).filter(|b| mask >> b & 1 == 1).map(|b| 1u16 << b).collect();
    let mut subsets: Vec<u16> = (0u32..1 << bits.len())
        .map(|s| bits.iter().enumerate().filter(|(k, _)| s >> k & 1 == 1).fold(0, |m, (_, b)| m | b))
        .collect();
    subsets.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    subsets
}

/// A faithful splitting with the largest number of parts.
pub fn finest_splitting(tree: &LabeledTree) -> SplitDecomposition {
    if tree.edges().len() <= 1 {
        return split_at(tree, 0);
    }
    let view = tree.bfs(tree.min_vertex());
    let target = penrose_completion(tree).extra;
    for cuts in subsets_by_size_desc(internal_vertices(tree)) {
        if cuts == 0 {
            break;
        }
        let parts = cut_parts(tree, cuts);
        let mut union = EdgeSet::empty(tree.n());
        let mut ok = true;
        for p in &parts {
            union = union.union(&completion_rooted(p, attachment_in(&view.depth, p)).extra);
            if !union.is_subset(&target) {
                ok = false;
                break;
            }
        }
        if ok && union == target {
            return split_at(tree, cuts);
        }
    }
    split_at(tree, 0)
}

/// Largest number of parts over all faithful splittings; 1 means
/// non-splittable.
pub fn max_splittability(tree: &LabeledTree) -> usize {
    finest_splitting(tree).parts.len().max(1)
}

/// Number of trees on `[n]` per splittability; entry `l` counts the
/// `l`-splittable trees (entry 0 is unused).
pub fn splittability_counts(n: usize, parallel: bool) -> Result<Vec<u64>> {
    if n < 2 || n > MAX_TREE_N {
        return Err(Error::SizeOutOfRange { what: "splittability classification", n, max: MAX_TREE_N });
    }
    let tally = |mut acc: Vec<u64>, t: LabeledTree| {
        acc[max_splittability(&t)] += 1;
        acc
    };
    let zero = || vec![0u64; n];
    let counts = if parallel {
        let trees: Vec<LabeledTree> = enumerate_trees(n)?.collect();
        trees.into_par_iter().fold(zero, tally).reduce(zero, |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
    } else {
        enumerate_trees(n)?.fold(zero(), tally)
    };
    Ok(counts)
}

/// `|T_l[n]|`, the number of `l`-splittable trees on `[n]`.
pub fn count_splittable(n: usize, l: usize) -> Result<u64> {
    let counts = splittability_counts(n, false)?;
    Ok(counts.get(l).copied().unwrap_or(0))
}

/// `(n-2)^(n-2)` with `0^0 = 1`: the expected number of non-splittable trees
/// on `n >= 2` labels.
pub fn non_splittable_expected(n: usize) -> u64 {
    let m = n as u64 - 2;
    m.pow(m as u32)
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `k! n! / Π_i k_i! (i!)^{k_i}` for parts with the given edge counts.
pub fn faithful_merging_formula(sizes: &[usize]) -> BigUint {
    let n: usize = sizes.iter().sum();
    let mut multiplicity: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in sizes {
        *multiplicity.entry(s).or_insert(0) += 1;
    }
    let den = multiplicity
        .iter()
        .fold(BigUint::one(), |acc, (&i, &ki)| acc * factorial(ki) * factorial(i).pow(ki as u32));
    factorial(sizes.len()) * factorial(n) / den
}

/// `k! n! / Π_i (i!)^{k_i}`: the count of ordered faithful labelings.
pub fn ordered_faithful_merging_formula(sizes: &[usize]) -> BigUint {
    let n: usize = sizes.iter().sum();
    let den = sizes.iter().fold(BigUint::one(), |acc, &i| acc * factorial(i));
    factorial(sizes.len()) * factorial(n) / den
}

/// Faithful labelings of an ordered tuple of parts into `[n + 1]`.
///
/// Each part is a spanning tree on `[i + 1]` rooted at 1. A labeling sends
/// the root anywhere and the remaining labels order-preservingly; it counts
/// when the relabeled parts merge into a tree on `[n + 1]`, every part's
/// image of 1 is its attachment vertex, and the merging is faithful.
pub fn count_ordered_faithful_labelings(n: usize, parts: &[LabeledTree]) -> Result<u64> {
    validate_merging_input(n, parts)?;
    let total = n + 1;
    let images: Vec<Vec<(usize, LabeledTree)>> = parts.iter().map(|p| labelings(p, total)).collect();
    let mut chosen: Vec<(usize, LabeledTree)> = Vec::with_capacity(parts.len());
    let mut count = 0u64;
    search(&images, &mut chosen, EdgeSet::empty(total), &mut count);
    Ok(count)
}

/// Faithful mergings of a multiset of parts: ordered labelings divided by the
/// orderings of identical parts.
pub fn count_faithful_mergings(n: usize, parts: &[LabeledTree]) -> Result<u64> {
    let ordered = count_ordered_faithful_labelings(n, parts)?;
    let mut shapes: BTreeMap<LabeledTree, u64> = BTreeMap::new();
    for p in parts {
        *shapes.entry(*p).or_insert(0) += 1;
    }
    let symmetry: u64 = shapes.values().map(|&m| (1..=m).product::<u64>()).product();
    Ok(ordered / symmetry)
}

fn validate_merging_input(n: usize, parts: &[LabeledTree]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::InconsistentSizes("no parts".into()));
    }
    let mut edges = 0;
    for p in parts {
        if !p.is_spanning() || p.edges().is_empty() {
            return Err(Error::InconsistentSizes("each part must be a spanning tree on [i+1], i >= 1".into()));
        }
        edges += p.edges().len();
    }
    if edges != n {
        return Err(Error::InconsistentSizes(format!("parts carry {edges} edges but n = {n}")));
    }
    if n + 1 > MAX_LABEL {
        return Err(Error::SizeOutOfRange { what: "faithful merging count", n: n + 1, max: MAX_LABEL });
    }
    Ok(())
}

fn labelings(part: &LabeledTree, total: usize) -> Vec<(usize, LabeledTree)> {
    let size = part.vertex_count();
    let mut out = Vec::new();
    for root in 1..=total {
        let others: Vec<usize> = (1..=total).filter(|&v| v != root).collect();
        for combo in combinations(&others, size - 1) {
            let mut map = [0usize; MAX_LABEL + 1];
            map[1] = root;
            for (k, &label) in combo.iter().enumerate() {
                map[k + 2] = label;
            }
            let mut edges = EdgeSet::empty(total);
            for (i, j) in part.edges().iter() {
                edges.insert(map[i], map[j]);
            }
            out.push((root, LabeledTree::from_parts_unchecked(edges.vertex_mask(), edges)));
        }
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (idx, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[idx + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn search(
    images: &[Vec<(usize, LabeledTree)>],
    chosen: &mut Vec<(usize, LabeledTree)>,
    acc: EdgeSet,
    count: &mut u64,
) {
    let depth = chosen.len();
    if depth == images.len() {
        let Ok(whole) = LabeledTree::new(acc) else { return };
        let view = whole.bfs(1);
        if chosen.iter().any(|(root, p)| attachment_in(&view.depth, p) != *root) {
            return;
        }
        let parts: Vec<LabeledTree> = chosen.iter().map(|(_, p)| *p).collect();
        if completions_agree(&whole, &parts, &view.depth) {
            *count += 1;
        }
        return;
    }
    for (root, image) in &images[depth] {
        if !image.edges().intersection(&acc).is_empty() {
            continue;
        }
        let next = acc.union(image.edges());
        if !is_forest(&next) {
            continue;
        }
        chosen.push((*root, *image));
        search(images, chosen, next, count);
        chosen.pop();
    }
}

fn is_forest(edges: &EdgeSet) -> bool {
    let mut parent: Vec<usize> = (0..=edges.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, j) in edges.iter() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// `(n, l, count)` rows for every `n` in `ns` and every `l` in `1..n`.
pub fn splittability_table(ns: impl IntoIterator<Item = usize>, parallel: bool) -> Result<Vec<(usize, usize, u64)>> {
    let mut rows = Vec::new();
    for n in ns {
        let counts = splittability_counts(n, parallel)?;
        for (l, &c) in counts.iter().enumerate().skip(1) {
            rows.push((n, l, c));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(n: usize, pairs: &[(usize, usize)]) -> LabeledTree {
        LabeledTree::from_edges(EdgeSet::from_pairs(n, pairs).unwrap()).unwrap()
    }

    #[test]
    fn merge_examples() {
        let m = merge_trees(&[tree(3, &[(1, 2)]), tree(3, &[(2, 3)])]);
        assert!(m.is_proper());
        assert_eq!(m.as_tree().unwrap(), tree(3, &[(1, 2), (2, 3)]));

        // Three trees on {1..5}: 1-3,1-4 | 5-2 | 3-4,4-1.
        let ill = merge_trees(&[tree(5, &[(1, 3), (1, 4)]), tree(5, &[(2, 5)]), tree(5, &[(3, 4), (1, 4)])]);
        assert_eq!(ill.multiplicities[&(1, 4)], 2);
        assert!(!ill.is_simple());
        assert!(!ill.is_connected());
        assert!(!ill.is_proper());

        let apart = merge_trees(&[tree(4, &[(1, 2)]), tree(4, &[(3, 4)])]);
        assert!(apart.is_simple() && apart.is_acyclic() && !apart.is_connected());
    }

    #[test]
    fn merging_graph_examples() {
        let path = merging_graph(&[0b110, 0b1100]).unwrap();
        assert_eq!(path.vertex_count(), 3);
        assert!(path.is_tree());
        let cycle = merging_graph(&[0b110, 0b1100, 0b1010]).unwrap();
        assert_eq!((cycle.vertex_count(), cycle.edge_count()), (6, 6));
        assert!(!cycle.is_tree());
        assert!(merging_graph(&[0b110]).unwrap().is_tree());
        assert!(matches!(merging_graph(&[0b1110, 0b0110]), Err(Error::OverlappingParts { .. })));
    }

    #[test]
    fn faithfulness_examples() {
        let path = tree(3, &[(1, 2), (2, 3)]);
        assert!(is_faithful(&path, &[tree(3, &[(1, 2)]), tree(3, &[(2, 3)])]).unwrap());
        let star = tree(3, &[(1, 2), (1, 3)]);
        assert!(!is_faithful(&star, &[tree(3, &[(1, 2)]), tree(3, &[(1, 3)])]).unwrap());
        assert!(is_faithful(&star, &[star]).unwrap());
        assert_eq!(is_faithful(&star, &[tree(3, &[(1, 2)])]), Err(Error::NotProperMerging));
    }

    #[test]
    fn splittability_examples() {
        assert_eq!(max_splittability(&tree(2, &[(1, 2)])), 1);
        assert_eq!(max_splittability(&tree(3, &[(1, 2), (2, 3)])), 2);
        assert_eq!(max_splittability(&tree(3, &[(1, 2), (1, 3)])), 1);
    }

    #[test]
    fn splittable_counts_small() {
        assert_eq!(count_splittable(3, 1).unwrap(), 1);
        assert_eq!(count_splittable(3, 2).unwrap(), 2);
        assert_eq!(splittability_counts(4, false).unwrap(), vec![0, 4, 6, 6]);
        assert_eq!(non_splittable_expected(2), 1);
        assert_eq!(non_splittable_expected(5), 27);
    }

    #[test]
    fn cut_parts_partition_the_edges() {
        for n in 2..=6 {
            for t in enumerate_trees(n).unwrap() {
                let internal = internal_vertices(&t);
                for cuts in subsets_by_size_desc(internal) {
                    let parts = cut_parts(&t, cuts);
                    assert_eq!(parts.len(), cuts.count_ones() as usize + 1);
                    let merged = merge_trees(&parts);
                    assert!(merged.is_proper());
                    assert_eq!(merged.as_tree().unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn merging_counts() {
        let edge = tree(2, &[(1, 2)]);
        assert_eq!(count_faithful_mergings(2, &[edge, edge]).unwrap(), 2);
        assert_eq!(count_faithful_mergings(1, &[edge]).unwrap(), 1);
        let path = tree(3, &[(1, 2), (2, 3)]);
        assert_eq!(count_faithful_mergings(3, &[path, edge]).unwrap(), 6);
        assert_eq!(faithful_merging_formula(&[1, 1]), 2u32.into());
        assert_eq!(faithful_merging_formula(&[2, 1]), 6u32.into());
        assert!(matches!(count_faithful_mergings(4, &[path, edge]), Err(Error::InconsistentSizes(_))));
    }

    #[test]
    fn splittable_counts_medium() {
        assert_eq!(splittability_counts(5, false).unwrap(), vec![0, 27, 38, 36, 24]);
        assert_eq!(splittability_counts(6, true).unwrap(), vec![0, 256, 350, 330, 240, 120]);
    }

    #[test]
    fn ordered_labelings_match_formula() {
        let edge = tree(2, &[(1, 2)]);
        let p12 = tree(3, &[(1, 2), (2, 3)]);
        let p13 = tree(3, &[(1, 3), (3, 2)]);
        let star = tree(3, &[(1, 2), (1, 3)]);
        for parts in [vec![edge, edge, edge], vec![p12, edge], vec![p13, edge], vec![star, edge], vec![p12, p13]] {
            let n: usize = parts.iter().map(|p| p.edges().len()).sum();
            let sizes: Vec<usize> = parts.iter().map(|p| p.edges().len()).collect();
            let ordered = count_ordered_faithful_labelings(n, &parts).unwrap();
            assert_eq!(BigUint::from(ordered), ordered_faithful_merging_formula(&sizes), "{parts:?}");
        }
        assert_eq!(count_faithful_mergings(4, &[p12, star]).unwrap(), 12);
        assert_eq!(faithful_merging_formula(&[2, 2]), 6u32.into());
    }
}
