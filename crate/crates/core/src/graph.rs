//! Labeled graphs and trees on the vertex set `[n] = {1, ..., n}`.
//!
//! Edge sets are bit fields indexed by unordered pairs `{i, j}`, `i < j`, in
//! lexicographic order: `(1,2), (1,3), ..., (1,n), (2,3), ...`. The index of a
//! pair therefore depends on `n`, which every [`EdgeSet`] carries with it.

use std::fmt;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_connected`].
pub const MAX_CONNECTED_N: usize = 8;
/// Largest `n` accepted by [`enumerate_trees`].
pub const MAX_TREE_N: usize = 9;
/// Largest label any edge set can address (55 pairs fit in a `u64`).
pub const MAX_LABEL: usize = 11;

/// A vertex label in `[1, n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u8);

impl VertexId {
    pub fn new(value: usize, n: usize) -> Result<Self> {
        if value == 0 || value > n || n > MAX_LABEL {
            return Err(Error::VertexOutOfRange { vertex: value, n });
        }
        Ok(VertexId(value as u8))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of unordered pairs of `[n]`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic index of the pair `{i, j}` of `[n]`.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_at(n: usize, mut index: usize) -> (usize, usize) {
    for i in 1..n {
        let row = n - i;
        if index < row {
            return (i, i + 1 + index);
        }
        index -= row;
    }
    panic!("pair index out of range for n = {n}");
}

/// Canonical bit-field edge set over the pairs of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet {
    n: u8,
    bits: u64,
}

impl EdgeSet {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_LABEL, "label set [{n}] exceeds the edge-set width");
        EdgeSet { n: n as u8, bits: 0 }
    }

    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_LABEL {
            return Err(Error::SizeOutOfRange { what: "edge set", n, max: MAX_LABEL });
        }
        let width = pair_count(n);
        if width < 64 && bits >> width != 0 {
            return Err(Error::InvalidEdgeBits { n, bits });
        }
        Ok(EdgeSet { n: n as u8, bits })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut set = EdgeSet::empty(n);
        for &(i, j) in pairs {
            if i == j || i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidEdge { i, j, n });
            }
            set.insert(i, j);
        }
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits |= 1 << pair_index(self.n(), i, j);
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.bits &= !(1 << pair_index(self.n(), i, j));
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i != j && self.bits >> pair_index(self.n(), i, j) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        debug_assert_eq!(self.n, other.n);
        EdgeSet { n: self.n, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        debug_assert_eq!(self.n, other.n);
        EdgeSet { n: self.n, bits: self.bits & other.bits }
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        debug_assert_eq!(self.n, other.n);
        EdgeSet { n: self.n, bits: self.bits & !other.bits }
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.bits & !other.bits == 0
    }

    /// Pairs in ascending (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(pair_at(n, k))
        })
    }

    /// Labels touched by at least one edge, as a bit mask (bit `v` for label `v`).
    pub fn vertex_mask(&self) -> u16 {
        self.iter().fold(0, |m, (i, j)| m | 1 << i | 1 << j)
    }

    /// Per-label neighbour masks; entry `v` holds the neighbours of label `v`.
    pub fn adjacency(&self) -> [u16; MAX_LABEL + 1] {
        let mut adj = [0u16; MAX_LABEL + 1];
        for (i, j) in self.iter() {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        adj
    }

    /// Lower-case hexadecimal dump of the bit field.
    pub fn to_hex(&self) -> String {
        format!("{:x}", self.bits)
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let bits = u64::from_str_radix(hex, 16)
            .map_err(|_| Error::Parse(format!("invalid edge-set hex string {hex:?}")))?;
        EdgeSet::from_bits(n, bits)
    }

    /// Re-index the same pairs over a larger label set.
    pub fn widen(&self, n: usize) -> EdgeSet {
        assert!(n >= self.n());
        let mut out = EdgeSet::empty(n);
        for (i, j) in self.iter() {
            out.insert(i, j);
        }
        out
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Labels reachable from `start` inside `allowed`, given neighbour masks.
pub(crate) fn reach(adj: &[u16], start: usize, allowed: u16) -> u16 {
    let mut seen = 1u16 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & allowed & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen
}

pub(crate) fn full_mask(n: usize) -> u16 {
    ((1u32 << (n + 1)) - 2) as u16
}

/// A graph on `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LabeledGraph {
    edges: EdgeSet,
}

impl LabeledGraph {
    pub fn new(edges: EdgeSet) -> Self {
        LabeledGraph { edges }
    }

    pub fn n(&self) -> usize {
        self.edges.n()
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let adj = self.edges.adjacency();
        reach(&adj, 1, full_mask(n)) == full_mask(n)
    }
}

/// A labeled tree. Spanning trees of `[n]` use every label; trees produced by
/// splitting live on a subset of `[n]`, recorded in `vertices`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LabeledTree {
    vertices: u16,
    edges: EdgeSet,
}

impl LabeledTree {
    /// A spanning tree of `[n]`.
    pub fn new(edges: EdgeSet) -> Result<Self> {
        let n = edges.n();
        if n == 0 {
            return Err(Error::NotATree("empty label set".into()));
        }
        Self::on_vertices(full_mask(n), edges)
    }

    /// A tree whose vertex set is `vertices` (bit `v` for label `v`).
    pub fn on_vertices(vertices: u16, edges: EdgeSet) -> Result<Self> {
        let count = vertices.count_ones() as usize;
        if count == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if vertices & !full_mask(edges.n()) != 0 {
            return Err(Error::NotATree("vertex outside the label set".into()));
        }
        if edges.vertex_mask() & !vertices != 0 {
            return Err(Error::NotATree("edge leaves the vertex set".into()));
        }
        if edges.len() + 1 != count {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices",
                edges.len(),
                count
            )));
        }
        let adj = edges.adjacency();
        let start = vertices.trailing_zeros() as usize;
        if reach(&adj, start, vertices) != vertices {
            return Err(Error::NotATree("not connected".into()));
        }
        Ok(LabeledTree { vertices, edges })
    }

    /// Tree spanned by an edge set; the vertex set is the set of touched labels.
    pub fn from_edges(edges: EdgeSet) -> Result<Self> {
        Self::on_vertices(edges.vertex_mask(), edges)
    }

    pub(crate) fn from_parts_unchecked(vertices: u16, edges: EdgeSet) -> Self {
        debug_assert!(Self::on_vertices(vertices, edges).is_ok());
        LabeledTree { vertices, edges }
    }

    pub fn n(&self) -> usize {
        self.edges.n()
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn vertex_mask(&self) -> u16 {
        self.vertices
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        let mut m = self.vertices;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.count_ones() as usize
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        v <= MAX_LABEL && self.vertices >> v & 1 == 1
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices.trailing_zeros() as usize
    }

    pub fn is_spanning(&self) -> bool {
        self.vertices == full_mask(self.n())
    }

    pub fn as_graph(&self) -> LabeledGraph {
        LabeledGraph::new(self.edges)
    }

    /// Distances from `root` and tree predecessors, indexed by label.
    /// Labels outside the tree get `None`.
    pub fn bfs(&self, root: usize) -> RootedView {
        assert!(self.contains_vertex(root), "root {root} not in tree");
        let adj = self.edges.adjacency();
        let mut depth = [None; MAX_LABEL + 1];
        let mut parent = [0u8; MAX_LABEL + 1];
        depth[root] = Some(0u8);
        let mut queue = vec![root];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let mut nbrs = adj[v];
            while nbrs != 0 {
                let w = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                if depth[w].is_none() {
                    depth[w] = Some(depth[v].unwrap() + 1);
                    parent[w] = v as u8;
                    queue.push(w);
                }
            }
        }
        RootedView { root, depth, parent, order: queue }
    }
}

/// A tree seen from a chosen root.
#[derive(Debug, Clone)]
pub struct RootedView {
    pub root: usize,
    pub depth: [Option<u8>; MAX_LABEL + 1],
    /// Predecessor of each non-root vertex; 0 for the root and absent labels.
    pub parent: [u8; MAX_LABEL + 1],
    /// Vertices in breadth-first order from the root.
    pub order: Vec<usize>,
}

/// Every connected labeled graph on `[n]`, in ascending edge-set order.
pub fn enumerate_connected(n: usize) -> Result<ConnectedGraphs> {
    ConnectedGraphs::in_range(n, 0, 1u64 << pair_count(check_connected_n(n)?))
}

fn check_connected_n(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_CONNECTED_N {
        return Err(Error::SizeOutOfRange { what: "connected-graph enumeration", n, max: MAX_CONNECTED_N });
    }
    Ok(n)
}

/// Streaming scan of the edge subsets `start..end` of `[n]`, yielding the
/// connected ones. Disjoint ranges can be consumed in parallel.
#[derive(Debug, Clone)]
pub struct ConnectedGraphs {
    n: usize,
    next: u64,
    end: u64,
    adj_bits: Vec<(u16, u16)>,
}

impl ConnectedGraphs {
    pub fn in_range(n: usize, start: u64, end: u64) -> Result<Self> {
        check_connected_n(n)?;
        let total = 1u64 << pair_count(n);
        let adj_bits = (0..pair_count(n)).map(|k| {
            let (i, j) = pair_at(n, k);
            (1u16 << i, 1u16 << j)
        });
        Ok(ConnectedGraphs { n, next: start.min(total), end: end.min(total), adj_bits: adj_bits.collect() })
    }

    fn connected(&self, bits: u64) -> bool {
        if self.n == 1 {
            return true;
        }
        if (bits.count_ones() as usize) + 1 < self.n {
            return false;
        }
        let mut adj = [0u16; MAX_LABEL + 1];
        let mut b = bits;
        while b != 0 {
            let k = b.trailing_zeros() as usize;
            b &= b - 1;
            let (mi, mj) = self.adj_bits[k];
            adj[mi.trailing_zeros() as usize] |= mj;
            adj[mj.trailing_zeros() as usize] |= mi;
        }
        let all = full_mask(self.n);
        reach(&adj, 1, all) == all
    }
}

impl Iterator for ConnectedGraphs {
    type Item = LabeledGraph;

    fn next(&mut self) -> Option<LabeledGraph> {
        while self.next < self.end {
            let bits = self.next;
            self.next += 1;
            if self.connected(bits) {
                return Some(LabeledGraph::new(EdgeSet { n: self.n as u8, bits }));
            }
        }
        None
    }
}

/// Every labeled tree on `[n]`, decoded from Prüfer sequences in
/// lexicographic order.
pub fn enumerate_trees(n: usize) -> Result<impl Iterator<Item = LabeledTree>> {
    if n == 0 || n > MAX_TREE_N {
        return Err(Error::SizeOutOfRange { what: "tree enumeration", n, max: MAX_TREE_N });
    }
    let len = n.saturating_sub(2);
    let total = if n <= 2 { 1 } else { (n as u64).pow(len as u32) };
    Ok((0..total).map(move |rank| {
        let mut seq = vec![0usize; len];
        let mut r = rank;
        for slot in seq.iter_mut().rev() {
            *slot = (r % n as u64) as usize + 1;
            r /= n as u64;
        }
        decode_prufer(n, &seq)
    }))
}

fn decode_prufer(n: usize, seq: &[usize]) -> LabeledTree {
    let mut edges = EdgeSet::empty(n);
    if n == 1 {
        return LabeledTree::from_parts_unchecked(full_mask(1), edges);
    }
    let mut degree = [1u8; MAX_LABEL + 1];
    for &s in seq {
        degree[s] += 1;
    }
    for &s in seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).unwrap();
        edges.insert(leaf, s);
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let mut rest = (1..=n).filter(|&v| degree[v] == 1);
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.insert(a, b);
    LabeledTree::from_parts_unchecked(full_mask(n), edges)
}

/// The unique tree on `[len + 2]` with the given Prüfer sequence.
pub fn tree_from_prufer(seq: &[VertexId]) -> Result<LabeledTree> {
    let n = seq.len() + 2;
    if n > MAX_LABEL {
        return Err(Error::SizeOutOfRange { what: "Prüfer decoding", n, max: MAX_LABEL });
    }
    let raw: Vec<usize> = seq.iter().map(|v| v.get()).collect();
    if let Some(&bad) = raw.iter().find(|&&v| v > n) {
        return Err(Error::VertexOutOfRange { vertex: bad, n });
    }
    Ok(decode_prufer(n, &raw))
}

/// Prüfer sequence of a spanning tree on `[n]`, `n >= 2`.
pub fn tree_to_prufer(tree: &LabeledTree) -> Result<Vec<VertexId>> {
    let n = tree.n();
    if !tree.is_spanning() || n < 2 {
        return Err(Error::NotATree("Prüfer encoding needs a spanning tree on at least 2 labels".into()));
    }
    let mut adj = tree.edges().adjacency();
    let mut out = Vec::with_capacity(n - 2);
    for _ in 0..n - 2 {
        let leaf = (1..=n).find(|&v| adj[v].count_ones() == 1).unwrap();
        let nb = adj[leaf].trailing_zeros() as usize;
        out.push(VertexId(nb as u8));
        adj[nb] &= !(1 << leaf);
        adj[leaf] = 0;
    }
    Ok(out)
}

/// Edge-count distance from `root` to every label of a spanning tree;
/// entry `i - 1` belongs to label `i`.
pub fn tree_distances(tree: &LabeledTree, root: VertexId) -> Result<Vec<usize>> {
    let root = root.get();
    if !tree.is_spanning() {
        return Err(Error::NotATree("distances are defined for spanning trees".into()));
    }
    if root > tree.n() {
        return Err(Error::VertexOutOfRange { vertex: root, n: tree.n() });
    }
    let view = tree.bfs(root);
    Ok((1..=tree.n()).map(|v| view.depth[v].unwrap() as usize).collect())
}
