//! Hard-core toy models with finitely supported Mayer functions.
//!
//! `f` takes values in `{0, -1}`, so every configuration sum is finite once
//! one vertex is pinned to the origin. Sums are taken over placements along a
//! spanning tree of `f`-edges, whose displacements must lie in range for a
//! nonzero summand.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, LabeledGraph, LabeledTree, MAX_LABEL};
use crate::penrose::completion_rooted;
use crate::series::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightModel {
    /// All particles sit on one site and exclude each other.
    OnePoint,
    /// Particles on `Z` exclude each other within distance `a - 1`.
    Lattice { a: u32 },
}

impl WeightModel {
    pub fn lattice(a: u32) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument("lattice range a must be positive".into()));
        }
        Ok(WeightModel::Lattice { a })
    }

    /// Largest displacement `|x_i - x_j|` with `f_ij != 0`.
    pub fn reach(&self) -> i64 {
        match self {
            WeightModel::OnePoint => 0,
            WeightModel::Lattice { a } => *a as i64 - 1,
        }
    }

    fn f_int(&self, xi: i64, xj: i64) -> i64 {
        if (xi - xj).abs() <= self.reach() {
            -1
        } else {
            0
        }
    }

    /// Mayer function of a pair of sites.
    pub fn mayer_f(&self, xi: i64, xj: i64) -> Rational {
        int(self.f_int(xi, xj))
    }

    /// `Σ_x |f(0, x)|`.
    pub fn temperedness(&self) -> Rational {
        int(2 * self.reach() + 1)
    }

    /// `u = e^{2βB}`; both models are purely repulsive.
    pub fn stability_factor(&self) -> Rational {
        int(1)
    }
}

impl fmt::Display for WeightModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightModel::OnePoint => write!(f, "onepoint"),
            WeightModel::Lattice { a } => write!(f, "lattice:a={a}"),
        }
    }
}

impl FromStr for WeightModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "onepoint" {
            return Ok(WeightModel::OnePoint);
        }
        let a = s
            .strip_prefix("lattice:a=")
            .ok_or_else(|| Error::Parse(format!("unknown model {s:?}; expected onepoint or lattice:a=<int>")))?;
        let a: u32 = a.parse().map_err(|_| Error::Parse(format!("lattice range {a:?} is not a positive integer")))?;
        WeightModel::lattice(a)
    }
}

/// Site of each label; `positions[v]` for `v` in `1..=n`, index 0 unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub positions: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    /// `f_e`
    Mayer,
    /// `1 + f_e`
    Avoid,
}

impl Factor {
    fn eval(self, model: &WeightModel, xi: i64, xj: i64) -> i64 {
        match self {
            Factor::Mayer => model.f_int(xi, xj),
            Factor::Avoid => 1 + model.f_int(xi, xj),
        }
    }
}

struct Problem<'a> {
    model: &'a WeightModel,
    /// Placement order; `order[0]` is pinned at 0.
    order: Vec<usize>,
    parent: [usize; MAX_LABEL + 1],
    /// Factors that close when the keyed vertex is placed.
    closing: Vec<Vec<(usize, Factor)>>,
}

impl Problem<'_> {
    fn sum(&self, depth: usize, pos: &mut [i64; MAX_LABEL + 1], acc: i64) -> i64 {
        if depth == self.order.len() {
            return acc;
        }
        let v = self.order[depth];
        let r = self.model.reach();
        let (lo, hi) = if depth == 0 { (0, 0) } else { (pos[self.parent[v]] - r, pos[self.parent[v]] + r) };
        let mut total = 0;
        for x in lo..=hi {
            pos[v] = x;
            let mut w = acc;
            for &(u, factor) in &self.closing[depth] {
                w *= factor.eval(self.model, x, pos[u]);
                if w == 0 {
                    break;
                }
            }
            if w != 0 {
                total += self.sum(depth + 1, pos, w);
            }
        }
        total
    }
}

/// `Σ_{x : x_pin = 0} Π_{e ∈ mayer} f_e Π_{e ∈ avoid} (1 + f_e)` over the
/// labels of `vertices`; `mayer` must connect `vertices`.
fn configuration_sum(model: &WeightModel, vertices: u16, pin: usize, mayer: &EdgeSet, avoid: &EdgeSet) -> i64 {
    let adj = mayer.adjacency();
    let mut order = vec![pin];
    let mut parent = [0usize; MAX_LABEL + 1];
    let mut seen = 1u16 << pin;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut next = adj[v] & vertices & !seen;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            seen |= 1 << w;
            parent[w] = v;
            order.push(w);
        }
    }
    debug_assert_eq!(seen, vertices, "mayer edges must connect the vertex set");
    let mut rank = [usize::MAX; MAX_LABEL + 1];
    for (k, &v) in order.iter().enumerate() {
        rank[v] = k;
    }
    let mut closing = vec![Vec::new(); order.len()];
    for (set, factor) in [(mayer, Factor::Mayer), (avoid, Factor::Avoid)] {
        for (i, j) in set.iter() {
            let (early, late) = if rank[i] < rank[j] { (i, j) } else { (j, i) };
            closing[rank[late]].push((early, factor));
        }
    }
    let problem = Problem { model, order, parent, closing };
    problem.sum(0, &mut [0; MAX_LABEL + 1], 1)
}

/// `ω̃(G) = Σ_{x : x_1 = 0} Π_{e ∈ E(G)} f_e`.
pub fn graph_weight_sum(model: &WeightModel, g: &LabeledGraph) -> Result<Rational> {
    graph_weight_sum_pinned(model, g, 1)
}

/// [`graph_weight_sum`] with vertex `pin` fixed at the origin instead.
pub fn graph_weight_sum_pinned(model: &WeightModel, g: &LabeledGraph, pin: usize) -> Result<Rational> {
    if pin == 0 || pin > g.n() {
        return Err(Error::VertexOutOfRange { vertex: pin, n: g.n() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let all = crate::graph::full_mask(g.n());
    Ok(int(configuration_sum(model, all, pin, g.edges(), &EdgeSet::empty(g.n()))))
}

/// `ω̃(τ)` with the completion rooted at the minimum label of `τ`.
pub fn tree_weight(model: &WeightModel, tree: &LabeledTree) -> Rational {
    tree_weight_rooted(model, tree, tree.min_vertex())
}

/// `Σ_{x : x_root = 0} Π_{e ∈ E(τ)} f_e Π_{ε ∈ extra} (1 + f_ε)` with the
/// extra edges of the completion rooted at `root`.
pub fn tree_weight_rooted(model: &WeightModel, tree: &LabeledTree, root: usize) -> Rational {
    let extra = completion_rooted(tree, root).extra;
    int(configuration_sum(model, tree.vertex_mask(), root, tree.edges(), &extra))
}

/// `Π_{e ∈ E(G)} f_e` at one configuration.
pub fn graph_weight_at(model: &WeightModel, g: &LabeledGraph, config: &Configuration) -> Result<Rational> {
    if config.positions.len() != g.n() + 1 {
        return Err(Error::InconsistentSizes(format!(
            "configuration has {} slots for {} vertices",
            config.positions.len().saturating_sub(1),
            g.n()
        )));
    }
    let mut w = BigInt::from(1);
    for (i, j) in g.edges().iter() {
        w *= model.f_int(config.positions[i], config.positions[j]);
        if w.is_zero() {
            break;
        }
    }
    Ok(Rational::from_integer(w))
}
