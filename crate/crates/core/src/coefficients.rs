//! Cluster and virial coefficients of a model, computed by three independent
//! routes that must agree exactly.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_trees, pair_count, ConnectedGraphs, LabeledTree};
use crate::models::{graph_weight_sum, tree_weight, tree_weight_rooted, WeightModel};
use crate::series::{factorial, gen_binomial, int, lagrange_virial, rational_to_f64, reversion_oracle, PowerSeries, Rational};
use crate::splitting::{attachment_vertex, cut_parts, internal_vertices, is_faithful, max_splittability};

/// Largest `n` for which `b_n` and `β_n` are computed.
pub const MAX_COEFF_N: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    GraphBell,
    GraphReversion,
    PenroseTrees,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::GraphBell, Route::GraphReversion, Route::PenroseTrees];

    pub fn name(self) -> &'static str {
        match self {
            Route::GraphBell => "graph+bell",
            Route::GraphReversion => "graph+reversion",
            Route::PenroseTrees => "penrose-trees",
        }
    }
}

/// `b_1..b_nmax` and `β_1..β_nmax` of one model by one route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub model: WeightModel,
    pub nmax: usize,
    pub route: Route,
    pub b: Vec<Rational>,
    pub beta: Vec<Rational>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    model: String,
    nmax: usize,
    route: &'a str,
    b: Vec<String>,
    beta: Vec<String>,
}

impl CoefficientTable {
    fn json_view(&self) -> TableJson<'_> {
        TableJson {
            model: self.model.to_string(),
            nmax: self.nmax,
            route: self.route.name(),
            b: self.b.iter().map(ToString::to_string).collect(),
            beta: self.beta.iter().map(ToString::to_string).collect(),
        }
    }

    /// Exact fractions as strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.json_view()).expect("plain data serializes")
    }

    /// Exact columns plus lossy decimal approximations.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,route,n,b,beta,b_approx_lossy,beta_approx_lossy\n");
        for n in 1..=self.nmax {
            let (b, beta) = (&self.b[n - 1], &self.beta[n - 1]);
            writeln!(
                out,
                "{},{},{n},{b},{beta},{:.15e},{:.15e}",
                self.model,
                self.route.name(),
                rational_to_f64(b),
                rational_to_f64(beta)
            )
            .unwrap();
        }
        out
    }
}

pub fn tables_to_json(tables: &[CoefficientTable]) -> String {
    let views: Vec<TableJson<'_>> = tables.iter().map(CoefficientTable::json_view).collect();
    serde_json::to_string_pretty(&views).expect("plain data serializes")
}

pub fn tables_to_csv(tables: &[CoefficientTable]) -> String {
    let mut out = String::new();
    for (k, t) in tables.iter().enumerate() {
        let csv = t.to_csv();
        out.push_str(if k == 0 { &csv } else { csv.split_once('\n').unwrap().1 });
    }
    out
}

/// Whether every table lists the same `β`.
pub fn routes_agree(tables: &[CoefficientTable]) -> bool {
    tables.windows(2).all(|w| w[0].beta == w[1].beta)
}

fn check_cap(nmax: usize) -> Result<()> {
    if nmax == 0 || nmax > MAX_COEFF_N {
        return Err(Error::SizeOutOfRange { what: "coefficient table", n: nmax, max: MAX_COEFF_N });
    }
    Ok(())
}

fn connected_sum(model: &WeightModel, n: usize, parallel: bool) -> Result<Rational> {
    if n == 1 {
        return Ok(Rational::one());
    }
    let subsets = 1u64 << pair_count(n);
    let chunk = (subsets / 256).max(1);
    let sum_range = |start: u64| -> Result<Rational> {
        let mut acc = Rational::zero();
        for g in ConnectedGraphs::in_range(n, start, (start + chunk).min(subsets))? {
            acc += graph_weight_sum(model, &g)?;
        }
        Ok(acc)
    };
    let starts: Vec<u64> = (0..subsets).step_by(chunk as usize).collect();
    let parts: Vec<Rational> = if parallel {
        starts.into_par_iter().map(sum_range).collect::<Result<_>>()?
    } else {
        starts.into_iter().map(sum_range).collect::<Result<_>>()?
    };
    Ok(parts.into_iter().fold(Rational::zero(), |a, b| a + b))
}

/// `b_n = Σ_{G ∈ C[n]} ω̃(G)` for `n = 1..=nmax`, with `b_1 = 1`.
pub fn cluster_coefficients(model: &WeightModel, nmax: usize, parallel: bool) -> Result<Vec<Rational>> {
    check_cap(nmax)?;
    (1..=nmax).map(|n| connected_sum(model, n, parallel)).collect()
}

/// `β_1..β_nmax` from cluster coefficients by the Bell-polynomial formula.
pub fn virial_via_bell(b: &[Rational]) -> Result<Vec<Rational>> {
    (0..b.len()).map(|n| lagrange_virial(b, n)).collect()
}

/// `β_1..β_nmax` from cluster coefficients by series reversion.
pub fn virial_via_reversion(b: &[Rational]) -> Result<Vec<Rational>> {
    (0..b.len())
        .map(|n| if n == 0 { Ok(Rational::one()) } else { reversion_oracle(b, n) })
        .collect()
}

/// Weighted tree sums on `[n]` by splittability: entry `m` is
/// `Σ_{τ m-splittable} ω̃(τ)`.
pub fn weighted_split_sums(model: &WeightModel, n: usize, parallel: bool) -> Result<Vec<Rational>> {
    let tally = |mut acc: Vec<Rational>, t: LabeledTree| {
        let w = tree_weight(model, &t);
        if !w.is_zero() {
            acc[max_splittability(&t)] += w;
        }
        acc
    };
    let zero = || vec![Rational::zero(); n.max(2)];
    let trees = enumerate_trees(n)?;
    Ok(if parallel {
        let trees: Vec<LabeledTree> = trees.collect();
        trees
            .into_par_iter()
            .fold(zero, tally)
            .reduce(zero, |a, b| a.into_iter().zip(b).map(|(x, y)| x + y).collect())
    } else {
        trees.fold(zero(), tally)
    })
}

/// `β_{n+1} = Σ_m (-1)^m binom(n, m) Σ_{τ ∈ T_m[n+1]} ω̃(τ)`.
pub fn virial_via_trees(model: &WeightModel, nmax: usize, parallel: bool) -> Result<Vec<Rational>> {
    check_cap(nmax)?;
    let mut beta = vec![Rational::one()];
    for n in 1..nmax {
        let sums = weighted_split_sums(model, n + 1, parallel)?;
        let mut total = Rational::zero();
        for (m, w) in sums.iter().enumerate().skip(1) {
            let sign = if m % 2 == 0 { int(1) } else { int(-1) };
            total += sign * gen_binomial(&int(n as i64), m) * w;
        }
        beta.push(total);
    }
    Ok(beta)
}

/// `T_{1,ω̃}(z) = Σ_k z^k / k! Σ_{τ ∈ T_1[k+1]} ω̃(τ)` through `order`.
pub fn weighted_t1_series(model: &WeightModel, order: usize, parallel: bool) -> Result<PowerSeries> {
    let mut coeffs = vec![Rational::zero()];
    for k in 1..=order {
        coeffs.push(weighted_split_sums(model, k + 1, parallel)?[1].clone() / factorial(k));
    }
    Ok(PowerSeries::new(coeffs))
}

/// `β_1..β_nmax` from `β_{n+1} / (n+1)! = [z^n] (1 - T_{1,ω̃})^n / (n + 1)`.
pub fn virial_via_t1_power(model: &WeightModel, nmax: usize, parallel: bool) -> Result<Vec<Rational>> {
    check_cap(nmax)?;
    let t1 = weighted_t1_series(model, nmax.saturating_sub(1).max(1), parallel)?;
    let base = PowerSeries::one(t1.order()).sub(&t1);
    let mut beta = vec![Rational::one()];
    for n in 1..nmax {
        let c = base.pow(n as u32).coeff(n).clone();
        beta.push(c * factorial(n + 1) / int(n as i64 + 1));
    }
    Ok(beta)
}

/// Per `m`, the weighted `m`-splittable sum on `[n]` and
/// `(n-1)! [z^(n-1)] T_{1,ω̃}^m`.
pub fn weighted_power_pairs(model: &WeightModel, n: usize, parallel: bool) -> Result<Vec<(usize, Rational, Rational)>> {
    if n < 2 {
        return Err(Error::InvalidArgument("weighted splittability needs n >= 2".into()));
    }
    let sums = weighted_split_sums(model, n, parallel)?;
    let t1 = weighted_t1_series(model, n - 1, parallel)?;
    Ok((1..n)
        .map(|m| (m, sums[m].clone(), t1.pow(m as u32).coeff(n - 1) * factorial(n - 1)))
        .collect())
}

/// `Σ_{τ ∈ T_m[n]} ω̃(τ) = (n-1)! [z^(n-1)] T_{1,ω̃}(z)^m` for every `m`.
pub fn weighted_splittable_consistency(model: &WeightModel, n: usize) -> Result<bool> {
    Ok(weighted_power_pairs(model, n, true)?.iter().all(|(_, a, b)| a == b))
}

/// Outcome of checking `Π ω̃(τ_i) = ω̃(τ)` over faithful splittings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub trees: u64,
    pub splittings: u64,
    pub failures: Vec<String>,
}

/// Checks weight factorization over every faithful splitting of every tree
/// on `[n]`; each part is weighted from its attachment vertex.
pub fn check_weight_factorization(model: &WeightModel, n: usize) -> Result<FactorizationReport> {
    let trees: Vec<LabeledTree> = enumerate_trees(n)?.collect();
    let reports: Vec<FactorizationReport> = trees
        .par_iter()
        .map(|t| {
            let mut rep = FactorizationReport { trees: 1, ..Default::default() };
            let whole = tree_weight(model, t);
            let internal = internal_vertices(t);
            let mut cuts = internal;
            loop {
                let parts = cut_parts(t, cuts);
                if is_faithful(t, &parts).unwrap_or(false) {
                    rep.splittings += 1;
                    let product = parts
                        .iter()
                        .map(|p| tree_weight_rooted(model, p, attachment_vertex(t, p)))
                        .fold(Rational::one(), |a, b| a * b);
                    if product != whole {
                        rep.failures.push(format!("{t:?} cut at {cuts:#b}: parts {product} vs whole {whole}"));
                    }
                }
                if cuts == 0 {
                    break;
                }
                cuts = (cuts - 1) & internal;
            }
            rep
        })
        .collect();
    Ok(reports.into_iter().fold(FactorizationReport::default(), |mut acc, r| {
        acc.trees += r.trees;
        acc.splittings += r.splittings;
        acc.failures.extend(r.failures);
        acc
    }))
}

/// Tables for the requested routes; `b` comes from graph enumeration.
pub fn coefficient_tables(model: &WeightModel, nmax: usize, routes: &[Route], parallel: bool) -> Result<Vec<CoefficientTable>> {
    let b = cluster_coefficients(model, nmax, parallel)?;
    routes
        .iter()
        .map(|&route| {
            let beta = match route {
                Route::GraphBell => virial_via_bell(&b)?,
                Route::GraphReversion => virial_via_reversion(&b)?,
                Route::PenroseTrees => virial_via_trees(model, nmax, parallel)?,
            };
            Ok(CoefficientTable { model: *model, nmax, route, b: b.clone(), beta })
        })
        .collect()
}

/// `|β_{n+1}| / (n+1)!`.
pub fn scaled_virial_magnitude(beta: &[Rational], n: usize) -> Rational {
    beta[n].abs() / factorial(n + 1)
}
