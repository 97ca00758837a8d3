//! Exact enumeration of connection probabilities and lace-expansion
//! coefficients as polynomials in `p`.
//!
//! Each quantity is accumulated as integer counts `c_k` indexed by the total
//! number `k` of occupied bonds across all levels, then converted to
//! `sum_k c_k p^(s + k) (1 - p)^(L*B - k)` where `B` is the bond count, `L`
//! the number of levels and `s` the explicit power of `p` in front of the
//! expectation. A configuration with `k` occupied bonds contributes only at
//! orders `>= s + k`, so enumerating configurations with `k <= max_order - s`
//! gives exact coefficients through `max_order` (the sparse mode).

use std::collections::HashMap;
use std::rc::Rc;

use rayon::prelude::*;

use super::events::{
    cluster, connected_min_length, double_connected_set, e_prime_targets, occupied_four_cycle_through, BondConfig,
    SmallGraph, VertexSet,
};
use crate::error::{Error, Result};
use crate::graph::{GraphModel, VertexId};
use crate::poly::RationalPolynomial;

/// Largest `levels * bonds` for full (untruncated) enumeration.
pub const FULL_ENUMERATION_BITS: u64 = 24;
/// Largest number of single-level configurations enumerated in sparse mode.
pub const MAX_LEVEL_CONFIGS: u64 = 20_000_000;
pub const DEFAULT_SERIES_ORDER: usize = 8;

/// Either every configuration, or only those contributing through a given
/// order in `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Full,
    Through(usize),
}

/// `pi0_cycle_split` output: `four_cycle + longer = Pi^(0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSplit {
    /// Probability mass with an occupied 4-cycle containing `0` and `x`.
    pub four_cycle: RationalPolynomial,
    /// The remainder: double connections through longer cycles only.
    pub longer: RationalPolynomial,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Configurations of one level, sorted by occupied count, with
/// `prefix[k]` = number having at most `k` occupied bonds.
struct LevelConfigs {
    configs: Vec<BondConfig>,
    prefix: Vec<usize>,
}

impl LevelConfigs {
    fn new(bonds: u32, max_occupied: u32) -> Result<Self> {
        let max_occupied = max_occupied.min(bonds);
        let total: u64 = (0..=max_occupied as u64)
            .map(|k| binomial(bonds as u64, k))
            .fold(0u64, u64::saturating_add);
        if total > MAX_LEVEL_CONFIGS {
            return Err(Error::limit(format!(
                "enumeration needs {total} configurations per level (cap {MAX_LEVEL_CONFIGS})"
            )));
        }
        let mut configs = Vec::with_capacity(total as usize);
        let mut prefix = Vec::with_capacity(max_occupied as usize + 1);
        for k in 0..=max_occupied {
            push_subsets(bonds, k, &mut configs);
            prefix.push(configs.len());
        }
        Ok(LevelConfigs { configs, prefix })
    }

    fn up_to(&self, budget: u32) -> &[BondConfig] {
        let k = (budget as usize).min(self.prefix.len() - 1);
        &self.configs[..self.prefix[k]]
    }
}

/// Appends every `k`-subset of `0..n` (Gosper's hack).
fn push_subsets(n: u32, k: u32, out: &mut Vec<BondConfig>) {
    if k == 0 {
        out.push(BondConfig::EMPTY);
        return;
    }
    let limit: u128 = if n == 128 { u128::MAX } else { 1u128 << n };
    let mut s: u128 = (1u128 << k) - 1;
    loop {
        out.push(BondConfig::from_bits(s));
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 || (n < 128 && r >= limit) {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
        if n < 128 && s >= limit {
            break;
        }
    }
}

/// `sum_k counts[k] p^(shift + k) (1-p)^(total_bonds - k)`.
pub(crate) fn poly_from_counts(
    counts: &[u128],
    shift: usize,
    total_bonds: usize,
    truncation: Truncation,
) -> RationalPolynomial {
    let max_order = match truncation {
        Truncation::Full => None,
        Truncation::Through(o) => Some(o),
    };
    let mut acc = RationalPolynomial::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let w = RationalPolynomial::bernoulli_weight(shift + k, total_bonds - k, max_order);
        acc = &acc + &w.scale(&num_rational::BigRational::from_integer(c.into()));
    }
    acc
}

fn add_shifted(acc: &mut Vec<u128>, offset: usize, sub: &[u128]) {
    if acc.len() < offset + sub.len() {
        acc.resize(offset + sub.len(), 0);
    }
    for (i, &c) in sub.iter().enumerate() {
        acc[offset + i] += c;
    }
}

/// Occupied-bond budget per level for a quantity with `levels` levels and an
/// explicit prefactor `p^shift`.
fn plan(g: &SmallGraph, levels: u64, shift: usize, truncation: Truncation) -> Result<Option<u32>> {
    let nb = g.bond_count() as u64;
    match truncation {
        Truncation::Full => {
            if nb * levels > FULL_ENUMERATION_BITS {
                return Err(Error::limit(format!(
                    "full enumeration of {levels} level(s) of {} ({nb} bonds) needs 2^{} configurations; \
                     the cap is 2^{FULL_ENUMERATION_BITS} (use a truncated series)",
                    g.model().label(),
                    nb * levels
                )));
            }
            Ok(None)
        }
        Truncation::Through(order) => Ok(Some(order.saturating_sub(shift) as u32)),
    }
}

fn single_level_counts<F>(g: &SmallGraph, truncation: Truncation, weight: F) -> Result<Vec<u128>>
where
    F: Fn(BondConfig) -> u128 + Sync,
{
    let budget = plan(g, 1, 0, truncation)?.unwrap_or(g.bond_count());
    let level = LevelConfigs::new(g.bond_count(), budget)?;
    let nb = g.bond_count() as usize;
    Ok(level
        .up_to(budget)
        .par_chunks(4096)
        .map(|chunk| {
            let mut counts = vec![0u128; nb + 1];
            for &cfg in chunk {
                counts[cfg.occupied_count() as usize] += weight(cfg);
            }
            counts
        })
        .reduce(
            || vec![0u128; nb + 1],
            |mut a, b| {
                add_shifted(&mut a, 0, &b);
                a
            },
        ))
}

fn single_level_poly<F>(g: &GraphModel, truncation: Truncation, weight: F) -> Result<RationalPolynomial>
where
    F: Fn(&SmallGraph, BondConfig) -> u128 + Sync,
{
    let sg = SmallGraph::new(g)?;
    let counts = single_level_counts(&sg, truncation, |cfg| weight(&sg, cfg))?;
    Ok(poly_from_counts(&counts, 0, sg.bond_count() as usize, truncation))
}

/// `chi(p) = E_p |C(0)|`.
pub fn chi_exact(g: &GraphModel) -> Result<RationalPolynomial> {
    chi_series(g, Truncation::Full)
}

pub fn chi_series(g: &GraphModel, truncation: Truncation) -> Result<RationalPolynomial> {
    single_level_poly(g, truncation, |sg, cfg| {
        cluster(sg, cfg, VertexId::ORIGIN).len() as u128
    })
}

/// `tau_p(x) = P_p(0 <-> x)`.
pub fn tau_exact(g: &GraphModel, x: VertexId) -> Result<RationalPolynomial> {
    tau_series(g, x, Truncation::Full)
}

pub fn tau_series(g: &GraphModel, x: VertexId, truncation: Truncation) -> Result<RationalPolynomial> {
    g.check_vertex(x)?;
    single_level_poly(g, truncation, |sg, cfg| {
        u128::from(cluster(sg, cfg, VertexId::ORIGIN).contains(x))
    })
}

/// Two-point polynomials for every vertex, in vertex order, from one pass.
pub fn tau_all_exact(g: &GraphModel) -> Result<Vec<RationalPolynomial>> {
    let sg = SmallGraph::new(g)?;
    plan(&sg, 1, 0, Truncation::Full)?;
    let nv = sg.vertex_count();
    let nb = sg.bond_count();
    let level = LevelConfigs::new(nb, nb)?;
    let counts = level
        .up_to(nb)
        .par_chunks(4096)
        .map(|chunk| {
            let mut counts = vec![vec![0u128; nb as usize + 1]; nv];
            for &cfg in chunk {
                let k = cfg.occupied_count() as usize;
                for x in cluster(&sg, cfg, VertexId::ORIGIN).iter() {
                    counts[x.index()][k] += 1;
                }
            }
            counts
        })
        .reduce(
            || vec![vec![0u128; nb as usize + 1]; nv],
            |mut a, b| {
                for (ai, bi) in a.iter_mut().zip(&b) {
                    add_shifted(ai, 0, bi);
                }
                a
            },
        );
    Ok(counts
        .iter()
        .map(|c| poly_from_counts(c, 0, nb as usize, Truncation::Full))
        .collect())
}

/// `tau^(i)(x)`: probability of an occupied self-avoiding path of length at
/// least `i` from `0` to `x`.
pub fn tau_min_length_exact(g: &GraphModel, x: VertexId, i: u32) -> Result<RationalPolynomial> {
    g.check_vertex(x)?;
    single_level_poly(g, Truncation::Full, |sg, cfg| {
        u128::from(connected_min_length(sg, cfg, VertexId::ORIGIN, x, i))
    })
}

/// `Pi^(0) = sum_{x != 0} P(0 <=> x)`.
pub fn pi0_exact(g: &GraphModel) -> Result<RationalPolynomial> {
    pi0_series(g, Truncation::Full)
}

pub fn pi0_series(g: &GraphModel, truncation: Truncation) -> Result<RationalPolynomial> {
    single_level_poly(g, truncation, |sg, cfg| {
        (double_connected_set(sg, cfg, VertexId::ORIGIN).len() - 1) as u128
    })
}

/// Splits `Pi^(0)` into the part with an occupied 4-cycle through `0` and `x`
/// and the part where only longer cycles doubly connect them.
pub fn pi0_cycle_split(g: &GraphModel, truncation: Truncation) -> Result<CycleSplit> {
    let sg = SmallGraph::new(g)?;
    let o = VertexId::ORIGIN;
    let four = single_level_counts(&sg, truncation, |cfg| {
        double_connected_set(&sg, cfg, o)
            .iter()
            .filter(|&x| x != o && occupied_four_cycle_through(&sg, cfg, o, x))
            .count() as u128
    })?;
    let longer = single_level_counts(&sg, truncation, |cfg| {
        double_connected_set(&sg, cfg, o)
            .iter()
            .filter(|&x| x != o && !occupied_four_cycle_through(&sg, cfg, o, x))
            .count() as u128
    })?;
    let nb = sg.bond_count() as usize;
    Ok(CycleSplit {
        four_cycle: poly_from_counts(&four, 0, nb, truncation),
        longer: poly_from_counts(&longer, 0, nb, truncation),
    })
}

/// Memoized nested expectation over levels `1..=N`.
///
/// `inner(r, A, v, budget)` returns counts by occupied bonds of
/// `sum_{level configs} [sum over designated bonds of the next levels] 1{E'}`
/// for a level whose incoming set is `A = C~_{j-1}` and start vertex
/// `v = v_{j-1}`, with `r` levels remaining after this one.
struct NestedCounter<'a> {
    g: &'a SmallGraph,
    level: &'a LevelConfigs,
    memo: HashMap<(u32, u64, u32, u32), Rc<Vec<u128>>>,
}

impl NestedCounter<'_> {
    fn inner(&mut self, remaining: u32, a: VertexSet, v: VertexId, budget: u32) -> Rc<Vec<u128>> {
        let budget = budget.min(self.g.bond_count() * (remaining + 1));
        let key = (remaining, a.0, v.0 as u32, budget);
        if let Some(hit) = self.memo.get(&key) {
            return Rc::clone(hit);
        }
        let g = self.g;
        let mut acc: Vec<u128> = Vec::new();
        for &cfg in self.level.up_to(budget) {
            let k = cfg.occupied_count();
            let targets = e_prime_targets(g, cfg, v, a);
            if targets.is_empty() {
                continue;
            }
            if remaining == 0 {
                add_shifted(&mut acc, k as usize, &[targets.len() as u128]);
                continue;
            }
            for u in targets.iter() {
                for (next_v, b) in g.neighbors(u) {
                    let next_a = cluster(g, cfg.with_vacant(b), v);
                    let sub = self.inner(remaining - 1, next_a, next_v, budget - k);
                    add_shifted(&mut acc, k as usize, &sub);
                }
            }
        }
        let acc = Rc::new(acc);
        self.memo.insert(key, Rc::clone(&acc));
        acc
    }
}

/// Counts for `Pi^(N)`, `N >= 1`, without the `p^N` prefactor.
fn pi_n_counts(g: &SmallGraph, n: u32, budget: Option<u32>) -> Result<Vec<u128>> {
    let nb = g.bond_count();
    let per_level = budget.unwrap_or(nb);
    let level = LevelConfigs::new(nb, per_level)?;
    let total_budget = budget.unwrap_or(nb * (n + 1));
    let o = VertexId::ORIGIN;
    let configs = level.up_to(total_budget);
    Ok(configs
        .par_iter()
        .map_init(
            || NestedCounter {
                g,
                level: &level,
                memo: HashMap::new(),
            },
            |counter, &cfg| {
                let k = cfg.occupied_count();
                let mut acc = Vec::new();
                for u0 in double_connected_set(g, cfg, o).iter() {
                    for (v0, b) in g.neighbors(u0) {
                        let a0 = cluster(g, cfg.with_vacant(b), o);
                        let sub = counter.inner(n - 1, a0, v0, total_budget - k);
                        add_shifted(&mut acc, k as usize, &sub);
                    }
                }
                acc
            },
        )
        .reduce(Vec::new, |mut a, b| {
            add_shifted(&mut a, 0, &b);
            a
        }))
}

/// `Pi^(N)` as an exact polynomial (all coefficients).
pub fn pi_n_exact(g: &GraphModel, n: u32) -> Result<RationalPolynomial> {
    pi_n_with(g, n, Truncation::Full)
}

/// `Pi^(N)` exact through `p^max_order`.
pub fn pi_n_series(g: &GraphModel, n: u32, max_order: usize) -> Result<RationalPolynomial> {
    pi_n_with(g, n, Truncation::Through(max_order))
}

pub fn pi_n_with(g: &GraphModel, n: u32, truncation: Truncation) -> Result<RationalPolynomial> {
    if n == 0 {
        return pi0_series(g, truncation);
    }
    let sg = SmallGraph::new(g)?;
    let budget = plan(&sg, n as u64 + 1, n as usize, truncation)?;
    if let Truncation::Through(order) = truncation {
        if order < n as usize {
            return Ok(RationalPolynomial::zero());
        }
    }
    let counts = pi_n_counts(&sg, n, budget)?;
    let total_bonds = sg.bond_count() as usize * (n as usize + 1);
    Ok(poly_from_counts(&counts, n as usize, total_bonds, truncation))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32) -> GraphModel {
        GraphModel::hypercube(n).unwrap()
    }

    fn ints(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(c.iter().copied())
    }

    #[test]
    fn subsets_enumerate_all() {
        let mut out = Vec::new();
        push_subsets(5, 2, &mut out);
        assert_eq!(out.len(), 10);
        assert!(out.iter().all(|c| c.occupied_count() == 2));
        let lc = LevelConfigs::new(4, 4).unwrap();
        assert_eq!(lc.configs.len(), 16);
        assert_eq!(lc.up_to(1).len(), 5);
    }

    #[test]
    fn chi_small_cubes() {
        assert_eq!(chi_exact(&q(1)).unwrap(), ints(&[1, 1]));
        assert_eq!(chi_exact(&q(2)).unwrap(), ints(&[1, 2, 2, 2, -3]));
    }

    #[test]
    fn tau_examples() {
        let q2 = q(2);
        assert_eq!(tau_exact(&q2, VertexId(0)).unwrap(), RationalPolynomial::one());
        assert_eq!(tau_exact(&q(1), VertexId(1)).unwrap(), ints(&[0, 1]));
        assert_eq!(tau_min_length_exact(&q2, VertexId(1), 2).unwrap(), ints(&[0, 0, 0, 1]));
        let all = tau_all_exact(&q2).unwrap();
        let sum = all.iter().fold(RationalPolynomial::zero(), |a, t| &a + t);
        assert_eq!(sum, chi_exact(&q2).unwrap());
    }

    #[test]
    fn pi0_small_cubes() {
        assert!(pi0_exact(&q(1)).unwrap().is_zero());
        assert_eq!(pi0_exact(&q(2)).unwrap(), ints(&[0, 0, 0, 0, 3]));
    }

    #[test]
    fn pi_n_on_q1() {
        assert_eq!(pi_n_exact(&q(1), 1).unwrap(), ints(&[0, 0, 1]));
        assert_eq!(pi_n_exact(&q(1), 2).unwrap(), ints(&[0, 0, 0, 1]));
        assert_eq!(pi_n_exact(&q(1), 0).unwrap(), pi0_exact(&q(1)).unwrap());
    }

    #[test]
    fn series_agrees_with_full() {
        let q2 = q(2);
        for n in 0..=2 {
            let full = pi_n_exact(&q2, n).unwrap();
            for order in 0..=6 {
                assert_eq!(
                    pi_n_series(&q2, n, order).unwrap(),
                    full.truncate(order),
                    "N={n} order {order}"
                );
            }
        }
        let chi = chi_exact(&q(3)).unwrap();
        assert_eq!(chi_series(&q(3), Truncation::Through(5)).unwrap(), chi.truncate(5));
    }

    #[test]
    fn low_orders_vanish_for_n_at_least_one() {
        for g in [q(1), q(2), q(3)] {
            for n in 1..=2 {
                let s = pi_n_series(&g, n, 4).unwrap();
                assert!(s.lowest_order().is_none_or(|o| o > n as usize));
            }
        }
    }

    #[test]
    fn full_enumeration_guard() {
        let err = pi_n_exact(&q(3), 2).unwrap_err();
        assert!(err.is_resource_limit());
        assert!(chi_exact(&q(4)).unwrap_err().is_resource_limit());
    }
}
