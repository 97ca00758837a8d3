//! Explicit level stacks: one configuration and one designated directed bond
//! per level, with the cached cluster sets the nested events refer to.
//!
//! This is the literal, unoptimized evaluation path. The enumeration engine
//! in [`super::enumerate`] is checked against it on the smallest graphs.

use super::events::{cluster, double_connected, e_prime_holds_literal, BondConfig, SmallGraph, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{DirectedBond, VertexId};
use crate::poly::RationalPolynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStack {
    configs: Vec<BondConfig>,
    bonds: Vec<DirectedBond>,
    caches: Vec<VertexSet>,
}

impl LevelStack {
    /// `configs` holds levels `0..=N`, `bonds` the designated bonds
    /// `(u_j, v_j)` for `j < N`.
    pub fn new(g: &SmallGraph, configs: Vec<BondConfig>, bonds: Vec<DirectedBond>) -> Result<Self> {
        if configs.len() != bonds.len() + 1 {
            return Err(Error::arg(format!(
                "a stack with {} levels needs {} designated bonds, got {}",
                configs.len(),
                configs.len().saturating_sub(1),
                bonds.len()
            )));
        }
        let mut caches = Vec::with_capacity(bonds.len());
        let mut start = VertexId::ORIGIN;
        for (j, e) in bonds.iter().enumerate() {
            let b = g
                .bond_of(*e)
                .ok_or_else(|| Error::arg(format!("({}, {}) is not a bond", e.from.0, e.to.0)))?;
            caches.push(cluster(g, configs[j].with_vacant(b), start));
            start = e.to;
        }
        Ok(LevelStack { configs, bonds, caches })
    }

    /// Number of designated bonds, i.e. the `N` of the coefficient.
    pub fn depth(&self) -> usize {
        self.bonds.len()
    }

    pub fn configs(&self) -> &[BondConfig] {
        &self.configs
    }

    pub fn bonds(&self) -> &[DirectedBond] {
        &self.bonds
    }

    /// `C~_j`: the level-`j` cluster of `v_{j-1}` (with `v_{-1} = 0`) after
    /// making `{u_j, v_j}` vacant.
    pub fn cached_clusters(&self) -> &[VertexSet] {
        &self.caches
    }

    pub fn occupied_total(&self) -> u32 {
        self.configs.iter().map(|c| c.occupied_count()).sum()
    }

    /// Product of the level indicators for endpoint `x`:
    /// `1{0 <=> u_0} prod_j 1{E'(v_{j-1}, u_j; C~_{j-1})} 1{E'(v_{N-1}, x; C~_{N-1})}`.
    /// With no designated bonds this is `1{0 <=> x}`.
    pub fn indicator(&self, g: &SmallGraph, x: VertexId) -> bool {
        let o = VertexId::ORIGIN;
        let n = self.bonds.len();
        if n == 0 {
            return double_connected(g, self.configs[0], o, x);
        }
        if !double_connected(g, self.configs[0], o, self.bonds[0].from) {
            return false;
        }
        for j in 1..=n {
            let v = self.bonds[j - 1].to;
            let end = if j == n { x } else { self.bonds[j].from };
            if !e_prime_holds_literal(g, self.configs[j], v, end, self.caches[j - 1]) {
                return false;
            }
        }
        true
    }
}

/// `Pi^(N)` by brute force over every level stack and endpoint. Exponential
/// in everything; intended for `Q_1` and `Q_2` only.
pub fn pi_n_brute_force(g: &SmallGraph, n: usize) -> Result<RationalPolynomial> {
    let nb = g.bond_count() as usize;
    if nb * (n + 1) > 16 {
        return Err(Error::limit(format!(
            "brute-force evaluation needs 2^{} level configurations (cap 2^16)",
            nb * (n + 1)
        )));
    }
    let directed = g.directed_bonds();
    let per_level = 1u128 << nb;
    let mut counts = vec![0u128; nb * (n + 1) + 1];
    let mut configs = vec![BondConfig::EMPTY; n + 1];
    let mut bond_choice = vec![0usize; n];
    let total_configs = per_level.pow(n as u32 + 1);
    for code in 0..total_configs {
        let mut rest = code;
        for c in configs.iter_mut() {
            *c = BondConfig::from_bits(rest % per_level);
            rest /= per_level;
        }
        loop {
            let bonds: Vec<DirectedBond> = bond_choice.iter().map(|&i| directed[i]).collect();
            let stack = LevelStack::new(g, configs.clone(), bonds)?;
            let hits = (0..g.vertex_count() as u64)
                .map(VertexId)
                .filter(|&x| (n > 0 || x != VertexId::ORIGIN) && stack.indicator(g, x))
                .count() as u128;
            counts[stack.occupied_total() as usize] += hits;
            if !advance(&mut bond_choice, directed.len()) {
                break;
            }
        }
    }
    Ok(super::enumerate::poly_from_counts(
        &counts,
        n,
        nb * (n + 1),
        super::enumerate::Truncation::Full,
    ))
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
