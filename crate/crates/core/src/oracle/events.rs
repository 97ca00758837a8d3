//! Percolation events on explicit bond configurations of small graphs.
//!
//! Everything here is a pure function of `(graph, configuration, arguments)`.
//! Bond configurations are `u128` bitsets over the canonical bond index and
//! vertex sets are `u64` bitsets, so oracle graphs are limited to 64 vertices
//! and 128 bonds.

use crate::error::{Error, Result};
use crate::graph::{BondId, DirectedBond, GraphModel, VertexId};

pub const MAX_ORACLE_VERTICES: u64 = 64;
pub const MAX_ORACLE_BONDS: u64 = 128;

/// Occupied/vacant assignment to every bond of a small graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BondConfig {
    bits: u128,
}

impl BondConfig {
    pub const EMPTY: BondConfig = BondConfig { bits: 0 };

    pub fn from_bits(bits: u128) -> Self {
        BondConfig { bits }
    }

    /// Every bond of `g` occupied.
    pub fn full(g: &SmallGraph) -> Self {
        BondConfig { bits: g.all_bonds }
    }

    pub fn from_bonds<I: IntoIterator<Item = BondId>>(bonds: I) -> Self {
        BondConfig {
            bits: bonds.into_iter().fold(0, |acc, b| acc | (1u128 << b.0)),
        }
    }

    pub fn bits(self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn is_occupied(self, b: BondId) -> bool {
        self.bits >> b.0 & 1 == 1
    }

    #[inline]
    pub fn with_occupied(self, b: BondId) -> Self {
        BondConfig {
            bits: self.bits | (1u128 << b.0),
        }
    }

    #[inline]
    pub fn with_vacant(self, b: BondId) -> Self {
        BondConfig {
            bits: self.bits & !(1u128 << b.0),
        }
    }

    pub fn occupied_count(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn occupied_bonds(self) -> impl Iterator<Item = BondId> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                BondId(b as u64)
            })
        })
    }
}

/// Bitset of vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn single(v: VertexId) -> Self {
        VertexSet(1u64 << v.0)
    }

    #[inline]
    pub fn contains(self, v: VertexId) -> bool {
        v.0 < 64 && self.0 >> v.0 & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1u64 << v.0;
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = VertexId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let v = bits.trailing_zeros();
                bits &= bits - 1;
                VertexId(v as u64)
            })
        })
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// A graph small enough for explicit configurations, with adjacency tables.
#[derive(Debug, Clone)]
pub struct SmallGraph {
    model: GraphModel,
    /// `(neighbor, bond)` per vertex, in slot order.
    adj: Vec<Vec<(u32, u32)>>,
    /// Bonds incident to each vertex.
    incident: Vec<u128>,
    endpoints: Vec<(VertexId, VertexId)>,
    all_bonds: u128,
}

impl SmallGraph {
    pub fn new(model: &GraphModel) -> Result<Self> {
        if model.vertex_count() > MAX_ORACLE_VERTICES || model.bond_count() > MAX_ORACLE_BONDS {
            return Err(Error::limit(format!(
                "{} has {} vertices and {} bonds; explicit configurations support at most {} and {}",
                model.label(),
                model.vertex_count(),
                model.bond_count(),
                MAX_ORACLE_VERTICES,
                MAX_ORACLE_BONDS
            )));
        }
        let nv = model.vertex_count() as usize;
        let mut adj = vec![Vec::new(); nv];
        let mut incident = vec![0u128; nv];
        for v in model.vertices() {
            for s in 0..model.omega() {
                let (w, b) = model.neighbor_bond(v, s);
                adj[v.index()].push((w.0 as u32, b.0 as u32));
                incident[v.index()] |= 1u128 << b.0;
            }
        }
        let endpoints = (0..model.bond_count())
            .map(|b| model.bond_endpoints(BondId(b)))
            .collect();
        let all_bonds = if model.bond_count() == 128 {
            u128::MAX
        } else {
            (1u128 << model.bond_count()) - 1
        };
        Ok(SmallGraph {
            model: model.clone(),
            adj,
            incident,
            endpoints,
            all_bonds,
        })
    }

    pub fn model(&self) -> &GraphModel {
        &self.model
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn bond_count(&self) -> u32 {
        self.endpoints.len() as u32
    }

    pub fn all_vertices(&self) -> VertexSet {
        if self.adj.len() == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << self.adj.len()) - 1)
        }
    }

    pub fn bond_endpoints(&self, b: BondId) -> (VertexId, VertexId) {
        self.endpoints[b.index()]
    }

    pub fn bond_of(&self, e: DirectedBond) -> Option<BondId> {
        self.adj
            .get(e.from.index())?
            .iter()
            .find(|&&(w, _)| w as u64 == e.to.0)
            .map(|&(_, b)| BondId(b as u64))
    }

    fn bond_of_unchecked(&self, e: DirectedBond) -> BondId {
        self.bond_of(e).expect("directed bond endpoints must be adjacent")
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, BondId)> + '_ {
        self.adj[v.index()]
            .iter()
            .map(|&(w, b)| (VertexId(w as u64), BondId(b as u64)))
    }

    pub fn directed_bonds(&self) -> Vec<DirectedBond> {
        self.model.directed_bonds()
    }

    /// Occupied bonds with at least one endpoint in `a`.
    pub fn bonds_touching(&self, a: VertexSet) -> u128 {
        a.iter().fold(0, |acc, v| acc | self.incident[v.index()])
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        self.model.check_vertex(v)
    }
}

/// `C(x)`: vertices joined to `x` by occupied paths.
pub fn cluster(g: &SmallGraph, config: BondConfig, x: VertexId) -> VertexSet {
    let mut seen = VertexSet::single(x).0;
    let mut stack = [0u32; 64];
    let mut top = 1;
    stack[0] = x.0 as u32;
    while top > 0 {
        top -= 1;
        let v = stack[top];
        for &(w, b) in &g.adj[v as usize] {
            if config.bits >> b & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1u64 << w;
                stack[top] = w;
                top += 1;
            }
        }
    }
    VertexSet(seen)
}

pub fn is_connected(g: &SmallGraph, config: BondConfig, x: VertexId, y: VertexId) -> bool {
    x == y || cluster(g, config, x).contains(y)
}

/// `C~^b(x)`: the cluster of `x` after setting `b` vacant.
pub fn cluster_without_bond(g: &SmallGraph, config: BondConfig, b: BondId, x: VertexId) -> VertexSet {
    cluster(g, config.with_vacant(b), x)
}

/// `x <=> y`: `x = y`, or two bond-disjoint occupied paths join them.
///
/// By the edge form of Menger's theorem this is connectivity with no single
/// occupied bond whose removal separates `x` from `y`.
pub fn double_connected(g: &SmallGraph, config: BondConfig, x: VertexId, y: VertexId) -> bool {
    if x == y {
        return true;
    }
    let c = cluster(g, config, x);
    if !c.contains(y) {
        return false;
    }
    let inside = config.bits & g.bonds_touching(c);
    BondConfig::from_bits(inside)
        .occupied_bonds()
        .all(|b| is_connected(g, config.with_vacant(b), x, y))
}

/// `x <->^A y`: connected, and every occupied `x`-`y` path uses a bond with
/// an endpoint in `A`. For `x = y` this holds iff `x` is in `A`.
pub fn connected_through(g: &SmallGraph, config: BondConfig, x: VertexId, y: VertexId, a: VertexSet) -> bool {
    if x == y {
        return a.contains(x);
    }
    if !is_connected(g, config, x, y) {
        return false;
    }
    let pruned = BondConfig::from_bits(config.bits & !g.bonds_touching(a));
    !is_connected(g, pruned, x, y)
}

/// Whether the directed bond `(u, v)` is pivotal for `x <-> y`: with `{u,v}`
/// occupied `x <-> y` holds; with it vacant `x <-> y` fails while `x <-> u`
/// and `v <-> y` hold.
pub fn is_pivotal(g: &SmallGraph, config: BondConfig, e: DirectedBond, x: VertexId, y: VertexId) -> bool {
    let b = g.bond_of_unchecked(e);
    let vacant = config.with_vacant(b);
    is_connected(g, config.with_occupied(b), x, y)
        && !is_connected(g, vacant, x, y)
        && is_connected(g, vacant, x, e.from)
        && is_connected(g, vacant, e.to, y)
}

/// Pivotal directed bonds for `v <-> x` in a configuration where they are
/// connected. Only occupied bonds can qualify there: making a vacant bond
/// vacant leaves the connection intact.
fn pivotal_bonds(g: &SmallGraph, config: BondConfig, cl: VertexSet, v: VertexId, x: VertexId) -> Vec<DirectedBond> {
    let inside = config.bits & g.bonds_touching(cl);
    let mut out = Vec::new();
    for b in BondConfig::from_bits(inside).occupied_bonds() {
        let side = cluster(g, config.with_vacant(b), v);
        if side.contains(x) {
            continue;
        }
        let (a, c) = g.bond_endpoints(b);
        out.push(if side.contains(a) {
            DirectedBond { from: a, to: c }
        } else {
            DirectedBond { from: c, to: a }
        });
    }
    out
}

/// `E'(v, x; A)`: `v <->^A x` and no pivotal `(u', v')` for `v <-> x` with
/// `v <->^A u'`.
pub fn e_prime_holds(g: &SmallGraph, config: BondConfig, v: VertexId, x: VertexId, a: VertexSet) -> bool {
    if v == x {
        // nothing is pivotal for v <-> v
        return a.contains(v);
    }
    let cl = cluster(g, config, v);
    if !cl.contains(x) {
        return false;
    }
    let pruned = BondConfig::from_bits(config.bits & !g.bonds_touching(a));
    if is_connected(g, pruned, v, x) {
        return false;
    }
    pivotal_bonds(g, config, cl, v, x)
        .into_iter()
        .all(|e| !connected_through(g, config, v, e.from, a))
}

/// All `x` with `E'(v, x; A)`, computed together.
///
/// Candidates are the vertices of `C(v)` cut off from `v` once bonds touching
/// `A` are removed. A bridge of `C(v)` is pivotal for every `x` beyond it, so
/// a bridge whose near endpoint `u'` has `v <->^A u'` removes its whole far
/// side.
pub fn e_prime_targets(g: &SmallGraph, config: BondConfig, v: VertexId, a: VertexSet) -> VertexSet {
    let cl = cluster(g, config, v);
    let pruned = BondConfig::from_bits(config.bits & !g.bonds_touching(a));
    let mut targets = VertexSet(cl.0 & !cluster(g, pruned, v).0);
    if targets.is_empty() {
        return if a.contains(v) {
            VertexSet::single(v)
        } else {
            VertexSet::EMPTY
        };
    }
    let inside = config.bits & g.bonds_touching(cl);
    for b in BondConfig::from_bits(inside).occupied_bonds() {
        let side = cluster(g, config.with_vacant(b), v);
        if side == cl {
            continue;
        }
        let far = cl.0 & !side.0;
        if targets.0 & far == 0 {
            continue;
        }
        let (e0, e1) = g.bond_endpoints(b);
        let near = if side.contains(e0) { e0 } else { e1 };
        if connected_through(g, config, v, near, a) {
            targets.0 &= !far;
        }
    }
    if a.contains(v) {
        targets.insert(v);
    }
    targets
}

/// `{u : 0 <=> u}` for `0 = x`: the 2-edge-connected component of `x`.
pub fn double_connected_set(g: &SmallGraph, config: BondConfig, x: VertexId) -> VertexSet {
    let cl = cluster(g, config, x);
    let inside = config.bits & g.bonds_touching(cl);
    let mut dc = cl.0;
    for b in BondConfig::from_bits(inside).occupied_bonds() {
        dc &= cluster(g, config.with_vacant(b), x).0;
    }
    VertexSet(dc)
}

/// `E'(v, x; A)` straight from the definitions, scanning every directed bond
/// (occupied or not) with [`is_pivotal`]. Reference for [`e_prime_holds`].
pub fn e_prime_holds_literal(g: &SmallGraph, config: BondConfig, v: VertexId, x: VertexId, a: VertexSet) -> bool {
    connected_through(g, config, v, x, a)
        && !g
            .directed_bonds()
            .into_iter()
            .any(|e| is_pivotal(g, config, e, v, x) && connected_through(g, config, v, e.from, a))
}

/// Whether an occupied self-avoiding path of length at least `min_len` joins
/// `x` to `y`. Depth-first search over simple paths; exponential in the
/// cluster size, intended for small graphs and small clusters.
pub fn connected_min_length(g: &SmallGraph, config: BondConfig, x: VertexId, y: VertexId, min_len: u32) -> bool {
    if min_len == 0 {
        return is_connected(g, config, x, y);
    }
    if x == y || !is_connected(g, config, x, y) {
        return false;
    }
    fn dfs(g: &SmallGraph, config: BondConfig, v: u32, y: u32, visited: u64, depth: u32, min_len: u32) -> bool {
        for &(w, b) in &g.adj[v as usize] {
            if config.bits >> b & 1 == 0 || visited >> w & 1 == 1 {
                continue;
            }
            if w == y {
                if depth + 1 >= min_len {
                    return true;
                }
                continue;
            }
            if dfs(g, config, w, y, visited | (1u64 << w), depth + 1, min_len) {
                return true;
            }
        }
        false
    }
    dfs(g, config, x.0 as u32, y.0 as u32, 1u64 << x.0, 0, min_len)
}

/// Whether an occupied cycle of length exactly 4 passes through both `x` and
/// `y` (`x != y`).
pub fn occupied_four_cycle_through(g: &SmallGraph, config: BondConfig, x: VertexId, y: VertexId) -> bool {
    let occ = |b: u32| config.bits >> b & 1 == 1;
    for &(v1, b1) in &g.adj[x.index()] {
        if !occ(b1) {
            continue;
        }
        for &(v2, b2) in &g.adj[v1 as usize] {
            if !occ(b2) || v2 as u64 == x.0 {
                continue;
            }
            for &(v3, b3) in &g.adj[v2 as usize] {
                if !occ(b3) || v3 as u64 == x.0 || v3 == v1 {
                    continue;
                }
                let closes = g.adj[v3 as usize]
                    .iter()
                    .any(|&(w, b4)| w as u64 == x.0 && occ(b4) && b4 != b1);
                if closes && [v1, v2, v3].iter().any(|&w| w as u64 == y.0) {
                    return true;
                }
            }
        }
    }
    false
}
