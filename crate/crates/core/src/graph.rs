//! Finite transitive graphs: the hypercube `Q_n` and the periodic torus
//! `(Z/mZ)^n` used as a finite stand-in for `Z^n`.
//!
//! Vertices are packed integers. On `Q_n` bit `j` of the id is coordinate
//! `j`; on the torus the id is the mixed-radix number `sum_j x_j m^j`. In
//! both cases the origin is `0` and the vertex set is an abelian group
//! (xor on `Q_n`, coordinate-wise addition mod `m` on the torus), which the
//! convolution code in [`crate::diagrams`] relies on.
//!
//! Each bond has a dense canonical index in `0..bond_count()`. A bond is owned
//! by the endpoint from which it is a positive unit step in its coordinate
//! direction, so every vertex owns exactly `n` bonds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest closed-walk length accepted by [`count_closed_walks`].
pub const MAX_WALK_LENGTH: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Hypercube,
    Torus,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Hypercube => "hypercube",
            GraphKind::Torus => "torus",
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u64);

impl VertexId {
    pub const ORIGIN: VertexId = VertexId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense canonical bond index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BondId(pub u64);

impl BondId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered pair of adjacent vertices. `(u, v)` and `(v, u)` are distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectedBond {
    pub from: VertexId,
    pub to: VertexId,
}

impl DirectedBond {
    pub fn reversed(self) -> Self {
        DirectedBond {
            from: self.to,
            to: self.from,
        }
    }
}

/// Immutable descriptor of a hypercube or torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphModel {
    kind: GraphKind,
    n: u32,
    m: u32,
    omega: u32,
    omega_prime: u32,
    vertex_count: u64,
    /// `m^j` for the torus, `2^j` for the hypercube.
    strides: Vec<u64>,
    name: Option<String>,
}

impl GraphModel {
    /// `Q_n`, `1 <= n <= 62`.
    pub fn hypercube(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("dimension n must be at least 1".into()));
        }
        if n > 62 {
            return Err(Error::InvalidGraph(format!(
                "hypercube dimension {n} exceeds the supported maximum 62"
            )));
        }
        Ok(GraphModel {
            kind: GraphKind::Hypercube,
            n,
            m: 2,
            omega: n,
            omega_prime: n - 1,
            vertex_count: 1u64 << n,
            strides: (0..n).map(|j| 1u64 << j).collect(),
            name: None,
        })
    }

    /// The torus `(Z/mZ)^n` with `m >= 3`.
    pub fn torus(n: u32, m: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("dimension n must be at least 1".into()));
        }
        if m < 3 {
            return Err(Error::InvalidGraph(format!(
                "torus side m = {m} is degenerate; m must be at least 3"
            )));
        }
        let mut strides = Vec::with_capacity(n as usize);
        let mut acc: u64 = 1;
        for _ in 0..n {
            strides.push(acc);
            acc = acc
                .checked_mul(m as u64)
                .filter(|&v| v <= 1u64 << 62)
                .ok_or_else(|| Error::InvalidGraph(format!("torus {m}^{n} is too large")))?;
        }
        Ok(GraphModel {
            kind: GraphKind::Torus,
            n,
            m,
            omega: 2 * n,
            omega_prime: 2 * n - 2,
            vertex_count: acc,
            strides,
            name: None,
        })
    }

    /// Named small graphs: `Q1`..`Q4` (case-insensitive).
    pub fn named(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let n = match lower.as_str() {
            "q1" => 1,
            "q2" => 2,
            "q3" => 3,
            "q4" => 4,
            _ => return Err(Error::InvalidGraph(format!("unknown named graph '{name}'"))),
        };
        let mut g = Self::hypercube(n)?;
        g.name = Some(format!("Q{n}"));
        Ok(g)
    }

    pub fn build(kind: GraphKind, n: u32, m: Option<u32>) -> Result<Self> {
        match kind {
            GraphKind::Hypercube => Self::hypercube(n),
            GraphKind::Torus => {
                let m = m.ok_or_else(|| Error::InvalidGraph("torus requires a side length m".into()))?;
                Self::torus(n, m)
            }
        }
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Torus side length; `2` for the hypercube.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree `Omega`.
    pub fn omega(&self) -> u32 {
        self.omega
    }

    /// Sub-degree `Omega'`: `n - 1` on `Q_n`, `2n - 2` on the torus.
    pub fn omega_prime(&self) -> u32 {
        self.omega_prime
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    pub fn bond_count(&self) -> u64 {
        match self.kind {
            GraphKind::Hypercube => self.vertex_count / 2 * self.n as u64,
            GraphKind::Torus => self.vertex_count * self.n as u64,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Short label such as `Q3`, `hypercube(10)` or `torus(2,6)`.
    pub fn label(&self) -> String {
        match (&self.name, self.kind) {
            (Some(name), _) => name.clone(),
            (None, GraphKind::Hypercube) => format!("hypercube({})", self.n),
            (None, GraphKind::Torus) => format!("torus({},{})", self.n, self.m),
        }
    }

    #[inline]
    pub fn is_torus(&self) -> bool {
        self.kind == GraphKind::Torus
    }

    /// True on `Q_n` and on tori with even side.
    pub fn is_bipartite(&self) -> bool {
        !self.is_torus() || self.m.is_multiple_of(2)
    }

    /// Tori with `m = 4` have wrap-around 4-cycles absent from `Z^n`.
    pub fn has_short_wrap_cycles(&self) -> bool {
        self.is_torus() && self.m == 4
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v.0,
                vertex_count: self.vertex_count,
            })
        }
    }

    pub fn coords(&self, v: VertexId) -> Vec<u32> {
        match self.kind {
            GraphKind::Hypercube => (0..self.n).map(|j| ((v.0 >> j) & 1) as u32).collect(),
            GraphKind::Torus => {
                let m = self.m as u64;
                let mut rest = v.0;
                (0..self.n)
                    .map(|_| {
                        let c = (rest % m) as u32;
                        rest /= m;
                        c
                    })
                    .collect()
            }
        }
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<VertexId> {
        if coords.len() != self.n as usize {
            return Err(Error::arg(format!(
                "expected {} coordinates, got {}",
                self.n,
                coords.len()
            )));
        }
        let mut id = 0u64;
        for (j, &c) in coords.iter().enumerate() {
            if c >= self.m {
                return Err(Error::arg(format!("coordinate {c} out of range 0..{}", self.m)));
            }
            id += c as u64 * self.strides[j];
        }
        Ok(VertexId(id))
    }

    #[inline]
    fn torus_coord(&self, v: u64, j: usize) -> u64 {
        (v / self.strides[j]) % self.m as u64
    }

    /// The neighbor in slot `slot` together with the bond joining them.
    ///
    /// Slots run over `0..omega()`: on `Q_n` slot `j` flips bit `j`; on the
    /// torus slot `2j` steps `+e_j` and slot `2j + 1` steps `-e_j`. The caller
    /// guarantees `v` is valid and `slot < omega()`.
    #[inline]
    pub fn neighbor_bond(&self, v: VertexId, slot: u32) -> (VertexId, BondId) {
        match self.kind {
            GraphKind::Hypercube => {
                let j = slot;
                let w = v.0 ^ (1u64 << j);
                let owner = v.0 & !(1u64 << j);
                let low = owner & ((1u64 << j) - 1);
                let high = (owner >> (j + 1)) << j;
                let idx = ((j as u64) << (self.n - 1)) | high | low;
                (VertexId(w), BondId(idx))
            }
            GraphKind::Torus => {
                let j = (slot / 2) as usize;
                let stride = self.strides[j];
                let c = self.torus_coord(v.0, j);
                let m = self.m as u64;
                if slot.is_multiple_of(2) {
                    let w = if c + 1 == m { v.0 - c * stride } else { v.0 + stride };
                    (VertexId(w), BondId(v.0 * self.n as u64 + j as u64))
                } else {
                    let w = if c == 0 { v.0 + (m - 1) * stride } else { v.0 - stride };
                    (VertexId(w), BondId(w * self.n as u64 + j as u64))
                }
            }
        }
    }

    /// Calls `f(neighbor, bond)` for every slot of `v` in slot order. Faster
    /// than repeated [`neighbor_bond`](Self::neighbor_bond) on the torus.
    #[inline]
    pub fn for_each_neighbor<F: FnMut(VertexId, BondId)>(&self, v: VertexId, mut f: F) {
        match self.kind {
            GraphKind::Hypercube => {
                for j in 0..self.n {
                    let (w, b) = self.neighbor_bond(v, j);
                    f(w, b);
                }
            }
            GraphKind::Torus => {
                let m = self.m as u64;
                let n = self.n as u64;
                let mut rest = v.0;
                for (j, &stride) in self.strides.iter().enumerate() {
                    let c = rest % m;
                    rest /= m;
                    let up = if c + 1 == m { v.0 - c * stride } else { v.0 + stride };
                    f(VertexId(up), BondId(v.0 * n + j as u64));
                    let down = if c == 0 { v.0 + (m - 1) * stride } else { v.0 - stride };
                    f(VertexId(down), BondId(down * n + j as u64));
                }
            }
        }
    }

    #[inline]
    pub fn neighbor(&self, v: VertexId, slot: u32) -> VertexId {
        self.neighbor_bond(v, slot).0
    }

    /// All `omega()` neighbors in slot order (coordinate, then direction).
    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(v)?;
        Ok((0..self.omega).map(|s| self.neighbor(v, s)).collect())
    }

    pub fn are_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.bond_between(u, v).is_some()
    }

    pub fn bond_between(&self, u: VertexId, v: VertexId) -> Option<BondId> {
        if u.0 >= self.vertex_count || v.0 >= self.vertex_count {
            return None;
        }
        match self.kind {
            GraphKind::Hypercube => {
                let d = u.0 ^ v.0;
                (d.count_ones() == 1).then(|| self.neighbor_bond(u, d.trailing_zeros()).1)
            }
            GraphKind::Torus => (0..self.omega)
                .map(|s| self.neighbor_bond(u, s))
                .find(|&(w, _)| w == v)
                .map(|(_, b)| b),
        }
    }

    /// Endpoints `(owner, owner + e_j)` of a bond.
    pub fn bond_endpoints(&self, b: BondId) -> (VertexId, VertexId) {
        match self.kind {
            GraphKind::Hypercube => {
                let j = (b.0 >> (self.n - 1)) as u32;
                let rest = b.0 & ((1u64 << (self.n - 1)) - 1);
                let low = rest & ((1u64 << j) - 1);
                let high = (rest >> j) << (j + 1);
                let owner = high | low;
                (VertexId(owner), VertexId(owner | (1u64 << j)))
            }
            GraphKind::Torus => {
                let owner = b.0 / self.n as u64;
                let j = (b.0 % self.n as u64) as u32;
                (VertexId(owner), self.neighbor(VertexId(owner), 2 * j))
            }
        }
    }

    /// Every directed bond, in bond-index order with both orientations.
    pub fn directed_bonds(&self) -> Vec<DirectedBond> {
        (0..self.bond_count())
            .flat_map(|b| {
                let (u, v) = self.bond_endpoints(BondId(b));
                [DirectedBond { from: u, to: v }, DirectedBond { from: v, to: u }]
            })
            .collect()
    }

    /// Group addition `x + y`.
    pub fn add(&self, x: VertexId, y: VertexId) -> VertexId {
        match self.kind {
            GraphKind::Hypercube => VertexId(x.0 ^ y.0),
            GraphKind::Torus => {
                let m = self.m as u64;
                let mut id = 0;
                for j in 0..self.n as usize {
                    let c = (self.torus_coord(x.0, j) + self.torus_coord(y.0, j)) % m;
                    id += c * self.strides[j];
                }
                VertexId(id)
            }
        }
    }

    /// Group subtraction `x - y`.
    pub fn sub(&self, x: VertexId, y: VertexId) -> VertexId {
        match self.kind {
            GraphKind::Hypercube => VertexId(x.0 ^ y.0),
            GraphKind::Torus => {
                let m = self.m as u64;
                let mut id = 0;
                for j in 0..self.n as usize {
                    let c = (self.torus_coord(x.0, j) + m - self.torus_coord(y.0, j)) % m;
                    id += c * self.strides[j];
                }
                VertexId(id)
            }
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }
}

/// Result of [`count_4cycles_through_origin`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourCycleCount {
    pub count: u64,
    /// `Omega * Omega' / 2`.
    pub expected: u64,
    /// Set on `m = 4` tori, whose wrap cycles inflate the count.
    pub wrap_contaminated: bool,
}

/// Counts 4-cycles containing the origin by enumerating closed
/// self-avoiding 4-step walks and dividing by the two orientations.
pub fn count_4cycles_through_origin(g: &GraphModel) -> Result<FourCycleCount> {
    if g.is_torus() && g.m() < 4 {
        return Err(Error::InvalidGraph(format!(
            "4-cycle counting needs m >= 4 (m = {} has 3-cycles)",
            g.m()
        )));
    }
    let o = VertexId::ORIGIN;
    let mut walks = 0u64;
    for s1 in 0..g.omega() {
        let v1 = g.neighbor(o, s1);
        for s2 in 0..g.omega() {
            let v2 = g.neighbor(v1, s2);
            if v2 == o || v2 == v1 {
                continue;
            }
            for s3 in 0..g.omega() {
                let v3 = g.neighbor(v2, s3);
                if v3 == o || v3 == v1 || v3 == v2 {
                    continue;
                }
                walks += (0..g.omega()).filter(|&s4| g.neighbor(v3, s4) == o).count() as u64;
            }
        }
    }
    Ok(FourCycleCount {
        count: walks / 2,
        expected: g.omega() as u64 * g.omega_prime() as u64 / 2,
        wrap_contaminated: g.has_short_wrap_cycles(),
    })
}

/// Number of closed walks of the given length on one coordinate factor
/// (`K_2` for the hypercube, the `m`-cycle for the torus).
fn factor_closed_walks(g: &GraphModel, len: u32, binom: &[Vec<u128>]) -> u128 {
    match g.kind() {
        GraphKind::Hypercube => u128::from(len.is_multiple_of(2)),
        GraphKind::Torus => {
            let m = g.m() as i64;
            (0..=len)
                .filter(|&plus| (2 * plus as i64 - len as i64).rem_euclid(m) == 0)
                .map(|plus| binom[len as usize][plus as usize])
                .sum()
        }
    }
}

fn binomial_table(max: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; max + 1]; max + 1];
    for i in 0..=max {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
        }
    }
    t
}

/// Exact count of `length`-step nearest-neighbor walks from the origin back
/// to the origin.
///
/// Uses the product structure: a walk interleaves independent closed walks
/// on each coordinate factor, so the count is
/// `sum over (l_1..l_n) of multinomial(L; l) * prod_j w(l_j)`, evaluated by a
/// dynamic program over coordinates.
pub fn count_closed_walks(g: &GraphModel, length: u32) -> Result<u128> {
    if length > MAX_WALK_LENGTH {
        return Err(Error::limit(format!(
            "walk length {length} exceeds the cap {MAX_WALK_LENGTH}"
        )));
    }
    let len = length as usize;
    let binom = binomial_table(len);
    let w: Vec<u128> = (0..=length).map(|l| factor_closed_walks(g, l, &binom)).collect();
    let overflow = || Error::limit(format!("closed-walk count of length {length} overflows u128"));
    let mut acc = vec![0u128; len + 1];
    acc[0] = 1;
    for _ in 0..g.n() {
        let mut next = vec![0u128; len + 1];
        for s in 0..=len {
            let mut total: u128 = 0;
            for l in 0..=s {
                if w[l] == 0 || acc[s - l] == 0 {
                    continue;
                }
                let term = binom[s][l]
                    .checked_mul(w[l])
                    .and_then(|t| t.checked_mul(acc[s - l]))
                    .ok_or_else(overflow)?;
                total = total.checked_add(term).ok_or_else(overflow)?;
            }
            next[s] = total;
        }
        acc = next;
    }
    Ok(acc[len])
}

/// Closed-walk count by iterating the walk-count vector over all vertices.
///
/// Independent of [`count_closed_walks`]; limited to `max_states` vertices.
pub fn count_closed_walks_dp(g: &GraphModel, length: u32, max_states: u64) -> Result<u128> {
    if g.vertex_count() > max_states {
        return Err(Error::limit(format!(
            "vertex DP over {} states exceeds the cap {max_states}",
            g.vertex_count()
        )));
    }
    let nv = g.vertex_count() as usize;
    let mut cur = vec![0u128; nv];
    cur[0] = 1;
    for _ in 0..length {
        let mut next = vec![0u128; nv];
        for (v, &c) in cur.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for s in 0..g.omega() {
                let w = g.neighbor(VertexId(v as u64), s).index();
                next[w] = next[w]
                    .checked_add(c)
                    .ok_or_else(|| Error::limit("closed-walk count overflows u128"))?;
            }
        }
        cur = next;
    }
    Ok(cur[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypercube_degrees() {
        let g = GraphModel::hypercube(3).unwrap();
        assert_eq!((g.omega(), g.omega_prime(), g.vertex_count()), (3, 2, 8));
        assert_eq!(g.bond_count(), 12);
    }

    #[test]
    fn torus_degrees_and_degenerate_side() {
        let g = GraphModel::torus(2, 6).unwrap();
        assert_eq!((g.omega(), g.omega_prime(), g.vertex_count()), (4, 2, 36));
        assert_eq!(g.bond_count(), 72);
        assert!(GraphModel::torus(2, 2).is_err());
        assert!(GraphModel::hypercube(0).is_err());
        assert!(GraphModel::torus(0, 5).is_err());
    }

    #[test]
    fn named_aliases() {
        for k in 1..=4 {
            let g = GraphModel::named(&format!("q{k}")).unwrap();
            assert_eq!(g.n(), k);
            assert_eq!(g.kind(), GraphKind::Hypercube);
        }
        assert!(GraphModel::named("q9").is_err());
    }

    #[test]
    fn neighbor_examples() {
        let q3 = GraphModel::hypercube(3).unwrap();
        assert_eq!(
            q3.neighbors(VertexId(0)).unwrap(),
            vec![VertexId(0b001), VertexId(0b010), VertexId(0b100)]
        );
        let c5 = GraphModel::torus(1, 5).unwrap();
        assert_eq!(c5.neighbors(VertexId(0)).unwrap(), vec![VertexId(1), VertexId(4)]);
        let q1 = GraphModel::hypercube(1).unwrap();
        assert_eq!(q1.neighbors(VertexId(0)).unwrap(), vec![VertexId(1)]);
        assert!(q1.neighbors(VertexId(2)).is_err());
    }

    #[test]
    fn bond_indices_are_dense_and_consistent() {
        for g in [
            GraphModel::hypercube(4).unwrap(),
            GraphModel::torus(2, 3).unwrap(),
            GraphModel::torus(3, 4).unwrap(),
        ] {
            let mut seen = vec![0u32; g.bond_count() as usize];
            for v in g.vertices() {
                for s in 0..g.omega() {
                    let (w, b) = g.neighbor_bond(v, s);
                    seen[b.index()] += 1;
                    let (a, c) = g.bond_endpoints(b);
                    assert!((a == v && c == w) || (a == w && c == v));
                    assert_eq!(g.bond_between(v, w), Some(b));
                }
            }
            assert!(seen.iter().all(|&c| c == 2), "{}", g.label());
        }
    }

    #[test]
    fn for_each_neighbor_matches_slots() {
        for g in [GraphModel::hypercube(5).unwrap(), GraphModel::torus(3, 4).unwrap()] {
            for v in g.vertices() {
                let mut got = Vec::new();
                g.for_each_neighbor(v, |w, b| got.push((w, b)));
                let want: Vec<_> = (0..g.omega()).map(|s| g.neighbor_bond(v, s)).collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let g = GraphModel::torus(3, 5).unwrap();
        for v in g.vertices() {
            assert_eq!(g.from_coords(&g.coords(v)).unwrap(), v);
        }
        assert_eq!(g.from_coords(&[0, 0, 0]).unwrap(), VertexId::ORIGIN);
    }

    #[test]
    fn group_operations() {
        let g = GraphModel::torus(2, 5).unwrap();
        for x in g.vertices() {
            for y in g.vertices() {
                assert_eq!(g.add(g.sub(x, y), y), x);
            }
        }
    }

    #[test]
    fn four_cycle_examples() {
        assert_eq!(
            count_4cycles_through_origin(&GraphModel::hypercube(2).unwrap())
                .unwrap()
                .count,
            1
        );
        assert_eq!(
            count_4cycles_through_origin(&GraphModel::hypercube(3).unwrap())
                .unwrap()
                .count,
            3
        );
        let t = count_4cycles_through_origin(&GraphModel::torus(2, 6).unwrap()).unwrap();
        assert_eq!((t.count, t.expected), (4, 4));
        let t4 = count_4cycles_through_origin(&GraphModel::torus(2, 4).unwrap()).unwrap();
        assert!(t4.wrap_contaminated);
        assert_ne!(t4.count, t4.expected);
        assert!(count_4cycles_through_origin(&GraphModel::torus(2, 3).unwrap()).is_err());
    }

    #[test]
    fn four_cycles_match_formula() {
        for n in 1..=8 {
            let c = count_4cycles_through_origin(&GraphModel::hypercube(n).unwrap()).unwrap();
            assert_eq!(c.count, c.expected);
        }
        for n in 1..=4 {
            for m in [5, 6, 7] {
                let c = count_4cycles_through_origin(&GraphModel::torus(n, m).unwrap()).unwrap();
                assert_eq!(c.count, c.expected);
            }
        }
    }

    #[test]
    fn closed_walk_examples() {
        for n in 1..=6 {
            let g = GraphModel::hypercube(n).unwrap();
            assert_eq!(count_closed_walks(&g, 0).unwrap(), 1);
            assert_eq!(count_closed_walks(&g, 2).unwrap(), n as u128);
        }
        assert_eq!(count_closed_walks(&GraphModel::hypercube(2).unwrap(), 4).unwrap(), 8);
        // odd lengths vanish on bipartite graphs but not on the 3-cycle torus
        assert_eq!(count_closed_walks(&GraphModel::hypercube(3).unwrap(), 5).unwrap(), 0);
        assert_eq!(count_closed_walks(&GraphModel::torus(1, 3).unwrap(), 3).unwrap(), 2);
    }

    #[test]
    fn closed_walks_two_routes_agree() {
        let graphs = [
            GraphModel::hypercube(5).unwrap(),
            GraphModel::torus(2, 3).unwrap(),
            GraphModel::torus(2, 4).unwrap(),
            GraphModel::torus(3, 5).unwrap(),
        ];
        for g in &graphs {
            for len in 0..=10 {
                assert_eq!(
                    count_closed_walks(g, len).unwrap(),
                    count_closed_walks_dp(g, len, 1 << 20).unwrap(),
                    "{} len {len}",
                    g.label()
                );
            }
        }
    }

    #[test]
    fn walk_guards() {
        let g = GraphModel::hypercube(3).unwrap();
        assert!(count_closed_walks(&g, 40).unwrap_err().is_resource_limit());
        let big = GraphModel::hypercube(30).unwrap();
        assert!(count_closed_walks_dp(&big, 2, 1 << 20).unwrap_err().is_resource_limit());
    }
}
