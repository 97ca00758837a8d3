//! Brute-force reference computations over every bond configuration of a
//! small graph, independent of the library's enumeration code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use perclace::{BondId, GraphModel, RationalPolynomial, VertexId};

pub fn edges(g: &GraphModel) -> Vec<(usize, usize)> {
    (0..g.bond_count())
        .map(|b| {
            let (u, v) = g.bond_endpoints(BondId(b));
            (u.index(), v.index())
        })
        .collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Component label of every vertex when the bonds in `mask` are occupied,
/// skipping bond `skip`.
pub fn labels(vertices: usize, edges: &[(usize, usize)], mask: u64, skip: Option<usize>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..vertices).collect();
    for (b, &(u, v)) in edges.iter().enumerate() {
        if mask >> b & 1 == 1 && Some(b) != skip {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
        }
    }
    (0..vertices).map(|x| find(&mut parent, x)).collect()
}

/// `sum_mask weight(mask) p^|mask| (1-p)^(B-|mask|)` expanded in powers of `p`.
pub fn expectation<F: Fn(u64) -> u64>(g: &GraphModel, weight: F) -> RationalPolynomial {
    let b = g.bond_count() as usize;
    let mut by_count = vec![0u64; b + 1];
    for mask in 0u64..1 << b {
        by_count[mask.count_ones() as usize] += weight(mask);
    }
    let mut coeffs = vec![BigInt::from(0); b + 1];
    for (k, &c) in by_count.iter().enumerate() {
        if c == 0 {
            continue;
        }
        // p^k (1 - p)^(b - k) = sum_j C(b-k, j) (-1)^j p^(k+j)
        let mut binom = BigInt::from(1);
        for j in 0..=(b - k) {
            let term = &binom * c;
            if j % 2 == 0 {
                coeffs[k + j] += term;
            } else {
                coeffs[k + j] -= term;
            }
            binom = binom * (b - k - j) / (j + 1);
        }
    }
    RationalPolynomial::new(coeffs.into_iter().map(BigRational::from_integer).collect())
}

pub fn chi(g: &GraphModel) -> RationalPolynomial {
    let e = edges(g);
    let n = g.vertex_count() as usize;
    expectation(g, |mask| {
        let l = labels(n, &e, mask, None);
        l.iter().filter(|&&c| c == l[0]).count() as u64
    })
}

pub fn two_point(g: &GraphModel, x: VertexId) -> RationalPolynomial {
    let e = edges(g);
    let n = g.vertex_count() as usize;
    expectation(g, |mask| {
        let l = labels(n, &e, mask, None);
        u64::from(l[0] == l[x.index()])
    })
}

/// Expected number of `x != 0` joined to the origin by two bond-disjoint
/// paths, i.e. still connected after removing any single bond.
pub fn double_connections(g: &GraphModel) -> RationalPolynomial {
    let e = edges(g);
    let n = g.vertex_count() as usize;
    expectation(g, |mask| {
        let mut alive: Vec<bool> = {
            let l = labels(n, &e, mask, None);
            (0..n).map(|x| x != 0 && l[x] == l[0]).collect()
        };
        for b in 0..e.len() {
            if mask >> b & 1 == 1 {
                let l = labels(n, &e, mask, Some(b));
                for x in 1..n {
                    alive[x] &= l[x] == l[0];
                }
            }
        }
        alive.iter().filter(|&&a| a).count() as u64
    })
}
