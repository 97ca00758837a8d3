use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::Serialize;

use super::{check_p, check_samples, merge_moments, run_streams, Estimate, McConfig, Moments};
use crate::error::Result;
use crate::graph::{GraphModel, VertexId};
use crate::oracle::events::{cluster, BondConfig, SmallGraph};
use crate::rng::SampleStream;

/// Graphs up to this many vertices use a dense visit-stamp array.
const DENSE_VISIT_LIMIT: u64 = 1 << 24;
/// Self-avoiding path search steps before a sample is flagged truncated.
const PATH_SEARCH_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClusterSample {
    pub size: u64,
    pub bonds_examined: u64,
    pub truncated: bool,
    pub sample: u64,
}

enum Visited {
    Dense { stamp: Vec<u32>, epoch: u32 },
    Sparse(HashSet<u64>),
}

impl Visited {
    fn new(vertex_count: u64) -> Self {
        if vertex_count <= DENSE_VISIT_LIMIT {
            Visited::Dense {
                stamp: vec![0; vertex_count as usize],
                epoch: 0,
            }
        } else {
            Visited::Sparse(HashSet::new())
        }
    }

    fn clear(&mut self) {
        match self {
            Visited::Dense { stamp, epoch } => {
                *epoch = epoch.wrapping_add(1);
                if *epoch == 0 {
                    stamp.iter_mut().for_each(|s| *s = 0);
                    *epoch = 1;
                }
            }
            Visited::Sparse(set) => set.clear(),
        }
    }

    #[inline]
    fn contains(&self, v: VertexId) -> bool {
        match self {
            Visited::Dense { stamp, epoch } => stamp[v.0 as usize] == *epoch,
            Visited::Sparse(set) => set.contains(&v.0),
        }
    }

    #[inline]
    fn insert(&mut self, v: VertexId) {
        match self {
            Visited::Dense { stamp, epoch } => stamp[v.0 as usize] = *epoch,
            Visited::Sparse(set) => {
                set.insert(v.0);
            }
        }
    }
}

/// Reusable state for growing origin clusters on one graph.
///
/// Bond occupation is read from the sample's counter-based uniforms, so each
/// bond has one fixed state per sample no matter how often it is looked at.
pub struct ClusterSampler<'g> {
    g: &'g GraphModel,
    visited: Visited,
    members: Vec<VertexId>,
    heap: BinaryHeap<Reverse<(u64, u64)>>,
    cap: u64,
}

impl<'g> ClusterSampler<'g> {
    pub fn new(g: &'g GraphModel, cap: u64) -> Self {
        ClusterSampler {
            g,
            visited: Visited::new(g.vertex_count()),
            members: Vec::new(),
            heap: BinaryHeap::new(),
            cap: cap.max(1),
        }
    }

    /// Breadth-first growth of `C(0)` at density `p`.
    pub fn sample(&mut self, p: f64, stream: SampleStream, sample: u64) -> ClusterSample {
        let g = self.g;
        self.visited.clear();
        self.members.clear();
        self.members.push(VertexId::ORIGIN);
        self.visited.insert(VertexId::ORIGIN);
        let mut head = 0;
        let mut examined = 0u64;
        let mut truncated = false;
        let cap = self.cap as usize;
        while head < self.members.len() && !truncated {
            let v = self.members[head];
            head += 1;
            let visited = &mut self.visited;
            let members = &mut self.members;
            g.for_each_neighbor(v, |w, b| {
                examined += 1;
                if truncated || visited.contains(w) || !stream.occupied(b.0, p) {
                    return;
                }
                if members.len() >= cap {
                    truncated = true;
                    return;
                }
                visited.insert(w);
                members.push(w);
            });
        }
        ClusterSample {
            size: self.members.len() as u64,
            bonds_examined: examined,
            truncated,
            sample,
        }
    }

    /// Vertices of the most recently sampled cluster, in discovery order.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.visited.contains(v)
    }

    /// Entry thresholds of the origin cluster: for every vertex `x != 0`
    /// joined to `0` by a path whose bond uniforms are all below `p_cap`, the
    /// smallest achievable maximum uniform along such a path. Written to
    /// `out` in nondecreasing order. `|C(0)|` at any `p <= p_cap` is one plus
    /// the number of thresholds below `p`. Returns whether the cap was hit.
    pub fn entry_thresholds(&mut self, p_cap: f64, stream: SampleStream, out: &mut Vec<f64>) -> bool {
        let g = self.g;
        out.clear();
        self.visited.clear();
        self.heap.clear();
        self.heap.push(Reverse((0, VertexId::ORIGIN.0)));
        let mut first = true;
        let mut size = 0u64;
        while let Some(Reverse((bits, v))) = self.heap.pop() {
            let v = VertexId(v);
            if self.visited.contains(v) {
                continue;
            }
            if size >= self.cap {
                return true;
            }
            self.visited.insert(v);
            size += 1;
            let t = f64::from_bits(bits);
            if first {
                first = false;
            } else {
                out.push(t);
            }
            let visited = &self.visited;
            let heap = &mut self.heap;
            g.for_each_neighbor(v, |w, b| {
                if visited.contains(w) {
                    return;
                }
                let u = stream.uniform(b.0);
                if u < p_cap {
                    heap.push(Reverse((u.max(t).to_bits(), w.0)));
                }
            });
        }
        false
    }

    /// Whether the current cluster holds an occupied self-avoiding path of
    /// length at least `min_len` from `0` to `x`. `None` if the search was
    /// cut off.
    fn long_path_to(&self, p: f64, stream: SampleStream, x: VertexId, min_len: u32) -> Option<bool> {
        if !self.contains(x) {
            return Some(false);
        }
        if min_len == 0 {
            return Some(true);
        }
        let index: HashMap<u64, usize> = self.members.iter().enumerate().map(|(i, v)| (v.0, i)).collect();
        let adj: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|&v| {
                let mut out = Vec::new();
                self.g.for_each_neighbor(v, |w, b| {
                    if let Some(&j) = index.get(&w.0) {
                        if stream.occupied(b.0, p) {
                            out.push(j);
                        }
                    }
                });
                out
            })
            .collect();
        let target = index[&x.0];
        let mut on_path = vec![false; adj.len()];
        let mut steps = 0u64;
        let found = long_path_dfs(&adj, 0, target, min_len, 0, &mut on_path, &mut steps);
        if steps > PATH_SEARCH_CAP {
            None
        } else {
            Some(found)
        }
    }
}

fn long_path_dfs(
    adj: &[Vec<usize>],
    v: usize,
    target: usize,
    min_len: u32,
    len: u32,
    on_path: &mut [bool],
    steps: &mut u64,
) -> bool {
    if v == target {
        return len >= min_len;
    }
    *steps += 1;
    if *steps > PATH_SEARCH_CAP {
        return false;
    }
    on_path[v] = true;
    for &w in &adj[v] {
        if !on_path[w] && long_path_dfs(adj, w, target, min_len, len + 1, on_path, steps) {
            on_path[v] = false;
            return true;
        }
    }
    on_path[v] = false;
    false
}

/// One origin cluster at density `p` for sample index `sample`.
pub fn sample_origin_cluster(g: &GraphModel, p: f64, seed: u64, sample: u64, cap: u64) -> Result<ClusterSample> {
    check_p(p)?;
    let mut s = ClusterSampler::new(g, cap);
    Ok(s.sample(p, SampleStream::new(seed, sample), sample))
}

/// The same sample built from a full configuration of a small graph. Uses
/// identical uniforms, so it returns the same cluster as
/// [`sample_origin_cluster`].
pub fn sample_origin_cluster_eager(g: &GraphModel, p: f64, seed: u64, sample: u64) -> Result<ClusterSample> {
    check_p(p)?;
    let sg = SmallGraph::new(g)?;
    let stream = SampleStream::new(seed, sample);
    let cfg = BondConfig::from_bonds(
        (0..sg.bond_count() as u64)
            .map(crate::graph::BondId)
            .filter(|b| stream.occupied(b.0, p)),
    );
    Ok(ClusterSample {
        size: cluster(&sg, cfg, VertexId::ORIGIN).len() as u64,
        bonds_examined: sg.bond_count() as u64,
        truncated: false,
        sample,
    })
}

fn indicator_estimate<F>(g: &GraphModel, p: f64, samples: u64, cfg: &McConfig, value: F) -> Result<Estimate>
where
    F: Fn(&ClusterSampler, SampleStream) -> (u64, bool) + Sync + Send,
{
    check_p(p)?;
    check_samples(samples)?;
    cfg.validate()?;
    let parts = run_streams(
        samples,
        cfg.streams,
        || ClusterSampler::new(g, cfg.cluster_cap),
        Moments::default,
        |sampler, acc, i| {
            let stream = SampleStream::new(cfg.seed, i);
            let s = sampler.sample(p, stream, i);
            let (x, cut) = value(sampler, stream);
            acc.push(x);
            if s.truncated || cut {
                acc.truncated += 1;
            }
        },
    );
    Ok(Estimate::from_moments(
        &merge_moments(&parts),
        1.0,
        cfg.seed,
        cfg.streams,
    ))
}

/// `chi(p) = E_p |C(0)|`.
pub fn chi_estimate(g: &GraphModel, p: f64, samples: u64, cfg: &McConfig) -> Result<Estimate> {
    indicator_estimate(g, p, samples, cfg, |s, _| (s.members().len() as u64, false))
}

/// `tau_p(x) = P_p(0 <-> x)`.
pub fn two_point_estimate(g: &GraphModel, p: f64, x: VertexId, samples: u64, cfg: &McConfig) -> Result<Estimate> {
    g.check_vertex(x)?;
    indicator_estimate(g, p, samples, cfg, |s, _| (u64::from(s.contains(x)), false))
}

/// Probability that an occupied self-avoiding path of length at least `i`
/// joins `0` and `x`.
pub fn min_length_connection_estimate(
    g: &GraphModel,
    p: f64,
    x: VertexId,
    i: u32,
    samples: u64,
    cfg: &McConfig,
) -> Result<Estimate> {
    g.check_vertex(x)?;
    indicator_estimate(g, p, samples, cfg, |s, stream| match s.long_path_to(p, stream, x, i) {
        Some(hit) => (u64::from(hit), false),
        None => (0, true),
    })
}

/// `chi` on every grid point from one cluster growth per sample, sharing
/// uniforms across the grid so each sample path is nondecreasing in `p`.
pub fn sweep_chi(g: &GraphModel, grid: &[f64], samples: u64, cfg: &McConfig) -> Result<Vec<Estimate>> {
    for &p in grid {
        check_p(p)?;
    }
    check_samples(samples)?;
    cfg.validate()?;
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    let p_cap = grid[*order.last().unwrap()];
    let parts = run_streams(
        samples,
        cfg.streams,
        || (ClusterSampler::new(g, cfg.cluster_cap), Vec::new()),
        || vec![Moments::default(); grid.len()],
        |(sampler, thresholds), acc, i| {
            let cut = sampler.entry_thresholds(p_cap, SampleStream::new(cfg.seed, i), thresholds);
            let mut k = 0usize;
            for &gi in &order {
                let p = grid[gi];
                while k < thresholds.len() && thresholds[k] < p {
                    k += 1;
                }
                acc[gi].push(1 + k as u64);
                if cut {
                    acc[gi].truncated += 1;
                }
            }
        },
    );
    Ok((0..grid.len())
        .map(|gi| {
            let m = parts.iter().fold(Moments::default(), |mut a, part| {
                a.merge(&part[gi]);
                a
            });
            Estimate::from_moments(&m, 1.0, cfg.seed, cfg.streams)
        })
        .collect())
}
