//! Monte Carlo estimators for cluster observables.
//!
//! Sample `s` of a run with seed `seed` draws every bond uniform from
//! [`SampleStream::new(seed, s)`](crate::rng::SampleStream). Samples are split
//! into contiguous stream blocks processed in parallel, and block results are
//! merged in stream order with exact integer arithmetic, so estimates do not
//! depend on the number of worker threads.

mod cluster;
mod estimate;
mod nested;
mod solve;

use rayon::prelude::*;

pub use cluster::{
    chi_estimate, min_length_connection_estimate, sample_origin_cluster, sample_origin_cluster_eager, sweep_chi,
    two_point_estimate, ClusterSample, ClusterSampler,
};
pub use estimate::{Estimate, Moments};
pub use nested::pi_n_mc;
pub use solve::{
    chi_profile, corrected_omega_pc, solve_chi_target, ChiProfile, PseudoCriticalResult, SolveConfig, DEFAULT_TARGET,
    Z_99,
};

use crate::error::{Error, Result};

pub const DEFAULT_STREAMS: u32 = 64;
pub const DEFAULT_CLUSTER_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub seed: u64,
    pub streams: u32,
    /// Clusters are cut off (and flagged) once they reach this many vertices.
    pub cluster_cap: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            seed: 1,
            streams: DEFAULT_STREAMS,
            cluster_cap: DEFAULT_CLUSTER_CAP,
        }
    }
}

impl McConfig {
    pub fn with_seed(seed: u64) -> Self {
        McConfig {
            seed,
            ..McConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.streams == 0 {
            return Err(Error::arg("stream count must be positive"));
        }
        if self.cluster_cap == 0 {
            return Err(Error::arg("cluster cap must be positive"));
        }
        Ok(())
    }
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool
/// when `workers` is `None`.
pub fn with_workers<R, F>(workers: Option<usize>, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::arg("worker count must be positive")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::limit(format!("cannot start {w} worker threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Sample range of stream `k` when `samples` are split into `streams` blocks.
fn stream_block(samples: u64, streams: u32, k: u32) -> std::ops::Range<u64> {
    let streams = streams as u64;
    let k = k as u64;
    (samples * k / streams)..(samples * (k + 1) / streams)
}

/// Processes every sample once, accumulating into one `A` per stream, and
/// returns the per-stream accumulators in stream order. `scratch` is built
/// once per worker and reused across that worker's streams.
fn run_streams<S, A, FS, FA, W>(samples: u64, streams: u32, scratch: FS, init: FA, work: W) -> Vec<A>
where
    A: Send,
    FS: Fn() -> S + Sync + Send,
    FA: Fn() -> A + Sync + Send,
    W: Fn(&mut S, &mut A, u64) + Sync + Send,
{
    (0..streams)
        .into_par_iter()
        .map_init(scratch, |s, k| {
            let mut acc = init();
            for i in stream_block(samples, streams, k) {
                work(s, &mut acc, i);
            }
            acc
        })
        .collect()
}

fn merge_moments(parts: &[Moments]) -> Moments {
    parts.iter().fold(Moments::default(), |mut a, b| {
        a.merge(b);
        a
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!("p = {p} is outside [0, 1]")));
    }
    Ok(())
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::arg("sample count must be at least 1"));
    }
    Ok(())
}
