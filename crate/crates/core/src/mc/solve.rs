//! Stochastic solution of `chi(p) = T`.
//!
//! For a fixed seed, the estimated `chi` is a nondecreasing step function of
//! `p` (monotone coupling). One invasion-style growth per sample records the
//! density at which each vertex joins `C(0)`, which gives the estimate and
//! its standard error on a whole grid of densities at once. Each stage
//! brackets the root with a confidence interval, narrows the window around
//! it, and doubles the sample count until the bracket is tight enough.

use serde::Serialize;

use super::cluster::ClusterSampler;
use super::{check_samples, run_streams, Estimate, McConfig, Moments};
use crate::error::{Error, Result};
use crate::graph::GraphModel;
use crate::rng::SampleStream;

/// `z` for a two-sided 99% normal interval.
pub const Z_99: f64 = 2.575_829_303_548_901;
pub const DEFAULT_TARGET: f64 = 200.0;
const DEFAULT_BINS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveConfig {
    pub target: f64,
    /// Relative width of the confidence bracket on `p` needed to stop.
    pub tol: f64,
    /// Samples the final stage must reach even if the bracket is already
    /// narrow.
    pub min_samples: u64,
    /// Total cluster growths allowed across all stages.
    pub budget: u64,
    pub initial_samples: u64,
    pub z: f64,
    pub bins: usize,
    #[serde(skip)]
    pub mc: McConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            target: DEFAULT_TARGET,
            tol: 1e-3,
            min_samples: 1 << 16,
            budget: 1 << 24,
            initial_samples: 1 << 10,
            z: Z_99,
            bins: DEFAULT_BINS,
            mc: McConfig::default(),
        }
    }
}

/// `chi` estimates at the grid `lo + (hi - lo) i / bins`, `i = 0..=bins`,
/// from one growth per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiProfile {
    pub lo: f64,
    pub hi: f64,
    pub samples: u64,
    sum: Vec<u128>,
    sum_sq: Vec<u128>,
    pub truncated: u64,
}

impl ChiProfile {
    pub fn bins(&self) -> usize {
        self.sum.len() - 1
    }

    pub fn edge(&self, i: usize) -> f64 {
        if i == self.bins() {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * (i as f64 / self.bins() as f64)
    }

    pub fn moments(&self, i: usize) -> Moments {
        Moments {
            count: self.samples,
            sum: self.sum[i],
            sum_sq: self.sum_sq[i],
            truncated: self.truncated,
        }
    }

    pub fn estimate(&self, i: usize, mc: &McConfig) -> Estimate {
        Estimate::from_moments(&self.moments(i), 1.0, mc.seed, mc.streams)
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.sum[i] as f64 / self.samples as f64
    }

    /// First grid index whose value satisfies `pred`; the predicate must be
    /// monotone along the grid.
    fn first(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let (mut a, mut b) = (0usize, self.bins() + 1);
        while a < b {
            let mid = (a + b) / 2;
            if pred(mid) {
                b = mid;
            } else {
                a = mid + 1;
            }
        }
        (a <= self.bins()).then_some(a)
    }

    fn bin_of(&self, t: f64) -> usize {
        let b = self.bins();
        let mut i = (((t - self.lo) / (self.hi - self.lo)) * b as f64)
            .floor()
            .clamp(0.0, (b - 1) as f64) as usize;
        while i > 0 && t < self.edge(i) {
            i -= 1;
        }
        while i + 1 < b && t >= self.edge(i + 1) {
            i += 1;
        }
        i
    }
}

struct ProfileAcc {
    base: u128,
    base_sq: u128,
    d1: Vec<u64>,
    d2: Vec<u128>,
    truncated: u64,
}

/// Samples `0..samples` profiled on `[lo, hi]` with `bins` grid cells.
pub fn chi_profile(g: &GraphModel, lo: f64, hi: f64, bins: usize, samples: u64, mc: &McConfig) -> Result<ChiProfile> {
    check_samples(samples)?;
    mc.validate()?;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) || bins == 0 {
        return Err(Error::arg(format!(
            "invalid profile window [{lo}, {hi}] with {bins} bins"
        )));
    }
    let shape = ChiProfile {
        lo,
        hi,
        samples,
        sum: vec![0; bins + 1],
        sum_sq: vec![0; bins + 1],
        truncated: 0,
    };
    let parts = run_streams(
        samples,
        mc.streams,
        || (ClusterSampler::new(g, mc.cluster_cap), Vec::new()),
        || ProfileAcc {
            base: 0,
            base_sq: 0,
            d1: vec![0; bins + 1],
            d2: vec![0; bins + 1],
            truncated: 0,
        },
        |(sampler, thresholds), acc, i| {
            if sampler.entry_thresholds(hi, SampleStream::new(mc.seed, i), thresholds) {
                acc.truncated += 1;
            }
            let below = thresholds.partition_point(|&t| t < lo);
            let under = 1 + below as u128;
            acc.base += under;
            acc.base_sq += under * under;
            for (j, &t) in thresholds[below..].iter().enumerate() {
                let after = under + j as u128 + 1;
                let cell = shape.bin_of(t) + 1;
                acc.d1[cell] += 1;
                acc.d2[cell] += 2 * after - 1;
            }
        },
    );
    let mut profile = shape.clone();
    let (mut base, mut base_sq) = (0u128, 0u128);
    let mut d1 = vec![0u128; bins + 1];
    let mut d2 = vec![0u128; bins + 1];
    for part in &parts {
        base += part.base;
        base_sq += part.base_sq;
        profile.truncated += part.truncated;
        for i in 0..=bins {
            d1[i] += part.d1[i] as u128;
            d2[i] += part.d2[i];
        }
    }
    let (mut run1, mut run2) = (base, base_sq);
    for i in 0..=bins {
        run1 += d1[i];
        run2 += d2[i];
        profile.sum[i] = run1;
        profile.sum_sq[i] = run2;
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudoCriticalResult {
    pub graph: String,
    pub n: u32,
    pub omega: u32,
    pub target: f64,
    pub p_hat: f64,
    pub omega_p_hat: f64,
    pub corrected_omega_p: f64,
    pub chi_at_p_hat: Estimate,
    /// Confidence bracket on `p` from the final stage.
    pub bracket: (f64, f64),
    /// Half-width of the confidence interval on `chi(p_hat)`, relative to
    /// the target.
    pub delta: f64,
    pub stages: u32,
    /// Cluster growths used across all stages.
    pub budget_spent: u64,
    pub converged: bool,
    pub budget_exhausted: bool,
}

/// `Omega p_hat + 1/T`; an infinite target gives `Omega p_hat`.
pub fn corrected_omega_pc(g: &GraphModel, p_hat: f64, target: f64) -> f64 {
    g.omega() as f64 * p_hat + 1.0 / target
}

/// Finds `p_hat` with `chi(p_hat) = target` within the configured confidence.
pub fn solve_chi_target(g: &GraphModel, cfg: &SolveConfig) -> Result<PseudoCriticalResult> {
    let t = cfg.target;
    if t.is_nan() || t <= 1.0 {
        return Err(Error::arg(format!("target {t} must exceed 1 (chi(0) = 1)")));
    }
    if t >= g.vertex_count() as f64 {
        return Err(Error::arg(format!(
            "target {t} is not below the vertex count {}",
            g.vertex_count()
        )));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::arg("tolerance must be positive"));
    }
    if cfg.initial_samples == 0 || cfg.budget < cfg.initial_samples || cfg.bins < 2 {
        return Err(Error::arg("budget must cover at least the initial stage"));
    }
    let omega = g.omega() as f64;
    let mut samples = cfg.initial_samples;
    let mut lo = 0.0;
    let mut hi = (1.25 / omega).min(1.0);
    let mut spent = 0u64;
    let mut stages = 0u32;
    loop {
        let prof = chi_profile(g, lo, hi, cfg.bins, samples, &cfg.mc)?;
        spent += samples;
        stages += 1;
        let b = prof.bins();
        let budget_left = spent < cfg.budget;
        if prof.mean(b) < t && hi < 1.0 && budget_left {
            let width = hi - lo;
            lo = hi;
            hi = (hi + 2.0 * width).min(1.0);
            continue;
        }
        if prof.mean(0) >= t && lo > 0.0 && budget_left {
            let width = hi - lo;
            hi = lo;
            lo = (lo - 2.0 * width).max(0.0);
            continue;
        }
        let root = prof.first(|i| prof.mean(i) >= t).unwrap_or(b);
        let se = |i: usize| prof.estimate(i, &cfg.mc).stderr;
        let lower = prof.first(|i| prof.mean(i) + cfg.z * se(i) >= t).unwrap_or(b);
        let upper = prof.first(|i| prof.mean(i) - cfg.z * se(i) >= t);
        let p_hat = prof.edge(root);
        let (p_lo, p_hi) = (prof.edge(lower), upper.map_or(hi, |i| prof.edge(i)));
        let width = p_hi - p_lo;
        let converged = upper.is_some() && samples >= cfg.min_samples && width <= cfg.tol * p_hat;
        let exhausted = spent + 2 * samples > cfg.budget;
        if converged || exhausted {
            let chi = prof.estimate(root, &cfg.mc);
            return Ok(PseudoCriticalResult {
                graph: g.label(),
                n: g.n(),
                omega: g.omega(),
                target: t,
                p_hat,
                omega_p_hat: omega * p_hat,
                corrected_omega_p: corrected_omega_pc(g, p_hat, t),
                chi_at_p_hat: chi,
                bracket: (p_lo, p_hi),
                delta: cfg.z * chi.stderr / t,
                stages,
                budget_spent: spent,
                converged,
                budget_exhausted: !converged,
            });
        }
        let cell = (hi - lo) / b as f64;
        let margin = 0.5 * width + 2.0 * cell;
        lo = (p_lo - margin).max(0.0);
        hi = (p_hi + margin).min(1.0);
        samples *= 2;
    }
}
