use super::{check_p, check_samples, merge_moments, run_streams, Estimate, McConfig, Moments};
use crate::error::{Error, Result};
use crate::graph::{BondId, GraphModel, VertexId};
use crate::oracle::events::{cluster, double_connected_set, e_prime_targets, BondConfig, SmallGraph, VertexSet};
use crate::rng::SampleStream;

/// Largest `N` accepted by [`pi_n_mc`].
pub const MAX_MC_LEVEL: u32 = 4;

fn level_config(g: &SmallGraph, stream: SampleStream, p: f64) -> BondConfig {
    BondConfig::from_bonds(
        (0..g.bond_count() as u64)
            .map(BondId)
            .filter(|b| stream.occupied(b.0, p)),
    )
}

/// Sum over designated bonds of later levels and endpoints `x` of the
/// product of level indicators, for level `j` with incoming set `a` and
/// start `v`.
fn nested_count(g: &SmallGraph, levels: &[BondConfig], a: VertexSet, v: VertexId) -> u64 {
    let cfg = levels[0];
    let targets = e_prime_targets(g, cfg, v, a);
    if levels.len() == 1 {
        return targets.len() as u64;
    }
    let mut total = 0;
    for u in targets.iter() {
        for (next_v, b) in g.neighbors(u) {
            let next_a = cluster(g, cfg.with_vacant(b), v);
            total += nested_count(g, &levels[1..], next_a, next_v);
        }
    }
    total
}

/// Integer part of one sample of `Pi^(N)`: the estimator is `p^N` times it.
fn pi_n_sample(g: &SmallGraph, levels: &[BondConfig]) -> u64 {
    let o = VertexId::ORIGIN;
    let doubly = double_connected_set(g, levels[0], o);
    if levels.len() == 1 {
        return doubly.len() as u64 - 1;
    }
    let mut total = 0;
    for u0 in doubly.iter() {
        for (v0, b) in g.neighbors(u0) {
            let a0 = cluster(g, levels[0].with_vacant(b), o);
            total += nested_count(g, &levels[1..], a0, v0);
        }
    }
    total
}

/// Nested Monte Carlo estimate of `Pi^(N)(p)`: every level is an independent
/// configuration drawn from its own substream, and the designated bonds and
/// endpoint are summed exactly within each sample.
pub fn pi_n_mc(g: &GraphModel, n: u32, p: f64, samples: u64, cfg: &McConfig) -> Result<Estimate> {
    check_p(p)?;
    check_samples(samples)?;
    cfg.validate()?;
    if n > MAX_MC_LEVEL {
        return Err(Error::arg(format!(
            "nested estimate supports N <= {MAX_MC_LEVEL}, got {n}"
        )));
    }
    let sg = SmallGraph::new(g)?;
    let parts = run_streams(
        samples,
        cfg.streams,
        || vec![BondConfig::EMPTY; n as usize + 1],
        Moments::default,
        |levels, acc, i| {
            let stream = SampleStream::new(cfg.seed, i);
            for (j, level) in levels.iter_mut().enumerate() {
                *level = level_config(&sg, stream.substream(j as u64), p);
            }
            acc.push(pi_n_sample(&sg, levels));
        },
    );
    let scale = p.powi(n as i32);
    Ok(Estimate::from_moments(
        &merge_moments(&parts),
        scale,
        cfg.seed,
        cfg.streams,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_at_zero_density() {
        let g = GraphModel::hypercube(2).unwrap();
        for n in 0..=2 {
            let e = pi_n_mc(&g, n, 0.0, 100, &McConfig::default()).unwrap();
            assert_eq!(e.mean, 0.0);
        }
    }

    #[test]
    fn full_density_on_q1() {
        let g = GraphModel::hypercube(1).unwrap();
        let e = pi_n_mc(&g, 1, 1.0, 10, &McConfig::default()).unwrap();
        assert_eq!(e.mean, 1.0);
        assert!(pi_n_mc(&g, 9, 0.5, 10, &McConfig::default()).is_err());
    }
}
