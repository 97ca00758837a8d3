mod common;

use perclace::mc::{self, McConfig};
use perclace::poly::decimal_rational;
use perclace::{GraphModel, VertexId};
use proptest::prelude::*;

fn q(n: u32) -> GraphModel {
    GraphModel::hypercube(n).unwrap()
}

fn exact(poly: &perclace::RationalPolynomial, p: f64) -> f64 {
    perclace::poly::rational_to_f64(&poly.eval(&decimal_rational(p, 6)))
}

#[test]
fn chi_agrees_with_brute_force() {
    let g = q(3);
    let chi = common::chi(&g);
    for p in [0.1, 0.25, 0.4] {
        let e = mc::chi_estimate(&g, p, 50_000, &McConfig::with_seed(11)).unwrap();
        assert!(e.within(exact(&chi, p), 4.0), "p={p}: {e:?}");
    }
}

#[test]
fn two_point_agrees_with_brute_force() {
    let g = q(3);
    let x = VertexId(5);
    let tau = common::two_point(&g, x);
    let e = mc::two_point_estimate(&g, 0.3, x, 50_000, &McConfig::with_seed(5)).unwrap();
    assert!(e.within(exact(&tau, 0.3), 4.0), "{e:?}");
}

#[test]
fn double_connection_estimate_agrees_with_brute_force() {
    let g = q(3);
    let pi0 = common::double_connections(&g);
    let e = mc::pi_n_mc(&g, 0, 0.3, 100_000, &McConfig::with_seed(9)).unwrap();
    assert!(e.within(exact(&pi0, 0.3), 4.0), "{e:?}");
}

#[test]
fn torus_chi_agrees_with_brute_force() {
    let g = GraphModel::torus(2, 3).unwrap();
    let chi = common::chi(&g);
    let e = mc::chi_estimate(&g, 0.2, 50_000, &McConfig::with_seed(3)).unwrap();
    assert!(e.within(exact(&chi, 0.2), 4.0), "{e:?}");
}

#[test]
fn estimates_are_reproducible() {
    let g = q(8);
    let cfg = McConfig::with_seed(42);
    let a = mc::chi_estimate(&g, 0.12, 5_000, &cfg).unwrap();
    let b = mc::chi_estimate(&g, 0.12, 5_000, &cfg).unwrap();
    assert_eq!(a, b);
    let c = mc::chi_estimate(&g, 0.12, 5_000, &McConfig::with_seed(43)).unwrap();
    assert_ne!(a.mean, c.mean);
}

#[test]
fn worker_count_does_not_change_results() {
    let g = q(9);
    let cfg = McConfig::with_seed(7);
    let run = || mc::chi_estimate(&g, 0.11, 4_000, &cfg).unwrap();
    let one = mc::with_workers(Some(1), run).unwrap();
    let four = mc::with_workers(Some(4), run).unwrap();
    assert_eq!(one, four);
}

#[test]
fn zero_workers_rejected() {
    assert!(mc::with_workers(Some(0), || ()).is_err());
}

#[test]
fn invalid_density_rejected() {
    assert!(mc::chi_estimate(&q(3), 1.5, 10, &McConfig::default()).is_err());
    assert!(mc::chi_estimate(&q(3), 0.5, 0, &McConfig::default()).is_err());
}

#[test]
fn sweep_is_monotone_under_coupling() {
    let g = q(7);
    let grid = [0.05, 0.1, 0.15, 0.2];
    let est = mc::sweep_chi(&g, &grid, 3_000, &McConfig::with_seed(2)).unwrap();
    assert!(est.windows(2).all(|w| w[0].mean <= w[1].mean));
}

#[test]
fn corrected_estimate_adds_inverse_target() {
    let g = q(10);
    assert!((mc::corrected_omega_pc(&g, 0.11, 200.0) - 1.105).abs() < 1e-12);
    assert_eq!(mc::corrected_omega_pc(&g, 0.11, f64::INFINITY), 1.1);
}

#[test]
fn solver_hits_target_on_small_cube() {
    let g = q(8);
    let cfg = mc::SolveConfig {
        target: 20.0,
        min_samples: 1 << 14,
        tol: 1e-2,
        ..mc::SolveConfig::default()
    };
    let r = mc::solve_chi_target(&g, &cfg).unwrap();
    assert!(r.converged);
    let check = mc::chi_estimate(&g, r.p_hat, 1 << 16, &McConfig::with_seed(99)).unwrap();
    assert!(
        (check.mean - 20.0).abs() < 5.0 * check.stderr + 0.02 * 20.0,
        "{r:?} {check:?}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clusters_grow_with_density(seed in any::<u64>(), sample in 0u64..1000, lo in 0.0f64..0.5, step in 0.0f64..0.5) {
        let g = q(6);
        let a = mc::sample_origin_cluster(&g, lo, seed, sample, 1 << 20).unwrap();
        let b = mc::sample_origin_cluster(&g, lo + step, seed, sample, 1 << 20).unwrap();
        prop_assert!(a.size <= b.size);
    }

    #[test]
    fn lazy_and_eager_growth_agree(seed in any::<u64>(), sample in 0u64..1000, p in 0.0f64..1.0) {
        let g = GraphModel::torus(2, 5).unwrap();
        let lazy = mc::sample_origin_cluster(&g, p, seed, sample, 1 << 20).unwrap();
        let eager = mc::sample_origin_cluster_eager(&g, p, seed, sample).unwrap();
        prop_assert_eq!(lazy.size, eager.size);
    }
}
