use num_bigint::BigInt;
use num_rational::BigRational;
use perclace::poly::rational;
use perclace::series::{self, FitPoint, InvOmegaSeries};
use perclace::GraphKind;
use proptest::prelude::*;

#[test]
fn bootstrap_reproduces_critical_expansion() {
    let d = series::derive_pc_series(2).unwrap();
    assert_eq!(d.omega_pc.coeffs(), &[rational(1, 1), rational(1, 1), rational(7, 2)]);
    assert_eq!(d.pi_hat.coeffs(), &[rational(0, 1), rational(-1, 1), rational(-5, 2)]);
}

#[test]
fn bootstrap_ignores_forward_degree_offset() {
    let one = series::derive_pc_series_with(2, 1).unwrap();
    let two = series::derive_pc_series_with(2, 2).unwrap();
    assert_eq!(one.omega_pc, two.omega_pc);
}

#[test]
fn bootstrap_refuses_unproven_orders() {
    assert!(series::derive_pc_series(3).is_err());
}

#[test]
fn predictions() {
    let p = series::predict_pc(12.0, GraphKind::Hypercube, 3).unwrap();
    let want = 1.0 / 12.0 + 1.0 / 144.0 + 3.5 / 1728.0;
    assert!((p - want).abs() < 1e-15);
    assert!((p - 0.0923032407).abs() < 1e-9);
    assert!(series::predict_pc(12.0, GraphKind::Hypercube, 4).is_err());
    let r = series::predict_pc_reference(12.0, GraphKind::Hypercube, 4).unwrap();
    assert!((r - (want + 16.0 / 12f64.powi(4))).abs() < 1e-15);
    assert!((series::omega_pc_three_term(10.0) - 1.135).abs() < 1e-15);
}

#[test]
fn fit_recovers_exact_coefficients() {
    let data: Vec<FitPoint> = [8.0f64, 10.0, 12.0, 16.0, 20.0, 24.0]
        .iter()
        .map(|&omega| FitPoint {
            omega,
            estimate: 1.0 / omega + 1.0 / omega.powi(2) + 3.5 / omega.powi(3),
            stderr: 1e-4,
        })
        .collect();
    let fit = series::fit_inverse_poly(&data).unwrap();
    for (got, want) in fit.coefficients.iter().zip([0.0, 1.0, 1.0, 3.5]) {
        assert!((got - want).abs() < 1e-8, "{:?}", fit.coefficients);
    }
    assert_eq!(fit.residuals.len(), data.len());
}

#[test]
fn fit_needs_enough_points() {
    let data = vec![
        FitPoint {
            omega: 10.0,
            estimate: 0.11,
            stderr: 0.01
        };
        2
    ];
    assert!(series::fit_inverse_poly(&data).is_err());
}

fn arb_series() -> impl Strategy<Value = InvOmegaSeries> {
    (1i64..20, prop::collection::vec(-20i64..20, 4)).prop_map(|(a0, rest)| {
        let mut c = vec![a0];
        c.extend(rest);
        InvOmegaSeries::from_integers(&c, 4)
    })
}

proptest! {
    #[test]
    fn reciprocal_is_multiplicative_inverse(a in arb_series()) {
        let inv = a.recip().unwrap();
        prop_assert_eq!(a.mul(&inv), InvOmegaSeries::one(4));
    }

    #[test]
    fn multiplication_commutes(a in arb_series(), b in arb_series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in arb_series(), b in arb_series(), omega in 50.0f64..500.0) {
        let lhs = a.mul(&b).eval(omega);
        let rhs = a.eval(omega) * b.eval(omega);
        prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0) + 1e3 / omega.powi(5));
    }

    #[test]
    fn scaling_by_integer_matches_repeated_addition(a in arb_series(), k in 1i64..6) {
        let mut sum = InvOmegaSeries::from_integers(&[0], 4);
        for _ in 0..k {
            sum = sum.add(&a);
        }
        prop_assert_eq!(a.scale(&BigRational::from_integer(BigInt::from(k))), sum);
    }
}
