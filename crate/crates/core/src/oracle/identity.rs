//! Order-by-order checks of `chi = (1 + Pi) / (1 - Omega p (1 + Pi))` with
//! `Pi = sum_N (-1)^N Pi^(N)`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::enumerate::{chi_exact, chi_series, pi_n_exact, pi_n_with, Truncation};
use crate::error::{Error, Result};
use crate::graph::GraphModel;
use crate::poly::{rational_to_f64, RationalPolynomial};

/// A coefficient whose lowest order is below what the truncation guard
/// assumes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    pub level: u32,
    pub lowest_order: usize,
    pub expected_at_least: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub graph: String,
    pub max_order: usize,
    pub n_max: u32,
    pub chi: RationalPolynomial,
    /// `Pi^(N)` for `N = 0..=n_max`, each exact through `max_order`.
    pub coefficients: Vec<RationalPolynomial>,
    pub pi_hat: RationalPolynomial,
    pub residual: RationalPolynomial,
    pub order_violations: Vec<OrderViolation>,
}

impl IdentityReport {
    /// True when the residual vanishes and every coefficient respected the
    /// order law the truncation relies on.
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.order_violations.is_empty()
    }
}

/// Lowest order at which `Pi^(N)` may be nonzero on `g`.
pub fn guaranteed_lowest_order(g: &GraphModel, level: u32) -> usize {
    match level {
        0 if g.is_bipartite() => 4,
        0 => 3,
        n => n as usize + 1,
    }
}

/// `alternating sum_{N <= n_max} (-1)^N Pi^(N)`.
pub fn alternating_sum(coefficients: &[RationalPolynomial]) -> RationalPolynomial {
    coefficients.iter().enumerate().fold(
        RationalPolynomial::zero(),
        |acc, (n, c)| {
            if n % 2 == 0 {
                &acc + c
            } else {
                &acc - c
            }
        },
    )
}

/// `chi (1 - Omega p (1 + Pi)) - (1 + Pi)`, truncated at `max_order` when given.
pub fn identity_residual(
    g: &GraphModel,
    chi: &RationalPolynomial,
    pi_hat: &RationalPolynomial,
    max_order: Option<usize>,
) -> RationalPolynomial {
    let omega = BigRational::from_integer(g.omega().into());
    let one_plus = &RationalPolynomial::one() + pi_hat;
    let omega_p = RationalPolynomial::monomial(omega, 1);
    let denom = &RationalPolynomial::one() - &(&omega_p * &one_plus);
    let product = match max_order {
        Some(o) => chi.mul_truncated(&denom, o),
        None => chi * &denom,
    };
    let r = &product - &one_plus;
    match max_order {
        Some(o) => r.truncate(o),
        None => r,
    }
}

/// Series residual of the expansion identity through `p^max_order`.
///
/// `Pi^(N)` with `N >= 1` starts at order `N + 1` or later, so the omitted
/// levels cannot reach `max_order` once `n_max >= max_order - 1`; smaller
/// `n_max` is rejected. The order law is re-checked on the computed
/// coefficients and any violation is reported.
pub fn identity_residual_series(g: &GraphModel, max_order: usize, n_max: u32) -> Result<IdentityReport> {
    if (n_max as usize) + 2 <= max_order {
        return Err(Error::Series(format!(
            "truncation insufficient: Pi^({}) can contribute at order {} <= {max_order}; \
             need n_max >= {}",
            n_max + 1,
            n_max + 2,
            max_order - 1
        )));
    }
    let t = Truncation::Through(max_order);
    let chi = chi_series(g, t)?;
    let mut coefficients = Vec::with_capacity(n_max as usize + 1);
    let mut order_violations = Vec::new();
    for level in 0..=n_max {
        let c = pi_n_with(g, level, t)?;
        let expected = guaranteed_lowest_order(g, level);
        if let Some(low) = c.lowest_order() {
            if low < expected {
                order_violations.push(OrderViolation {
                    level,
                    lowest_order: low,
                    expected_at_least: expected,
                });
            }
        }
        coefficients.push(c);
    }
    let pi_hat = alternating_sum(&coefficients);
    let residual = identity_residual(g, &chi, &pi_hat, Some(max_order));
    Ok(IdentityReport {
        graph: g.label(),
        max_order,
        n_max,
        chi,
        coefficients,
        pi_hat,
        residual,
        order_violations,
    })
}

/// One row of [`recursion_residuals`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionResidual {
    pub n_max: u32,
    #[serde(serialize_with = "crate::poly::serialize_rational")]
    pub exact: BigRational,
    pub value: f64,
}

/// `|Omega p + 1/chi(p) - 1/(1 + Pi_{<= N}(p))|` for `N = 0..=n_max`,
/// from full-enumeration polynomials.
pub fn recursion_residuals(g: &GraphModel, p: &BigRational, n_max: u32) -> Result<Vec<RecursionResidual>> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(Error::arg("p must lie in [0, 1]"));
    }
    let chi = chi_exact(g)?.eval(p);
    let omega_p = BigRational::from_integer(g.omega().into()) * p;
    let base = &omega_p + chi.recip();
    let mut pi_hat = BigRational::zero();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for level in 0..=n_max {
        let term = pi_n_exact(g, level)?.eval(p);
        if level % 2 == 0 {
            pi_hat += term;
        } else {
            pi_hat -= term;
        }
        let one_plus = BigRational::one() + &pi_hat;
        if one_plus.is_zero() {
            return Err(Error::Series("1 + Pi vanishes at this p".into()));
        }
        let exact = (&base - one_plus.recip()).abs();
        out.push(RecursionResidual {
            n_max: level,
            value: rational_to_f64(&exact),
            exact,
        });
    }
    Ok(out)
}

/// The last entry of [`recursion_residuals`].
pub fn recursion_residual(g: &GraphModel, p: &BigRational, n_max: u32) -> Result<f64> {
    Ok(recursion_residuals(g, p, n_max)?.last().map_or(0.0, |r| r.value))
}
