//! Truncated power series in `1/Omega`, the fixed-point expansion of the
//! critical point, and least-squares fits of critical estimates.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::GraphKind;
use crate::poly::{rational, rational_string, rational_to_f64};

/// Highest order of `Omega p_c` fixed by the three coefficient polynomials.
pub const MAX_DERIVED_ORDER: usize = 2;

/// `sum_{k <= order} coeffs[k] Omega^-k`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvOmegaSeries {
    coeffs: Vec<BigRational>,
    order: usize,
}

impl InvOmegaSeries {
    pub fn new(coeffs: Vec<BigRational>, order: usize) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, BigRational::zero());
        InvOmegaSeries { coeffs, order }
    }

    pub fn from_integers(c: &[i64], order: usize) -> Self {
        Self::new(c.iter().map(|&x| rational(x, 1)).collect(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// `Omega^-k`.
    pub fn inv_omega_pow(k: usize, order: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Self::new(c, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    fn common(&self, other: &Self) -> usize {
        self.order.min(other.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let o = self.common(other);
        Self::new((0..=o).map(|k| self.coeff(k) + other.coeff(k)).collect(), o)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let o = self.common(other);
        Self::new((0..=o).map(|k| self.coeff(k) - other.coeff(k)).collect(), o)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let o = self.common(other);
        let mut c = vec![BigRational::zero(); o + 1];
        for i in 0..=o {
            for j in 0..=o - i {
                c[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        Self::new(c, o)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect(), self.order)
    }

    pub fn recip(&self) -> Result<Self> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::Series("reciprocal of a series with zero constant term".into()));
        }
        let inv0 = a0.recip();
        let mut b = vec![inv0.clone()];
        for k in 1..=self.order {
            let s = (1..=k).fold(BigRational::zero(), |acc, j| acc + &self.coeffs[j] * &b[k - j]);
            b.push(-s * &inv0);
        }
        Ok(Self::new(b, self.order))
    }

    pub fn pow(&self, r: u32) -> Self {
        (0..r).fold(Self::one(self.order), |acc, _| acc.mul(self))
    }

    /// `self^r * Omega^-s`, the shape of every `(Omega p)^r / Omega^s` term.
    pub fn power_shift(&self, r: u32, s: usize) -> Self {
        self.pow(r).mul(&Self::inv_omega_pow(s, self.order))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// `sum_k a_k omega^-k`.
    pub fn eval(&self, omega: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc / omega + rational_to_f64(c))
    }
}

impl fmt::Display for InvOmegaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}

impl Serialize for InvOmegaSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

/// Series operations exposed to the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Recip,
    /// `a^r Omega^-s`.
    PowerShift {
        r: u32,
        s: usize,
    },
}

pub fn series_arith(a: &InvOmegaSeries, b: Option<&InvOmegaSeries>, op: SeriesOp) -> Result<InvOmegaSeries> {
    let need = || Error::Series("this operation takes two series".into());
    match op {
        SeriesOp::Add => Ok(a.add(b.ok_or_else(need)?)),
        SeriesOp::Mul => Ok(a.mul(b.ok_or_else(need)?)),
        SeriesOp::Recip => a.recip(),
        SeriesOp::PowerShift { r, s } => Ok(a.power_shift(r, s)),
    }
}

/// The lowest-order behaviour of the three leading expansion coefficients
/// in terms of `x = Omega p`, with `Omega'/Omega = 1 - c/Omega`:
/// `Pi^(0) = (3/2)(Omega'/Omega) x^4/Omega^2`,
/// `Pi^(1) = x^2/Omega + 4(Omega'/Omega) x^4/Omega^2`,
/// `Pi^(2) = x^3/Omega^2 + (1 - 1/Omega) x^4/Omega^2`.
pub fn pi_hat_from_omega_p(x: &InvOmegaSeries, sub_degree_offset: i64) -> InvOmegaSeries {
    let o = x.order();
    let ratio = InvOmegaSeries::new(vec![rational(1, 1), rational(-sub_degree_offset, 1)], o);
    let x4 = x.power_shift(4, 2);
    let pi0 = x4.mul(&ratio).scale(&rational(3, 2));
    let pi1 = x.power_shift(2, 1).add(&x4.mul(&ratio).scale(&rational(4, 1)));
    let pi2 = x
        .power_shift(3, 2)
        .add(&x4.mul(&InvOmegaSeries::from_integers(&[1, -1], o)));
    pi0.sub(&pi1).add(&pi2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PcDerivation {
    /// `Omega p_c`.
    pub omega_pc: InvOmegaSeries,
    /// The expansion coefficient sum at the critical point.
    pub pi_hat: InvOmegaSeries,
    /// Every intermediate `(Omega p, Pi)` pair, starting from `Omega p = 1`.
    pub passes: Vec<(InvOmegaSeries, InvOmegaSeries)>,
}

/// Fixed-point iteration `Omega p = 1 / (1 + Pi(Omega p))`, one order per
/// pass, starting from `Omega p = 1`. `sub_degree_offset` is `c` in
/// `Omega' = Omega - c` (1 for the hypercube, 2 for the torus).
pub fn derive_pc_series_with(order: usize, sub_degree_offset: i64) -> Result<PcDerivation> {
    if order > MAX_DERIVED_ORDER {
        return Err(Error::Series(format!(
            "order {order} requested, but the coefficient input determines Omega p_c only through \
             Omega^-{MAX_DERIVED_ORDER}"
        )));
    }
    let mut x = InvOmegaSeries::one(0);
    let mut pi = InvOmegaSeries::new(vec![], 0);
    let mut passes = Vec::new();
    for pass in 1..=order {
        pi = pi_hat_from_omega_p(&x.with_order(pass), sub_degree_offset);
        x = InvOmegaSeries::one(pass).add(&pi).recip()?;
        passes.push((x.clone(), pi.clone()));
    }
    Ok(PcDerivation {
        omega_pc: x,
        pi_hat: pi,
        passes,
    })
}

pub fn derive_pc_series(order: usize) -> Result<PcDerivation> {
    derive_pc_series_with(order, 1)
}

/// Coefficients of `Omega p_c` used for predictions; the first three are
/// rigorous, the remaining two are non-rigorous reference values.
pub fn reference_series() -> Vec<BigRational> {
    vec![
        rational(1, 1),
        rational(1, 1),
        rational(7, 2),
        rational(16, 1),
        rational(103, 1),
    ]
}

/// Number of leading [`reference_series`] coefficients that are proved.
pub const RIGOROUS_TERMS: usize = 3;

/// `p_c ~ sum_{k < order} a_k Omega^-(k+1)`, rigorous terms only.
pub fn predict_pc(omega: f64, kind: GraphKind, order: usize) -> Result<f64> {
    if order > RIGOROUS_TERMS {
        return Err(Error::Series(format!(
            "only {RIGOROUS_TERMS} terms are rigorous; use the reference series for more"
        )));
    }
    predict_pc_reference(omega, kind, order)
}

/// As [`predict_pc`] but allowing the non-rigorous reference terms.
pub fn predict_pc_reference(omega: f64, kind: GraphKind, order: usize) -> Result<f64> {
    let coeffs = reference_series();
    if order > coeffs.len() {
        return Err(Error::Series(format!("reference series has {} terms", coeffs.len())));
    }
    if omega.is_nan() || omega < 1.0 {
        return Err(Error::arg("omega must be at least 1"));
    }
    if kind == GraphKind::Torus && omega.fract() == 0.0 && (omega as u64) % 2 == 1 {
        return Err(Error::arg("torus degree is even"));
    }
    Ok(coeffs[..order]
        .iter()
        .enumerate()
        .map(|(k, c)| rational_to_f64(c) / omega.powi(k as i32 + 1))
        .sum())
}

/// `1 + 1/Omega + 7/(2 Omega^2)`, the three-term prediction of `Omega p_c`.
pub fn omega_pc_three_term(omega: f64) -> f64 {
    1.0 + 1.0 / omega + 3.5 / (omega * omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitPoint {
    pub omega: f64,
    pub estimate: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// `b_0 + b_1/Omega + b_2/Omega^2 + ...`.
    pub coefficients: Vec<f64>,
    /// `estimate - fitted` per data point.
    pub residuals: Vec<f64>,
    pub chi_squared: f64,
}

impl FitResult {
    pub fn eval(&self, omega: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, b| acc / omega + b)
    }
}

/// Weighted least squares in the basis `{1, 1/Omega, 1/Omega^2, 1/Omega^3}`
/// with weights `1/stderr^2`.
pub fn fit_inverse_poly(data: &[FitPoint]) -> Result<FitResult> {
    fit_inverse_poly_degree(data, 3)
}

pub fn fit_inverse_poly_degree(data: &[FitPoint], degree: usize) -> Result<FitResult> {
    let cols = degree + 1;
    let mut omegas: Vec<f64> = data.iter().map(|d| d.omega).collect();
    omegas.sort_by(f64::total_cmp);
    omegas.dedup();
    if omegas.len() < cols {
        return Err(Error::Fit(format!(
            "rank deficient: {} distinct omega values for {cols} coefficients",
            omegas.len()
        )));
    }
    for d in data {
        if !(d.omega > 0.0 && d.stderr > 0.0 && d.estimate.is_finite()) {
            return Err(Error::Fit(format!("invalid data point {d:?}")));
        }
    }
    let rows = data.len();
    let a = DMatrix::from_fn(rows, cols, |r, c| data[r].omega.powi(-(c as i32)) / data[r].stderr);
    let y = DVector::from_fn(rows, |r, _| data[r].estimate / data[r].stderr);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= smax * 1e-14 {
        return Err(Error::Fit("rank deficient design matrix".into()));
    }
    let b = svd.solve(&y, smax * 1e-14).map_err(|e| Error::Fit(e.to_string()))?;
    let fitted = &a * &b;
    let coefficients: Vec<f64> = b.iter().copied().collect();
    let residuals: Vec<f64> = (0..rows).map(|r| (y[r] - fitted[r]) * data[r].stderr).collect();
    let chi_squared = (0..rows).map(|r| (y[r] - fitted[r]).powi(2)).sum();
    Ok(FitResult {
        coefficients,
        residuals,
        chi_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[(i64, i64)], order: usize) -> InvOmegaSeries {
        InvOmegaSeries::new(c.iter().map(|&(a, b)| rational(a, b)).collect(), order)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(s(&[(1, 1), (1, 1)], 1).recip().unwrap(), s(&[(1, 1), (-1, 1)], 1));
        assert_eq!(
            s(&[(1, 1), (1, 1)], 2).mul(&s(&[(1, 1), (-1, 1)], 2)),
            s(&[(1, 1), (0, 1), (-1, 1)], 2)
        );
        assert_eq!(
            s(&[(1, 1), (-1, 1), (-5, 2)], 2).recip().unwrap(),
            s(&[(1, 1), (1, 1), (7, 2)], 2)
        );
        assert!(s(&[(0, 1), (1, 1)], 2).recip().is_err());
    }

    #[test]
    fn bootstrap_reaches_seven_halves() {
        let d = derive_pc_series(2).unwrap();
        assert_eq!(d.omega_pc, s(&[(1, 1), (1, 1), (7, 2)], 2));
        assert_eq!(d.pi_hat, s(&[(0, 1), (-1, 1), (-5, 2)], 2));
        assert_eq!(d.passes[0].1, s(&[(0, 1), (-1, 1)], 1));
        assert_eq!(derive_pc_series_with(2, 2).unwrap().omega_pc, d.omega_pc);
        assert!(derive_pc_series(3).is_err());
    }

    #[test]
    fn predictions() {
        let v = predict_pc(12.0, GraphKind::Hypercube, 3).unwrap();
        assert!((v - (1.0 / 12.0 + 1.0 / 144.0 + 3.5 / 1728.0)).abs() < 1e-15);
        assert!((v - 0.092_303_24).abs() < 1e-8);
        assert_eq!(predict_pc(1000.0, GraphKind::Torus, 1).unwrap(), 1e-3);
        assert!(predict_pc(12.0, GraphKind::Hypercube, 4).is_err());
        assert_eq!(reference_series()[4], rational(103, 1));
    }

    #[test]
    fn fit_recovers_exact_model() {
        let data: Vec<FitPoint> = [8.0, 10.0, 12.0, 14.0, 16.0]
            .iter()
            .map(|&w| FitPoint {
                omega: w,
                estimate: predict_pc(w, GraphKind::Hypercube, 3).unwrap(),
                stderr: 1e-4,
            })
            .collect();
        let fit = fit_inverse_poly(&data).unwrap();
        for (b, want) in fit.coefficients.iter().zip([0.0, 1.0, 1.0, 3.5]) {
            assert!((b - want).abs() < 1e-10, "{:?}", fit.coefficients);
        }
        assert!(fit_inverse_poly(&data[..3]).is_err());
    }

    #[test]
    fn fit_is_linear_in_data() {
        let base: Vec<FitPoint> = [8.0, 10.0, 12.0, 14.0, 16.0]
            .iter()
            .map(|&w| FitPoint {
                omega: w,
                estimate: 1.0 / w,
                stderr: 1e-3,
            })
            .collect();
        let mut bumped = base.clone();
        bumped[2].estimate += bumped[2].stderr;
        let delta: Vec<FitPoint> = base
            .iter()
            .enumerate()
            .map(|(i, d)| FitPoint {
                estimate: if i == 2 { d.stderr } else { 0.0 },
                ..*d
            })
            .collect();
        let f0 = fit_inverse_poly(&base).unwrap();
        let f1 = fit_inverse_poly(&bumped).unwrap();
        let fd = fit_inverse_poly(&delta).unwrap();
        for k in 0..4 {
            let shift = f1.coefficients[k] - f0.coefficients[k];
            assert!(shift.is_finite());
            assert!((shift - fd.coefficients[k]).abs() <= 1e-6 * fd.coefficients[k].abs().max(1.0));
        }
    }

    fn arb_series() -> impl Strategy<Value = InvOmegaSeries> {
        prop::collection::vec((-20i64..20, 1i64..9), 4)
            .prop_filter_map("nonzero constant", |c| (c[0].0 != 0).then(|| s(&c, 3)))
    }

    proptest! {
        #[test]
        fn reciprocal_round_trip(a in arb_series()) {
            let prod = a.mul(&a.recip().unwrap());
            prop_assert_eq!(prod, InvOmegaSeries::one(3));
        }

        #[test]
        fn product_commutes(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}
