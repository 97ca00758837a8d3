//! Fourier-side quantities: the step distribution `D`, random-walk return
//! probabilities, inverse-gap sums, triangle proxies and the position-space
//! triangle from exact two-point functions.
//!
//! On `Q_n` a character `k in {0, pi}^n` enters every sum only through the
//! number `m` of its `pi` components, so `2^n`-term sums reduce to `n + 1`
//! binomially weighted terms.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{count_closed_walks, GraphKind, GraphModel, VertexId};
use crate::oracle::enumerate::tau_all_exact;
use crate::poly::{rational_string, rational_to_f64};

/// Largest step count accepted by [`return_probability_exact`].
pub const MAX_RETURN_STEPS: u32 = 32;
/// Largest hypercube dimension for mode-reduced sums.
pub const MAX_MODE_DIMENSION: u32 = 64;

fn pow2(n: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << n as usize)
}

fn check_dimension(n: u32) -> Result<()> {
    if n == 0 || n > MAX_MODE_DIMENSION {
        return Err(Error::arg(format!("dimension {n} outside 1..={MAX_MODE_DIMENSION}")));
    }
    Ok(())
}

/// The modes of `Q_n` with `m` components equal to `pi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeWeight {
    pub m: u32,
    pub multiplicity: BigUint,
    /// `1 - D^(k) = 2m/n`.
    pub gap: BigRational,
}

pub fn mode_weights(n: u32) -> Result<Vec<ModeWeight>> {
    check_dimension(n)?;
    Ok((0..=n)
        .map(|m| ModeWeight {
            m,
            multiplicity: binomial(BigUint::from(n), BigUint::from(m)),
            gap: BigRational::new(BigInt::from(2 * m), BigInt::from(n)),
        })
        .collect())
}

/// `D^(k) = 1 - 2m/n` on `Q_n`.
pub fn hat_d_hypercube(n: u32, m: u32) -> Result<BigRational> {
    check_dimension(n)?;
    if m > n {
        return Err(Error::arg(format!("mode with {m} pi components in dimension {n}")));
    }
    Ok(BigRational::one() - BigRational::new(BigInt::from(2 * m), BigInt::from(n)))
}

/// `D^(k)` for the dual-grid mode with indices `mode`: `k_j = pi * mode_j`
/// on `Q_n` (`mode_j` in `{0, 1}`), `k_j = 2 pi mode_j / m` on the torus.
/// The torus value is normalized as `n^-1 sum_j cos k_j`.
pub fn hat_d(g: &GraphModel, mode: &[u32]) -> Result<f64> {
    if mode.len() != g.n() as usize {
        return Err(Error::arg(format!(
            "mode has {} components, graph dimension is {}",
            mode.len(),
            g.n()
        )));
    }
    match g.kind() {
        GraphKind::Hypercube => {
            if mode.iter().any(|&l| l > 1) {
                return Err(Error::arg("hypercube modes have components in {0, 1}"));
            }
            let m = mode.iter().filter(|&&l| l == 1).count() as u32;
            Ok(rational_to_f64(&hat_d_hypercube(g.n(), m)?))
        }
        GraphKind::Torus => {
            if mode.iter().any(|&l| l >= g.m()) {
                return Err(Error::arg(format!("torus mode components must be below m = {}", g.m())));
            }
            let step = std::f64::consts::TAU / g.m() as f64;
            Ok(mode.iter().map(|&l| (step * l as f64).cos()).sum::<f64>() / g.n() as f64)
        }
    }
}

/// Probability that simple random walk is back at `0` after `steps` steps.
///
/// `Q_n` uses `2^-n sum_m C(n, m) (1 - 2m/n)^steps`; the torus divides the
/// closed-walk count by `Omega^steps`.
pub fn return_probability_exact(g: &GraphModel, steps: u32) -> Result<BigRational> {
    if steps > MAX_RETURN_STEPS {
        return Err(Error::limit(format!(
            "{steps} steps exceeds the cap {MAX_RETURN_STEPS}"
        )));
    }
    match g.kind() {
        GraphKind::Hypercube => {
            let n = g.n();
            let sum = mode_weights(n)?.iter().fold(BigRational::zero(), |acc, w| {
                let d = BigRational::one() - &w.gap;
                acc + BigRational::from_integer(BigInt::from(w.multiplicity.clone()))
                    * num_traits::pow(d, steps as usize)
            });
            Ok(sum / pow2(n))
        }
        GraphKind::Torus => return_probability_by_walks(g, steps),
    }
}

/// `count_closed_walks / Omega^steps`, for either graph kind.
pub fn return_probability_by_walks(g: &GraphModel, steps: u32) -> Result<BigRational> {
    let walks = count_closed_walks(g, steps)?;
    let denom = num_traits::pow(BigInt::from(g.omega()), steps as usize);
    Ok(BigRational::new(BigInt::from(walks), denom))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnBound {
    pub i: u32,
    pub value: f64,
    /// `a_i / Omega^i`.
    pub bound: f64,
    pub a_i: f64,
    pub holds: bool,
}

/// Compares the `2i`-step return probability with `a_i / Omega^i`.
///
/// A closed walk moves in each coordinate it uses at least twice, so it uses
/// `l <= i` coordinates. There are at most `n^l / l!` such coordinate sets
/// and at most `(s l)^(2i)` walks confined to one, with `s = 1` on `Q_n` and
/// `s = 2` on the torus. Summing over `l` and dividing by `Omega^(2i)`:
/// `a_i = e i^(2i)` on `Q_n` and `a_i = e 2^i i^(2i)` on the torus.
pub fn return_bound_check(g: &GraphModel, i: u32) -> Result<ReturnBound> {
    if i == 0 {
        return Err(Error::arg("return bound needs i >= 1"));
    }
    let value = rational_to_f64(&return_probability_exact(g, 2 * i)?);
    let base = std::f64::consts::E * (i as f64).powi(2 * i as i32);
    let a_i = match g.kind() {
        GraphKind::Hypercube => base,
        GraphKind::Torus => base * 2f64.powi(i as i32),
    };
    let bound = a_i / (g.omega() as f64).powi(i as i32);
    Ok(ReturnBound {
        i,
        value,
        bound,
        a_i,
        holds: value <= bound,
    })
}

/// `2^-n sum_{m >= 1} C(n, m) (2m/n)^-jt`, the `k != 0` part of the
/// inverse-gap sum on `Q_n`.
pub fn inverse_gap_sum(n: u32, jt: f64) -> Result<f64> {
    if jt.is_nan() || jt <= 0.0 {
        return Err(Error::arg("exponent must be positive"));
    }
    let scale = 2f64.powi(-(n as i32));
    Ok(mode_weights(n)?
        .iter()
        .skip(1)
        .map(|w| {
            let mult = w.multiplicity.to_f64().unwrap_or(f64::INFINITY) * scale;
            mult * rational_to_f64(&w.gap).powf(-jt)
        })
        .sum())
}

/// Exact [`inverse_gap_sum`] for an integer exponent.
pub fn inverse_gap_sum_exact(n: u32, jt: u32) -> Result<BigRational> {
    if jt == 0 {
        return Err(Error::arg("exponent must be positive"));
    }
    let sum = mode_weights(n)?.iter().skip(1).fold(BigRational::zero(), |acc, w| {
        acc + BigRational::from_integer(BigInt::from(w.multiplicity.clone()))
            * num_traits::pow(w.gap.recip(), jt as usize)
    });
    Ok(sum / pow2(n))
}

/// `P(X <= eps n)` for `X ~ Binomial(n, 1/2)`, exactly.
pub fn binomial_tail(n: u32, eps: f64) -> Result<BigRational> {
    check_dimension(n)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::arg("eps must lie in (0, 1)"));
    }
    let top = (eps * n as f64).floor() as u32;
    let sum = mode_weights(n)?
        .iter()
        .take(top as usize + 1)
        .fold(BigUint::zero(), |acc, w| acc + &w.multiplicity);
    Ok(BigRational::from_integer(BigInt::from(sum)) / pow2(n))
}

/// Upper-bound proxy for `T^(i,j)` on `Q_n`: the `k = 0` mode contributes
/// `chi^j` exactly, every other mode uses `tau^(k) <= c / (1 - D^(k))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpijProxy {
    pub value: f64,
    /// `Omega^(i/2) * value`.
    pub scaled: f64,
}

pub fn tpij_proxy(n: u32, i: u32, j: u32, chi: Option<f64>, c: f64) -> Result<TpijProxy> {
    check_dimension(n)?;
    let chi = match (j, chi) {
        (0, _) => 1.0,
        (_, Some(x)) => x,
        (_, None) => return Err(Error::arg("j > 0 needs a chi value for the k = 0 mode")),
    };
    if c.is_nan() || c < 1.0 {
        return Err(Error::arg("infrared proxy constant must be at least 1"));
    }
    let scale = 2f64.powi(-(n as i32));
    let modes: f64 = mode_weights(n)?
        .iter()
        .skip(1)
        .map(|w| {
            let mult = w.multiplicity.to_f64().unwrap_or(f64::INFINITY) * scale;
            let gap = rational_to_f64(&w.gap);
            mult * (1.0 - gap).abs().powi(i as i32) * (c / gap).powi(j as i32)
        })
        .sum();
    let value = scale * chi.powi(j as i32) + modes;
    Ok(TpijProxy {
        value,
        scaled: (n as f64).powf(i as f64 / 2.0) * value,
    })
}

/// Exact two-point values `tau_p(x)` for every vertex of a small graph.
pub fn tau_values(g: &GraphModel, p: &BigRational) -> Result<Vec<BigRational>> {
    Ok(tau_all_exact(g)?.iter().map(|t| t.eval(p)).collect())
}

fn convolve(g: &GraphModel, f: &[BigRational], h: &[BigRational]) -> Vec<BigRational> {
    g.vertices()
        .map(|x| {
            g.vertices()
                .map(|y| &f[y.index()] * &h[g.sub(x, y).index()])
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect()
}

/// `p Omega (D * f)(x) = p sum_{e ~ 0} f(x - e)`.
fn p_omega_d_conv(g: &GraphModel, p: &BigRational, f: &[BigRational], x: VertexId) -> BigRational {
    let mut acc = BigRational::zero();
    g.for_each_neighbor(VertexId::ORIGIN, |e, _| acc += &f[g.sub(x, e).index()]);
    acc * p
}

/// `T_p = sup_x p Omega (D * tau * tau * tau)(x)` from exact two-point
/// functions.
pub fn tp_from_exact_tau(g: &GraphModel, p: &BigRational) -> Result<BigRational> {
    let tau = tau_values(g, p)?;
    let tt = convolve(g, &tau, &tau);
    let ttt = convolve(g, &tt, &tau);
    Ok(g.vertices()
        .map(|x| p_omega_d_conv(g, p, &ttt, x))
        .max()
        .unwrap_or_else(BigRational::zero))
}

/// `tau^_p(k) = sum_x tau_p(x) (-1)^(k . x)` for every mode `k` of `Q_n`,
/// indexed by the bitmask of `k`.
pub fn tau_hat_hypercube(g: &GraphModel, p: &BigRational) -> Result<Vec<BigRational>> {
    if g.kind() != GraphKind::Hypercube {
        return Err(Error::arg("character sums over {0, pi}^n need a hypercube"));
    }
    let tau = tau_values(g, p)?;
    Ok((0..g.vertex_count())
        .map(|k| {
            tau.iter().enumerate().fold(BigRational::zero(), |acc, (x, t)| {
                if (k & x as u64).count_ones().is_multiple_of(2) {
                    acc + t
                } else {
                    acc - t
                }
            })
        })
        .collect())
}

/// One vertex of [`bk_bound_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BkBound {
    pub x: VertexId,
    pub tau: BigRational,
    pub bound: BigRational,
}

impl BkBound {
    pub fn holds(&self) -> bool {
        self.tau <= self.bound
    }
}

/// `tau_p(x)` against `p Omega (D * tau_p)(x)` for every `x != 0`.
pub fn bk_bound_check(g: &GraphModel, p: &BigRational) -> Result<Vec<BkBound>> {
    let tau = tau_values(g, p)?;
    Ok(g.vertices()
        .filter(|&x| x != VertexId::ORIGIN)
        .map(|x| BkBound {
            x,
            tau: tau[x.index()].clone(),
            bound: p_omega_d_conv(g, p, &tau, x),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramMethod {
    ExactModeSum,
    InfraredProxy,
    ExactTau,
}

impl DiagramMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagramMethod::ExactModeSum => "exact-mode-sum",
            DiagramMethod::InfraredProxy => "infrared-proxy",
            DiagramMethod::ExactTau => "exact-tau",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagramEntry {
    pub n: u32,
    pub omega: u32,
    pub i: u32,
    pub j: u32,
    pub p: f64,
    pub method: DiagramMethod,
    /// Exact value as `num/den` where one exists.
    pub exact: Option<String>,
    pub value: f64,
    pub scaled_value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DiagramTable {
    pub entries: Vec<DiagramEntry>,
}

impl DiagramTable {
    pub const CSV_HEADER: &'static str = "n,omega,i,j,p,method,value,scaled_value";

    #[allow(clippy::too_many_arguments)]
    pub fn push_exact(
        &mut self,
        g: &GraphModel,
        i: u32,
        j: u32,
        p: f64,
        method: DiagramMethod,
        v: &BigRational,
        scale: f64,
    ) {
        let value = rational_to_f64(v);
        self.entries.push(DiagramEntry {
            n: g.n(),
            omega: g.omega(),
            i,
            j,
            p,
            method,
            exact: Some(rational_string(v)),
            value,
            scaled_value: value * scale,
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let value = e.exact.clone().unwrap_or_else(|| format!("{:.12e}", e.value));
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{:.12e}",
                e.n,
                e.omega,
                e.i,
                e.j,
                e.p,
                e.method.as_str(),
                value,
                e.scaled_value
            );
        }
        out
    }
}

/// Return probabilities, return bounds and inverse-gap sums for one graph.
pub fn diagram_table(g: &GraphModel, max_i: u32, chi: Option<f64>, p: f64, c: f64) -> Result<DiagramTable> {
    let mut table = DiagramTable::default();
    let omega = g.omega() as f64;
    for i in 1..=max_i {
        let r = return_probability_exact(g, 2 * i)?;
        table.push_exact(g, 2 * i, 0, p, DiagramMethod::ExactModeSum, &r, omega.powi(i as i32));
    }
    if g.kind() == GraphKind::Hypercube {
        for (i, j) in [(0, 1), (0, 2), (2, 2), (2, 3)] {
            let proxy = tpij_proxy(g.n(), i, j, chi, c)?;
            table.entries.push(DiagramEntry {
                n: g.n(),
                omega: g.omega(),
                i,
                j,
                p,
                method: DiagramMethod::InfraredProxy,
                exact: None,
                value: proxy.value,
                scaled_value: proxy.scaled,
            });
        }
    }
    Ok(table)
}
