//! Fixed CSV schemas and record types shared by the command line and tests.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! values always print identically.

use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::GraphModel;
use crate::mc::{Estimate, PseudoCriticalResult};
use crate::series::omega_pc_three_term;

pub const CHI_HEADER: &str = "graph_kind,n,m,p,samples,chi_mean,chi_stderr,seed";
pub const SOLVE_HEADER: &str = "n,omega,target,p_hat,omega_p_hat,corrected_omega_p,predicted_3term,abs_deviation";
pub const ESTIMATE_HEADER: &str = "graph_kind,n,m,quantity,p,samples,mean,stderr,seed,truncated";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiRow {
    pub graph_kind: String,
    pub n: u32,
    pub m: u32,
    pub p: f64,
    pub samples: u64,
    pub chi_mean: f64,
    pub chi_stderr: f64,
    pub seed: u64,
}

impl ChiRow {
    pub fn new(g: &GraphModel, p: f64, e: &Estimate) -> Self {
        ChiRow {
            graph_kind: g.kind().as_str().to_string(),
            n: g.n(),
            m: g.m(),
            p,
            samples: e.samples,
            chi_mean: e.mean,
            chi_stderr: e.stderr,
            seed: e.seed,
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.graph_kind, self.n, self.m, self.p, self.samples, self.chi_mean, self.chi_stderr, self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub graph_kind: String,
    pub n: u32,
    pub m: u32,
    pub quantity: String,
    pub p: f64,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    pub seed: u64,
    pub truncated: u64,
}

impl EstimateRow {
    pub fn new(g: &GraphModel, quantity: impl Into<String>, p: f64, e: &Estimate) -> Self {
        EstimateRow {
            graph_kind: g.kind().as_str().to_string(),
            n: g.n(),
            m: g.m(),
            quantity: quantity.into(),
            p,
            samples: e.samples,
            mean: e.mean,
            stderr: e.stderr,
            seed: e.seed,
            truncated: e.truncated,
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.graph_kind,
            self.n,
            self.m,
            self.quantity,
            self.p,
            self.samples,
            self.mean,
            self.stderr,
            self.seed,
            self.truncated
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveRow {
    pub n: u32,
    pub omega: u32,
    pub target: f64,
    pub p_hat: f64,
    pub omega_p_hat: f64,
    pub corrected_omega_p: f64,
    pub predicted_3term: f64,
    pub abs_deviation: f64,
}

impl SolveRow {
    pub fn new(r: &PseudoCriticalResult) -> Self {
        let predicted = omega_pc_three_term(r.omega as f64);
        SolveRow {
            n: r.n,
            omega: r.omega,
            target: r.target,
            p_hat: r.p_hat,
            omega_p_hat: r.omega_p_hat,
            corrected_omega_p: r.corrected_omega_p,
            predicted_3term: predicted,
            abs_deviation: (r.corrected_omega_p - predicted).abs(),
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.omega,
            self.target,
            self.p_hat,
            self.omega_p_hat,
            self.corrected_omega_p,
            self.predicted_3term,
            self.abs_deviation
        )
    }
}

/// Header line plus one line per row.
pub fn csv_table<I: IntoIterator<Item = String>>(header: &str, rows: I) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{r}");
    }
    out
}
