use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use perclace::diagrams::{self, DiagramMethod, DiagramTable};
use perclace::mc::{self, McConfig, SolveConfig};
use perclace::oracle::{self, Truncation};
use perclace::poly::{parse_rational, rational_string, RationalPolynomial};
use perclace::report::{ChiRow, EstimateRow, SolveRow, CHI_HEADER, ESTIMATE_HEADER, SOLVE_HEADER};
use perclace::series::{self, FitPoint};
use perclace::{GraphKind, GraphModel};

use crate::args::{Command, GraphArgs, KindArg, McArgs};
use crate::output::Table;

/// `q3`, `hypercube:3` or `torus:2:6`.
pub fn parse_graph(text: &str) -> perclace::Result<GraphModel> {
    let s = text.trim().to_ascii_lowercase();
    let bad = || {
        perclace::Error::InvalidGraph(format!(
            "cannot parse graph '{text}' (use q<N>, hypercube:<N> or torus:<N>:<M>)"
        ))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
    match parts.as_slice() {
        [q] if q.starts_with('q') => GraphModel::hypercube(num(&q[1..])?),
        ["hypercube", n] => GraphModel::hypercube(num(n)?),
        ["torus", n, m] => GraphModel::torus(num(n)?, num(m)?),
        _ => Err(bad()),
    }
}

fn graph(args: &GraphArgs) -> perclace::Result<GraphModel> {
    parse_graph(&args.graph)
}

fn mc_config(args: &McArgs) -> McConfig {
    McConfig {
        seed: args.seed,
        streams: args.streams,
        cluster_cap: args.cluster_cap,
    }
}

/// Seed recorded in the header, for commands that draw random numbers.
pub fn seed_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Chi { mc, .. } | Command::Sweep { mc, .. } | Command::PiMc { mc, .. } => Some(mc.seed),
        Command::SolvePc { seed, .. } => Some(*seed),
        _ => None,
    }
}

#[derive(Serialize)]
struct PolyRecord<'a> {
    graph: String,
    quantity: &'a str,
    levels: u32,
    max_order: Option<usize>,
    polynomial: String,
    coefficients: &'a RationalPolynomial,
}

fn poly_table(
    g: &GraphModel,
    quantity: &str,
    levels: u32,
    max_order: Option<usize>,
    poly: &RationalPolynomial,
) -> Result<Table> {
    let mut t = Table::new("graph,quantity,levels,max_order,polynomial");
    let record = PolyRecord {
        graph: g.label(),
        quantity,
        levels,
        max_order,
        polynomial: poly.to_string(),
        coefficients: poly,
    };
    let order = max_order.map_or(String::new(), |o| o.to_string());
    let csv = format!(
        "{},{},{},{},{}",
        record.graph, quantity, levels, order, record.polynomial
    );
    t.push(csv, &record)?;
    Ok(t)
}

#[derive(Serialize)]
struct ValueRecord {
    quantity: String,
    omega: f64,
    order: usize,
    value: f64,
}

#[derive(Serialize)]
struct SeriesRecord {
    order: usize,
    omega_pc: String,
    pi_hat: String,
}

#[derive(Serialize)]
struct IdentityRecord {
    graph: String,
    max_order: usize,
    n_max: u32,
    residual: String,
    holds: bool,
    order_violations: usize,
    pi_hat: String,
}

#[derive(Serialize)]
struct RecursionRecord {
    graph: String,
    p: String,
    n_max: u32,
    exact: String,
    value: f64,
}

#[derive(Serialize)]
struct FitRecord {
    coefficient: usize,
    value: f64,
}

fn read_fit_data(path: &Path) -> Result<Vec<FitPoint>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read fit input {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<Vec<f64>> = cells.iter().map(|c| c.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 3 => out.push(FitPoint {
                omega: v[0],
                estimate: v[1],
                stderr: v[2],
            }),
            _ if i == 0 => continue,
            _ => bail!(perclace::Error::InvalidArgument(format!(
                "line {} of {}: expected omega,estimate,stderr",
                i + 1,
                path.display()
            ))),
        }
    }
    Ok(out)
}

pub fn execute(cmd: &Command) -> Result<Table> {
    match cmd {
        Command::Predict {
            omega,
            order,
            kind,
            reference,
        } => {
            let kind = match kind {
                KindArg::Hypercube => GraphKind::Hypercube,
                KindArg::Torus => GraphKind::Torus,
            };
            let value = if *reference {
                series::predict_pc_reference(*omega, kind, *order)?
            } else {
                series::predict_pc(*omega, kind, *order)?
            };
            let mut t = Table::new("quantity,omega,order,value");
            let r = ValueRecord {
                quantity: "p_c".into(),
                omega: *omega,
                order: *order,
                value,
            };
            t.push(format!("{},{},{},{}", r.quantity, r.omega, r.order, r.value), &r)?;
            Ok(t)
        }
        Command::Chi { graph: ga, p, mc: m } => {
            let g = graph(ga)?;
            let e = mc::chi_estimate(&g, *p, m.samples, &mc_config(m))?;
            let mut t = Table::new(CHI_HEADER);
            let row = ChiRow::new(&g, *p, &e);
            t.push(row.csv(), &row)?;
            Ok(t)
        }
        Command::Sweep { graph: ga, grid, mc: m } => {
            let g = graph(ga)?;
            let est = mc::sweep_chi(&g, grid, m.samples, &mc_config(m))?;
            let mut t = Table::new(CHI_HEADER);
            for (p, e) in grid.iter().zip(&est) {
                let row = ChiRow::new(&g, *p, e);
                t.push(row.csv(), &row)?;
            }
            Ok(t)
        }
        Command::SolvePc {
            graph: ga,
            target,
            tol,
            min_samples,
            budget,
            seed,
            streams,
        } => {
            let g = graph(ga)?;
            let cfg = SolveConfig {
                target: *target,
                tol: *tol,
                min_samples: *min_samples,
                budget: *budget,
                mc: McConfig {
                    seed: *seed,
                    streams: *streams,
                    ..McConfig::default()
                },
                ..SolveConfig::default()
            };
            let r = mc::solve_chi_target(&g, &cfg)?;
            let mut t = Table::new(SOLVE_HEADER);
            let row = SolveRow::new(&r);
            t.push(row.csv(), &row)?;
            if !r.converged {
                eprintln!(
                    "warning: budget exhausted after {} cluster samples; bracket [{}, {}]",
                    r.budget_spent, r.bracket.0, r.bracket.1
                );
            }
            Ok(t)
        }
        Command::PiExact { graph: ga, levels } => {
            let g = graph(ga)?;
            let poly = oracle::pi_n_exact(&g, *levels)?;
            poly_table(&g, "pi", *levels, None, &poly)
        }
        Command::PiSeries {
            graph: ga,
            levels,
            max_order,
        } => {
            let g = graph(ga)?;
            let poly = oracle::pi_n_with(&g, *levels, Truncation::Through(*max_order))?;
            poly_table(&g, "pi", *levels, Some(*max_order), &poly)
        }
        Command::PiMc {
            graph: ga,
            levels,
            p,
            mc: m,
        } => {
            let g = graph(ga)?;
            let e = mc::pi_n_mc(&g, *levels, *p, m.samples, &mc_config(m))?;
            let mut t = Table::new(ESTIMATE_HEADER);
            let row = EstimateRow::new(&g, format!("pi{levels}"), *p, &e);
            t.push(row.csv(), &row)?;
            Ok(t)
        }
        Command::IdentityCheck {
            graph: ga,
            max_order,
            n_max,
            p,
        } => {
            let g = graph(ga)?;
            if let Some(p) = p {
                let p = parse_rational(p)?;
                let rows = oracle::recursion_residuals(&g, &p, *n_max)?;
                let mut t = Table::new("graph,p,n_max,exact,value");
                for r in rows {
                    let rec = RecursionRecord {
                        graph: g.label(),
                        p: rational_string(&p),
                        n_max: r.n_max,
                        exact: rational_string(&r.exact),
                        value: r.value,
                    };
                    let csv = format!("{},{},{},{},{}", rec.graph, rec.p, rec.n_max, rec.exact, rec.value);
                    t.push(csv, &rec)?;
                }
                return Ok(t);
            }
            let r = oracle::identity_residual_series(&g, *max_order, *n_max)?;
            let rec = IdentityRecord {
                graph: g.label(),
                max_order: *max_order,
                n_max: *n_max,
                residual: r.residual.to_string(),
                holds: r.holds(),
                order_violations: r.order_violations.len(),
                pi_hat: r.pi_hat.to_string(),
            };
            let mut t = Table::new("graph,max_order,n_max,residual,holds,order_violations,pi_hat");
            let csv = format!(
                "{},{},{},{},{},{},{}",
                rec.graph, rec.max_order, rec.n_max, rec.residual, rec.holds, rec.order_violations, rec.pi_hat
            );
            t.push(csv, &rec)?;
            Ok(t)
        }
        Command::Diagrams {
            graph: ga,
            max_i,
            chi,
            p,
            c,
        } => {
            let g = graph(ga)?;
            let p = p.unwrap_or(1.0 / g.omega() as f64);
            let mut table: DiagramTable = diagrams::diagram_table(&g, *max_i, Some(*chi), p, *c)?;
            if g.vertex_count() <= 16 {
                let pr = perclace::poly::decimal_rational(p, 12);
                let tp = diagrams::tp_from_exact_tau(&g, &pr)?;
                table.push_exact(&g, 0, 3, p, DiagramMethod::ExactTau, &tp, g.omega() as f64);
            }
            let mut t = Table::new(DiagramTable::CSV_HEADER);
            let csv = table.to_csv();
            for (line, entry) in csv.lines().skip(1).zip(&table.entries) {
                t.push(line.to_string(), entry)?;
            }
            Ok(t)
        }
        Command::DeriveSeries {
            order,
            sub_degree_offset,
        } => {
            let d = series::derive_pc_series_with(*order, *sub_degree_offset)?;
            let mut t = Table::new("order,omega_pc,pi_hat");
            for k in 0..=*order {
                let rec = SeriesRecord {
                    order: k,
                    omega_pc: rational_string(&d.omega_pc.coeff(k)),
                    pi_hat: rational_string(&d.pi_hat.coeff(k)),
                };
                t.push(format!("{},{},{}", rec.order, rec.omega_pc, rec.pi_hat), &rec)?;
            }
            Ok(t)
        }
        Command::Fit { input, degree } => {
            let data = read_fit_data(input)?;
            let fit = series::fit_inverse_poly_degree(&data, *degree)?;
            let mut t = Table::new("coefficient,value");
            for (k, b) in fit.coefficients.iter().enumerate() {
                let rec = FitRecord {
                    coefficient: k,
                    value: *b,
                };
                t.push(format!("b{k},{b}"), &rec)?;
            }
            Ok(t)
        }
    }
}
