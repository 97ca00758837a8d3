use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Format};

/// Bumped whenever a column is added, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;

/// The data section of one run: fixed CSV columns plus a JSON mirror with
/// the same fields.
pub struct Table {
    pub columns: &'static str,
    pub rows: Vec<String>,
    pub json: Vec<Value>,
}

impl Table {
    pub fn new(columns: &'static str) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            json: Vec::new(),
        }
    }

    pub fn push<T: Serialize>(&mut self, csv: String, record: &T) -> Result<()> {
        self.rows.push(csv);
        self.json.push(serde_json::to_value(record)?);
        Ok(())
    }

    fn csv(&self) -> String {
        let mut out = String::from(self.columns);
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}

fn header_value(cli: &Cli, seed: Option<u64>) -> Result<Value> {
    Ok(json!({
        "tool": format!("perclace {}", env!("CARGO_PKG_VERSION")),
        "schema": format!("{}/{}", cli.command.name(), SCHEMA_VERSION),
        "seed": seed,
        "config": serde_json::to_value(cli)?,
    }))
}

/// Header block and data section in the requested format.
pub fn render(cli: &Cli, seed: Option<u64>, table: &Table) -> Result<String> {
    let header = header_value(cli, seed)?;
    match cli.format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# {}\n", header["tool"].as_str().unwrap_or_default()));
            out.push_str(&format!(
                "# schema: {}\n",
                header["schema"].as_str().unwrap_or_default()
            ));
            match seed {
                Some(s) => out.push_str(&format!("# seed: {s}\n")),
                None => out.push_str("# seed: none\n"),
            }
            out.push_str(&format!("# config: {}\n", serde_json::to_string(&header["config"])?));
            out.push_str(&table.csv());
            Ok(out)
        }
        Format::Json => {
            let doc = json!({ "header": header, "data": table.json });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

/// Output path after applying the output directory to relative paths.
pub fn resolve_output(cli: &Cli) -> Option<PathBuf> {
    let path = cli.output.as_ref()?;
    match &cli.output_dir {
        Some(dir) if path.is_relative() => Some(dir.join(path)),
        _ => Some(path.clone()),
    }
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write output file {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).context("cannot write to stdout")?;
            Ok(())
        }
    }
}
