use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    pub fn text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            Cell::Num(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Num(x as f64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Num(x as f64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Rows of one series. Numeric cells are always finite.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                got: row.len(),
            });
        }
        if let Some(x) = row.iter().filter_map(Cell::num).find(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite value {x} in a result row"
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::InvalidExperiment(format!("record has no column `{name}`")))
    }

    /// Numeric values of column `name`.
    pub fn nums(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column(name)?;
        self.rows
            .iter()
            .map(|r| {
                r[i].num().ok_or_else(|| {
                    Error::InvalidExperiment(format!("column `{name}` is not numeric"))
                })
            })
            .collect()
    }

    pub fn texts(&self, name: &str) -> Result<Vec<String>> {
        let i = self.column(name)?;
        Ok(self
            .rows
            .iter()
            .map(|r| match &r[i] {
                Cell::Text(s) => s.clone(),
                Cell::Num(x) => x.to_string(),
            })
            .collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match c {
                    Cell::Num(x) => write!(out, "{x}").unwrap(),
                    Cell::Text(s) if s.contains([',', '"', '\n']) => {
                        write!(out, "\"{}\"", s.replace('"', "\"\"")).unwrap()
                    }
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Lt,
    Le,
    Gt,
    Ge,
    /// `|value - bound| <= tolerance`.
    Eq,
}

impl Comparison {
    fn symbol(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
            Comparison::Eq => "~=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub op: Comparison,
    pub bound: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl BoundCheck {
    pub fn new(
        name: impl Into<String>,
        value: f64,
        op: Comparison,
        bound: f64,
        tolerance: f64,
    ) -> Self {
        // NaN fails every comparison.
        let passed = match op {
            Comparison::Lt => value < bound + tolerance,
            Comparison::Le => value <= bound + tolerance,
            Comparison::Gt => value > bound - tolerance,
            Comparison::Ge => value >= bound - tolerance,
            Comparison::Eq => (value - bound).abs() <= tolerance,
        };
        BoundCheck {
            name: name.into(),
            value,
            op,
            bound,
            tolerance,
            passed,
        }
    }

    /// Exact comparison.
    pub fn strict(name: impl Into<String>, value: f64, op: Comparison, bound: f64) -> Self {
        Self::new(name, value, op, bound, 0.0)
    }

    pub fn describe(&self) -> String {
        let tol = if self.tolerance > 0.0 {
            format!(" (tol {:e})", self.tolerance)
        } else {
            String::new()
        };
        format!(
            "{} {}: {} {} {}{tol}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.op.symbol(),
            self.bound
        )
    }
}

/// Summary statistics and bound checks of a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<BoundCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    pub version: String,
    pub config: ExperimentConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<BoundCheck>,
    pub wall_clock_s: f64,
}

impl ResultRecord {
    pub fn new(
        config: ExperimentConfig,
        table: Table,
        verdict: Verdict,
        wall_clock_s: f64,
    ) -> Self {
        ResultRecord {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            columns: table.columns,
            rows: table.rows,
            summary: verdict.summary,
            checks: verdict.checks,
            wall_clock_s,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> Table {
        Table {
            columns: self.columns.clone(),
            rows: self.rows.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: ResultRecord =
            serde_json::from_str(text).map_err(|e| Error::InvalidExperiment(e.to_string()))?;
        if r.schema != SCHEMA_VERSION {
            return Err(Error::InvalidExperiment(format!(
                "record schema {} is not {SCHEMA_VERSION}",
                r.schema
            )));
        }
        Ok(r)
    }

    /// Human-readable summary.
    pub fn report(&self) -> String {
        let mut out = format!(
            "{} ({} rows, {:.2} s)\n",
            self.config.kind.label(),
            self.rows.len(),
            self.wall_clock_s
        );
        for (k, v) in &self.summary {
            writeln!(out, "  {k} = {v}").unwrap();
        }
        for c in &self.checks {
            writeln!(out, "  {}", c.describe()).unwrap();
        }
        writeln!(
            out,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "some checks FAILED"
            }
        )
        .unwrap();
        out
    }

    /// Writes `<stem>.json` and `<stem>.csv`; returns both paths.
    pub fn write_outputs(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        let json = stem.with_extension("json");
        let csv = stem.with_extension("csv");
        if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&json, self.to_json()?)?;
        std::fs::write(&csv, self.table().to_csv())?;
        Ok((json, csv))
    }
}
