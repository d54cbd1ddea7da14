use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tolerance {
    Absolute,
    Relative,
    Exact,
}

/// One embedded target with the tolerance it is judged by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub target: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub kind: Tolerance,
    pub passed: bool,
}

impl Check {
    pub fn absolute(name: impl Into<String>, target: f64, observed: f64, tolerance: f64) -> Self {
        let passed = (observed - target).abs() <= tolerance;
        Self { name: name.into(), target, observed, tolerance, kind: Tolerance::Absolute, passed }
    }

    pub fn relative(name: impl Into<String>, target: f64, observed: f64, tolerance: f64) -> Self {
        let passed = (observed - target).abs() <= tolerance * target.abs();
        Self { name: name.into(), target, observed, tolerance, kind: Tolerance::Relative, passed }
    }

    pub fn exact(name: impl Into<String>, target: f64, observed: f64) -> Self {
        Self { name: name.into(), target, observed, tolerance: 0.0, kind: Tolerance::Exact, passed: target == observed }
    }

    /// A yes/no property, recorded as 1 = true.
    pub fn flag(name: impl Into<String>, expected: bool, observed: bool) -> Self {
        Self::exact(name, f64::from(u8::from(expected)), f64::from(u8::from(observed)))
    }
}

/// Header plus string rows, the CSV face of a report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I, S>(header: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(row.into_iter().map(|v| v.to_string()).collect());
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: serde_json::Value,
    pub table: Table,
    /// Anything that does not fit the table (per-order details, summaries).
    pub outputs: serde_json::Value,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.table.write_csv(out)
    }

    /// The checks as `name,target,observed,tolerance,kind,passed`.
    pub fn checks_table(&self) -> Table {
        let mut t = Table::new(["name", "target", "observed", "tolerance", "kind", "passed"]);
        for c in &self.checks {
            let kind = match c.kind {
                Tolerance::Absolute => "absolute",
                Tolerance::Relative => "relative",
                Tolerance::Exact => "exact",
            };
            t.push([
                c.name.clone(),
                c.target.to_string(),
                c.observed.to_string(),
                c.tolerance.to_string(),
                kind.to_string(),
                c.passed.to_string(),
            ]);
        }
        t
    }
}
