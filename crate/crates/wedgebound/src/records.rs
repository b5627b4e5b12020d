//! Record packing densities joined with the computed upper bounds.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};
use wedgebound_core::density::{DensityEstimate, Estimator};
use wedgebound_core::Dimension;

use crate::bounds::{Format, Measured, Meta};
use crate::numfmt::text;
use crate::CliError;

pub const HEADER: [&str; 4] = ["d", "density", "name", "source"];

/// Rows whose source carries this label are other upper bounds shown for
/// context, never compared as packings.
pub const CONTEXT_SOURCE: &str = "other upper bound";

/// The bundled example file.
pub const BUNDLED: &str = include_str!("../data/records.csv");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordsRow {
    pub d: usize,
    pub density: f64,
    pub name: String,
    pub source: String,
}

impl RecordsRow {
    pub fn is_context(&self) -> bool {
        self.source == CONTEXT_SOURCE
    }
}

/// Parses a records file; `path` only labels errors. An empty input is an
/// empty table.
pub fn parse<R: Read>(input: R, path: &str) -> Result<Vec<RecordsRow>, CliError> {
    let bad = |line: u64, message: String| CliError::Input {
        path: path.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    if headers.iter().ne(HEADER) {
        return Err(bad(1, format!("expected header {}", HEADER.join(","))));
    }
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            bad(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let row: RecordsRow = rec.deserialize(Some(&headers)).map_err(|e| bad(line, e.to_string()))?;
        if row.d < 2 {
            return Err(bad(line, format!("dimension {} is below 2", row.d)));
        }
        if !(row.density > 0.0 && row.density <= 1.0) {
            return Err(bad(line, format!("density {} is outside (0, 1]", row.density)));
        }
        if !seen.insert((row.d, row.name.clone())) {
            return Err(bad(
                line,
                format!("duplicate row for d = {} and name {:?}", row.d, row.name),
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Consistent,
    /// A packing denser than an upper bound: a bug somewhere, not
    /// mathematics.
    Inconsistent,
    Context,
    NoBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Consistent => "consistent",
            Self::Inconsistent => "inconsistent",
            Self::Context => "context",
            Self::NoBound => "no bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    #[serde(flatten)]
    pub record: RecordsRow,
    /// `sigma_hat` from d = 8 on, `sigma` below.
    pub bound_name: Option<String>,
    pub bound: Option<Measured>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordsTable {
    pub meta: Meta,
    pub rows: Vec<Comparison>,
}

impl RecordsTable {
    pub fn inconsistent(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Inconsistent).count()
    }
}

/// The upper bound used for `d`: the wedge bound where it holds, the
/// simplex bound elsewhere.
pub fn bound_for(est: &Estimator<'_>, d: usize) -> Result<(&'static str, DensityEstimate), CliError> {
    let dim = Dimension::new(d)?;
    if d >= 8 {
        Ok(("sigma_hat", est.sigma_hat(dim)?))
    } else {
        Ok(("sigma", est.sigma(dim)?))
    }
}

pub fn compare(
    est: &Estimator<'_>,
    rows: Vec<RecordsRow>,
    d_min: usize,
    d_max: usize,
) -> Result<RecordsTable, CliError> {
    let mut cache: Vec<(usize, &'static str, DensityEstimate)> = Vec::new();
    let mut out = Vec::with_capacity(rows.len());
    for record in rows {
        if record.d < d_min || record.d > d_max {
            out.push(Comparison {
                record,
                bound_name: None,
                bound: None,
                status: Status::NoBound,
            });
            continue;
        }
        let (name, b) = match cache.iter().find(|c| c.0 == record.d) {
            Some(&(_, name, b)) => (name, b),
            None => {
                let (name, b) = bound_for(est, record.d)?;
                cache.push((record.d, name, b));
                (name, b)
            }
        };
        let status = if record.is_context() {
            Status::Context
        } else if record.density <= b.value + 3.0 * b.stderr {
            Status::Consistent
        } else {
            Status::Inconsistent
        };
        out.push(Comparison {
            record,
            bound_name: Some(name.to_string()),
            bound: Some(b.into()),
            status,
        });
    }
    Ok(RecordsTable {
        meta: Meta::new(est),
        rows: out,
    })
}

impl RecordsTable {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let cols = |c: &Comparison| {
            let (bn, bv, be) = match (&c.bound_name, &c.bound) {
                (Some(n), Some(b)) => (n.clone(), text(b.value), text(b.stderr)),
                _ => Default::default(),
            };
            [
                c.record.d.to_string(),
                text(c.record.density),
                c.record.name.clone(),
                c.record.source.clone(),
                bn,
                bv,
                be,
                c.status.as_str().to_string(),
            ]
        };
        let head = [
            "d",
            "density",
            "name",
            "source",
            "bound",
            "bound_value",
            "bound_stderr",
            "status",
        ];
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => {
                let mut out = format!(
                    "# seed={} n={} version={}\n",
                    self.meta.seed, self.meta.n, self.meta.version
                );
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(head)?;
                for c in &self.rows {
                    w.write_record(cols(c))?;
                }
                let bytes = w.into_inner().map_err(|e| e.into_error())?;
                out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
                Ok(out)
            }
            Format::Md => {
                let mut out = String::new();
                let _ = writeln!(out, "| {} |", head.join(" | "));
                let _ = writeln!(out, "|{}", "---|".repeat(head.len()));
                for c in &self.rows {
                    let _ = writeln!(out, "| {} |", cols(c).join(" | "));
                }
                let _ = writeln!(
                    out,
                    "\nseed {}, n = {}, version {}.",
                    self.meta.seed, self.meta.n, self.meta.version
                );
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_parses() {
        let rows = parse(BUNDLED.as_bytes(), "bundled").unwrap();
        assert!(rows.iter().any(|r| r.d == 3 && !r.is_context()));
        assert!(rows.iter().any(|r| r.d == 3 && r.is_context()));
    }

    #[test]
    fn malformed_rows_report_their_line() {
        let text = "d,density,name,source\n3,0.74,fcc,known\n4,abc,x,y\n";
        match parse(text.as_bytes(), "f.csv") {
            Err(CliError::Input { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let dup = "d,density,name,source\n3,0.74,fcc,a\n3,0.7,fcc,b\n";
        assert!(matches!(
            parse(dup.as_bytes(), "f"),
            Err(CliError::Input { line: 3, .. })
        ));
        let big = "d,density,name,source\n3,1.5,x,y\n";
        assert!(parse(big.as_bytes(), "f").is_err());
        let header = "dim,density,name,source\n";
        assert!(matches!(
            parse(header.as_bytes(), "f"),
            Err(CliError::Input { line: 1, .. })
        ));
        assert!(parse("".as_bytes(), "f").unwrap().is_empty());
    }
}
