//! The bounds table: one row of measured and reference densities per
//! dimension.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use wedgebound_core::density::{BoundSet, DensityEstimate, Estimator};
use wedgebound_core::formulas::{reference_bounds, ASYMPTOTIC_LABEL};
use wedgebound_core::Dimension;

use crate::numfmt::{sig, text};
use crate::{CliError, MIN_SAMPLES, VERSION};

pub const MIN_D: usize = 4;
pub const MAX_D: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub value: f64,
    pub stderr: f64,
}

impl From<DensityEstimate> for Measured {
    fn from(e: DensityEstimate) -> Self {
        Self {
            value: sig(e.value),
            stderr: sig(e.stderr),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub n: u64,
    pub version: String,
    pub reference_curves: String,
}

impl Meta {
    pub fn new(est: &Estimator<'_>) -> Self {
        Self {
            seed: est.seed_value(),
            n: est.n(),
            version: VERSION.to_string(),
            reference_curves: ASYMPTOTIC_LABEL.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub d: usize,
    pub sigma: Measured,
    pub sigma_hat: Measured,
    pub lambda: Measured,
    /// `sigma - sigma_hat` on paired draws.
    pub gap: Measured,
    /// Gap above three standard errors.
    pub improved: bool,
    pub volume_lower: f64,
    pub surface_lower: f64,
    pub daniels: f64,
    pub kl: f64,
    pub ball_lower: f64,
}

impl BoundsRow {
    pub fn new(b: &BoundSet) -> Result<Self, CliError> {
        let r = reference_bounds(Dimension::new(b.d)?);
        Ok(Self {
            d: b.d,
            sigma: b.sigma.into(),
            sigma_hat: b.sigma_hat.into(),
            lambda: b.lambda.into(),
            gap: b.gap.into(),
            improved: b.improved(3.0),
            volume_lower: sig(b.voronoi_volume_lower),
            surface_lower: sig(b.voronoi_surface_lower),
            daniels: sig(r.daniels),
            kl: sig(r.kl),
            ball_lower: sig(r.ball_lower),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub meta: Meta,
    pub rows: Vec<BoundsRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
}

pub fn check_range(d_min: usize, d_max: usize) -> Result<(), CliError> {
    if !(MIN_D <= d_min && d_min <= d_max && d_max <= MAX_D) {
        return Err(CliError::Usage(format!(
            "dimension range {d_min}..={d_max} must satisfy {MIN_D} <= dmin <= dmax <= {MAX_D}"
        )));
    }
    Ok(())
}

pub fn check_samples(n: u64) -> Result<(), CliError> {
    if n < MIN_SAMPLES {
        return Err(CliError::Usage(format!("--samples {n} is below {MIN_SAMPLES}")));
    }
    Ok(())
}

/// Every row is computed before anything is returned.
pub fn compute(est: &Estimator<'_>, d_min: usize, d_max: usize) -> Result<BoundsTable, CliError> {
    check_range(d_min, d_max)?;
    check_samples(est.n())?;
    let rows = (d_min..=d_max)
        .map(|d| BoundsRow::new(&est.bound_set(Dimension::new(d)?)?))
        .collect::<Result<_, _>>()?;
    Ok(BoundsTable {
        meta: Meta::new(est),
        rows,
    })
}

const COLUMNS: [&str; 15] = [
    "d",
    "sigma",
    "sigma_stderr",
    "sigma_hat",
    "sigma_hat_stderr",
    "lambda",
    "lambda_stderr",
    "gap",
    "gap_stderr",
    "improved",
    "volume_lower",
    "surface_lower",
    "daniels",
    "kl",
    "ball_lower",
];

fn cells(r: &BoundsRow) -> Vec<String> {
    let yes = if r.improved { "yes" } else { "no" };
    vec![
        r.d.to_string(),
        text(r.sigma.value),
        text(r.sigma.stderr),
        text(r.sigma_hat.value),
        text(r.sigma_hat.stderr),
        text(r.lambda.value),
        text(r.lambda.stderr),
        text(r.gap.value),
        text(r.gap.stderr),
        yes.to_string(),
        text(r.volume_lower),
        text(r.surface_lower),
        text(r.daniels),
        text(r.kl),
        text(r.ball_lower),
    ]
}

impl BoundsTable {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => self.csv(),
            Format::Md => Ok(self.markdown()),
        }
    }

    fn csv(&self) -> Result<String, CliError> {
        let m = &self.meta;
        let mut out = format!(
            "# seed={} n={} version={} daniels,kl: {}\n",
            m.seed, m.n, m.version, m.reference_curves
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(COLUMNS)?;
        for r in &self.rows {
            w.write_record(cells(r))?;
        }
        out.push_str(&String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"));
        Ok(out)
    }

    fn markdown(&self) -> String {
        let mut out = String::new();
        let head = [
            "d",
            "sigma",
            "sigma_hat",
            "lambda",
            "gap",
            "improved",
            "omega/sigma_hat",
            "d omega/sigma_hat",
            "Daniels",
            "KL",
            "Ball",
        ];
        let _ = writeln!(out, "| {} |", head.join(" | "));
        let _ = writeln!(out, "|{}", "---:|".repeat(head.len()));
        let pm = |m: &Measured| format!("{} ± {}", text(m.value), text(m.stderr));
        for r in &self.rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                r.d,
                pm(&r.sigma),
                pm(&r.sigma_hat),
                pm(&r.lambda),
                pm(&r.gap),
                if r.improved { "yes" } else { "no" },
                text(r.volume_lower),
                text(r.surface_lower),
                text(r.daniels),
                text(r.kl),
                text(r.ball_lower),
            );
        }
        let m = &self.meta;
        let _ = writeln!(
            out,
            "\nseed {}, n = {}, version {}. Daniels and KL columns: {}.",
            m.seed, m.n, m.version, m.reference_curves
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_validation() {
        assert!(check_range(2, 8).is_err());
        assert!(check_range(9, 8).is_err());
        assert!(check_range(8, 65).is_err());
        assert!(check_range(4, 64).is_ok());
        assert!(check_samples(9_999).is_err());
    }
}
