//! Tab-separated plot data: `#` header lines, LF endings, nine significant
//! digits.

use std::fmt::Write as _;

use wedgebound_core::density::Estimator;
use wedgebound_core::formulas::{truncation_interval, truncation_scalars};
use wedgebound_core::geometry::{wedge_domain, ChainSpec};
use wedgebound_core::verify::BAND;
use wedgebound_core::Dimension;

use crate::bounds::{check_range, check_samples};
use crate::numfmt::text;
use crate::{CliError, VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Kind {
    SigmaVsD,
    GapVsD,
    DlimProfile,
    GRatio,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Self::SigmaVsD => "sigma_vs_d",
            Self::GapVsD => "gap_vs_d",
            Self::DlimProfile => "dlim_profile",
            Self::GRatio => "g_ratio",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub d: usize,
    pub d_min: usize,
    pub d_max: usize,
    pub points: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            d: 8,
            d_min: 8,
            d_max: 16,
            points: 200,
        }
    }
}

struct Tsv(String);

impl Tsv {
    fn new(kind: Kind, est: &Estimator<'_>, columns: &[&str]) -> Self {
        Self(format!(
            "# {} seed={} n={} version={}\n# {}\n",
            kind.name(),
            est.seed_value(),
            est.n(),
            VERSION,
            columns.join("\t")
        ))
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.0, "{}", cells.join("\t"));
    }
}

pub fn render(kind: Kind, est: &Estimator<'_>, p: &Params) -> Result<String, CliError> {
    match kind {
        Kind::SigmaVsD => {
            check_range(p.d_min, p.d_max)?;
            check_samples(est.n())?;
            let mut t = Tsv::new(
                kind,
                est,
                &[
                    "d",
                    "sigma",
                    "sigma_stderr",
                    "sigma_hat",
                    "sigma_hat_stderr",
                    "lambda",
                    "lambda_stderr",
                ],
            );
            for d in p.d_min..=p.d_max {
                let b = est.bound_set(Dimension::new(d)?)?;
                t.row(&[
                    d.to_string(),
                    text(b.sigma.value),
                    text(b.sigma.stderr),
                    text(b.sigma_hat.value),
                    text(b.sigma_hat.stderr),
                    text(b.lambda.value),
                    text(b.lambda.stderr),
                ]);
            }
            Ok(t.0)
        }
        Kind::GapVsD => {
            check_range(p.d_min, p.d_max)?;
            check_samples(est.n())?;
            let mut t = Tsv::new(kind, est, &["d", "sigma", "sigma_hat", "gap", "gap_stderr"]);
            for d in p.d_min..=p.d_max {
                let b = est.bound_set(Dimension::new(d)?)?;
                t.row(&[
                    d.to_string(),
                    text(b.sigma.value),
                    text(b.sigma_hat.value),
                    text(b.gap.value),
                    text(b.gap.stderr),
                ]);
            }
            Ok(t.0)
        }
        Kind::DlimProfile => {
            check_range(p.d, p.d)?;
            check_samples(est.n())?;
            let d = Dimension::new(p.d)?;
            let points = p.points.clamp(2, 1000);
            let chain = ChainSpec::canonical(d, p.d - 2)?;
            let reach = wedge_domain(d)?.max_radius();
            let xs: Vec<[f64; 2]> = (0..points)
                .map(|k| [reach * k as f64 / (points - 1) as f64, 0.0])
                .collect();
            let prof = est.dlim_profile(&chain, &xs)?;
            let mut t = Tsv::new(kind, est, &["norm_x", "estimate", "stderr", "nonincreasing"]);
            for (k, x) in xs.iter().enumerate() {
                // against the previous point, on paired draws
                let ok = k == 0 || prof.means[points + k - 1] >= -BAND * prof.stderrs[points + k - 1];
                t.row(&[
                    text(x[0]),
                    text(prof.means[k]),
                    text(prof.stderrs[k]),
                    if ok { "yes" } else { "no" }.to_string(),
                ]);
            }
            Ok(t.0)
        }
        Kind::GRatio => {
            check_range(p.d, p.d)?;
            let d = Dimension::new(p.d)?;
            let points = p.points.max(2);
            let (lo, hi) = truncation_interval(d);
            let mut t = Tsv::new(kind, est, &["h", "g0", "g", "ratio"]);
            for k in 0..points {
                let h = lo + (hi - lo) * k as f64 / points as f64;
                let r = truncation_scalars(d, h)?;
                t.row(&[text(h), text(r.g0), text(r.g), text(r.ratio())]);
            }
            Ok(t.0)
        }
    }
}
