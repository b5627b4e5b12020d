//! Verification runs over the check registry.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use wedgebound_core::density::Estimator;
use wedgebound_core::verify::{self, CheckEntry, CheckReport, Outcome, Overrides};

use crate::bounds::Meta;
use crate::numfmt::sig;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub meta: Meta,
    pub outcome: Outcome,
    pub checks: Vec<CheckReport>,
}

impl VerifyReport {
    /// 0 pass, 1 any failure, 3 inconclusive without failures.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Pass | Outcome::ExpectedOutsideDomain => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 3,
        }
    }

    pub fn json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let d = c.d.map(|d| format!(" d={d}")).unwrap_or_default();
            let _ = writeln!(out, "{:<13} {}{}: {}", c.outcome.as_str(), c.name, d, c.summary);
            if let Some(w) = &c.witness {
                let coords: Vec<String> = w.coords.iter().map(|m| format!("{}={}", m.name, m.value)).collect();
                let _ = writeln!(out, "{:13} witness ({}): {}", "", w.label, coords.join(" "));
            }
            if let Some(r) = &c.recommendation {
                let _ = writeln!(out, "{:13} {r}", "");
            }
        }
        let _ = writeln!(
            out,
            "overall: {} (seed {}, n = {})",
            self.outcome.as_str(),
            self.meta.seed,
            self.meta.n
        );
        out
    }
}

/// Resolves `all` or a list of check names against the registry.
pub fn select(names: &[String]) -> Result<Vec<&'static CheckEntry>, CliError> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(verify::registry().iter().collect());
    }
    names
        .iter()
        .map(|n| {
            verify::find(n).ok_or_else(|| {
                let known: Vec<&str> = verify::registry().iter().map(|c| c.name).collect();
                CliError::Usage(format!("unknown check {n:?}; known checks: all, {}", known.join(", ")))
            })
        })
        .collect()
}

fn tidy(mut r: CheckReport) -> CheckReport {
    let fix = |v: &mut f64| *v = sig(*v);
    r.metrics.iter_mut().for_each(|m| fix(&mut m.value));
    if let Some(w) = r.witness.as_mut() {
        w.coords.iter_mut().for_each(|m| fix(&mut m.value));
    }
    r
}

pub fn run(est: &Estimator<'_>, checks: &[&CheckEntry], overrides: &Overrides) -> Result<VerifyReport, CliError> {
    let mut all = Vec::new();
    for c in checks {
        all.extend(c.run(est, overrides)?.into_iter().map(tidy));
    }
    Ok(VerifyReport {
        meta: Meta::new(est),
        outcome: verify::overall(&all),
        checks: all,
    })
}
