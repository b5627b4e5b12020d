//! Deterministic quadrature for the same solid-angle integrals the
//! Monte-Carlo estimators sample.
//!
//! With base coordinates `y = (xi_1, eta_2 s_2, ..., eta_k s_k, a q)` the
//! integrand `|y|^{-d}` is separated through
//! `N^{-d/2} = Gamma(d/2)^{-1} int_0^inf tau^{d/2-1} e^{-tau N} dtau`.
//! For fixed `tau` the ordered-chain integral over `1 >= s_2 >= ... >= 0`
//! factorises into nested one-dimensional integrals, evaluated by cumulative
//! trapezoids on a uniform grid, and the planar factor
//! `T(c) = int_D e^{-c|q|^2} dq` is exact on arcs and Gauss-Legendre on line
//! pieces. The `tau` integral runs over `x = ln tau` with a trapezoid rule,
//! which converges geometrically for this doubly-decaying integrand.

use alloc::vec::Vec;

use libm::{exp, expm1, lgamma, log};

use super::{DensityEstimate, Method};
use crate::gauss::GaussLegendre;
use crate::geometry::{Boundary, PlanarDomain, WedgeConfig};
use crate::special::factorial;
use crate::{Error, Result};

/// Largest dimension accepted by [`quadrature_density`].
pub const MAX_QUADRATURE_DIM: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureGrid {
    /// Cells per chain variable on the coarse pass; the fine pass doubles it.
    pub cells: usize,
    /// Step in `ln tau`.
    pub log_step: f64,
    /// Gauss-Legendre nodes per line piece of the planar factor.
    pub line_nodes: usize,
    /// Largest accepted difference between the coarse and fine passes,
    /// relative to the value.
    pub tol: f64,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            cells: 512,
            log_step: 1.0 / 16.0,
            line_nodes: 24,
            tol: 1e-4,
        }
    }
}

/// `int_D e^{-c |q|^2} dq`.
struct PlanarFactor {
    arcs: Vec<(f64, f64)>,
    lines: Vec<(f64, f64)>,
}

impl PlanarFactor {
    fn new(domain: &PlanarDomain, rule: &GaussLegendre) -> Self {
        let mut arcs = Vec::new();
        let mut lines = Vec::new();
        for piece in domain.pieces() {
            match piece.boundary {
                Boundary::Arc { radius } => arcs.push((piece.end - piece.start, radius * radius)),
                Boundary::Line { .. } => {
                    for (theta, w) in rule.mapped(piece.start, piece.end) {
                        let r = piece.radius_at(theta);
                        lines.push((w, r * r));
                    }
                }
            }
        }
        Self { arcs, lines }
    }

    fn eval(&self, c: f64) -> f64 {
        let radial = |r2: f64| {
            if c * r2 < 1e-12 {
                0.5 * r2 * (1.0 - 0.5 * c * r2)
            } else {
                -expm1(-c * r2) / (2.0 * c)
            }
        };
        self.arcs.iter().map(|&(span, r2)| span * radial(r2)).sum::<f64>()
            + self.lines.iter().map(|&(w, r2)| w * radial(r2)).sum::<f64>()
    }
}

/// Cumulative trapezoid of `g` on a uniform grid, in place.
fn cumulative(values: &mut [f64], h: f64) {
    let mut acc = 0.0;
    let mut prev = values[0];
    values[0] = 0.0;
    for v in values.iter_mut().skip(1) {
        let cur = *v;
        acc += 0.5 * h * (prev + cur);
        prev = cur;
        *v = acc;
    }
}

/// Ordered-chain integral for one `tau` on a grid of `cells` cells.
fn chain_integral(
    eta: &[f64],
    levels: usize,
    tau: f64,
    cells: usize,
    terminal: Option<&PlanarFactor>,
    buf: &mut Vec<f64>,
) -> f64 {
    let h = 1.0 / cells as f64;
    buf.clear();
    buf.resize(cells + 1, 0.0);
    // innermost variable s_{levels}
    let last = eta[levels - 1];
    for (j, v) in buf.iter_mut().enumerate() {
        let s = j as f64 * h;
        let mut g = exp(-tau * last * last * s * s);
        if let Some(planar) = terminal {
            g *= s * s * planar.eval(tau * s * s);
        }
        *v = g;
    }
    cumulative(buf, h);
    for i in (1..levels - 1).rev() {
        let e = eta[i];
        for (j, v) in buf.iter_mut().enumerate() {
            let s = j as f64 * h;
            *v *= exp(-tau * e * e * s * s);
        }
        cumulative(buf, h);
    }
    buf[cells]
}

/// Solid-angle density of `config` by quadrature, with the coarse/fine
/// discrepancy as the reported error.
pub fn quadrature_density(config: &WedgeConfig, grid: QuadratureGrid) -> Result<DensityEstimate> {
    let d = config.dim().get();
    if d > MAX_QUADRATURE_DIM {
        return Err(Error::DimensionTooLarge {
            d,
            max: MAX_QUADRATURE_DIM,
            what: "quadrature cost guard",
        });
    }
    if grid.cells < 2 || !(grid.log_step > 0.0) || grid.line_nodes == 0 {
        return Err(Error::Config("degenerate quadrature grid".into()));
    }
    let chain = config.chain();
    let eta = chain.heights();
    let xi1 = chain.apex_distance();
    let rule = GaussLegendre::new(grid.line_nodes);
    let (levels, terminal, prefactor) = match config {
        WedgeConfig::Simplex { .. } => (d, None, factorial(d - 1)),
        WedgeConfig::Wedge { domain, .. } => (
            d - 2,
            Some(PlanarFactor::new(domain, &rule)),
            factorial(d - 1) / (2.0 * domain.area()),
        ),
    };
    let half_d = d as f64 / 2.0;
    let n_min = xi1 * xi1;
    let x_lo = log(half_d / n_min) - 80.0 / d as f64 - 4.0;
    let x_hi = log(4.0 * d as f64 + 80.0) - log(n_min);
    let steps = libm::ceil((x_hi - x_lo) / grid.log_step) as usize;
    let step = (x_hi - x_lo) / steps as f64;

    let mut buf = Vec::new();
    let mut pass = |cells: usize| -> f64 {
        let mut total = 0.0;
        for k in 0..=steps {
            let x = x_lo + k as f64 * step;
            let tau = exp(x);
            let weight = if k == 0 || k == steps { 0.5 } else { 1.0 };
            let chain_part = chain_integral(eta, levels, tau, cells, terminal.as_ref(), &mut buf);
            total += weight * exp(half_d * x - tau * n_min) * chain_part;
        }
        total * step * exp(-lgamma(half_d)) * xi1 * prefactor
    };
    let coarse = pass(grid.cells);
    let fine = pass(2 * grid.cells);
    let value = (4.0 * fine - coarse) / 3.0;
    let error = (fine - coarse).abs() / 3.0;
    if error > grid.tol * value.abs() {
        return Err(Error::Quadrature {
            diff: error,
            tol: grid.tol * value.abs(),
        });
    }
    Ok(DensityEstimate {
        value,
        stderr: error,
        n: (2 * grid.cells) as u64,
        seed: 0,
        method: Method::Quadrature,
    })
}
