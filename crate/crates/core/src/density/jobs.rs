//! Integrands `xi_1 |Y|^{-d}` for one or several bases sharing a draw.

use alloc::format;
use alloc::vec::Vec;

use libm::pow;

use super::estimator::Job;
use crate::geometry::{ChainSpec, PlanarDomain, WedgeConfig};
use crate::rng::UniformSource;
use crate::sampling::{dirichlet_uniform, BetaInt};
use crate::{Error, Result};

/// `|Y|^2` of a simplex-variant base point, `eta_1^2 + t^2 sum_{i>=2}
/// eta_i^2 S_i^2` with `S_i` the tail sums of the weights.
#[inline]
fn simplex_norm2(eta: &[f64], t: f64, weights: &[f64]) -> f64 {
    let mut tail = 1.0;
    let mut acc = 0.0;
    for i in 1..eta.len() {
        let y = eta[i] * tail;
        acc += y * y;
        tail -= weights[i - 1];
    }
    eta[0] * eta[0] + t * t * acc
}

/// Squared norm of the first `d-2` coordinates of a wedge base point:
/// `sum_i eta_i^2 ((1-t) S_i + t)^2`.
#[inline]
pub(crate) fn wedge_norm2(eta: &[f64], t: f64, weights: &[f64]) -> f64 {
    let mut tail = 1.0;
    let mut acc = 0.0;
    for (i, &e) in eta.iter().enumerate() {
        let s = if i < weights.len() { tail } else { 0.0 };
        let y = e * ((1.0 - t) * s + t);
        acc += y * y;
        if i < weights.len() {
            tail -= weights[i];
        }
    }
    acc
}

#[inline]
fn integrand(xi1: f64, norm2: f64, half_d: f64) -> f64 {
    xi1 * pow(norm2, -half_d)
}

/// Several cones of the same variant and dimension, evaluated at one
/// shared draw (common random numbers). Channels are the per-config
/// integrands followed by the requested linear combinations of them.
#[derive(Clone, Debug)]
pub struct ConfigsJob {
    configs: Vec<WedgeConfig>,
    combos: Vec<Vec<f64>>,
    half_d: f64,
}

impl ConfigsJob {
    pub fn new(configs: Vec<WedgeConfig>, combos: Vec<Vec<f64>>) -> Result<Self> {
        let first = configs
            .first()
            .ok_or_else(|| Error::Config("no configurations to estimate".into()))?;
        for c in &configs[1..] {
            if c.dim() != first.dim() || c.is_simplex() != first.is_simplex() {
                return Err(Error::Config(
                    "paired configurations must share dimension and variant".into(),
                ));
            }
        }
        for combo in &combos {
            if combo.len() != configs.len() {
                return Err(Error::Config(format!(
                    "combination has {} coefficients for {} configurations",
                    combo.len(),
                    configs.len()
                )));
            }
        }
        let half_d = first.dim().as_f64() / 2.0;
        Ok(Self {
            configs,
            combos,
            half_d,
        })
    }
}

impl Job for ConfigsJob {
    fn channels(&self) -> usize {
        self.configs.len() + self.combos.len()
    }

    fn join_law(&self) -> BetaInt {
        self.configs[0].join_law()
    }

    fn scratch_len(&self) -> usize {
        self.configs[0].weight_count()
    }

    fn eval(&self, t: f64, rng: &mut dyn UniformSource, weights: &mut [f64], out: &mut [f64]) {
        dirichlet_uniform(rng, weights);
        let k = self.configs.len();
        if self.configs[0].is_simplex() {
            for (o, cfg) in out.iter_mut().zip(&self.configs) {
                let chain = cfg.chain();
                *o = integrand(
                    chain.apex_distance(),
                    simplex_norm2(chain.heights(), t, weights),
                    self.half_d,
                );
            }
        } else {
            let (u1, u2) = (rng.next_f64(), rng.next_f64());
            for (o, cfg) in out.iter_mut().zip(&self.configs) {
                let chain = cfg.chain();
                let r = cfg.domain().map_or(0.0, |dom| dom.sample_norm(u1, u2));
                let n2 = wedge_norm2(chain.heights(), t, weights) + t * t * r * r;
                *o = integrand(chain.apex_distance(), n2, self.half_d);
            }
        }
        for (j, combo) in self.combos.iter().enumerate() {
            out[k + j] = combo.iter().zip(&out[..k]).map(|(c, f)| c * f).sum();
        }
    }
}

/// The join collapsed onto points of the terminal plane: channel `k` is
/// `xi_1 |(1-t) p + t x_k|^{-d}` for lifted points at distances `|x_k|`
/// from the chain endpoint, followed by linear combinations.
#[derive(Clone, Debug)]
pub struct LimitJob {
    chain: ChainSpec,
    radii: Vec<f64>,
    combos: Vec<Vec<f64>>,
    half_d: f64,
}

impl LimitJob {
    pub fn new(chain: ChainSpec, points: &[[f64; 2]], combos: Vec<Vec<f64>>) -> Result<Self> {
        let d = chain.dim().require(4, "a limiting surface density")?;
        if chain.len() != d.get() - 2 {
            return Err(Error::Config(format!(
                "limiting density needs {} chain levels, got {}",
                d.get() - 2,
                chain.len()
            )));
        }
        if points.is_empty() {
            return Err(Error::Config("no points".into()));
        }
        let mut radii = Vec::with_capacity(points.len());
        for x in points {
            if !(x[0].is_finite() && x[1].is_finite()) {
                return Err(Error::Config(format!("point {x:?} is not finite")));
            }
            radii.push(libm::sqrt(x[0] * x[0] + x[1] * x[1]));
        }
        for combo in &combos {
            if combo.len() != radii.len() {
                return Err(Error::Config("combination length differs from point count".into()));
            }
        }
        Ok(Self {
            half_d: d.as_f64() / 2.0,
            chain,
            radii,
            combos,
        })
    }
}

impl Job for LimitJob {
    fn channels(&self) -> usize {
        self.radii.len() + self.combos.len()
    }

    fn join_law(&self) -> BetaInt {
        BetaInt::new(3, self.chain.dim().get() as u32 - 3)
    }

    fn scratch_len(&self) -> usize {
        self.chain.dim().get() - 3
    }

    fn eval(&self, t: f64, rng: &mut dyn UniformSource, weights: &mut [f64], out: &mut [f64]) {
        dirichlet_uniform(rng, weights);
        let base = wedge_norm2(self.chain.heights(), t, weights);
        let xi1 = self.chain.apex_distance();
        let k = self.radii.len();
        for (o, r) in out.iter_mut().zip(&self.radii) {
            *o = integrand(xi1, base + t * t * r * r, self.half_d);
        }
        for (j, combo) in self.combos.iter().enumerate() {
            out[k + j] = combo.iter().zip(&out[..k]).map(|(c, f)| c * f).sum();
        }
    }
}

/// Integral representation over the domain. Channel 0 is the area-weighted
/// average of the collapsed integrand over a fixed quadrature grid of the
/// domain, channel 1 the ordinary wedge integrand with `q` uniform on the
/// domain, channel 2 their difference.
#[derive(Clone, Debug)]
pub struct GridAverageJob {
    chain: ChainSpec,
    domain: PlanarDomain,
    nodes: Vec<(f64, f64)>,
    half_d: f64,
}

impl GridAverageJob {
    /// `nodes` are `(|x|, weight)` pairs whose weights sum to the domain
    /// area.
    pub fn new(chain: ChainSpec, domain: PlanarDomain, nodes: Vec<(f64, f64)>) -> Result<Self> {
        let d = chain.dim().require(4, "a limiting surface density")?;
        if chain.len() != d.get() - 2 {
            return Err(Error::Config("limiting density needs d-2 chain levels".into()));
        }
        let area: f64 = nodes.iter().map(|n| n.1).sum();
        let nodes = nodes.into_iter().map(|(r, w)| (r * r, w / area)).collect();
        Ok(Self {
            half_d: d.as_f64() / 2.0,
            chain,
            domain,
            nodes,
        })
    }
}

impl Job for GridAverageJob {
    fn channels(&self) -> usize {
        3
    }

    fn join_law(&self) -> BetaInt {
        BetaInt::new(3, self.chain.dim().get() as u32 - 3)
    }

    fn scratch_len(&self) -> usize {
        self.chain.dim().get() - 3
    }

    fn eval(&self, t: f64, rng: &mut dyn UniformSource, weights: &mut [f64], out: &mut [f64]) {
        dirichlet_uniform(rng, weights);
        let base = wedge_norm2(self.chain.heights(), t, weights);
        let xi1 = self.chain.apex_distance();
        let t2 = t * t;
        let avg: f64 = self
            .nodes
            .iter()
            .map(|&(r2, w)| w * integrand(xi1, base + t2 * r2, self.half_d))
            .sum();
        let r = self.domain.sample_norm(rng.next_f64(), rng.next_f64());
        let direct = integrand(xi1, base + t2 * r * r, self.half_d);
        out[0] = avg;
        out[1] = direct;
        out[2] = avg - direct;
    }
}
