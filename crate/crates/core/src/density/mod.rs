//! Solid-angle densities of cones whose apex is the ball centre.
//!
//! For a cone `[o, Q]` with base `Q` in the hyperplane at distance `xi_1`
//! from the apex, the unit sphere's surface density is
//! `SVol(cone ∩ S) / Vol(Q) = E[xi_1 |Y|^{-d}]` with `Y` uniform on `Q`.
//! Every cone built here has `xi_1 = 1` for the canonical chain, and then the
//! volume density of the unit ball in the cone equals this surface density
//! (`h * delta = surface density` with height `h = 1`). So `sigma`,
//! `lambda` and `sigma_hat` are computed as surface densities and reported
//! as the volume densities they also are.

mod estimator;
mod jobs;
mod quadrature;

use alloc::vec::Vec;

pub use estimator::{ChannelEstimate, Estimator, Executor, Job, Moments, Sequential, BLOCK, STRATA};
pub use jobs::{ConfigsJob, GridAverageJob, LimitJob};
pub use quadrature::{quadrature_density, QuadratureGrid, MAX_QUADRATURE_DIM};

use crate::formulas::reference_bounds;
use crate::gauss::GaussLegendre;
use crate::geometry::{sector_domain, triangle_domain, wedge_domain, ChainSpec, PlanarDomain, WedgeConfig};
use crate::{Dimension, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    MonteCarlo,
    Quadrature,
    ClosedForm,
}

/// A measured density with one standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
    pub method: Method,
}

impl DensityEstimate {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            n: 0,
            seed: 0,
            method: Method::ClosedForm,
        }
    }

    /// Combined error of two independent estimates.
    pub fn combined_stderr(&self, other: &Self) -> f64 {
        libm::hypot(self.stderr, other.stderr)
    }
}

impl ChannelEstimate {
    pub fn channel(&self, i: usize) -> DensityEstimate {
        DensityEstimate {
            value: self.means[i],
            stderr: self.stderrs[i],
            n: self.n,
            seed: self.seed,
            method: Method::MonteCarlo,
        }
    }
}

/// Every bound of one dimension, from a single paired pass.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundSet {
    pub d: usize,
    pub sigma: DensityEstimate,
    pub sigma_hat: DensityEstimate,
    pub lambda: DensityEstimate,
    /// `sigma - sigma_hat` from paired draws.
    pub gap: DensityEstimate,
    /// `sigma - lambda` from paired draws.
    pub lambda_gap: DensityEstimate,
    /// `sigma_hat - (area(tri) sigma + area(sector) lambda) / area(D)`.
    pub combination: DensityEstimate,
    pub voronoi_volume_lower: f64,
    pub voronoi_surface_lower: f64,
}

impl BoundSet {
    /// Whether `sigma_hat < sigma` is resolved at `k` standard errors.
    pub fn improved(&self, k: f64) -> bool {
        self.gap.value > k * self.gap.stderr
    }
}

impl<'a> Estimator<'a> {
    pub fn surface_density(&self, config: &WedgeConfig) -> Result<DensityEstimate> {
        let job = ConfigsJob::new(alloc::vec![config.clone()], Vec::new())?;
        Ok(self.run(&job)?.channel(0))
    }

    /// Paired estimate over several configurations sharing dimension and
    /// variant, with extra channels for the given linear combinations.
    pub fn paired(&self, configs: Vec<WedgeConfig>, combos: Vec<Vec<f64>>) -> Result<ChannelEstimate> {
        self.run(&ConfigsJob::new(configs, combos)?)
    }

    /// `density(a) - density(b)` from common draws: channels `[a, b, a - b]`.
    pub fn paired_difference(&self, a: &WedgeConfig, b: &WedgeConfig) -> Result<[DensityEstimate; 3]> {
        let est = self.paired(alloc::vec![a.clone(), b.clone()], alloc::vec![alloc::vec![1.0, -1.0]])?;
        Ok([est.channel(0), est.channel(1), est.channel(2)])
    }

    pub fn sigma(&self, d: Dimension) -> Result<DensityEstimate> {
        self.surface_density(&WedgeConfig::canonical_simplex(d)?)
    }

    pub fn lambda(&self, d: Dimension) -> Result<DensityEstimate> {
        self.surface_density(&WedgeConfig::canonical_wedge(d, sector_domain(d)?)?)
    }

    pub fn sigma_hat(&self, d: Dimension) -> Result<DensityEstimate> {
        self.surface_density(&WedgeConfig::canonical_wedge(d, wedge_domain(d)?)?)
    }

    /// One paired pass over the triangle wedge (the orthoscheme cone), the
    /// full wedge and the sector wedge.
    pub fn bound_set(&self, d: Dimension) -> Result<BoundSet> {
        let d = d.require(4, "the wedge bound")?;
        let (tri, sec, full) = (triangle_domain(d)?, sector_domain(d)?, wedge_domain(d)?);
        let (at, asec, ad) = (tri.area(), sec.area(), full.area());
        let configs = alloc::vec![
            WedgeConfig::canonical_wedge(d, tri)?,
            WedgeConfig::canonical_wedge(d, full)?,
            WedgeConfig::canonical_wedge(d, sec)?,
        ];
        let combos = alloc::vec![
            alloc::vec![1.0, -1.0, 0.0],
            alloc::vec![1.0, 0.0, -1.0],
            alloc::vec![-at / ad, 1.0, -asec / ad],
        ];
        let est = self.paired(configs, combos)?;
        let sigma_hat = est.channel(1);
        let (voronoi_volume_lower, voronoi_surface_lower) = voronoi_bounds(d, &sigma_hat)?;
        Ok(BoundSet {
            d: d.get(),
            sigma: est.channel(0),
            sigma_hat,
            lambda: est.channel(2),
            gap: est.channel(3),
            lambda_gap: est.channel(4),
            combination: est.channel(5),
            voronoi_volume_lower,
            voronoi_surface_lower,
        })
    }

    /// Surface density of the join `[o, r_1, ..., r_{d-3}, x]` collapsed
    /// onto the point `x` of the terminal plane (local coordinates).
    pub fn limiting_surface_density(&self, chain: &ChainSpec, x: [f64; 2]) -> Result<DensityEstimate> {
        Ok(self.run(&LimitJob::new(chain.clone(), &[x], Vec::new())?)?.channel(0))
    }

    /// Collapsed densities at several points from common draws, followed by
    /// the consecutive differences `f(x_k) - f(x_{k+1})`.
    pub fn dlim_profile(&self, chain: &ChainSpec, points: &[[f64; 2]]) -> Result<ChannelEstimate> {
        let k = points.len();
        let combos = (0..k.saturating_sub(1))
            .map(|i| {
                let mut c = alloc::vec![0.0; k];
                c[i] = 1.0;
                c[i + 1] = -1.0;
                c
            })
            .collect();
        self.run(&LimitJob::new(chain.clone(), points, combos)?)
    }

    /// Grid average of the collapsed density over `domain` against the
    /// direct wedge estimate: channels `[average, direct, average - direct]`.
    pub fn grid_average(
        &self,
        chain: &ChainSpec,
        domain: &PlanarDomain,
        n_theta: usize,
        n_r: usize,
    ) -> Result<[DensityEstimate; 3]> {
        let nodes = polar_grid(domain, n_theta, n_r);
        let est = self.run(&GridAverageJob::new(chain.clone(), domain.clone(), nodes)?)?;
        Ok([est.channel(0), est.channel(1), est.channel(2)])
    }
}

/// Polar Gauss-Legendre grid over each angular piece: `(|x|, weight)` with
/// the weights summing to the area.
pub fn polar_grid(domain: &PlanarDomain, n_theta: usize, n_r: usize) -> Vec<(f64, f64)> {
    let gt = GaussLegendre::new(n_theta.max(1));
    let gr = GaussLegendre::new(n_r.max(1));
    let mut nodes = Vec::with_capacity(domain.pieces().len() * n_theta * n_r);
    for piece in domain.pieces() {
        for (theta, wt) in gt.mapped(piece.start, piece.end) {
            let rmax = piece.radius_at(theta);
            for (r, wr) in gr.mapped(0.0, rmax) {
                nodes.push((r, wt * wr * r));
            }
        }
    }
    nodes
}

/// Sequential Monte-Carlo surface density.
pub fn surface_density(config: &WedgeConfig, n: u64, seed: u64) -> Result<DensityEstimate> {
    Estimator::new(n, seed).surface_density(config)
}

pub fn sigma(d: Dimension, n: u64, seed: u64) -> Result<DensityEstimate> {
    Estimator::new(n, seed).sigma(d)
}

pub fn lambda(d: Dimension, n: u64, seed: u64) -> Result<DensityEstimate> {
    Estimator::new(n, seed).lambda(d)
}

pub fn sigma_hat(d: Dimension, n: u64, seed: u64) -> Result<DensityEstimate> {
    Estimator::new(n, seed).sigma_hat(d)
}

pub fn bound_set(d: Dimension, n: u64, seed: u64) -> Result<BoundSet> {
    Estimator::new(n, seed).bound_set(d)
}

pub fn limiting_surface_density(chain: &ChainSpec, x: [f64; 2], n: u64, seed: u64) -> Result<DensityEstimate> {
    Estimator::new(n, seed).limiting_surface_density(chain, x)
}

/// `(omega_d / sigma_hat, d omega_d / sigma_hat)`: lower bounds on the
/// volume and surface area of a Voronoi cell of a unit-ball packing.
pub fn voronoi_bounds(d: Dimension, sigma_hat: &DensityEstimate) -> Result<(f64, f64)> {
    if !(sigma_hat.value > 0.0) {
        return Err(Error::NonPositiveDensity(sigma_hat.value));
    }
    let omega = reference_bounds(d).omega_d;
    let volume = omega / sigma_hat.value;
    Ok((volume, d.as_f64() * volume))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use libm::sqrt;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn sigma_two_and_three_anchors() {
        let s2 = sigma(dim(2), 200_000, 1).unwrap();
        assert!((s2.value - PI / (2.0 * sqrt(3.0))).abs() < 3.0 * s2.stderr + 1e-12);
        let s3 = sigma(dim(3), 200_000, 1).unwrap();
        let exact = (4.0 * (3.0 * libm::acos(1.0 / 3.0) - PI) / 3.0) / (2.0 * sqrt(2.0) / 3.0);
        assert!((s3.value - exact).abs() < 3.0 * s3.stderr);
    }

    #[test]
    fn determinism_and_executor_independence() {
        let d = dim(6);
        let a = sigma_hat(d, 50_000, 9).unwrap();
        let b = sigma_hat(d, 50_000, 9).unwrap();
        assert_eq!(a, b);
        let c = sigma_hat(d, 50_000, 10).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn bound_set_consistency() {
        let b = bound_set(dim(8), 200_000, 3).unwrap();
        assert!(b.sigma.value > b.sigma_hat.value && b.sigma_hat.value > b.lambda.value);
        assert!((b.gap.value - (b.sigma.value - b.sigma_hat.value)).abs() < 1e-12);
        assert!(b.combination.value.abs() < 3.0 * b.combination.stderr + 1e-15);
        assert!(b.improved(5.0));
    }

    #[test]
    fn integrand_bounds_hold_for_every_channel() {
        let b = bound_set(dim(5), 20_000, 4).unwrap();
        let lo = libm::pow(10.0 / 6.0, -2.5);
        for e in [b.sigma, b.sigma_hat, b.lambda] {
            assert!(e.value > lo && e.value < 1.0);
        }
    }

    #[test]
    fn voronoi_bounds_examples() {
        let exact = DensityEstimate::closed_form(PI / (2.0 * sqrt(3.0)));
        let (v, s) = voronoi_bounds(dim(2), &exact).unwrap();
        assert!((v - 2.0 * sqrt(3.0)).abs() < 1e-12);
        assert!((s - 4.0 * sqrt(3.0)).abs() < 1e-12);
        assert!(voronoi_bounds(dim(2), &DensityEstimate::closed_form(0.0)).is_err());
        let (_, s8) = voronoi_bounds(dim(8), &DensityEstimate::closed_form(0.25)).unwrap();
        assert!((s8 - 8.0 * PI.powi(4) / 24.0 / 0.25).abs() < 1e-9);
    }

    #[test]
    fn polar_grid_weights_sum_to_area() {
        let dom = wedge_domain(dim(8)).unwrap();
        let total: f64 = polar_grid(&dom, 20, 40).iter().map(|n| n.1).sum();
        assert!((total - dom.area()).abs() < 1e-14);
    }

    #[test]
    fn profile_is_exactly_monotone_under_common_draws() {
        let chain = ChainSpec::canonical(dim(8), 6).unwrap();
        let pts: Vec<[f64; 2]> = (0..6).map(|i| [0.05 * i as f64, 0.0]).collect();
        let est = Estimator::new(20_000, 1).dlim_profile(&chain, &pts).unwrap();
        for k in 0..5 {
            assert!(est.means[k] >= est.means[k + 1]);
            assert!(est.means[6 + k] >= 0.0);
        }
    }
}
