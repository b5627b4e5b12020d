use alloc::format;
use alloc::vec::Vec;

use libm::sqrt;

use super::chain::ChainSpec;
use super::domain::{triangle_and_sector, PlanarDomain};
use crate::formulas::{chain_height, sector_geometry, truncation_scalars, ENDPOINT_TOL};
use crate::rng::UniformSource;
use crate::sampling::{dirichlet_uniform, BetaInt};
use crate::special::factorial;
use crate::{Dimension, Error, Result};

/// A cone with apex at the origin over a `(d-1)`-dimensional base.
///
/// `Simplex` is the orthoscheme cone over `conv{r_1, ..., r_d}`. `Wedge` is
/// the cone over the join of `conv{r_1, ..., r_{d-3}}` with a planar domain
/// placed in the 2-plane through `r_{d-2}` spanned by `e_{d-1}, e_d`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WedgeConfig {
    Simplex { chain: ChainSpec },
    Wedge { chain: ChainSpec, domain: PlanarDomain },
}

impl WedgeConfig {
    pub fn simplex(chain: ChainSpec) -> Result<Self> {
        if chain.len() != chain.dim().get() {
            return Err(Error::Config(format!(
                "a simplex cone needs {} chain levels, got {}",
                chain.dim(),
                chain.len()
            )));
        }
        Ok(Self::Simplex { chain })
    }

    pub fn wedge(chain: ChainSpec, domain: PlanarDomain) -> Result<Self> {
        let d = chain.dim().require(4, "a wedge")?;
        if chain.len() != d.get() - 2 {
            return Err(Error::Config(format!(
                "a wedge in dimension {d} needs {} chain levels, got {}",
                d.get() - 2,
                chain.len()
            )));
        }
        Ok(Self::Wedge { chain, domain })
    }

    pub fn canonical_simplex(d: Dimension) -> Result<Self> {
        Self::simplex(ChainSpec::canonical(d, d.get())?)
    }

    /// The canonical wedge over `domain`.
    pub fn canonical_wedge(d: Dimension, domain: PlanarDomain) -> Result<Self> {
        let d = d.require(4, "a wedge")?;
        Self::wedge(ChainSpec::canonical(d, d.get() - 2)?, domain)
    }

    pub fn chain(&self) -> &ChainSpec {
        match self {
            Self::Simplex { chain } | Self::Wedge { chain, .. } => chain,
        }
    }

    pub fn domain(&self) -> Option<&PlanarDomain> {
        match self {
            Self::Simplex { .. } => None,
            Self::Wedge { domain, .. } => Some(domain),
        }
    }

    pub fn dim(&self) -> Dimension {
        self.chain().dim()
    }

    pub fn is_simplex(&self) -> bool {
        matches!(self, Self::Simplex { .. })
    }

    /// Law of the join parameter `t` in [`sample_base`].
    pub fn join_law(&self) -> BetaInt {
        let d = self.dim().get() as u32;
        match self {
            Self::Simplex { .. } => BetaInt::new(d - 1, 1),
            Self::Wedge { .. } => BetaInt::new(3, d - 3),
        }
    }

    /// Number of simplex weights drawn per base point.
    pub(crate) fn weight_count(&self) -> usize {
        let d = self.dim().get();
        match self {
            Self::Simplex { .. } => d - 1,
            Self::Wedge { .. } => d - 3,
        }
    }
}

/// Triangle `w_{d-2} w_{d-1} w_d` in local coordinates of the terminal plane.
pub fn triangle_domain(d: Dimension) -> Result<PlanarDomain> {
    let g = sector_geometry(d)?;
    Ok(triangle_and_sector(chain_height(d.get() - 1), g.alpha)?.0)
}

/// Sector `w_{d-2} w_d w_{d+1}` of radius `2/sqrt(d^2-1)`, central angle
/// `pi/4 - alpha`.
pub fn sector_domain(d: Dimension) -> Result<PlanarDomain> {
    let g = sector_geometry(d)?;
    Ok(triangle_and_sector(chain_height(d.get() - 1), g.alpha)?.1)
}

/// The domain `D`: triangle plus sector, a convex set with a right angle of
/// `pi/4` at the origin.
pub fn wedge_domain(d: Dimension) -> Result<PlanarDomain> {
    let g = sector_geometry(d)?;
    let (tri, sec) = triangle_and_sector(chain_height(d.get() - 1), g.alpha)?;
    PlanarDomain::union(&[tri, sec])
}

#[derive(Clone, Debug, PartialEq)]
pub enum TruncationShape {
    Disc,
    /// Square of half-width `g(h)` centred at the chain endpoint.
    DiscCapSquare,
    /// Convex polygon given by its vertices; each vertex must lie outside
    /// the open `g0` disc and each side at distance at least `g(h)`.
    DiscCapPolygon(Vec<[f64; 2]>),
}

/// The `g0(h)` disc intersected with the requested shape.
pub fn truncation_domain(d: Dimension, h: f64, shape: &TruncationShape) -> Result<PlanarDomain> {
    let r = truncation_scalars(d, h)?;
    match shape {
        TruncationShape::Disc => PlanarDomain::disc(r.g0),
        TruncationShape::DiscCapSquare => PlanarDomain::disc_cap_square(r.g0, r.g),
        TruncationShape::DiscCapPolygon(vertices) => {
            check_admissible_polygon(vertices, r.g0, r.g)?;
            PlanarDomain::disc_cap_polygon(r.g0, vertices)
        }
    }
}

fn check_admissible_polygon(vertices: &[[f64; 2]], g0: f64, g: f64) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::Domain(format!("polygon with {n} vertices")));
    }
    for (i, v) in vertices.iter().enumerate() {
        let norm = sqrt(v[0] * v[0] + v[1] * v[1]);
        if norm < g0 - ENDPOINT_TOL {
            return Err(Error::Domain(format!(
                "vertex {i} at distance {norm} lies inside the g0 disc ({g0})"
            )));
        }
        let w = vertices[(i + 1) % n];
        let edge = [w[0] - v[0], w[1] - v[1]];
        let len = sqrt(edge[0] * edge[0] + edge[1] * edge[1]);
        let dist = (v[0] * w[1] - v[1] * w[0]).abs() / len;
        if dist < g - ENDPOINT_TOL {
            return Err(Error::Domain(format!(
                "side {i} at distance {dist} is closer than g = {g}"
            )));
        }
    }
    Ok(())
}

/// Whether the ray from the origin through `u` meets the base.
pub fn cone_contains(config: &WedgeConfig, u: &[f64]) -> bool {
    let chain = config.chain();
    let d = chain.dim().get();
    assert_eq!(u.len(), d, "direction has the wrong dimension");
    if !(u[0] > 0.0) {
        return false;
    }
    let eta = chain.heights();
    let scale = chain.apex_distance() / u[0];
    let levels = match config {
        WedgeConfig::Simplex { .. } => d,
        WedgeConfig::Wedge { .. } => d - 2,
    };
    let mut prev = 1.0;
    for i in 1..levels {
        let s = scale * u[i] / eta[i];
        if s > prev + ENDPOINT_TOL {
            return false;
        }
        prev = s;
    }
    if prev < -ENDPOINT_TOL {
        return false;
    }
    match config {
        WedgeConfig::Simplex { .. } => true,
        WedgeConfig::Wedge { domain, .. } => {
            let a = prev;
            let (y1, y2) = (scale * u[d - 2], scale * u[d - 1]);
            if a <= ENDPOINT_TOL {
                return y1.abs() <= ENDPOINT_TOL && y2.abs() <= ENDPOINT_TOL;
            }
            domain.contains([y1 / a, y2 / a])
        }
    }
}

/// Uniform point of the base.
pub fn sample_base<R: UniformSource + ?Sized>(config: &WedgeConfig, rng: &mut R) -> Vec<f64> {
    let t = config.join_law().quantile(rng.next_f64());
    let mut weights = alloc::vec![0.0; config.weight_count()];
    let mut point = alloc::vec![0.0; config.dim().get()];
    base_point(config, t, rng, &mut weights, &mut point);
    point
}

/// Base point for join parameter `t`; remaining randomness from `rng`.
pub(crate) fn base_point<R: UniformSource + ?Sized>(
    config: &WedgeConfig,
    t: f64,
    rng: &mut R,
    weights: &mut [f64],
    point: &mut [f64],
) {
    let eta = config.chain().heights();
    dirichlet_uniform(rng, weights);
    match config {
        // (1 - t) r_1 + t q with q uniform on conv{r_2, ..., r_d}
        WedgeConfig::Simplex { .. } => {
            point[0] = eta[0];
            let mut tail = 1.0;
            for i in 1..point.len() {
                point[i] = t * tail * eta[i];
                tail -= weights[i - 1];
            }
        }
        // (1 - t) p + t (r_{d-2} + q) with p uniform on conv{r_1, ..., r_{d-3}}
        WedgeConfig::Wedge { domain, .. } => {
            let d = point.len();
            let mut tail = 1.0;
            for i in 0..d - 2 {
                let s = if i < weights.len() { tail } else { 0.0 };
                point[i] = eta[i] * ((1.0 - t) * s + t);
                if i < weights.len() {
                    tail -= weights[i];
                }
            }
            let q = domain.sample(rng.next_f64(), rng.next_f64());
            point[d - 2] = t * q[0];
            point[d - 1] = t * q[1];
        }
    }
}

/// `(d-1)`-volume of the base.
pub fn base_volume(config: &WedgeConfig) -> f64 {
    let d = config.dim().get();
    let eta = config.chain().heights();
    match config {
        WedgeConfig::Simplex { .. } => eta[1..].iter().product::<f64>() / factorial(d - 1),
        WedgeConfig::Wedge { domain, .. } => {
            2.0 / factorial(d - 1) * eta[1..d - 2].iter().product::<f64>() * domain.area()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::floor_radius;
    use crate::rng::Stream;
    use core::f64::consts::PI;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn wedge_domain_d8() {
        let d = dim(8);
        let (t, s, w) = (
            triangle_domain(d).unwrap(),
            sector_domain(d).unwrap(),
            wedge_domain(d).unwrap(),
        );
        assert!((t.area() - 0.015_748_5).abs() < 1e-7);
        assert!((s.area() - 0.001_989_4).abs() < 1e-7);
        assert!((w.area() - 0.017_737_9).abs() < 1e-7);
        assert!((w.area() - t.area() - s.area()).abs() < 1e-17);
        let (h7, h8) = (chain_height(7), chain_height(8));
        assert!(w.contains([h7, h8 / 2.0]));
        let ang = PI / 4.0 + 0.01;
        assert!(!w.contains([0.2 * libm::cos(ang), 0.2 * libm::sin(ang)]));
        assert!(w.contains([h7, h8]));
    }

    #[test]
    fn truncation_areas_d8() {
        let d = dim(8);
        let h = floor_radius(6);
        let disc = truncation_domain(d, h, &TruncationShape::Disc).unwrap();
        assert!((disc.area() - PI * 4.0 / 63.0).abs() < 1e-14);
        let cap = truncation_domain(d, h, &TruncationShape::DiscCapSquare).unwrap();
        let g = crate::formulas::truncation_scalars(d, h).unwrap().g;
        assert!(cap.area() < disc.area() && cap.area() < 4.0 * g * g && cap.area() > PI * g * g);

        let boundary = sqrt(14.0 / 8.0);
        let disc = truncation_domain(d, boundary, &TruncationShape::Disc).unwrap();
        let cap = truncation_domain(d, boundary, &TruncationShape::DiscCapSquare).unwrap();
        assert!((disc.area() - cap.area()).abs() < 1e-12);
    }

    #[test]
    fn inadmissible_polygons_rejected() {
        let d = dim(8);
        let h = floor_radius(6);
        let r = truncation_scalars(d, h).unwrap();
        let near = 0.9 * r.g;
        let sq = |w: f64| TruncationShape::DiscCapPolygon(alloc::vec![[w, -w], [w, w], [-w, w], [-w, -w]]);
        assert!(truncation_domain(d, h, &sq(near)).is_err());
        assert!(truncation_domain(d, h, &sq(r.g)).is_ok());
        assert!(truncation_domain(d, 1.0, &TruncationShape::Disc).is_err());
    }

    #[test]
    fn cone_contains_basics() {
        let cfg = WedgeConfig::canonical_simplex(dim(6)).unwrap();
        let wd = cfg.chain().endpoint();
        assert!(cone_contains(&cfg, &wd));
        let mut neg = alloc::vec![0.0; 6];
        neg[0] = -1.0;
        assert!(!cone_contains(&cfg, &neg));
        let scaled: Vec<f64> = wd.iter().map(|x| 3.7 * x).collect();
        assert!(cone_contains(&cfg, &scaled));
    }

    #[test]
    fn samples_lie_in_their_cone_with_right_norms() {
        let d = dim(8);
        let configs = [
            WedgeConfig::canonical_simplex(d).unwrap(),
            WedgeConfig::canonical_wedge(d, wedge_domain(d).unwrap()).unwrap(),
        ];
        let reach = sqrt(16.0 / 9.0) + 1e-12;
        for cfg in &configs {
            let mut rng = Stream::new(2, 9);
            for _ in 0..20_000 {
                let y = sample_base(cfg, &mut rng);
                assert!((y[0] - 1.0).abs() < 1e-15);
                assert!(cone_contains(cfg, &y));
                let n = sqrt(y.iter().map(|x| x * x).sum::<f64>());
                assert!((1.0..=reach).contains(&n));
            }
        }
    }

    #[test]
    fn base_volume_closed_forms() {
        let d = dim(8);
        let w = WedgeConfig::canonical_wedge(d, wedge_domain(d).unwrap()).unwrap();
        let prod = sqrt(32.0 / (2.0 * 3.0 * 3.0 * 4.0 * 4.0 * 5.0 * 5.0 * 6.0 * 6.0 * 7.0));
        let want = 2.0 / 5040.0 * prod * wedge_domain(d).unwrap().area();
        assert!((base_volume(&w) - want).abs() < 1e-15 * want.max(1.0));
        let s2 = WedgeConfig::canonical_simplex(dim(2)).unwrap();
        assert!((base_volume(&s2) - 1.0 / sqrt(3.0)).abs() < 1e-15);

        // simplex = wedge over the triangle
        let tri = WedgeConfig::canonical_wedge(d, triangle_domain(d).unwrap()).unwrap();
        let simplex = WedgeConfig::canonical_simplex(d).unwrap();
        assert!((base_volume(&tri) / base_volume(&simplex) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn config_validation() {
        let d = dim(6);
        assert!(WedgeConfig::simplex(ChainSpec::canonical(d, 4).unwrap()).is_err());
        assert!(WedgeConfig::wedge(ChainSpec::canonical(d, 6).unwrap(), wedge_domain(d).unwrap()).is_err());
        assert!(WedgeConfig::canonical_wedge(dim(3), PlanarDomain::disc(1.0).unwrap()).is_err());
    }
}
