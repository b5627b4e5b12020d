//! Cone membership against a linear-algebra oracle.
//!
//! A direction `u` lies in the cone over the base iff its coordinates in the
//! basis `w_1, ..., w_k, e_{k+1}, ..., e_d` are feasible: nonnegative chain
//! weights and, for wedges, a planar part inside the domain once divided by
//! the last weight. The solve goes through a dense LU, independent of the
//! coordinate comparisons `cone_contains` uses.

use nalgebra::{DMatrix, DVector};
use wedgebound_core::formulas::{chain_height, floor_radius, sector_geometry, truncation_scalars, type_boundary};
use wedgebound_core::geometry::{
    cone_contains, sample_base, sector_domain, triangle_domain, truncation_domain, wedge_domain, ChainSpec,
    TruncationShape, WedgeConfig,
};
use wedgebound_core::rng::{Stream, UniformSource};
use wedgebound_core::Dimension;

const BAND: f64 = 1e-9;
const DIRECTIONS: usize = 10_000;

/// Signed margin of a planar point: positive inside, negative outside.
type PlanarOracle = Box<dyn Fn(f64, f64) -> f64>;

fn d_oracle(d: Dimension, triangle: bool, sector: bool) -> PlanarOracle {
    let leg = chain_height(d.get() - 1);
    let g = sector_geometry(d).unwrap();
    let r = leg / g.alpha.cos();
    Box::new(move |x, y| {
        let theta = y.atan2(x);
        let ang = theta.min(std::f64::consts::FRAC_PI_4 - theta);
        let mut best = f64::NEG_INFINITY;
        if triangle {
            // 0 <= theta <= alpha and x <= leg
            best = best.max(theta.min(g.alpha - theta).min(leg - x));
        }
        if sector {
            best = best.max((theta - g.alpha).min(ang).min(r - x.hypot(y)));
        }
        best
    })
}

fn direction(rng: &mut Stream, d: usize) -> Vec<f64> {
    // Box-Muller normals; first coordinate folded positive
    let mut v: Vec<f64> = (0..d)
        .map(|_| {
            let (a, b) = (rng.next_f64(), rng.next_f64());
            (-2.0 * a.ln()).sqrt() * (std::f64::consts::TAU * b).cos()
        })
        .collect();
    v[0] = v[0].abs();
    v
}

/// Half the directions are jittered base points, so both answers occur.
fn directions(config: &WedgeConfig, seed: u64) -> Vec<Vec<f64>> {
    let d = config.dim().get();
    let mut rng = Stream::new(seed, 7);
    (0..DIRECTIONS)
        .map(|k| {
            if k % 2 == 0 {
                direction(&mut rng, d)
            } else {
                let mut p = sample_base(config, &mut rng);
                for x in p.iter_mut() {
                    *x += 0.02 * (rng.next_f64() - 0.5);
                }
                p
            }
        })
        .collect()
}

/// Returns `(inside, margin)` from the LU solve.
fn oracle(config: &WedgeConfig, planar: Option<&PlanarOracle>, u: &[f64]) -> (bool, f64) {
    let chain = config.chain();
    let d = chain.dim().get();
    let k = chain.len();
    let mut m = DMatrix::<f64>::zeros(d, d);
    for j in 0..k {
        let w = chain.vertex(j + 1);
        for i in 0..d {
            m[(i, j)] = w[i];
        }
    }
    for j in k..d {
        m[(j, j)] = 1.0;
    }
    let c = m
        .lu()
        .solve(&DVector::from_column_slice(u))
        .expect("chain basis is invertible");
    let scale = u.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut margin = (0..k).map(|j| c[j] / scale).fold(f64::INFINITY, f64::min);
    if let Some(p) = planar {
        let a = c[k - 1];
        if a > BAND * scale {
            margin = margin.min(p(c[k] / a, c[k + 1] / a) * a / scale);
        }
    }
    (margin >= 0.0, margin)
}

fn agree(label: &str, config: &WedgeConfig, planar: Option<PlanarOracle>, seed: u64) {
    let (mut inside, mut banded) = (0, 0);
    for u in directions(config, seed) {
        let (want, margin) = oracle(config, planar.as_ref(), &u);
        if margin.abs() < BAND {
            banded += 1;
            continue;
        }
        let got = cone_contains(config, &u);
        assert_eq!(got, want, "{label}: direction {u:?}, margin {margin:e}");
        inside += usize::from(got);
    }
    assert!(inside > DIRECTIONS / 10, "{label}: only {inside} directions inside");
    assert!(
        banded < DIRECTIONS / 100,
        "{label}: {banded} directions in the boundary band"
    );
}

#[test]
fn simplex_cones_match_the_oracle() {
    for d in 4..=6 {
        let dim = Dimension::new(d).unwrap();
        agree(
            "canonical simplex",
            &WedgeConfig::canonical_simplex(dim).unwrap(),
            None,
            d as u64,
        );
        let norms: Vec<f64> = (1..=d).map(|i| floor_radius(i) * (1.0 + 0.03 * i as f64)).collect();
        let inflated = WedgeConfig::simplex(ChainSpec::new(dim, norms).unwrap()).unwrap();
        agree("inflated simplex", &inflated, None, 100 + d as u64);
    }
}

#[test]
fn wedge_cones_match_the_oracle() {
    for d in 4..=6 {
        let dim = Dimension::new(d).unwrap();
        let cases = [
            ("triangle wedge", triangle_domain(dim).unwrap(), true, false),
            ("sector wedge", sector_domain(dim).unwrap(), false, true),
            ("wedge", wedge_domain(dim).unwrap(), true, true),
        ];
        for (label, domain, tri, sec) in cases {
            let cfg = WedgeConfig::canonical_wedge(dim, domain).unwrap();
            agree(label, &cfg, Some(d_oracle(dim, tri, sec)), 200 + d as u64);
        }
    }
}

#[test]
fn truncated_wedge_cones_match_the_oracle() {
    for d in 4..=6 {
        let dim = Dimension::new(d).unwrap();
        let k = d - 3;
        let mut norms: Vec<f64> = (1..=k).map(floor_radius).collect();

        let h = type_boundary(dim);
        norms.push(h);
        let g0 = truncation_scalars(dim, h).unwrap().g0;
        let disc = truncation_domain(dim, h, &TruncationShape::Disc).unwrap();
        let cfg = WedgeConfig::wedge(ChainSpec::new(dim, norms.clone()).unwrap(), disc).unwrap();
        agree(
            "disc",
            &cfg,
            Some(Box::new(move |x: f64, y: f64| g0 - x.hypot(y))),
            300 + d as u64,
        );

        let h = floor_radius(d - 2);
        *norms.last_mut().unwrap() = h;
        let r = truncation_scalars(dim, h).unwrap();
        let (g0, g) = (r.g0, r.g);
        let cap = truncation_domain(dim, h, &TruncationShape::DiscCapSquare).unwrap();
        let cfg = WedgeConfig::wedge(ChainSpec::new(dim, norms).unwrap(), cap).unwrap();
        let planar: PlanarOracle = Box::new(move |x: f64, y: f64| (g - x.abs()).min(g - y.abs()).min(g0 - x.hypot(y)));
        agree("disc-capped square", &cfg, Some(planar), 400 + d as u64);
    }
}
