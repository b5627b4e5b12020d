//! Closed-form scalars: the orthoscheme floors, the radius recursion, the
//! truncation radii, the wedge sector, and the inequalities that force the
//! `d >= 8` threshold.
//!
//! Interval preconditions are closed with a tolerance band of
//! [`ENDPOINT_TOL`] so that analytically exact endpoints are never rejected.

use core::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use libm::{atan, atan2, cos, exp, log, pow, sin, sqrt};

use crate::special::{unit_ball_volume, zeta};
use crate::{Error, Result};

/// Tolerance for closed-interval precondition checks.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Ambient dimension of Euclidean space, at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Dimension {
                d,
                min: 2,
                what: "a density bound",
            });
        }
        Ok(Self(d))
    }

    /// Checks the dimension against a stricter minimum.
    pub fn require(self, min: usize, what: &'static str) -> Result<Self> {
        if self.0 < min {
            return Err(Error::Dimension { d: self.0, min, what });
        }
        Ok(self)
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;

    fn try_from(d: usize) -> Result<Self> {
        Self::new(d)
    }
}

impl core::fmt::Display for Dimension {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(value >= lo - ENDPOINT_TOL && value <= hi + ENDPOINT_TOL) {
        return Err(Error::OutOfRange { name, value, lo, hi });
    }
    Ok(())
}

/// `m_i = sqrt(2i/(i+1))`, the floor on the distance from a cell centre to
/// its `(d-i)`-faces. `m_0 = 0`.
pub fn floor_radius(i: usize) -> f64 {
    let i = i as f64;
    sqrt(2.0 * i / (i + 1.0))
}

/// `h_i = sqrt(2/(i(i+1)))`, the i-th leg of the canonical orthoscheme.
pub fn chain_height(i: usize) -> f64 {
    debug_assert!(i >= 1);
    let i = i as f64;
    sqrt(2.0 / (i * (i + 1.0)))
}

/// Returns `(m_i, h_i)`.
pub fn chain_scalars(i: usize) -> Result<(f64, f64)> {
    if i < 1 {
        return Err(Error::OutOfRange {
            name: "chain level",
            value: i as f64,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    Ok((floor_radius(i), chain_height(i)))
}

/// The circumradius recursion `R -> 2/sqrt(4 - R^2)`; it carries `m_i` to
/// `m_{i+1}` and fixes `sqrt(2)`.
pub fn radius_map(r: f64) -> Result<f64> {
    if !(0.0..2.0).contains(&r) {
        return Err(Error::OutOfRange {
            name: "R",
            value: r,
            lo: 0.0,
            hi: 2.0,
        });
    }
    Ok(2.0 / sqrt(4.0 - r * r))
}

/// Radii of the two discs centred at the chain endpoint of a truncated wedge.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruncationRadii {
    /// Trace of the ball of radius `sqrt(2d/(d+1))` on the face plane.
    pub g0: f64,
    /// Disc guaranteed inside the face by the radius recursion.
    pub g: f64,
}

impl TruncationRadii {
    pub fn ratio(&self) -> f64 {
        self.g0 / self.g
    }
}

/// Admissible range `[m_{d-2}, sqrt(2d/(d+1)))` of the face distance `h`.
pub fn truncation_interval(d: Dimension) -> (f64, f64) {
    let df = d.as_f64();
    (floor_radius(d.get() - 2), sqrt(2.0 * df / (df + 1.0)))
}

/// Boundary `sqrt(2(d-1)/d)` between type-I and type-II faces.
pub fn type_boundary(d: Dimension) -> f64 {
    floor_radius(d.get() - 1)
}

/// `g0(h) = sqrt(2d/(d+1) - h^2)` and `g(h) = (2 - h^2)/sqrt(4 - h^2)`.
pub fn truncation_scalars(d: Dimension, h: f64) -> Result<TruncationRadii> {
    let d = d.require(4, "a truncated wedge")?;
    let (lo, hi) = truncation_interval(d);
    if !(h >= lo - ENDPOINT_TOL && h < hi) {
        return Err(Error::OutOfRange {
            name: "h",
            value: h,
            lo,
            hi,
        });
    }
    let df = d.as_f64();
    let g0 = sqrt((2.0 * df / (df + 1.0) - h * h).max(0.0));
    let g = (2.0 - h * h) / sqrt(4.0 - h * h);
    Ok(TruncationRadii { g0, g })
}

/// The circular sector that completes the base triangle to a right angle
/// bisected at `pi/4`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SectorGeometry {
    /// Sector radius `2/sqrt(d^2 - 1) = |w_d - w_{d-2}|`.
    pub radius: f64,
    /// Triangle angle at `w_{d-2}`, `atan(h_d / h_{d-1})`.
    pub alpha: f64,
    /// Central angle `pi/4 - alpha`.
    pub theta: f64,
}

pub fn sector_geometry(d: Dimension) -> Result<SectorGeometry> {
    let d = d.require(4, "the wedge domain")?;
    let df = d.as_f64();
    let radius = 2.0 / sqrt(df * df - 1.0);
    let alpha = atan(sqrt((df - 1.0) / (df + 1.0)));
    Ok(SectorGeometry {
        radius,
        alpha,
        theta: FRAC_PI_4 - alpha,
    })
}

/// Scalars of the extremal planar configuration behind the angle bound.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AngleScalars {
    pub cos_rho: f64,
    pub cos_tau: f64,
    pub f: f64,
    /// `rho` computed through `atan2`, accurate even when `cos_rho` is near 1.
    pub rho: f64,
    pub tau: f64,
}

impl AngleScalars {
    /// `pi - (rho + tau)`.
    pub fn phi(&self) -> f64 {
        PI - self.rho - self.tau
    }
}

/// Closed admissible interval `[sqrt(2(d-3)/(d-2)), sqrt(2(d-2)/(d-1))]` for `x`.
pub fn angle_interval(d: Dimension) -> (f64, f64) {
    (floor_radius(d.get() - 3), floor_radius(d.get() - 2))
}

/// Open interval `(sqrt(2(d-4)/(d-1)), sqrt(2))` on which the quartic is negative.
pub fn quartic_negative_interval(d: Dimension) -> (f64, f64) {
    let df = d.as_f64();
    (sqrt(2.0 * (df - 4.0) / (df - 1.0)), SQRT_2)
}

/// `f(x) = x^4 - (4d-10)/(d-1) x^2 + (4d-16)/(d-1)`; negative exactly where
/// `rho + tau` is increasing.
pub fn angle_quartic(d: Dimension, x: f64) -> f64 {
    let df = d.as_f64();
    let x2 = x * x;
    x2 * x2 - (4.0 * df - 10.0) / (df - 1.0) * x2 + (4.0 * df - 16.0) / (df - 1.0)
}

pub fn angle_scalars(d: Dimension, x: f64) -> Result<AngleScalars> {
    let d = d.require(4, "the angle bound")?;
    let (lo, hi) = angle_interval(d);
    check_range("x", x, lo, hi)?;
    let df = d.as_f64();
    let l2 = 2.0 * df / (df + 1.0);
    let l = sqrt(l2);
    let x2 = x * x;

    let rho_num = l2 * (4.0 - x2) - 4.0;
    if rho_num <= 0.0 {
        return Err(Error::Radicand {
            name: "cos rho",
            value: rho_num,
        });
    }
    let tau_num = 4.0 * l2 - 4.0 - l2 * x2;
    if tau_num <= 0.0 {
        return Err(Error::Radicand {
            name: "sin tau",
            value: tau_num,
        });
    }
    let cos_rho = sqrt(rho_num / ((4.0 - x2) * (l2 - x2)));
    let cos_tau = (l2 - 2.0) / (l * sqrt(l2 - x2));
    // sin rho = (2 - x^2)/sqrt((4 - x^2)(l^2 - x^2)), sin tau = sqrt(4l^2 - 4 - l^2 x^2)/(l sqrt(l^2 - x^2))
    let rho = atan2(2.0 - x2, sqrt(rho_num));
    let tau = atan2(sqrt(tau_num), l2 - 2.0);
    Ok(AngleScalars {
        cos_rho,
        cos_tau,
        f: angle_quartic(d, x),
        rho,
        tau,
    })
}

/// Lower bound `(sqrt(2)/3)(2d-1)/sqrt(d(d-1))` on `cos phi`.
pub fn cos_phi_star(d: Dimension) -> Result<f64> {
    let d = d.require(4, "the angle bound")?;
    let df = d.as_f64();
    Ok(SQRT_2 / 3.0 * (2.0 * df - 1.0) / sqrt(df * (df - 1.0)))
}

/// `cos(2 pi / 5)`, the widest angle between two of five hyperplanes
/// around a common codimension-2 subspace.
pub fn cos_two_fifths_pi() -> f64 {
    cos(2.0 * PI / 5.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiveSidesScalars {
    /// Upper bound on `|c_i* - c_j*|^2` with `|b|` at its floor.
    pub g: f64,
    /// Value of `g` at `phi_i = phi_j = phi*`, in closed form.
    pub quadratic: f64,
}

/// `G(phi_i, phi_j)` without the domain check.
pub fn five_sides_g(d: Dimension, phi_i: f64, phi_j: f64) -> f64 {
    let df = d.as_f64();
    let c = cos_two_fifths_pi();
    let l2 = 2.0 * df / (df + 1.0);
    let b2 = 2.0 * (df - 2.0) / (df - 1.0);
    let big = 2.0 * l2;
    (2.0 - c) * big - 2.0 * (1.0 - c) * b2 + big * sin(phi_i) * sin(phi_j) - big * c * cos(phi_i) * cos(phi_j)
        + 2.0 * (1.0 - c) * sqrt(l2) * (cos(phi_i) + cos(phi_j)) * sqrt(l2 - b2)
}

/// Analytic partial derivatives `(dG/dphi_i, dG/dphi_j)`.
pub fn five_sides_partials(d: Dimension, phi_i: f64, phi_j: f64) -> (f64, f64) {
    let df = d.as_f64();
    let c = cos_two_fifths_pi();
    let big = 4.0 * df / (df + 1.0);
    let k = 4.0 * (1.0 - c) * sqrt(2.0 * df / ((df + 1.0) * (df + 1.0) * (df - 1.0)));
    let di = big * sin(phi_j) * cos(phi_i) + sin(phi_i) * (big * c * cos(phi_j) - k);
    let dj = big * sin(phi_i) * cos(phi_j) + sin(phi_j) * (big * c * cos(phi_i) - k);
    (di, dj)
}

/// `((40-32c)d^2 + (56-64c)d + (16-32c)) / (9(d^2-1))` with `c = cos(2pi/5)`.
pub fn five_sides_quadratic(d: Dimension) -> f64 {
    let df = d.as_f64();
    let c = cos_two_fifths_pi();
    ((40.0 - 32.0 * c) * df * df + (56.0 - 64.0 * c) * df + (16.0 - 32.0 * c)) / (9.0 * (df * df - 1.0))
}

pub fn five_sides_scalars(d: Dimension, phi_i: f64, phi_j: f64) -> Result<FiveSidesScalars> {
    let d = d.require(4, "the five-sides bound")?;
    let phi_max = libm::acos(cos_phi_star(d)?);
    check_range("phi_i", phi_i, 0.0, phi_max)?;
    check_range("phi_j", phi_j, 0.0, phi_max)?;
    Ok(FiveSidesScalars {
        g: five_sides_g(d, phi_i, phi_j),
        quadratic: five_sides_quadratic(d),
    })
}

/// `sqrt(2d/(d+1) - 2(d-2)/(d-1)) + sqrt(2d/(d+1))`, which must not exceed 2.
pub fn centre_distance_bound(d: Dimension) -> Result<f64> {
    let d = d.require(3, "the centre-distance bound")?;
    let df = d.as_f64();
    let l2 = 2.0 * df / (df + 1.0);
    Ok(sqrt(l2 - 2.0 * (df - 2.0) / (df - 1.0)) + sqrt(l2))
}

/// Reference curves for context. `daniels` and `kl` are asymptotic forms
/// with the `o(1)` terms dropped: they are not certified bounds at finite
/// `d`. `ball_lower` is an existence result (a lattice packing at least this
/// dense exists).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReferenceBounds {
    pub daniels: f64,
    pub kl: f64,
    pub ball_lower: f64,
    pub omega_d: f64,
}

/// Label attached to the asymptotic curves in every report.
pub const ASYMPTOTIC_LABEL: &str = "asymptotic, not certified";

pub fn reference_bounds(d: Dimension) -> ReferenceBounds {
    let df = d.as_f64();
    ReferenceBounds {
        daniels: df / core::f64::consts::E * pow(2.0, -df / 2.0),
        kl: exp(-0.599 * df * log(2.0)),
        ball_lower: (df - 1.0) * zeta(d.get() as u32) / pow(2.0, df - 1.0),
        omega_d: unit_ball_volume(d.get()),
    }
}
