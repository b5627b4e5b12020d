//! Planar base domains in the terminal 2-plane of a chain.
//!
//! Every domain is star-shaped about the chain endpoint (the local origin)
//! and is stored as a list of angular pieces, each bounded either by a
//! circular arc centred at the origin or by a straight line. That single
//! representation gives exact areas (circular-segment arithmetic reduces to
//! sector and `tan` differences), exact membership and an exact inverse-CDF
//! sampler.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI, TAU};

use libm::{acos, atan, atan2, cos, sin, sqrt, tan};

use crate::{Error, Result};

const MEMBER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Boundary {
    /// Arc of a circle centred at the origin.
    Arc { radius: f64 },
    /// The line `{q : q . (cos normal, sin normal) = distance}`.
    Line { distance: f64, normal: f64 },
}

/// The region `{(r, theta) : start <= theta <= end, 0 <= r <= R(theta)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub boundary: Boundary,
}

impl Piece {
    pub fn radius_at(&self, theta: f64) -> f64 {
        match self.boundary {
            Boundary::Arc { radius } => radius,
            Boundary::Line { distance, normal } => distance / cos(theta - normal),
        }
    }

    pub fn area(&self) -> f64 {
        match self.boundary {
            Boundary::Arc { radius } => 0.5 * radius * radius * (self.end - self.start),
            Boundary::Line { distance, normal } => {
                0.5 * distance * distance * (tan(self.end - normal) - tan(self.start - normal))
            }
        }
    }

    fn max_radius(&self) -> f64 {
        self.radius_at(self.start).max(self.radius_at(self.end))
    }

    /// Angle at which the piece has accumulated `frac` of its area, and the
    /// boundary radius there.
    fn invert(&self, frac: f64) -> (f64, f64) {
        match self.boundary {
            Boundary::Arc { radius } => (self.start + frac * (self.end - self.start), radius),
            Boundary::Line { distance, normal } => {
                let (a, b) = (tan(self.start - normal), tan(self.end - normal));
                let slope = a + frac * (b - a);
                (normal + atan(slope), distance * sqrt(1.0 + slope * slope))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DomainKind {
    Triangle,
    Sector,
    Disc,
    DiscCapSquare,
    DiscCapPolygon,
    Polygon,
    Union,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanarDomain {
    kind: DomainKind,
    pieces: Vec<Piece>,
    cumulative: Vec<f64>,
    area: f64,
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

impl PlanarDomain {
    fn from_pieces(kind: DomainKind, pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Domain("no pieces".into()));
        }
        let mut cumulative = Vec::with_capacity(pieces.len());
        let mut area = 0.0;
        for (i, p) in pieces.iter().enumerate() {
            if !(p.end > p.start) {
                return Err(Error::Domain(format!("piece {i} has empty angular range")));
            }
            if i > 0 && p.start < pieces[i - 1].end - MEMBER_TOL {
                return Err(Error::Domain(format!("pieces {} and {i} overlap", i - 1)));
            }
            let a = p.area();
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::Domain(format!("piece {i} has area {a}")));
            }
            area += a;
            cumulative.push(area);
        }
        if pieces[pieces.len() - 1].end - pieces[0].start > TAU + MEMBER_TOL {
            return Err(Error::Domain("pieces wind more than once".into()));
        }
        Ok(Self {
            kind,
            pieces,
            cumulative,
            area,
        })
    }

    /// Triangle with vertices `0`, `a`, `b`, counter-clockwise.
    pub fn triangle(a: [f64; 2], b: [f64; 2]) -> Result<Self> {
        if !(cross(a, b) > 0.0) {
            return Err(Error::Domain(
                "triangle vertices must be counter-clockwise about the origin".into(),
            ));
        }
        let start = atan2(a[1], a[0]);
        let mut end = atan2(b[1], b[0]);
        if end <= start {
            end += TAU;
        }
        let edge = [b[0] - a[0], b[1] - a[1]];
        let len = sqrt(edge[0] * edge[0] + edge[1] * edge[1]);
        let distance = cross(a, b) / len;
        let normal = atan2(-edge[0], edge[1]);
        Self::from_pieces(
            DomainKind::Triangle,
            alloc::vec![Piece {
                start,
                end,
                boundary: Boundary::Line { distance, normal },
            }],
        )
    }

    /// Circular sector of `radius` between polar angles `start < end`.
    pub fn sector(radius: f64, start: f64, end: f64) -> Result<Self> {
        if !(radius > 0.0) || !(end > start) || end - start > TAU {
            return Err(Error::Domain(format!(
                "sector radius {radius}, angles [{start}, {end}]"
            )));
        }
        Self::from_pieces(
            DomainKind::Sector,
            alloc::vec![Piece {
                start,
                end,
                boundary: Boundary::Arc { radius },
            }],
        )
    }

    pub fn disc(radius: f64) -> Result<Self> {
        let mut d = Self::sector(radius, -PI, PI)?;
        d.kind = DomainKind::Disc;
        Ok(d)
    }

    /// Disc of `radius` intersected with the axis-parallel square of
    /// half-width `half_width`, both centred at the origin.
    pub fn disc_cap_square(radius: f64, half_width: f64) -> Result<Self> {
        let w = half_width;
        let mut d = Self::polygon_cap(Some(radius), &[[w, -w], [w, w], [-w, w], [-w, -w]])?;
        d.kind = DomainKind::DiscCapSquare;
        Ok(d)
    }

    /// Disc of `radius` intersected with a convex polygon that contains the
    /// origin in its interior.
    pub fn disc_cap_polygon(radius: f64, vertices: &[[f64; 2]]) -> Result<Self> {
        Self::polygon_cap(Some(radius), vertices)
    }

    /// Convex polygon containing the origin in its interior.
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        Self::polygon_cap(None, vertices)
    }

    fn polygon_cap(radius: Option<f64>, vertices: &[[f64; 2]]) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Domain(format!("polygon with {n} vertices")));
        }
        if let Some(r) = radius {
            if !(r > 0.0) {
                return Err(Error::Domain(format!("disc radius {r}")));
            }
        }
        let signed: f64 = (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n])).sum();
        let mut verts: Vec<[f64; 2]> = vertices.to_vec();
        if signed < 0.0 {
            verts.reverse();
        }
        for i in 0..n {
            let (a, b, c) = (verts[i], verts[(i + 1) % n], verts[(i + 2) % n]);
            if !(cross(a, b) > 0.0) {
                return Err(Error::Domain("the origin must lie strictly inside the polygon".into()));
            }
            if !(cross([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]) > 0.0) {
                return Err(Error::Domain("polygon must be strictly convex".into()));
            }
        }
        let mut pieces = Vec::new();
        let mut theta = atan2(verts[0][1], verts[0][0]);
        for i in 0..n {
            let (a, b) = (verts[i], verts[(i + 1) % n]);
            let mut next = atan2(b[1], b[0]);
            while next <= theta {
                next += TAU;
            }
            let edge = [b[0] - a[0], b[1] - a[1]];
            let len = sqrt(edge[0] * edge[0] + edge[1] * edge[1]);
            let distance = cross(a, b) / len;
            let mut normal = atan2(-edge[0], edge[1]);
            let mid = 0.5 * (theta + next);
            while normal < mid - PI {
                normal += TAU;
            }
            while normal > mid + PI {
                normal -= TAU;
            }
            let line = Boundary::Line { distance, normal };
            match radius {
                Some(r) if distance < r => {
                    let half = acos(distance / r);
                    let (lo, hi) = ((normal - half).max(theta), (normal + half).min(next));
                    let arc = Boundary::Arc { radius: r };
                    if lo >= hi {
                        pieces.push(Piece {
                            start: theta,
                            end: next,
                            boundary: arc,
                        });
                    } else {
                        if lo > theta {
                            pieces.push(Piece {
                                start: theta,
                                end: lo,
                                boundary: arc,
                            });
                        }
                        pieces.push(Piece {
                            start: lo,
                            end: hi,
                            boundary: line,
                        });
                        if hi < next {
                            pieces.push(Piece {
                                start: hi,
                                end: next,
                                boundary: arc,
                            });
                        }
                    }
                }
                Some(r) => pieces.push(Piece {
                    start: theta,
                    end: next,
                    boundary: Boundary::Arc { radius: r },
                }),
                None => pieces.push(Piece {
                    start: theta,
                    end: next,
                    boundary: line,
                }),
            }
            theta = next;
        }
        let kind = if radius.is_some() {
            DomainKind::DiscCapPolygon
        } else {
            DomainKind::Polygon
        };
        Self::from_pieces(kind, pieces)
    }

    /// Union of domains whose angular ranges do not overlap.
    pub fn union(parts: &[PlanarDomain]) -> Result<Self> {
        let mut pieces: Vec<Piece> = parts.iter().flat_map(|p| p.pieces.iter().copied()).collect();
        pieces.sort_by(|a, b| a.start.total_cmp(&b.start));
        Self::from_pieces(DomainKind::Union, pieces)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn max_radius(&self) -> f64 {
        self.pieces.iter().map(Piece::max_radius).fold(0.0, f64::max)
    }

    /// Piece whose angular range holds `theta` (any branch of the angle).
    fn piece_at(&self, theta: f64) -> Option<&Piece> {
        let first = self.pieces[0].start;
        let mut t = theta;
        while t < first - MEMBER_TOL {
            t += TAU;
        }
        while t > first + TAU {
            t -= TAU;
        }
        self.pieces
            .iter()
            .find(|p| t >= p.start - MEMBER_TOL && t <= p.end + MEMBER_TOL)
    }

    /// Boundary radius in direction `theta`, or `None` outside the angular
    /// range.
    pub fn radius_at(&self, theta: f64) -> Option<f64> {
        self.piece_at(theta).map(|p| p.radius_at(theta))
    }

    /// Membership with a `1e-12` tolerance; boundary points are inside.
    pub fn contains(&self, q: [f64; 2]) -> bool {
        let r2 = q[0] * q[0] + q[1] * q[1];
        if r2 <= MEMBER_TOL * MEMBER_TOL {
            return true;
        }
        let theta = atan2(q[1], q[0]);
        // Check every piece the angle touches so that points on a shared ray
        // between two pieces are tested against both.
        let first = self.pieces[0].start;
        let mut t = theta;
        while t < first - MEMBER_TOL {
            t += TAU;
        }
        while t > first + TAU {
            t -= TAU;
        }
        self.pieces
            .iter()
            .filter(|p| t >= p.start - MEMBER_TOL && t <= p.end + MEMBER_TOL)
            .any(|p| match p.boundary {
                Boundary::Arc { radius } => sqrt(r2) <= radius + MEMBER_TOL,
                Boundary::Line { distance, normal } => q[0] * cos(normal) + q[1] * sin(normal) <= distance + MEMBER_TOL,
            })
    }

    fn locate(&self, u: f64) -> (&Piece, f64) {
        let target = u * self.area;
        let i = self
            .cumulative
            .partition_point(|&c| c < target)
            .min(self.pieces.len() - 1);
        let before = if i == 0 { 0.0 } else { self.cumulative[i - 1] };
        let piece = &self.pieces[i];
        let frac = ((target - before) / piece.area()).clamp(0.0, 1.0);
        (piece, frac)
    }

    /// Uniform point from two uniforms: `u1` picks the polar angle through
    /// the cumulative area, `u2` the radius. Monotone in both, so two
    /// domains driven by the same uniforms are comonotonically coupled.
    pub fn sample(&self, u1: f64, u2: f64) -> [f64; 2] {
        let (piece, frac) = self.locate(u1);
        let (theta, rmax) = piece.invert(frac);
        let r = rmax * sqrt(u2);
        [r * cos(theta), r * sin(theta)]
    }

    /// `|q|` of [`PlanarDomain::sample`] without forming `q`.
    pub fn sample_norm(&self, u1: f64, u2: f64) -> f64 {
        let (piece, frac) = self.locate(u1);
        piece.invert(frac).1 * sqrt(u2)
    }
}

/// The right angle `[0, pi/4]` split as in the wedge domain: the triangle
/// `(0,0), (leg, 0), (leg, leg tan alpha)` and the sector of radius
/// `leg / cos alpha` over `[alpha, pi/4]`.
pub(crate) fn triangle_and_sector(leg: f64, alpha: f64) -> Result<(PlanarDomain, PlanarDomain)> {
    let tri = PlanarDomain::triangle([leg, 0.0], [leg, leg * tan(alpha)])?;
    let sec = PlanarDomain::sector(leg / cos(alpha), alpha, FRAC_PI_4)?;
    Ok((tri, sec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Stream, UniformSource};

    #[test]
    fn triangle_area_and_membership() {
        let t = PlanarDomain::triangle([2.0, 0.0], [2.0, 1.0]).unwrap();
        assert!((t.area() - 1.0).abs() < 1e-15);
        assert!(t.contains([1.9, 0.5]));
        assert!(t.contains([2.0, 1.0]));
        assert!(!t.contains([2.01, 0.5]));
        assert!(!t.contains([1.0, 0.6]));
        assert!(!t.contains([1.0, -0.01]));
        assert!(PlanarDomain::triangle([2.0, 1.0], [2.0, 0.0]).is_err());
    }

    #[test]
    fn square_and_disc_caps() {
        let sq = PlanarDomain::polygon(&[[1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]]).unwrap();
        assert!((sq.area() - 4.0).abs() < 1e-13);
        let disc = PlanarDomain::disc(1.0).unwrap();
        assert!((disc.area() - PI).abs() < 1e-15);

        // disc of radius r over the square of half-width 1, 1 < r < sqrt 2
        let r = 1.2_f64;
        let cap = PlanarDomain::disc_cap_square(r, 1.0).unwrap();
        let seg = r * r * acos(1.0 / r) - sqrt(r * r - 1.0);
        assert!((cap.area() - (PI * r * r - 4.0 * seg)).abs() < 1e-13);
        assert!(cap.contains([0.99, 0.0]) && !cap.contains([0.9, 0.9]));
        assert_eq!(cap.kind(), DomainKind::DiscCapSquare);

        // square inside the disc
        let big = PlanarDomain::disc_cap_square(2.0, 1.0).unwrap();
        assert!((big.area() - 4.0).abs() < 1e-13);
        // disc inside the square
        let small = PlanarDomain::disc_cap_square(0.5, 1.0).unwrap();
        assert!((small.area() - PI * 0.25).abs() < 1e-13);
    }

    #[test]
    fn polygon_orientation_and_validation() {
        let cw = PlanarDomain::polygon(&[[-1.0, -1.0], [-1.0, 1.0], [1.0, 1.0], [1.0, -1.0]]).unwrap();
        assert!((cw.area() - 4.0).abs() < 1e-13);
        assert!(PlanarDomain::polygon(&[[1.0, 1.0], [2.0, 1.0], [2.0, 2.0]]).is_err());
        assert!(PlanarDomain::polygon(&[[1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn union_additivity() {
        let (t, s) = triangle_and_sector(0.3, 0.6).unwrap();
        let u = PlanarDomain::union(&[s.clone(), t.clone()]).unwrap();
        assert_eq!(u.kind(), DomainKind::Union);
        assert!((u.area() - t.area() - s.area()).abs() < 1e-16);
        assert!(PlanarDomain::union(&[t.clone(), t]).is_err());
    }

    #[test]
    fn samples_are_members_and_area_matches_rejection() {
        let domains = [
            PlanarDomain::disc_cap_square(1.2, 1.0).unwrap(),
            PlanarDomain::disc_cap_polygon(1.0, &[[0.9, -0.2], [0.4, 1.1], [-1.0, 0.5], [-0.5, -1.0]]).unwrap(),
            {
                let (t, s) = triangle_and_sector(0.3, 0.6).unwrap();
                PlanarDomain::union(&[t, s]).unwrap()
            },
        ];
        let mut rng = Stream::new(11, 0);
        for dom in &domains {
            for _ in 0..20_000 {
                let q = dom.sample(rng.next_f64(), rng.next_f64());
                assert!(dom.contains(q));
            }
            let r = dom.max_radius();
            let n = 200_000;
            let hits = (0..n)
                .filter(|_| {
                    let q = [r * (2.0 * rng.next_f64() - 1.0), r * (2.0 * rng.next_f64() - 1.0)];
                    dom.contains(q)
                })
                .count() as f64;
            let p = hits / n as f64;
            let est = p * 4.0 * r * r;
            let se = 4.0 * r * r * sqrt(p * (1.0 - p) / n as f64);
            assert!((est - dom.area()).abs() < 3.0 * se, "{:?}", dom.kind());
        }
    }

    #[test]
    fn sample_norm_matches_sample() {
        let dom = PlanarDomain::disc_cap_square(1.2, 1.0).unwrap();
        let mut rng = Stream::new(5, 5);
        for _ in 0..1000 {
            let (u1, u2) = (rng.next_f64(), rng.next_f64());
            let q = dom.sample(u1, u2);
            assert!((sqrt(q[0] * q[0] + q[1] * q[1]) - dom.sample_norm(u1, u2)).abs() < 1e-13);
        }
    }
}
