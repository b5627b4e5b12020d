use alloc::format;
use alloc::vec::Vec;

use libm::sqrt;

use crate::formulas::{chain_height, floor_radius, ENDPOINT_TOL};
use crate::{Dimension, Error, Result};

/// An orthoscheme chain `r_1, ..., r_k` in the canonical frame, where
/// `r_j = (eta_1, ..., eta_j, 0, ..., 0)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainSpec {
    d: Dimension,
    norms: Vec<f64>,
    heights: Vec<f64>,
}

impl ChainSpec {
    /// Builds a chain from its norms `xi_1 < ... < xi_k`, each at least its
    /// floor `m_i`.
    pub fn new(d: Dimension, norms: Vec<f64>) -> Result<Self> {
        let k = norms.len();
        if k == 0 || k > d.get() {
            return Err(Error::Chain(format!("{k} levels in dimension {d}")));
        }
        let mut heights = Vec::with_capacity(k);
        let mut prev = 0.0_f64;
        for (i, &xi) in norms.iter().enumerate() {
            if !xi.is_finite() {
                return Err(Error::Chain(format!("xi_{} = {xi} is not finite", i + 1)));
            }
            let floor = floor_radius(i + 1);
            if xi < floor - ENDPOINT_TOL {
                return Err(Error::Chain(format!(
                    "xi_{} = {xi} is below the floor m_{} = {floor}",
                    i + 1,
                    i + 1
                )));
            }
            if xi <= prev {
                return Err(Error::Chain(format!(
                    "xi_{} = {xi} does not exceed xi_{} = {prev}",
                    i + 1,
                    i
                )));
            }
            heights.push(sqrt(xi * xi - prev * prev));
            prev = xi;
        }
        Ok(Self { d, norms, heights })
    }

    /// The chain with `xi_i = m_i`, `eta_i = h_i`.
    pub fn canonical(d: Dimension, k: usize) -> Result<Self> {
        if k < 1 || k > d.get() {
            return Err(Error::Chain(format!("{k} levels in dimension {d}")));
        }
        Ok(Self {
            d,
            norms: (1..=k).map(floor_radius).collect(),
            heights: (1..=k).map(chain_height).collect(),
        })
    }

    pub fn dim(&self) -> Dimension {
        self.d
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// `xi_1, ..., xi_k`.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// `eta_1, ..., eta_k`.
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// Distance from the apex to the base hyperplane, `xi_1 = eta_1`.
    pub fn apex_distance(&self) -> f64 {
        self.norms[0]
    }

    /// Coordinates of `r_j` (1-based) in `E^d`.
    pub fn vertex(&self, j: usize) -> Vec<f64> {
        assert!((1..=self.len()).contains(&j));
        let mut v = alloc::vec![0.0; self.d.get()];
        v[..j].copy_from_slice(&self.heights[..j]);
        v
    }

    /// Coordinates of the last vertex.
    pub fn endpoint(&self) -> Vec<f64> {
        self.vertex(self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: usize) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn canonical_d8() {
        let c = ChainSpec::canonical(dim(8), 8).unwrap();
        let want = [1.0, 1.1547, 1.2247, 1.2649, 1.2910, 1.3093, 1.3229, 1.3333];
        for (x, w) in c.norms().iter().zip(want) {
            assert!((x - w).abs() < 5e-5);
        }
        assert!((c.heights()[7] - 1.0 / 6.0).abs() < 1e-15);
        for j in 1..=8 {
            assert!((sqrt(dot(&c.vertex(j), &c.vertex(j))) - c.norms()[j - 1]).abs() < 1e-12);
        }
        let (w3, w5) = (c.vertex(3), c.vertex(5));
        let diff: Vec<f64> = w5.iter().zip(&w3).map(|(a, b)| a - b).collect();
        assert!(dot(&diff, &w3).abs() < 1e-12);
    }

    #[test]
    fn orthoscheme_property_for_inflated_chain() {
        let norms = alloc::vec![1.1, 1.25, 1.3, 1.45, 1.5];
        let c = ChainSpec::new(dim(6), norms).unwrap();
        for i in 1..=5 {
            for j in i + 1..=5 {
                let (wi, wj) = (c.vertex(i), c.vertex(j));
                let diff: Vec<f64> = wj.iter().zip(&wi).map(|(a, b)| a - b).collect();
                assert!(dot(&diff, &wi).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_chains() {
        assert!(ChainSpec::canonical(dim(5), 6).is_err());
        assert!(ChainSpec::canonical(dim(5), 0).is_err());
        assert!(ChainSpec::new(dim(4), alloc::vec![0.9]).is_err());
        assert!(ChainSpec::new(dim(4), alloc::vec![1.2, 1.2]).is_err());
        assert!(ChainSpec::new(dim(4), alloc::vec![1.0, 1.1]).is_err());
        assert!(ChainSpec::new(dim(4), alloc::vec![]).is_err());
    }
}
