//! Canonical orthoscheme coordinates, planar base domains, cone membership
//! and uniform base samplers.

mod chain;
mod domain;
mod wedge;

pub use chain::ChainSpec;
pub use domain::{Boundary, DomainKind, Piece, PlanarDomain};
pub use wedge::{
    base_volume, cone_contains, sample_base, sector_domain, triangle_domain, truncation_domain, wedge_domain,
    TruncationShape, WedgeConfig,
};

#[cfg(test)]
pub(crate) use wedge::base_point;

use crate::{Dimension, Result};

/// The canonical chain `xi_i = m_i` with `k` levels.
pub fn canonical_chain(d: Dimension, k: usize) -> Result<ChainSpec> {
    ChainSpec::canonical(d, k)
}
