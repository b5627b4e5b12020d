#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Density bounds for unit-ball packings built on Rogers' orthoscheme and
//! the wedge over the triangle-plus-sector domain.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function of
//! its inputs: closed-form scalars ([`formulas`]), canonical orthoscheme
//! coordinates and planar base domains ([`geometry`]), Monte-Carlo and
//! quadrature estimators of solid-angle densities ([`density`]) and the
//! numerical checks of every inequality the bound depends on ([`verify`]).
//!
//! Threading is left to the caller through [`density::Executor`]; the
//! [`density::Sequential`] executor is always available and every estimate
//! is bit-identical whichever executor runs it.

extern crate alloc;

pub mod density;
mod error;
pub mod formulas;
pub mod gauss;
pub mod geometry;
pub mod rng;
pub mod sampling;
pub mod special;
pub mod verify;

pub use crate::error::{Error, Result};
pub use crate::formulas::Dimension;
