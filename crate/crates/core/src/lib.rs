//! Exact computations on P- and Q-polynomial association schemes: Bose-Mesner
//! and Terwilliger algebras, relative t-designs and their Fisher bounds,
//! products in dual polar graphs and cyclotomic character sums.

#![allow(clippy::needless_range_loop)]

pub mod bose_mesner;
pub mod cyclotomic;
pub mod design_spaces;
pub mod dual_polar_products;
pub mod error;
pub mod linalg;
pub mod schemes;
pub mod terwilliger;

pub use bose_mesner::BoseMesnerData;
pub use error::{Error, Result};
pub use linalg::{ExactMatrix, Rational};
pub use schemes::{Scheme, SchemeSpec};
