//! Numerical laboratory for topological pressure: Bowen separated/spanning
//! sets, the Feldman-Katok metric, and (FK-)pseudo-orbit complexity, with
//! exact symbolic oracles for desk-scale verification.

pub mod analysis;
pub mod bowen;
pub mod dynamics;
pub mod error;
pub mod fk_metric;
pub mod fk_pseudo_orbit;
pub mod numerics;
pub mod pseudo_orbit;
pub mod series;
pub mod sets;

pub use error::{Error, Result};
