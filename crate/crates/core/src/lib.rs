//! Quantum particles on a weakly deformed sphere (an oblate or prolate
//! spheroid), treated to first order in the deformation ε.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod free_particle;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod oscillator;
pub mod specfun;
pub mod suite;
pub mod svg;
pub mod table;

pub use error::{Error, Result};
