//! Resonance-free strips and resonance bands for scattering problems.
//!
//! Geometry of diffractive geodesics on polygon exteriors and cone surfaces,
//! the diffraction kernel, resonances of solvable delta-potential models and
//! the formulas that tie them together.

// `!(x > y)` is used on purpose so that NaN lands on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod cycle;
pub mod diffraction;
pub mod geodesics;
pub mod geom;
pub mod io;
pub mod models;
pub mod rootfind;
pub mod scene;
pub mod specfun;
