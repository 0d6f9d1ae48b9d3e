//! Exact and numerical tools for a family of plane rational maps whose
//! algebraic and topological degrees coincide: degree sequences, Markov
//! coding of the real dynamics, samplers for the two natural measures and
//! deterministic pixmap renderers.

#![allow(clippy::needless_range_loop)]

pub mod chebfam;
pub mod dyn1d;
pub mod ergodic;
pub mod exactpoly;
pub mod planemap;
pub mod projgeom;
pub mod render;
pub mod rng;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
