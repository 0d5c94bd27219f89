//! Exact solving of finite-valued constraint satisfaction problems through
//! the Lasserre hierarchy.
//!
//! The pipeline is VCSP → 0–1 linear program → level-`t` Lasserre pencil →
//! ellipsoid weak optimisation → rounding. Every certificate is checked in
//! exact rational arithmetic; the only approximation is the controlled
//! dyadic rounding inside the ellipsoid.

pub mod cli;
pub mod encode;
pub mod error;
pub mod exactlin;
pub mod lasserre;
pub mod reductions;
pub mod sdpsolve;
pub mod vcsp;

pub use error::{Error, Result};
