//! Exact partition functions and exact samples for zero-field Ising models
//! on planar and K33-minor-free graphs.

pub mod error;
pub mod decomp;
pub mod engine;
pub mod graph;
pub mod model;
pub mod planar;
pub mod wilson;

pub use error::{Error, Result};
pub mod testkit;
