//! Cycle decompositions of finite energy landscapes under Metropolis dynamics.
//!
//! Two constructions of the hierarchy of metastable wells are provided and
//! cross-checked:
//!
//! - [`path_cycles`]: connected sets whose highest energy lies strictly below
//!   the lowest energy on their exterior boundary, enumerated by a sub-level
//!   sweep;
//! - [`graph_cycles`]: the recursive Freidlin–Wentzell construction driven by
//!   a cost function between classes of successively coarser partitions.
//!
//! [`equivalence`] verifies that both yield the same family with matching
//! exit and merge heights, and [`simulation`] measures exit times of the
//! Metropolis chain by Monte Carlo.

pub mod energy;
pub mod equivalence;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod format;
pub mod generator;
pub mod graph_cycles;
pub mod landscape;
pub mod path_cycles;
pub mod simulation;
mod union_find;

pub use energy::{Energy, EnergyScale};
pub use error::{Error, Result};
pub use landscape::{Landscape, StateSet, TransitionMatrix};
