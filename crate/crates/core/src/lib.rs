//! Lattice nonlinear Schrödinger equation whose hopping depends on the
//! density difference of neighbouring sites.
//!
//! The crate covers stationary states (imaginary-time flow, self-consistent
//! diagonalization, three-site ansatz), linear stability of condensates,
//! zero-energy edge modes on open chains, a periodically driven realization
//! and the long-wavelength limit.

pub mod continuum;
pub mod dynamics;
pub mod edge_modes;
pub mod error;
pub mod floquet;
pub mod grid;
mod integrate;
pub mod lattice;
mod optimize;
pub mod stability;
pub mod stationary;

pub use error::{Error, Result};
pub use lattice::{Boundary, LatticeState, ModelParams, StationaryState, C64};
