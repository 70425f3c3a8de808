//! Extremals with prescribed Lagrangian density: minimal graphs sharing an
//! area density, Calabi's prescribed-density system, and constant-energy
//! harmonic maps between spheres.

pub mod calabi_density;
pub mod constant_energy_maps;
pub mod error;
pub mod exact;
pub mod harmonic_algebra;
pub mod jet;
pub mod minimal_graphs;
pub mod quadrature;
pub mod tolerances;

pub use error::{Error, Result};
pub use jet::{Dual, Jet, Real};
