//! Duffin–Kemmer–Petiau oscillator in 2+1 dimensions with a uniform magnetic
//! field: DKP algebra checks, energy spectra, eigenfunctions and the
//! canonical thermodynamics of the vector sector.
//!
//! Energies are in units of the rest energy mc², lengths in Compton
//! wavelengths ħ/mc and temperatures through γ = mc²/(k_B T).

pub mod algebra;
pub mod eigenfunctions;
pub mod error;
pub mod quadrature;
pub mod registry;
pub mod spectrum;
pub mod thermo;

pub use error::{Error, Result};
