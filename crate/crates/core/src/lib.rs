//! Numerical laboratory for a photonic Chern insulator simulated by a
//! one-dimensional resonator chain with a periodically modulated mixing angle.
//!
//! - [`lattice`]: parameters and the open-boundary chain Hamiltonian
//! - [`bloch`]: two-band momentum picture and three Chern-number routes
//! - [`spectrum`]: open-chain spectra versus the mixing angle and edge states
//! - [`driven`]: driven-dissipative steady states and input-output reflection
//! - [`scattering`]: lead self-energies, device Green function, Fisher-Lee reflection and pumped charge
//! - [`winding`]: phase unwrapping shared by the reflection traces
//! - [`cli`] and [`output`]: the `topochain` command line front end and its file formats

pub mod bloch;
pub mod cli;
pub mod driven;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod output;
pub mod scattering;
pub mod spectrum;
pub mod winding;

pub use error::{Error, ErrorKind, Result};
pub use lattice::LatticeParams;
pub use num_complex::Complex64 as C64;
