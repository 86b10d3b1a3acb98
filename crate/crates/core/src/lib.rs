//! Fermionic Gaussian states on open chains: canonical forms of Majorana
//! correlation matrices, the closed-form Uhlmann fidelity, free-fermion
//! Ising/XY couplings, boundary effect functions, and a dense exact oracle.

pub mod dd;
pub mod error;
pub mod extended;
pub mod fidelity;
pub mod gaussian;
pub mod io;
pub mod models;
pub mod observables;
pub mod oracle;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
