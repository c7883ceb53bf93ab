//! Reconstruction of many-spin quantum states from the correlation functions
//! that survive a symmetry reduction.
//!
//! The pipeline is: describe a symmetry group ([`symmetry::SymmetrySpec`]),
//! compute the space of observables it fixes ([`symmetry::commutant`]),
//! find the unique set of Pauli strings needed to reconstruct any state in
//! that space ([`reconstruction::minimal_reconstruction_basis`]), and rebuild
//! states from their expectation values ([`reconstruction::reconstruct`]).

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod models;
pub mod opspace;
pub mod reconstruction;
pub mod simulate;
pub mod symmetry;

pub use error::{Error, Result};
