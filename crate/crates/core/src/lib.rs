//! Pseudospectral solvers and an estimate harness for Dysthe-type envelope
//! equations on periodic boxes.

pub mod airy1d;
pub mod error;
pub mod estimates;
pub mod evolve;
pub mod io;
pub mod models;
pub mod spectral;
pub mod symbols;
pub mod transforms;

pub use error::{Error, Result};
