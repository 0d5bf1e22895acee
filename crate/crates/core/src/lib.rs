pub mod circuit;
pub mod error;
pub mod fermion;
pub mod ham;
pub mod pauli;
pub mod sim;
pub mod synth;
pub mod trotter;

pub use error::{Error, Result};
