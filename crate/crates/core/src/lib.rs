pub mod angular;
pub mod config;
pub mod eigen;
pub mod error;
pub mod fields;
pub mod grid;
pub mod observables;
pub mod runner;
pub mod scf;
pub mod xc;

pub use error::{Error, Result};
