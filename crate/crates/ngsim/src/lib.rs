pub mod apps;
pub mod error;
pub mod fock;
pub mod gates;
pub mod gaussian;
pub mod linalg;
pub mod phase;
pub mod program;
pub mod simulator;
pub mod states;

pub use error::{Error, Result};
