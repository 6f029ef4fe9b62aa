pub mod circuit;
pub mod entanglement;
pub mod error;
pub mod history;
pub mod io;
pub mod linalg;

pub use error::{Error, Result};
