pub mod artinian;
pub mod certificate;
pub mod cli;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod frame;
pub mod io;
pub mod lefschetz;
pub mod linalg;
pub mod scalar;
pub mod volume;

pub use error::{Error, Result};
