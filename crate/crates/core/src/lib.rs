pub mod basis;
pub mod cli;
pub mod closures;
pub mod error;
pub mod hyperbolic;
pub mod mep;
pub mod numerics;
pub mod relativistic;
pub mod sim1d;

pub use error::{Error, Result};
