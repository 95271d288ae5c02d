pub mod blockgap;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod intpoly;
pub mod numtheory;

pub use error::{Error, Result};
pub use intpoly::IntPoly;
