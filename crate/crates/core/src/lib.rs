pub mod benchmarks;
pub mod cli;
pub mod contour;
pub mod error;
pub mod linalg;
pub mod loewner;
pub mod paaa;
pub mod problems;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::C64;
