pub mod error;
pub mod fixtures;
pub mod ikdist;
pub mod majorization;
pub mod mixture;
pub mod oracles;
pub mod ordercheck;
pub mod sampling;
pub mod scan;
pub mod theorems;
mod sum;

pub use error::{Error, Result};
