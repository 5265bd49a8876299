mod error;
mod intmat;
pub mod mixed;
pub mod faces;
pub mod ml;
pub mod model;
pub mod polytope;
pub mod sampling;
pub mod solver;

pub use error::{Error, ErrorClass, Result};
