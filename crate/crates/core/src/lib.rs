pub mod acceptance;
pub mod cohomology;
pub mod document;
pub mod error;
pub mod group;
pub mod linalg;
pub mod nc_torus;
pub mod reconstruction;

pub use error::{Error, Result};
