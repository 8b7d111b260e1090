//! Workbench for overdetermined systems of constant-coefficient PDEs.

pub mod bounds;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod parse;
pub mod pl_probe;
pub mod poly;
pub mod report;
pub mod resolution;
pub mod variety;
pub mod weights;

pub use error::{Error, Result};
