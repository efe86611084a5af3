//! Formal affine Demazure algebras: root data, formal group algebras, the twisted group
//! algebra with its operator families, dual classes, structure constants and stable bases.

pub mod error;
pub mod dual;
pub mod expr;
pub mod fga;
pub mod report;
pub mod root_system;
pub mod session;
pub mod twisted;
pub mod verify;

pub use error::{Error, Result};
