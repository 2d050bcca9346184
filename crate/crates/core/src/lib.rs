pub mod braid;
pub mod complex;
pub mod decompose;
pub mod error;
pub mod hecke;
pub mod hochschild;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod soergel;
pub mod verify;
pub mod young;

pub use error::{Error, Result};
