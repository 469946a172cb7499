pub mod error;
pub mod gates;
pub mod harness;
pub mod qmath;
pub mod sim;
pub mod synthesis;
pub mod tomography;

pub use error::{Error, ErrorCategory, Result};
