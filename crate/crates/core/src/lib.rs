pub mod ansatz;
pub mod classifier;
pub mod compressor;
pub mod data_io;
pub mod encodings;
pub mod error;
pub mod linalg;
pub mod qasm;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::{Real, C};
