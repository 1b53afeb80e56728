pub mod atomic;
pub mod cli;
pub mod disk;
pub mod error;
pub mod fock;
pub mod kernels;
pub mod quadrature;
pub mod rigidity;
pub mod sampling;
pub mod series;
pub mod special;
pub mod translations;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{ComplexPoint, TruncatedSeries};
