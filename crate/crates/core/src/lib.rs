pub mod approx;
pub mod apps;
pub mod dense;
pub mod error;
pub mod field;
pub mod mosaic_hankel;
pub mod poly;
pub mod reduction;
pub mod solver;
pub mod struct_solve;
pub mod toeplitz_like;

pub use error::{Assumption, Error, Result};
pub use field::{ExtField, Field, PrimeField};
pub use poly::Poly;
