pub mod checks;
pub mod error;
pub mod kernels;
pub mod pair_correlation;
pub mod primes;
pub mod quadrature;
pub mod report;
pub mod s_of_t;
pub mod special;
pub mod theorem;
pub mod zeros;

pub use error::{Error, Result};
pub use quadrature::{Estimate, GaussLegendre, QuadratureSpec};
