pub mod deformation;
pub mod diagonal;
pub mod dwork;
pub mod error;
pub mod fredholm;
pub mod oracle;
pub mod padic;
pub mod poly;
pub mod selftest;
pub mod series;
pub mod zeta;

pub use error::{Result, ZetaError};
