//! Numerical germs, sewing and rough integration on simplices.

pub mod cli;
pub mod compensator;
pub mod decompose;
pub mod error;
pub mod funcs;
pub mod germ;
pub mod integrals;
pub mod quad;
pub mod rough;
pub mod sew;
pub mod simplex;
pub mod sum;

pub use error::{Error, Result};
