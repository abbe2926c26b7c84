//! Exact computations around the Iwahori-invariant Whittaker function of
//! the twisted Steinberg representation of `GL_n(F_p((π)))`, its Hecke
//! eigenvalues, and nilpotent cyclic-quiver representations.

pub mod decompose;
pub mod error;
pub mod hecke;
pub mod matrix;
pub mod perm;
pub mod quiver;
pub mod scalars;
pub mod series;
pub mod trace;
pub mod whittaker;

pub use error::{Error, Result};
