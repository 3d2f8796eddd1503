//! Exact evaluation of lattice sums Σ_v Π_f f(v)^{−k_f} over Zʳ through their generating
//! functions, with independent numeric, polytope and hierarchy cross-checks.

pub mod error;
pub mod fixtures;
pub mod genfun;
pub mod hierarchy;
pub mod io;
pub mod kernel;
pub mod lattice;
pub mod oracle;
pub mod polytope;
pub mod rat;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
