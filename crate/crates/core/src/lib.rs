//! Exact computer algebra for two-dimensional evolution algebras: automorphism
//! group schemes and their Hopf algebras, universal and tight p-algebras, and
//! faithfulness of universal associative representations.

pub mod fields;
pub mod poly;
pub mod groebner;
pub mod linalg;
pub mod evolution;
pub mod upalgebra;
pub mod certify;
pub mod tables;
pub mod cli;
pub mod hopf;
