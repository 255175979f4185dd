//! Discrete Cauchy-Kovalevskaya extension for a finite-difference Dirac
//! operator on a periodic space-time lattice, with Clifford algebra
//! coefficients in `Cl(n+1, n+1)`.

pub mod chebyshev;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod field_io;
pub mod lattice;
pub mod mittag_leffler;
pub mod solvers;
pub mod spectral;
pub mod umbral;

pub use clifford::{BladeMask, Multivector, Signature};
pub use error::{Error, Result};
pub use lattice::{CliffordField, LatticeGrid};
pub use num_complex::Complex64;
