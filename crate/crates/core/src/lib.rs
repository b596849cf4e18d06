//! Exact simplicial modules and chain complexes over `Z`, `Q` and `Z/m`: the
//! Dold-Kan correspondence, the large tensor product `N(ΓC ⊗̂ ΓC')`, and
//! divided power structures on simplicial commutative algebras and their
//! chains.

pub mod algebra;
pub mod chain;
pub mod coefficients;
pub mod combinat;
pub mod divpow;
pub mod doc;
pub mod doldkan;
pub mod error;
pub mod linalg;
pub mod random;
pub mod simplicial;

pub use coefficients::{RingSpec, Scalar};
pub use error::{Error, Result};
