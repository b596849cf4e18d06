//! Divided power structures: axioms on graded algebras, free divided power
//! algebras, divided powers on simplicial commutative algebras and on the
//! chains of commutative monoids for the large tensor product.

mod chain_algebra;
mod free;
mod graded;
mod monoid;
mod report;
mod search;
mod simplicial_algebra;

pub use chain_algebra::{check_pd_chain_algebra, ChainAlgebra, GradedChainAlgebra, NormalizedChains, PdOptions, PD_CHECK_NAMES};
pub use free::{free_divided_power, invariants_model, Generator, InvariantsModel, WORD_BLOCK_BOUND};
pub use graded::{check_axioms, check_axioms_with, gamma, AxiomOptions, GammaTable, GradedAlgebra, AXIOM_NAMES};
pub use monoid::{
    is_monoid_morphism, is_multiplicative, monoid_check, monoid_to_chain, monoid_to_simplicial, LargeMonoid, MONOID_CHECK_NAMES,
};
pub use report::{CheckEntry, CheckReport, Status};
pub use search::{search_divided_powers, search_divided_powers_bounded, Absence, SearchVerdict, CANDIDATE_BOUND};
pub use simplicial_algebra::{LevelProduct, SimplicialCommAlgebra};
