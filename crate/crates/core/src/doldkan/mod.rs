//! Normalized chains, the functor `Γ`, the comparison isomorphisms, the
//! shuffle and Alexander-Whitney maps and the large tensor product.

mod eilenberg_zilber;
mod gamma;
mod isos;
mod large;
mod normalize;

pub use eilenberg_zilber::{alexander_whitney, aw_symmetry_defects, shuffle_map, shuffle_symmetry_defects, EilenbergZilber};
pub use gamma::{gamma_functor, Gamma, Summand};
pub use isos::{phi, phi_of, psi, psi_of, roundtrip_isos, triangle_identities};
pub use large::{
    associator, hexagon, large_tensor, large_tensor_maps, large_twist, lax_map, lax_symmetry, pentagon,
    transferred_structure, twist_involution, unit_map, LargeTensorComplex, TransferredStructure, Triple,
};
pub use normalize::{normalization, normalize, normalize_map, normalizing_projector, project_normalized, Normalized};
