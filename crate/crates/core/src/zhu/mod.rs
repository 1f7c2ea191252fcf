//! Zhu's algebra A(V_L^+): products, residue generators of O(V), reduction,
//! structure polynomials, the scalar table, relation checks, basis
//! certificates and the classification.

mod certify;
mod characters;
mod lemmas;
mod products;
mod structure;
mod table;

pub use certify::*;
pub use characters::*;
pub use lemmas::*;
pub use products::*;
pub use structure::*;
pub use table::*;
