pub mod checks;
pub mod error;
pub mod exact;
pub(crate) mod freefield;
pub mod fock;
pub mod lattice;
pub mod suites;
pub mod twisted;
pub mod zhu;
