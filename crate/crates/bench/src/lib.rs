//! Inputs shared by the criterion benches.

use vlplus_core::lattice::{build_generators, GeneratorSet, LatticeState};
use vlplus_core::zhu::{relation_target, ERelation};

/// Generators and the two products that dominate relation checks.
pub struct ProductFixture {
    pub generators: GeneratorSet,
    pub omega_star_e: LatticeState,
}

pub fn product_fixture(k: u32) -> ProductFixture {
    let generators = build_generators(k);
    let omega_star_e = vlplus_core::zhu::star(&generators.omega, &generators.e)
        .expect("omega * E is defined for every k");
    ProductFixture {
        generators,
        omega_star_e,
    }
}

/// The element of `V_L^+` whose O(V) membership the certificate search proves.
pub fn certificate_target(k: u32, rel: ERelation) -> LatticeState {
    relation_target(k, rel).expect("relation targets exist for k >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let f = product_fixture(2);
        assert!(!f.omega_star_e.is_zero());
        assert!(certificate_target(2, ERelation::L2).is_theta_invariant());
    }
}
