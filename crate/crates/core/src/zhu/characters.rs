//! Scalars by which `o(u)` acts on the one-dimensional top levels.

use crate::error::Result;
use crate::exact::Rational;
use crate::lattice::{untwisted_eigenvalue, LatticeState, ModuleId, UntwistedEngine};
use crate::twisted::{twisted_eigenvalue, TwistedEngine};

/// Evaluates `o(u)` on module tops, reusing caches for one `k`.
pub struct CharacterEvaluator {
    untwisted: UntwistedEngine,
    twisted: TwistedEngine,
}

impl CharacterEvaluator {
    pub fn new(k: u32) -> Self {
        CharacterEvaluator {
            untwisted: UntwistedEngine::new(k),
            twisted: TwistedEngine::new(k),
        }
    }

    /// The eigenvalue of `o(u)` on the top of `id`; errors when the top is
    /// not an eigenvector (for instance `u` not theta-invariant).
    pub fn eval(&mut self, u: &LatticeState, id: ModuleId) -> Result<Rational> {
        match id {
            ModuleId::Twisted { sector, parity } => {
                twisted_eigenvalue(&mut self.twisted, u, sector, parity)
            }
            _ => untwisted_eigenvalue(&mut self.untwisted, u, id),
        }
    }
}

pub fn character_value(u: &LatticeState, id: ModuleId) -> Result<Rational> {
    CharacterEvaluator::new(u.k()).eval(u, id)
}
