//! The Heisenberg Fock space M(1) with `<alpha, alpha> = 2k`, its modes,
//! the Virasoro vector, the weight-4 singular vector J, theta-parity and
//! elementary Schur polynomial states.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

pub use crate::freefield::HeisMonomial;
use crate::exact::{int, rat, Rational};
use crate::freefield::{add_scaled, add_term, schur, FreeField, Grading, Poly};
use crate::error::{Error, Result};

/// Finite rational combination of monomials `alpha(-n_1)...alpha(-n_r) 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct FockVector {
    pub(crate) terms: Poly,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(&[], Rational::from_integer(1.into()))
    }

    /// `c * alpha(-l_1)...alpha(-l_r) 1`; levels must be positive.
    pub fn monomial(levels: &[u32], c: Rational) -> Self {
        assert!(levels.iter().all(|&l| l > 0), "levels must be positive");
        let mut terms = Poly::new();
        add_term(&mut terms, HeisMonomial::new(levels.to_vec()), c);
        FockVector { terms }
    }

    pub(crate) fn from_poly(terms: Poly) -> Self {
        FockVector { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HeisMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, levels: &[u32]) -> Rational {
        self.terms
            .get(&HeisMonomial::new(levels.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut terms = Poly::new();
        add_scaled(&mut terms, &self.terms, c);
        FockVector { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &other.terms, &int(1));
        FockVector { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &other.terms, &int(-1));
        FockVector { terms }
    }

    /// The weight, when every term has the same weight. The zero vector has
    /// no weight.
    pub fn weight(&self) -> Option<u64> {
        let mut ws = self.terms.keys().map(HeisMonomial::raw_weight);
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.terms.keys().map(HeisMonomial::raw_weight).max()
    }

    /// Splits into homogeneous components, keyed by weight.
    pub fn components(&self) -> BTreeMap<u64, FockVector> {
        let mut out: BTreeMap<u64, FockVector> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.raw_weight())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, c)| (c, render_levels(m, "one"))))
    }
}

/// `a(-3)*a(-1)*<tail>`.
pub(crate) fn render_levels(m: &HeisMonomial, tail: &str) -> String {
    let mut s: Vec<String> = m.levels().iter().map(|l| format!("a(-{l})")).collect();
    s.push(tail.to_string());
    s.join("*")
}

pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Rational, String)>,
) -> fmt::Result {
    use num_traits::{One, Signed};
    let mut first = true;
    for (c, body) in terms {
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
        }
        first = false;
        if mag.is_one() {
            write!(f, "{body}")?;
        } else {
            write!(f, "{mag}*{body}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// The named states of M(1)^+ used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedHeisState {
    Vacuum,
    Omega,
    J,
}

impl NamedHeisState {
    pub fn value(self, k: u32) -> FockVector {
        let k = k as i64;
        match self {
            NamedHeisState::Vacuum => FockVector::vacuum(),
            // omega = 1/2 beta(-1)^2 with beta = alpha / sqrt(2k)
            NamedHeisState::Omega => FockVector::monomial(&[1, 1], rat(1, 4 * k)),
            NamedHeisState::J => FockVector::monomial(&[1, 1, 1, 1], rat(1, 4 * k * k))
                .add(&FockVector::monomial(&[3, 1], rat(-1, k)))
                .add(&FockVector::monomial(&[2, 2], rat(3, 4 * k))),
        }
    }
}

pub fn omega(k: u32) -> FockVector {
    NamedHeisState::Omega.value(k)
}

pub fn j_state(k: u32) -> FockVector {
    NamedHeisState::J.value(k)
}

/// `alpha(n) v`: creation for `n < 0`, `[alpha(m), alpha(n)] = 2km delta`
/// for `n > 0`, zero for `n = 0` (no momentum in M(1)).
pub fn apply_alpha(n: i64, v: &FockVector, k: u32) -> FockVector {
    let field = FreeField::new(k, Grading::Integral);
    match n {
        0 => FockVector::zero(),
        n if n < 0 => FockVector::from_poly(field.create((-n) as u32, &v.terms)),
        n => FockVector::from_poly(field.annihilate(n as u32, &v.terms)),
    }
}

/// `u_n w` for `Y(u, z) = sum u_n z^{-n-1}` on M(1).
pub fn heis_vertex_mode(u: &FockVector, n: i64, w: &FockVector, k: u32) -> Result<FockVector> {
    if !u.is_zero() && u.weight().is_none() {
        return Err(Error::NotHomogeneous);
    }
    let mut field = FreeField::new(k, Grading::Integral);
    Ok(mode_with(&mut field, u, n, w))
}

pub(crate) fn mode_with(field: &mut FreeField, u: &FockVector, n: i64, w: &FockVector) -> FockVector {
    let mut out = Poly::new();
    for (mono, c) in &u.terms {
        let part = field.normal_ordered(mono, 0, &w.terms, None, 0, 2 * (-n - 1));
        add_scaled(&mut out, &part, c);
    }
    FockVector::from_poly(out)
}

/// `L(n) w`.
pub fn virasoro(n: i64, w: &FockVector, k: u32) -> FockVector {
    let mut field = FreeField::new(k, Grading::Integral);
    mode_with(&mut field, &omega(k), n + 1, w)
}

/// `p_j(c alpha) 1`: the coefficient of `z^j` in `exp(sum_n c alpha(-n) z^n / n) 1`.
pub fn schur_p(j: u32, c: &Rational, _k: u32) -> FockVector {
    FockVector::from_poly(schur(Grading::Integral, c, 2 * j as i64))
}

/// `q_j(c alpha) = p_j(c alpha) + p_j(-c alpha)`.
pub fn schur_q(j: u32, c: &Rational, k: u32) -> FockVector {
    schur_p(j, c, k).add(&schur_p(j, &-c.clone(), k))
}

/// Projection onto the theta-eigenspace with eigenvalue `sign`.
pub fn theta_project(v: &FockVector, sign: i32) -> FockVector {
    FockVector::from_poly(
        v.terms
            .iter()
            .filter(|(m, _)| m.parity() == sign.signum())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect(),
    )
}

/// Monomial basis of the weight-`w` subspace of M(1) (all partitions of `w`).
pub fn fock_basis(w: u32) -> Vec<HeisMonomial> {
    let mut out = Vec::new();
    partitions(w, w, &mut Vec::new(), &mut out);
    out
}

fn partitions(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<HeisMonomial>) {
    if rem == 0 {
        out.push(HeisMonomial::new(cur.clone()));
        return;
    }
    for p in (1..=rem.min(max)).rev() {
        cur.push(p);
        partitions(rem - p, p, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Rational {
        int(1)
    }

    #[test]
    fn alpha_actions() {
        for k in 1..4u32 {
            let v = FockVector::monomial(&[1], one());
            assert_eq!(
                apply_alpha(1, &v, k),
                FockVector::vacuum().scale(&int(2 * k as i64))
            );
            assert!(apply_alpha(0, &v, k).is_zero());
            let w = FockVector::monomial(&[2, 1], one());
            assert_eq!(
                apply_alpha(2, &w, k),
                FockVector::monomial(&[1], int(4 * k as i64))
            );
            assert_eq!(apply_alpha(-3, &v, k), FockVector::monomial(&[3, 1], one()));
        }
    }

    #[test]
    fn omega_grades() {
        let k = 3;
        let a1 = FockVector::monomial(&[1], one());
        assert_eq!(heis_vertex_mode(&omega(k), 1, &a1, k).unwrap(), a1);
        let m = FockVector::monomial(&[3, 1, 1], rat(2, 5));
        assert_eq!(virasoro(0, &m, k), m.scale(&int(5)));
    }

    #[test]
    fn j_is_singular() {
        for k in 1..5 {
            let j = j_state(k);
            assert_eq!(j.coeff(&[3, 1]), rat(-1, k as i64));
            assert_eq!(virasoro(0, &j, k), j.scale(&int(4)));
            for n in 1..=4 {
                assert!(virasoro(n, &j, k).is_zero(), "L({n})J != 0 at k={k}");
            }
            let lm1 = heis_vertex_mode(&omega(k), 0, &j, k).unwrap();
            assert_eq!(lm1, virasoro(-1, &j, k));
            assert_eq!(lm1.weight(), Some(5));
        }
    }

    #[test]
    fn j_on_vacuum() {
        let k = 2;
        let vac = FockVector::vacuum();
        assert!(heis_vertex_mode(&j_state(k), 3, &vac, k).unwrap().is_zero());
        assert_eq!(heis_vertex_mode(&j_state(k), -1, &vac, k).unwrap(), j_state(k));
        assert!(heis_vertex_mode(&j_state(k), 0, &vac, k).unwrap().is_zero());
    }

    #[test]
    fn non_homogeneous_source_rejected() {
        let u = FockVector::monomial(&[1], one()).add(&FockVector::monomial(&[2], one()));
        assert_eq!(
            heis_vertex_mode(&u, 0, &FockVector::vacuum(), 1),
            Err(Error::NotHomogeneous)
        );
    }

    #[test]
    fn schur_states() {
        assert_eq!(schur_p(0, &one(), 1), FockVector::vacuum());
        assert_eq!(schur_p(1, &one(), 1), FockVector::monomial(&[1], one()));
        assert_eq!(
            schur_p(2, &one(), 1),
            FockVector::monomial(&[1, 1], rat(1, 2)).add(&FockVector::monomial(&[2], rat(1, 2)))
        );
        // q_j is even
        let q = schur_q(5, &int(2), 1);
        assert!(q.terms().all(|(m, _)| m.len() % 2 == 0));
    }

    #[test]
    fn schur_newton_recurrence() {
        // j p_j = sum_{i=1}^j c alpha(-i) p_{j-i}
        for c in [int(1), int(-2), rat(1, 3)] {
            for j in 1..=8u32 {
                let mut rhs = FockVector::zero();
                for i in 1..=j {
                    let prev = schur_p(j - i, &c, 1);
                    rhs = rhs.add(&apply_alpha(-(i as i64), &prev, 1).scale(&c));
                }
                assert_eq!(schur_p(j, &c, 1).scale(&int(j as i64)), rhs);
            }
        }
    }

    #[test]
    fn theta_parity() {
        let a1 = FockVector::monomial(&[1], one());
        assert!(theta_project(&a1, 1).is_zero());
        assert_eq!(theta_project(&omega(2), 1), omega(2));
        let v = FockVector::monomial(&[2], one()).add(&FockVector::monomial(&[1, 1], one()));
        assert_eq!(theta_project(&v, -1), FockVector::monomial(&[2], one()));
    }

    #[test]
    fn basis_sizes() {
        let sizes: Vec<usize> = (0..=8).map(|w| fock_basis(w).len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn display() {
        assert_eq!(omega(2).to_string(), "1/8*a(-1)*a(-1)*one");
        assert_eq!(FockVector::zero().to_string(), "0");
        let v = FockVector::monomial(&[2], int(-1)).add(&FockVector::vacuum());
        assert_eq!(v.to_string(), "one - a(-2)*one");
    }
}
