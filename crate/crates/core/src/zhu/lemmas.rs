//! Instance-level checks: the weight `k+6` basis matrix, `E*E`, and the
//! leading residue of `Y(E^m, z) E^m`.


use crate::error::{Error, Result};
use crate::exact::{binom_gen, determinant, int, MatrixQ, Rational};
use crate::fock::schur_q;
use crate::lattice::{build_generators, em, LatticeState};

use super::products::ZhuContext;

/// `h ⊗ E` (`odd = false`) or `h ⊗ F` (`odd = true`) for the monomial `h`.
fn dressed(levels: &[u32], odd: bool, k: u32) -> LatticeState {
    let n = 2 * k as i64;
    let plus = LatticeState::term(levels, n, int(1), k);
    let minus = LatticeState::term(levels, -n, int(1), k);
    if odd {
        plus.sub(&minus)
    } else {
        plus.add(&minus)
    }
}

const G_BASIS: [(&[u32], bool); 11] = [
    (&[6], true),
    (&[5, 1], false),
    (&[4, 2], false),
    (&[4, 1, 1], true),
    (&[3, 3], false),
    (&[3, 2, 1], true),
    (&[3, 1, 1, 1], false),
    (&[2, 2, 2], true),
    (&[2, 2, 1, 1], false),
    (&[2, 1, 1, 1, 1], true),
    (&[1, 1, 1, 1, 1, 1], false),
];

const F_BASIS: [(&[u32], bool); 7] = [
    (&[5], true),
    (&[4, 1], false),
    (&[3, 2], false),
    (&[3, 1, 1], true),
    (&[2, 2, 1], true),
    (&[2, 1, 1, 1], false),
    (&[1, 1, 1, 1, 1], true),
];

const H_BASIS: [(&[u32], bool); 3] = [(&[3], true), (&[2, 1], false), (&[1, 1, 1], true)];

/// The expected coordinate table, rows `L(-1)f_i`, `2k L(-3)h_j`, `v`.
pub fn lemma51_expected(k: u32) -> MatrixQ {
    let k = k as i64;
    let rows: [[i64; 11]; 11] = [
        [5, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 4, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 3, 0, 2, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 3, 0, 2, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 4, 0, 1, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 2, 0, 3, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 1],
        [6 * k, 0, 0, 0, 2 * k, 1, 0, 0, 0, 0, 0],
        [0, 4 * k, 2 * k, 0, 0, 2 * k, 0, 0, 1, 0, 0],
        [0, 0, 0, 6 * k, 0, 0, 2 * k, 0, 0, 1, 0],
        [32 * k * k * k, 48 * k * k, 48 * k * k, 24 * k, 24 * k * k, 48 * k, 4, 8 * k, 6, 0, 0],
    ];
    MatrixQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
        .expect("square table")
}

/// `6144 (1 - k) k^2`.
pub fn lemma51_expected_det(k: u32) -> Rational {
    let k = k as i64;
    int(6144 * (1 - k) * k * k)
}

#[derive(Clone, Debug)]
pub struct Lemma51 {
    pub k: u32,
    pub matrix: MatrixQ,
    pub expected: MatrixQ,
    pub determinant: Rational,
    pub expected_det: Rational,
}

impl Lemma51 {
    pub fn matrix_matches(&self) -> bool {
        self.matrix == self.expected
    }

    pub fn det_matches(&self) -> bool {
        self.determinant == self.expected_det
    }

    pub fn pass(&self) -> bool {
        self.matrix_matches() && self.det_matches()
    }
}

/// Coordinates of `v` in the g-basis; errors if `v` is outside its span.
fn g_coordinates(v: &LatticeState, k: u32) -> Result<Vec<Rational>> {
    let n = 2 * k as i64;
    let coords: Vec<Rational> = G_BASIS.iter().map(|(l, _)| v.coeff(l, n)).collect();
    let mut rebuilt = LatticeState::zero(k);
    for ((l, odd), c) in G_BASIS.iter().zip(&coords) {
        rebuilt = rebuilt.add_scaled(&dressed(l, *odd, k), c);
    }
    if rebuilt != *v {
        return Err(Error::Singular(format!("vector outside the weight-(k+6) basis: {v}")));
    }
    Ok(coords)
}

/// Builds `L(-1)f_i`, `2k L(-3)h_j` and `v = (a(-1)^4 1)_{-3} E` in the g-basis.
pub fn lemma51_check(k: u32) -> Result<Lemma51> {
    if k < 1 {
        return Err(Error::BadK { k, min: 1 });
    }
    let mut ctx = ZhuContext::new(k);
    let mut rows = Vec::with_capacity(11);
    for (l, odd) in F_BASIS {
        let w = ctx.l_minus(1, &dressed(l, odd, k))?;
        rows.push(g_coordinates(&w, k)?);
    }
    for (l, odd) in H_BASIS {
        let w = ctx.l_minus(3, &dressed(l, odd, k))?.scale(&int(2 * k as i64));
        rows.push(g_coordinates(&w, k)?);
    }
    let a4 = LatticeState::term(&[1, 1, 1, 1], 0, int(1), k);
    let v = ctx.mode(&a4, -3, &build_generators(k).e)?;
    rows.push(g_coordinates(&v, k)?);
    let matrix = MatrixQ::from_rows(rows)?;
    let determinant = determinant(&matrix)?;
    Ok(Lemma51 {
        k,
        matrix,
        expected: lemma51_expected(k),
        determinant,
        expected_det: lemma51_expected_det(k),
    })
}

/// `sum_{j=0}^k C(k, j) q_{2k-j}(alpha) 1`.
pub fn e_star_e_closed_form(k: u32) -> LatticeState {
    let mut acc = LatticeState::zero(k);
    for j in 0..=k {
        let q = schur_q(2 * k - j, &int(1), k);
        acc.add_scaled_assign(&LatticeState::from_fock(&q, 0, k), &binom_gen(k as i64, j));
    }
    acc
}

#[derive(Clone, Debug)]
pub struct EStarE {
    pub k: u32,
    pub computed: LatticeState,
    pub closed_form: LatticeState,
}

impl EStarE {
    pub fn pass(&self) -> bool {
        self.computed == self.closed_form
    }
}

pub fn e_star_e_check(k: u32) -> Result<EStarE> {
    let e = build_generators(k).e;
    let computed = ZhuContext::new(k).star(&e, &e)?;
    Ok(EStarE {
        k,
        computed,
        closed_form: e_star_e_closed_form(k),
    })
}

#[derive(Clone, Debug)]
pub struct LeadingResidue {
    pub m: i64,
    pub k: u32,
    /// `Res (1+z)^{km^2} z^{-2km^2-1} Y(E^m, z) E^m - E^{2m}`.
    pub remainder: LatticeState,
}

impl LeadingResidue {
    /// The remainder lies in `M(1)^+`.
    pub fn pass(&self) -> bool {
        self.remainder.labels().all(|n| n == 0) && self.remainder.is_theta_invariant()
    }
}

/// `Res_z (1+z)^{km^2} z^{-2km^2-1} Y(E^m, z) E^m = E^{2m} + (M(1)^+ terms)`.
pub fn leading_residue_check(m: i64, k: u32) -> Result<LeadingResidue> {
    if m < 1 {
        return Err(Error::BadMode(format!("m = {m}")));
    }
    let e = em(m, k);
    let n = 2 * k as i64 * m * m - 1;
    let res = ZhuContext::new(k).ov_residue(&e, &e, n)?;
    let remainder = res.sub(&em(2 * m, k));
    Ok(LeadingResidue { m, k, remainder })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma51_small_k() {
        for k in 2..=3 {
            let l = lemma51_check(k).unwrap();
            assert_eq!(l.matrix, l.expected, "k={k}\n{}", l.matrix);
            assert_eq!(l.determinant, l.expected_det);
        }
        assert_eq!(lemma51_expected_det(2), int(-24576));
        assert_eq!(lemma51_check(1).unwrap().determinant, int(0));
    }

    #[test]
    fn e_star_e() {
        for k in 1..=3 {
            assert!(e_star_e_check(k).unwrap().pass());
        }
    }

    #[test]
    fn leading_residue_m1() {
        for k in 1..=3 {
            let r = leading_residue_check(1, k).unwrap();
            assert!(r.pass());
            assert!(!r.remainder.is_zero());
        }
    }
}
