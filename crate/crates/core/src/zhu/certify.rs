//! Exact search for O(V)-membership certificates in a weight-truncated
//! span of residue generators.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, linear_solve, MatrixQ, Rational, Solution};
use crate::fock::{fock_basis, HeisMonomial};
use crate::lattice::{build_generators, LatticeState};

use super::products::{OvCertificate, OvGenerator, ZhuContext};
use super::structure::{fit_structure_polynomials, t_poly};

#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Certified(OvCertificate),
    /// No combination of the generators within the cutoff hits the target.
    Inconclusive { generators: usize, rank: usize },
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&OvCertificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Theta-invariant basis of `V_L^+(m)` in weight `w` (`m = 0` gives `M(1)^+`).
fn plus_basis(m: i64, w: i64, k: u32) -> Vec<LatticeState> {
    let two_km = 2 * k as i64 * m;
    let shift = k as i64 * m * m;
    if w < shift {
        return Vec::new();
    }
    fock_basis((w - shift) as u32)
        .into_iter()
        .filter(|h: &HeisMonomial| m != 0 || h.parity() == 1)
        .map(|h| {
            let plus = LatticeState::term(h.levels(), two_km, int(1), k);
            if m == 0 {
                plus
            } else {
                let minus = LatticeState::term(h.levels(), -two_km, int(h.parity() as i64), k);
                plus.add(&minus)
            }
        })
        .collect()
}

/// Residue generators landing in `V_L^+(m)` with top weight at most `cutoff`:
/// pairs from `M(1)^+ x V_L^+(m)` and `V_L^+(m) x M(1)^+`.
fn generators(m: i64, cutoff: i64, k: u32) -> Vec<(LatticeState, LatticeState, i64)> {
    let mut out = Vec::new();
    let mut pairs = vec![(0, m)];
    if m != 0 {
        pairs.push((m, 0));
    }
    for (mu, mv) in pairs {
        for wu in 1..cutoff {
            let us = plus_basis(mu, wu, k);
            if us.is_empty() {
                continue;
            }
            for wv in 0..cutoff - wu {
                let vs = plus_basis(mv, wv, k);
                for n in 0..=(cutoff - wu - wv - 1) {
                    for u in &us {
                        for v in &vs {
                            out.push((u.clone(), v.clone(), n));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Coordinates keyed by `(label, monomial)`; for `m != 0` only the `+m` label
/// is kept since theta-invariance fixes the rest.
fn coordinates(v: &LatticeState, m: i64) -> BTreeMap<(i64, HeisMonomial), Rational> {
    v.terms()
        .filter(|(lab, _, _)| m == 0 || lab.num > 0)
        .map(|(lab, mono, c)| ((lab.num, mono.clone()), c.clone()))
        .collect()
}

fn sector(target: &LatticeState) -> Result<i64> {
    let two_k = 2 * target.k() as i64;
    let mut ms: Vec<i64> = target.labels().map(|n| n.abs()).collect();
    ms.dedup();
    match ms.as_slice() {
        [n] if n % two_k == 0 => Ok(n / two_k),
        [_] => Err(Error::NonIntegralSource),
        _ => Err(Error::MixedCoset),
    }
}

/// Searches `target = sum c_i Res (1+z)^{wt u_i} z^{-2-n_i} Y(u_i,z) v_i`
/// over generators with `wt u + wt v + n + 1 <= cutoff`. A returned
/// certificate has been replayed exactly.
pub fn certify_in_ov(target: &LatticeState, cutoff: i64) -> Result<CertifyOutcome> {
    let k = target.k();
    let empty = |generators| OvCertificate {
        target: target.clone(),
        generators,
        cutoff,
    };
    if target.is_zero() {
        return Ok(CertifyOutcome::Certified(empty(Vec::new())));
    }
    if !target.is_theta_invariant() {
        return Err(Error::NotThetaInvariant);
    }
    let top = target.max_weight().expect("nonzero target");
    if top > int(cutoff) {
        return Err(Error::CutoffTooSmall {
            cutoff,
            top: top.to_string(),
        });
    }
    let m = sector(target)?;
    let mut ctx = ZhuContext::new(k);
    let gens = generators(m, cutoff, k);
    let mut images = Vec::with_capacity(gens.len());
    let target_coords = coordinates(target, m);
    for (u, v, n) in &gens {
        let img = ctx.ov_residue(u, v, *n)?;
        // a single generator proportional to the target
        if let Some((key, c0)) = target_coords.iter().next() {
            let ci = coordinates(&img, m);
            if let Some(c1) = ci.get(key) {
                let lambda = c0 / c1;
                if img.scale(&lambda) == *target {
                    let cert = empty(vec![OvGenerator {
                        u: u.clone(),
                        v: v.clone(),
                        n: *n,
                        coeff: lambda,
                    }]);
                    return Ok(CertifyOutcome::Certified(cert));
                }
            }
        }
        images.push(coordinates(&img, m));
    }
    let mut index: BTreeMap<(i64, HeisMonomial), usize> = BTreeMap::new();
    for key in images.iter().flat_map(|c| c.keys()).chain(target_coords.keys()) {
        let next = index.len();
        index.entry(key.clone()).or_insert(next);
    }
    let mut mat = MatrixQ::zeros(index.len(), images.len());
    for (j, img) in images.iter().enumerate() {
        for (key, c) in img {
            mat[(index[key], j)] = c.clone();
        }
    }
    let mut rhs = vec![Rational::zero(); index.len()];
    for (key, c) in &target_coords {
        rhs[index[key]] = c.clone();
    }
    let solution = linear_solve(&mat, &rhs)?;
    let Some(x) = solution.any() else {
        let rank = rank_of(&mat);
        return Ok(CertifyOutcome::Inconclusive {
            generators: gens.len(),
            rank,
        });
    };
    let generators = gens
        .into_iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|((u, v, n), c)| OvGenerator {
            u,
            v,
            n,
            coeff: c.clone(),
        })
        .collect();
    let cert = empty(generators);
    if !cert.replays()? {
        return Err(Error::Singular("certificate failed to replay".into()));
    }
    Ok(CertifyOutcome::Certified(cert))
}

fn rank_of(m: &MatrixQ) -> usize {
    let zero = vec![Rational::zero(); m.rows()];
    match linear_solve(m, &zero) {
        Ok(Solution::Underdetermined { nullity, .. }) => m.cols() - nullity,
        Ok(_) => m.cols(),
        Err(_) => 0,
    }
}

/// Relations that must vanish in A(V_L^+) for `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ERelation {
    /// `J * E - r(omega) * E`
    L1,
    /// `t(omega) * E`
    L2,
}

/// `f(omega) * E` with right-nested products `omega * (omega * ... E)`.
fn poly_omega_times(ctx: &mut ZhuContext, coeffs: &[Rational], e: &LatticeState) -> Result<LatticeState> {
    let omega = build_generators(ctx.k()).omega;
    let mut power = e.clone();
    let mut acc = LatticeState::zero(ctx.k());
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            power = ctx.star(&omega, &power)?;
        }
        acc.add_scaled_assign(&power, c);
    }
    Ok(acc)
}

/// The element of `V_L^+` representing the relation.
pub fn relation_target(k: u32, rel: ERelation) -> Result<LatticeState> {
    let mut ctx = ZhuContext::new(k);
    let g = build_generators(k);
    match rel {
        ERelation::L1 => {
            let r = fit_structure_polynomials(k)?.r;
            let je = ctx.star(&g.j, &g.e)?;
            Ok(je.sub(&poly_omega_times(&mut ctx, r.coeffs(), &g.e)?))
        }
        ERelation::L2 => poly_omega_times(&mut ctx, t_poly(k).coeffs(), &g.e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ModuleId;
    use crate::zhu::CharacterEvaluator;

    #[test]
    fn trivial_certificates() {
        let k = 2;
        let zero = LatticeState::zero(k);
        let c = certify_in_ov(&zero, 4).unwrap();
        assert!(c.certificate().unwrap().generators.is_empty());
        let g = build_generators(k);
        let one = LatticeState::vacuum(k);
        let t = ZhuContext::new(k).circ(&g.omega, &one).unwrap();
        let c = certify_in_ov(&t, 4).unwrap();
        let cert = c.certificate().unwrap();
        assert_eq!(cert.generators.len(), 1);
        assert!(cert.replays().unwrap());
        assert!(certify_in_ov(&t, 2).is_err());
        assert_eq!(certify_in_ov(&g.f, 4).unwrap_err(), Error::NotThetaInvariant);
    }

    #[test]
    fn l_minus_one_plus_zero() {
        // (L(-1) + L(0)) E lies in O(V)
        let k = 2;
        let g = build_generators(k);
        let mut ctx = ZhuContext::new(k);
        let t = ctx.l_minus(1, &g.e).unwrap().add(&ctx.l_minus(0, &g.e).unwrap());
        let cert = certify_in_ov(&t, 4).unwrap();
        assert!(cert.certificate().unwrap().replays().unwrap());
    }

    #[test]
    fn vacuum_is_inconclusive() {
        // the unit of A(V) is nonzero, so no combination of residues reaches it
        let out = certify_in_ov(&LatticeState::vacuum(2), 4).unwrap();
        assert!(matches!(out, CertifyOutcome::Inconclusive { generators, .. } if generators > 0));
        assert!(out.certificate().is_none());
    }

    #[test]
    fn relation_targets_vanish_on_tops() {
        for k in [2u32, 3] {
            for rel in [ERelation::L1, ERelation::L2] {
                let t = relation_target(k, rel).unwrap();
                assert!(t.is_theta_invariant());
                let mut ev = CharacterEvaluator::new(k);
                for id in ModuleId::all(k) {
                    assert!(ev.eval(&t, id).unwrap().is_zero(), "k={k} {rel:?} {id}");
                }
            }
        }
    }
}
