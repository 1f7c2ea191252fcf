use proptest::prelude::*;
use vlplus_core::error::Error;
use vlplus_core::exact::{int, pow2, rat, Rational};
use vlplus_core::lattice::{
    build_generators, em, exp_exp_expansion, module_catalog, vertex_mode, LatticeState, ModuleId,
};
use vlplus_core::twisted::twisted_top_scalars;
use vlplus_core::zhu::{CharacterEvaluator, ZhuContext};

fn named(k: u32, i: usize) -> LatticeState {
    let g = build_generators(k);
    match i {
        0 => g.omega,
        1 => g.j,
        _ => g.e,
    }
}

fn theta_even_state(k: u32, i: usize) -> LatticeState {
    match i {
        0 => build_generators(k).omega,
        1 => LatticeState::term(&[1, 1], 0, int(1), k),
        2 => LatticeState::term(&[3, 1], 0, int(1), k),
        3 => build_generators(k).e,
        _ => LatticeState::term(&[1], 2 * k as i64, int(1), k)
            .sub(&LatticeState::term(&[1], -2 * (k as i64), int(1), k)),
    }
}

#[test]
fn exp_products_match_schur_grid() {
    for k in 1..=3u32 {
        let kk = k as i64;
        for m in [-2i64, -1, 1, 2] {
            for s in [-2i64, -1, 1, 2] {
                let u = LatticeState::exp(2 * kk * m, k);
                let w = LatticeState::exp(2 * kk * s, k);
                for j in 0..=4u32 {
                    // coefficient of z^{2kms + j} is the mode n = -(2kms + j) - 1
                    let n = -(2 * kk * m * s + j as i64) - 1;
                    assert_eq!(
                        vertex_mode(&u, n, &w).unwrap(),
                        exp_exp_expansion(m, s, j, k),
                        "k={k} m={m} s={s} j={j}"
                    );
                }
            }
        }
    }
}

#[test]
fn twisted_top_values_small_k() {
    let c = twisted_top_scalars(3, 1, 1).unwrap();
    assert_eq!((c.omega, c.e, c.j), (rat(1, 16), rat(1, 32), rat(3, 128)));
    let c = twisted_top_scalars(2, 1, -1).unwrap();
    assert_eq!((c.omega, c.e, c.j), (rat(9, 16), rat(-7, 8), rat(-45, 128)));
    let c = twisted_top_scalars(2, 2, -1).unwrap();
    assert_eq!((c.omega, c.e, c.j), (rat(9, 16), rat(7, 8), rat(-45, 128)));
}

#[test]
fn twisted_e_product() {
    for k in 2..=6u32 {
        let kk = k as i64;
        let mut prod = int(1);
        for sector in [1u8, 2] {
            for parity in [1i8, -1] {
                prod *= twisted_top_scalars(k, sector, parity).unwrap().e;
            }
        }
        let lam = pow2(1 - 2 * kk);
        let want = &lam * &lam * (&lam * int(4 * kk - 1)) * (&lam * int(4 * kk - 1));
        assert!(prod == want || prod == -want.clone(), "k={k}");
    }
}

#[test]
fn catalog_shape() {
    for k in 2..=6u32 {
        let cat = module_catalog(k).unwrap();
        assert_eq!(cat.len(), k as usize + 7);
        let distinct: std::collections::BTreeSet<_> = cat.iter().map(|d| &d.character).collect();
        assert_eq!(distinct.len(), cat.len());
        for d in &cat {
            assert_eq!(d.top_weight, d.character.omega, "{}", d.id);
        }
    }
    let cat3 = module_catalog(3).unwrap();
    let cosets: Vec<Rational> = cat3
        .iter()
        .filter(|d| matches!(d.id, ModuleId::Coset(_)))
        .map(|d| d.top_weight.clone())
        .collect();
    assert_eq!(cosets, vec![rat(1, 12), rat(4, 12)]);
    assert!(module_catalog(1).is_err());
}

#[test]
fn multiplicative_on_tops() {
    for k in 2..=3u32 {
        let mut ctx = ZhuContext::new(k);
        let mut ev = CharacterEvaluator::new(k);
        for i in 0..3 {
            for j in 0..3 {
                let (u, v) = (named(k, i), named(k, j));
                let uv = ctx.star(&u, &v).unwrap();
                let vu = ctx.star(&v, &u).unwrap();
                for id in ModuleId::all(k) {
                    let cu = ev.eval(&u, id).unwrap();
                    let cv = ev.eval(&v, id).unwrap();
                    assert_eq!(ev.eval(&uv, id).unwrap(), &cu * &cv, "k={k} {i}*{j} on {id}");
                    assert_eq!(ev.eval(&vu, id).unwrap(), cu * cv);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, .. ProptestConfig::default() })]

    #[test]
    fn associative_on_tops(k in 2u32..=3, a in 0usize..3, b in 0usize..3, c in 0usize..3) {
        let mut ctx = ZhuContext::new(k);
        let mut ev = CharacterEvaluator::new(k);
        let (u, v, w) = (named(k, a), named(k, b), named(k, c));
        let uv = ctx.star(&u, &v).unwrap();
        let left = ctx.star(&uv, &w).unwrap();
        let vw = ctx.star(&v, &w).unwrap();
        let right = ctx.star(&u, &vw).unwrap();
        for id in ModuleId::all(k) {
            match (ev.eval(&left, id), ev.eval(&right, id)) {
                (Ok(l), Ok(r)) => prop_assert_eq!(l, r),
                // e^{±2 alpha} components have no twisted vertex operator here
                (Err(Error::UnsupportedTwist(_)), _) | (_, Err(Error::UnsupportedTwist(_))) => {
                    prop_assert!(id.is_twisted())
                }
                (l, r) => prop_assert!(false, "{:?} {:?}", l, r),
            }
        }
    }

    #[test]
    fn residues_vanish_on_tops(k in 2u32..=3, a in 0usize..5, b in 0usize..5, n in 0i64..3) {
        let mut ctx = ZhuContext::new(k);
        let mut ev = CharacterEvaluator::new(k);
        let r = ctx.ov_residue(&theta_even_state(k, a), &theta_even_state(k, b), n).unwrap();
        for id in ModuleId::all(k) {
            match ev.eval(&r, id) {
                Ok(x) => prop_assert_eq!(x, int(0), "{}", id),
                Err(Error::UnsupportedTwist(_)) => prop_assert!(id.is_twisted()),
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
    }

    #[test]
    fn theta_commutes(k in 1u32..=3, a in 0usize..5, levels in proptest::collection::vec(1u32..4, 0..3), s in -2i64..=2, n in -4i64..3) {
        let u = theta_even_state(k, a);
        let w = LatticeState::term(&levels, 2 * k as i64 * s, int(1), k).add(&em(1, k));
        let lhs = vertex_mode(&u, n, &w).unwrap().theta();
        let rhs = vertex_mode(&u, n, &w.theta()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sector_grading(k in 1u32..=3, m in -1i64..=1, levels in proptest::collection::vec(1u32..4, 0..3), r in 0i64..6, n in -3i64..3) {
        let kk = k as i64;
        let u = LatticeState::term(&[1, 1], 2 * kk * m, int(1), k);
        let w = LatticeState::term(&levels, r, int(1), k);
        let out = vertex_mode(&u, n, &w).unwrap();
        let want = u.weight().unwrap() + w.weight().unwrap() - int(n + 1);
        for (lab, _, _) in out.terms() {
            prop_assert_eq!(lab.num, r + 2 * kk * m);
        }
        if !out.is_zero() {
            prop_assert_eq!(out.weight().unwrap(), want);
        }
    }
}
