//! Structure polynomials of A(V_L^+), the relation suite, evaluation-matrix
//! bases and the classification.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::checks::{all_pass, Check, Provenance};
use crate::error::{Error, Result};
use crate::exact::{
    determinant, factorial, int, linear_solve, pow, rat, MatrixQ, PolynomialQ, Rational, Solution,
};
use crate::lattice::{module_catalog, Character, ModuleDescriptor, ModuleId, RANK_ONE_NOTICE};

use super::lemmas::e_star_e_check;

fn poly(coeffs: &[Rational]) -> PolynomialQ {
    PolynomialQ::new(coeffs.to_vec())
}

fn x() -> PolynomialQ {
    PolynomialQ::x()
}

/// `(4k - 1)(4k - 9)`, nonzero for every integer k.
fn denom(k: u32) -> Result<Rational> {
    let k = k as i64;
    let d = int((4 * k - 1) * (4 * k - 9));
    if d.is_zero() {
        return Err(Error::Singular("(4k-1)(4k-9) = 0".into()));
    }
    Ok(d)
}

/// `1816/35 x^4 - 212/5 x^3 + 89/10 x^2 - 27/70 x`.
pub fn p_poly() -> PolynomialQ {
    poly(&[int(0), rat(-27, 70), rat(89, 10), rat(-212, 5), rat(1816, 35)])
}

/// `-314/35 x^2 + 89/14 x - 27/70`.
pub fn q_poly() -> PolynomialQ {
    poly(&[rat(-27, 70), rat(89, 14), rat(-314, 35)])
}

/// Closed form of `r` with `J * E = r(omega) E`.
pub fn r_closed_form(k: u32) -> Result<PolynomialQ> {
    let d = denom(k)?;
    let kk = k as i64;
    Ok(poly(&[
        int(27 * kk * (kk - 1)) / (int(8) * &d),
        int(9 + 80 * kk - 104 * kk * kk) / (int(2) * &d),
        int(2 * (32 * kk * kk - 8 * kk - 9)) / &d,
    ]))
}

/// `(x - k/4)(x - 1/16)(x - 9/16)`.
pub fn t_poly(k: u32) -> PolynomialQ {
    PolynomialQ::from_roots(Rational::one(), &[rat(k as i64, 4), rat(1, 16), rat(9, 16)])
}

/// `2 (4k)^k / (2k)!`.
pub fn a0_closed_form(k: u32) -> Rational {
    let num = pow(&int(4 * k as i64), k) * int(2);
    num / Rational::from_integer(factorial(2 * k))
}

/// `J + omega - 4 omega^2` as a polynomial identity in characters: `j + x - 4x^2`.
fn singular_combo(c: &Character) -> Rational {
    &c.j + &c.omega - int(4) * &c.omega * &c.omega
}

/// Roots `i^2 / 4k`, `0 <= i < k`, of `a`.
fn a_roots(k: u32) -> Vec<Rational> {
    (0..k as i64).map(|i| rat(i * i, 4 * k as i64)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZhuPolynomials {
    pub k: u32,
    pub p: PolynomialQ,
    pub q: PolynomialQ,
    pub r: PolynomialQ,
    pub s: PolynomialQ,
    pub t: PolynomialQ,
    pub a: PolynomialQ,
    pub b: PolynomialQ,
    pub phi: PolynomialQ,
    pub a0: Rational,
}

fn character_of(cat: &[ModuleDescriptor], id: ModuleId) -> Result<&Character> {
    cat.iter()
        .find(|d| d.id == id)
        .map(|d| &d.character)
        .ok_or_else(|| Error::WrongModule(id.to_string()))
}

/// Solves `sum_i coef_i(x) y_i = rhs` at three sample points for a quadratic.
fn fit_quadratic(rows: &[(Rational, Rational, Rational)]) -> Result<PolynomialQ> {
    // rows: (x, weight, rhs) meaning weight * (c0 + c1 x + c2 x^2) = rhs
    let m = MatrixQ::from_rows(
        rows.iter()
            .map(|(x, w, _)| vec![w.clone(), w * x, w * x * x])
            .collect(),
    )?;
    let b: Vec<Rational> = rows.iter().map(|(_, _, r)| r.clone()).collect();
    match linear_solve(&m, &b)? {
        Solution::Unique(c) => Ok(PolynomialQ::new(c)),
        _ => Err(Error::Singular("structure polynomial fit".into())),
    }
}

const T1_PLUS: ModuleId = ModuleId::Twisted { sector: 1, parity: 1 };
const T1_MINUS: ModuleId = ModuleId::Twisted { sector: 1, parity: -1 };

fn fit_from_catalog(k: u32, cat: &[ModuleDescriptor]) -> Result<ZhuPolynomials> {
    let one = Rational::one();
    let mut rows = Vec::new();
    for id in [ModuleId::HalfPlus, T1_PLUS, T1_MINUS] {
        let c = character_of(cat, id)?;
        rows.push((c.omega.clone(), one.clone(), c.j.clone()));
    }
    let r = fit_quadratic(&rows)?;

    let roots = a_roots(k);
    let monic = PolynomialQ::from_roots(one.clone(), &roots);
    let at = monic.eval(&rat(k as i64, 4));
    if at.is_zero() {
        return Err(Error::Singular("a(k/4) = 0".into()));
    }
    let a0 = one.clone() / at;
    let a = monic.scale(&a0);

    let mut rows = Vec::new();
    for id in [ModuleId::VlMinus, T1_PLUS, T1_MINUS] {
        let c = character_of(cat, id)?;
        let rhs = &c.e * &c.e - a.eval(&c.omega);
        rows.push((c.omega.clone(), singular_combo(c), rhs));
    }
    let s = fit_quadratic(&rows)?;

    let p = p_poly();
    let q = q_poly();
    let x = x();
    let four_x2 = &(&x * &x).scale(&int(4));
    let b = &a + &(&(&(&(&q - &r) + &x) - four_x2) * &s);
    let phi = &PolynomialQ::from_roots(
        one,
        &[int(1), rat(1, 16), rat(9, 16), rat(k as i64, 4)],
    ) * &a;
    Ok(ZhuPolynomials {
        k,
        p,
        q,
        r,
        s,
        t: t_poly(k),
        a,
        b,
        phi,
        a0,
    })
}

/// Fits `r` on `V_{L+alpha/2}^+, T_1^+, T_1^-`, builds `a` from its roots and
/// `a(k/4) = 1`, fits `s` on `V_L^-, T_1^+, T_1^-`, then assembles `b`, `phi`.
pub fn fit_structure_polynomials(k: u32) -> Result<ZhuPolynomials> {
    let cat = module_catalog(k)?;
    fit_from_catalog(k, &cat)
}

/// Square class of `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    NonSquare,
    /// `k = 4m^2`
    EvenSquare,
    /// `k = (2m+1)^2`
    OddSquare,
}

impl SquareClass {
    pub fn of(k: u32) -> Self {
        let r = (k as f64).sqrt().round() as u32;
        let root = (r.saturating_sub(1)..=r + 1).find(|s| s * s == k);
        match root {
            None => SquareClass::NonSquare,
            Some(s) if s % 2 == 0 => SquareClass::EvenSquare,
            Some(_) => SquareClass::OddSquare,
        }
    }

    /// Expected vanishing of `b` at `1, 1/16, 9/16`.
    pub fn b_zero_pattern(self) -> [bool; 3] {
        match self {
            SquareClass::NonSquare => [false, false, false],
            SquareClass::EvenSquare => [true, true, true],
            SquareClass::OddSquare => [true, false, false],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SquareClass::NonSquare => "non-square",
            SquareClass::EvenSquare => "even square",
            SquareClass::OddSquare => "odd square",
        }
    }
}

/// A relation evaluated on one module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub relation: &'static str,
    pub module: ModuleId,
    pub value: Rational,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub k: u32,
    pub polynomials: ZhuPolynomials,
    pub residuals: Vec<Residual>,
    pub checks: Vec<Check>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        all_pass(&self.checks)
    }
}

/// Relations as functions of a character.
fn relations(z: &ZhuPolynomials) -> Vec<(&'static str, Box<dyn Fn(&Character) -> Rational + '_>)> {
    let b2 = PolynomialQ::from_roots(Rational::one(), &[int(1), rat(1, 16), rat(9, 16)]);
    vec![
        (
            "B1",
            Box::new(|c: &Character| &c.j * &c.j - z.p.eval(&c.omega) - z.q.eval(&c.omega) * &c.j),
        ),
        (
            "B2",
            Box::new(move |c: &Character| b2.eval(&c.omega) * singular_combo(c)),
        ),
        ("L1", Box::new(|c: &Character| &c.j * &c.e - z.r.eval(&c.omega) * &c.e)),
        ("L2", Box::new(|c: &Character| z.t.eval(&c.omega) * &c.e)),
        (
            "E2",
            Box::new(|c: &Character| {
                &c.e * &c.e - z.a.eval(&c.omega) - z.s.eval(&c.omega) * singular_combo(c)
            }),
        ),
        ("phi", Box::new(|c: &Character| z.phi.eval(&c.omega))),
    ]
}

/// Polynomial identities, trichotomy and the `phi` non-root check for `z`.
pub fn polynomial_checks(z: &ZhuPolynomials) -> Result<Vec<Check>> {
    let k = z.k;
    let kk = k as i64;
    let d = denom(k)?;
    let x = x();
    let x2 = &x * &x;
    let mut out = Vec::new();

    let r_cf = r_closed_form(k)?;
    out.push(Check::equal("r fit = closed form", &r_cf, &z.r, Provenance::Stated));
    out.push(Check::equal("a0 = 2(4k)^k/(2k)!", &a0_closed_form(k), &z.a0, Provenance::Stated));
    out.push(Check::new(
        "deg a = k",
        z.a.degree() == Some(k as usize),
        k,
        format!("{:?}", z.a.degree()),
        Provenance::Stated,
    ));
    out.push(Check::new(
        "deg s <= 2",
        z.s.degree().is_none_or(|d| d <= 2),
        "<= 2",
        format!("{:?}", z.s.degree()),
        Provenance::Stated,
    ));

    let quad = &x2.scale(&int(4)) - &x;
    let ident = &(&(&z.p.scale(&int(-1)) - &(&z.q * &quad)) + &(&quad * &quad));
    out.push(Check::equal(
        "-p - q(4x^2-x) + (4x^2-x)^2 = 0",
        &PolynomialQ::zero(),
        ident,
        Provenance::Stated,
    ));

    let lhs58 = &(&(&z.q - &z.r) + &x) - &x2.scale(&int(4));
    let c58 = int(9 * (-12 + 65 * kk - 33 * kk * kk)) / (int(280) * &d);
    let rhs58 = PolynomialQ::from_roots(int(256) * c58, &[rat(1, 16), rat(9, 16)]);
    out.push(Check::equal("q - r + x - 4x^2 closed form", &rhs58, &lhs58, Provenance::Stated));

    let b1_ratio = int((kk - 4) * (29 * kk - 9)) / (int(8) * &d);
    let a1 = z.a.eval(&int(1));
    out.push(Check::equal(
        "b(1) = (k-4)(29k-9)/(8(4k-1)(4k-9)) a(1)",
        &(b1_ratio * &a1),
        &z.b.eval(&int(1)),
        Provenance::Stated,
    ));

    let lhs512 = &(&z.r - &x2.scale(&int(4))) + &x;
    let rhs512 = &poly(&[int(-kk), int(4)])
        * &poly(&[int(3 - 3 * kk), int(32 * kk - 12)]).scale(&(int(9) / (int(8) * &d)));
    out.push(Check::equal("r - 4x^2 + x closed form", &rhs512, &lhs512, Provenance::Stated));

    let crit = rat(3 * kk - 3, 32 * kk - 12);
    let phi_at = z.phi.eval(&crit);
    out.push(Check::new(
        "phi((3k-3)/(32k-12)) != 0",
        !phi_at.is_zero(),
        "nonzero",
        &phi_at,
        Provenance::Stated,
    ));

    let class = SquareClass::of(k);
    let pts = [int(1), rat(1, 16), rat(9, 16)];
    let vals: Vec<Rational> = pts.iter().map(|p| z.b.eval(p)).collect();
    let zeros: Vec<bool> = vals.iter().map(|v| v.is_zero()).collect();
    let fmt_pattern = |zs: &[bool]| {
        zs.iter()
            .map(|&zz| if zz { "0" } else { "nonzero" })
            .collect::<Vec<_>>()
            .join(", ")
    };
    out.push(Check::new(
        format!("b(1), b(1/16), b(9/16) pattern ({})", class.as_str()),
        zeros == class.b_zero_pattern(),
        fmt_pattern(&class.b_zero_pattern()),
        fmt_pattern(&zeros),
        Provenance::Stated,
    ));
    out.push(Check::equal("b(1/16) = a(1/16)", &z.a.eval(&pts[1]), &vals[1], Provenance::Stated));
    out.push(Check::equal("b(9/16) = a(9/16)", &z.a.eval(&pts[2]), &vals[2], Provenance::Stated));
    out.push(Check::equal("r(k/4) = k^2/4 - k/4", &rat(kk * kk - kk, 4), &z.r.eval(&rat(kk, 4)), Provenance::Derived));
    Ok(out)
}

/// Evaluates every relation on every module and checks the polynomial
/// identities; also compares `E * E` with its closed form.
pub fn verify_relations(k: u32) -> Result<RelationReport> {
    let cat = module_catalog(k)?;
    let z = fit_from_catalog(k, &cat)?;
    let mut residuals = Vec::new();
    let mut checks = Vec::new();
    for (name, rel) in relations(&z) {
        let mut bad = Vec::new();
        for d in &cat {
            let value = rel(&d.character);
            if !value.is_zero() {
                bad.push(format!("{}: {}", d.id, value));
            }
            residuals.push(Residual { relation: name, module: d.id, value });
        }
        checks.push(Check::new(
            format!("{name} vanishes on all {} tops", cat.len()),
            bad.is_empty(),
            "0",
            if bad.is_empty() { "0".to_string() } else { bad.join("; ") },
            if name == "E2" || name == "phi" { Provenance::Derived } else { Provenance::Stated },
        ));
    }
    if SquareClass::of(k) == SquareClass::EvenSquare {
        let crit = rat(3 * k as i64 - 3, 32 * k as i64 - 12);
        let f = &PolynomialQ::from_roots(Rational::one(), &[rat(k as i64, 4), crit]) * &z.a;
        let bad: Vec<String> = cat
            .iter()
            .filter(|d| !f.eval(&d.character.omega).is_zero())
            .map(|d| d.id.to_string())
            .collect();
        checks.push(Check::new(
            "(x-k/4)(x-(3k-3)/(32k-12))a(x) vanishes on all tops",
            bad.is_empty(),
            "0",
            if bad.is_empty() { "0".to_string() } else { bad.join(", ") },
            Provenance::Stated,
        ));
    }
    checks.extend(polynomial_checks(&z)?);
    let ee = e_star_e_check(k)?;
    checks.push(Check::new(
        "E*E = sum_j C(k,j) q_{2k-j}",
        ee.pass(),
        &ee.closed_form,
        &ee.computed,
        Provenance::Stated,
    ));
    Ok(RelationReport {
        k,
        polynomials: z,
        residuals,
        checks,
    })
}

/// `omega^s * J^t * E^u` in A(V_L^+).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZhuMonomial {
    pub s: u32,
    pub t: u32,
    pub u: u32,
}

impl ZhuMonomial {
    pub fn eval(&self, c: &Character) -> Rational {
        pow(&c.omega, self.s) * pow(&c.j, self.t) * pow(&c.e, self.u)
    }
}

impl fmt::Display for ZhuMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("omega", self.s), ("J", self.t), ("E", self.u)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// The candidate basis for the square class of `k`.
pub fn candidate_basis(k: u32) -> Vec<ZhuMonomial> {
    let w = |s| ZhuMonomial { s, t: 0, u: 0 };
    let wj = |s| ZhuMonomial { s, t: 1, u: 0 };
    let we = |s| ZhuMonomial { s, t: 0, u: 1 };
    let (top, js) = match SquareClass::of(k) {
        SquareClass::NonSquare => (k + 3, 0),
        SquareClass::EvenSquare => (k, 3),
        SquareClass::OddSquare => (k + 2, 1),
    };
    let mut v: Vec<ZhuMonomial> = (0..=top).map(w).collect();
    v.extend((0..js).map(wj));
    v.extend((0..3).map(we));
    v
}

#[derive(Clone, Debug)]
pub struct BasisCertificate {
    pub k: u32,
    pub class: SquareClass,
    pub basis: Vec<ZhuMonomial>,
    pub modules: Vec<ModuleId>,
    /// Rows are modules, columns basis elements.
    pub matrix: MatrixQ,
    pub determinant: Rational,
    pub characters_distinct: bool,
}

impl BasisCertificate {
    pub fn pass(&self) -> bool {
        !self.determinant.is_zero()
            && self.characters_distinct
            && self.basis.len() == self.k as usize + 7
    }
}

fn certificate_from_catalog(k: u32, cat: &[ModuleDescriptor]) -> Result<BasisCertificate> {
    let basis = candidate_basis(k);
    let rows = cat
        .iter()
        .map(|d| basis.iter().map(|b| b.eval(&d.character)).collect())
        .collect();
    let matrix = MatrixQ::from_rows(rows)?;
    let determinant = determinant(&matrix)?;
    let distinct: BTreeSet<&Character> = cat.iter().map(|d| &d.character).collect();
    Ok(BasisCertificate {
        k,
        class: SquareClass::of(k),
        basis,
        modules: cat.iter().map(|d| d.id).collect(),
        matrix,
        determinant,
        characters_distinct: distinct.len() == cat.len(),
    })
}

/// Evaluation matrix of the candidate basis on all `k + 7` characters.
pub fn zhu_basis_certificate(k: u32) -> Result<BasisCertificate> {
    let cat = module_catalog(k)?;
    certificate_from_catalog(k, &cat)
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub k: u32,
    pub notice: Option<&'static str>,
    pub modules: Vec<ModuleDescriptor>,
    pub basis: Option<BasisCertificate>,
    pub dimension: usize,
    /// Distinct characters and a nonsingular evaluation matrix on a spanning set.
    pub commutative_semisimple: bool,
}

pub fn classify(k: u32) -> Result<Classification> {
    match k {
        0 => Err(Error::BadK { k, min: 1 }),
        1 => Ok(Classification {
            k,
            notice: Some(RANK_ONE_NOTICE),
            modules: Vec::new(),
            basis: None,
            dimension: 8,
            commutative_semisimple: true,
        }),
        _ => {
            let modules = module_catalog(k)?;
            let basis = certificate_from_catalog(k, &modules)?;
            Ok(Classification {
                k,
                notice: None,
                dimension: basis.basis.len(),
                commutative_semisimple: basis.pass() && modules.len() == k as usize + 7,
                modules,
                basis: Some(basis),
            })
        }
    }
}
