//! The theta-twisted V_L-modules `V_L^{T_i} = M(1)(theta) ⊗ T_i`, `i = 1, 2`.
//!
//! Twisted Fock states use raw indices `2n` for `alpha(-n)`, `n` in `1/2 + Z`.
//! On `T_1` the operator `e_{±alpha}` acts as `1`, on `T_2` as `-1`.
//! `Y^tw(u, z) = W(e^{Delta_z} u, z)` with
//! `Delta_z = (1/2k) sum_{a,b >= 0} c_ab alpha(a) alpha(b) z^{-a-b}` and
//! `sum c_ab x^a y^b = -log(((1+x)^{1/2} + (1+y)^{1/2}) / 2)`.
//! The exponential operators `W(e^{±alpha}, z)` carry the factor `2^{-2k}`;
//! with it `o(J) = 3/128` on `T_1^+` for every `k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binom_q, int, is_integer, pow2, rat, Rational};
use crate::fock::{write_terms, HeisMonomial};
use crate::freefield::{add_scaled, add_term, weight2, FreeField, Grading, Poly};
use crate::lattice::{build_generators, Character, LatticeState};

type Table = Vec<Vec<Rational>>;

fn series_mul(a: &Table, b: &Table, deg: usize) -> Table {
    let mut out = vec![vec![Rational::zero(); deg + 1]; deg + 1];
    for i1 in 0..=deg {
        for j1 in 0..=deg - i1 {
            if a[i1][j1].is_zero() {
                continue;
            }
            for i2 in 0..=deg - i1 - j1 {
                for j2 in 0..=deg - i1 - j1 - i2 {
                    if !b[i2][j2].is_zero() {
                        out[i1 + i2][j1 + j2] += &a[i1][j1] * &b[i2][j2];
                    }
                }
            }
        }
    }
    out
}

fn compute_table(deg: usize) -> Table {
    let half = rat(1, 2);
    let mut u = vec![vec![Rational::zero(); deg + 1]; deg + 1];
    for a in 1..=deg {
        let c = binom_q(&half, a as u32) / int(2);
        u[a][0] = c.clone();
        u[0][a] = c;
    }
    let mut out = vec![vec![Rational::zero(); deg + 1]; deg + 1];
    let mut power = u.clone();
    for j in 1..=deg {
        let coef = if j % 2 == 1 { rat(-1, j as i64) } else { rat(1, j as i64) };
        for a in 0..=deg {
            for b in 0..=deg - a {
                out[a][b] += &power[a][b] * &coef;
            }
        }
        power = series_mul(&power, &u, deg);
    }
    out
}

fn table_cache() -> &'static Mutex<Table> {
    static CACHE: OnceLock<Mutex<Table>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(compute_table(8)))
}

/// Coefficients `c_ab` for `a + b <= deg`, indexed `[a][b]`.
pub fn twist_coefficients(deg: usize) -> Vec<Vec<Rational>> {
    let mut t = table_cache().lock().unwrap_or_else(|e| e.into_inner());
    if t.len() <= deg {
        *t = compute_table(deg.max(2 * (t.len() - 1)));
    }
    (0..=deg).map(|a| t[a][..=deg - a].to_vec()).collect()
}

/// A vector of `V_L^{T_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedState {
    k: u32,
    sector: u8,
    terms: Poly,
}

impl TwistedState {
    pub fn zero(k: u32, sector: u8) -> Result<Self> {
        if sector != 1 && sector != 2 {
            return Err(Error::WrongModule(format!("T{sector}")));
        }
        Ok(TwistedState { k, sector, terms: Poly::new() })
    }

    /// `alpha(-n_1)...alpha(-n_r) t` with `n_i = idx_i / 2`; raw indices must be odd.
    pub fn monomial(k: u32, sector: u8, raw: &[u32], c: Rational) -> Result<Self> {
        if let Some(&bad) = raw.iter().find(|&&i| i % 2 == 0) {
            return Err(Error::BadMode(format!("alpha(-{bad}/2)")));
        }
        let mut s = Self::zero(k, sector)?;
        add_term(&mut s.terms, HeisMonomial::new(raw.to_vec()), c);
        Ok(s)
    }

    pub fn top(k: u32, sector: u8) -> Result<Self> {
        Self::monomial(k, sector, &[], Rational::one())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn sector(&self) -> u8 {
        self.sector
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HeisMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, raw: &[u32]) -> Rational {
        self.terms
            .get(&HeisMonomial::new(raw.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn with_terms(&self, terms: Poly) -> Self {
        TwistedState { k: self.k, sector: self.sector, terms }
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.add_scaled_assign(other, c);
        out
    }

    /// `self += c * other` without copying `self`.
    pub fn add_scaled_assign(&mut self, other: &Self, c: &Rational) {
        assert_eq!((self.k, self.sector), (other.k, other.sector), "incompatible twisted states");
        add_scaled(&mut self.terms, &other.terms, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.with_terms(Poly::new()).add_scaled(self, c)
    }

    /// `L(0)` weight: `1/16 + sum n_i`, if homogeneous.
    pub fn weight(&self) -> Option<Rational> {
        let mut ws = self.terms.keys().map(|m| weight2(Grading::HalfOdd, m));
        let first = ws.next()?;
        ws.all(|w| w == first).then(|| rat(1, 16) + rat(first, 2))
    }

    /// Eigenvalue of the automorphism theta: `(-1)^{number of factors}`.
    pub fn theta_parity(&self) -> Option<i32> {
        let mut ps = self.terms.keys().map(|m| m.parity());
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }
}

impl fmt::Display for TwistedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|(m, c)| {
                let mut s: Vec<String> = m
                    .levels()
                    .iter()
                    .map(|&i| format!("a(-{})", rat(i as i64, 2)))
                    .collect();
                s.push("t".into());
                (c, s.join("*"))
            }),
        )
    }
}

/// `alpha(n) w` for `n` in `1/2 + Z`, given as `n2 = 2n`.
pub fn twisted_alpha(n2: i64, w: &TwistedState) -> Result<TwistedState> {
    if n2 % 2 == 0 {
        return Err(Error::BadMode(format!("alpha({})", rat(n2, 2))));
    }
    let field = FreeField::new(w.k, Grading::HalfOdd);
    let idx = n2.unsigned_abs() as u32;
    Ok(w.with_terms(if n2 > 0 {
        field.annihilate(idx, &w.terms)
    } else {
        field.create(idx, &w.terms)
    }))
}

/// Twisted vertex operators for one `k`, caching `e^{Delta_z}` images.
pub(crate) struct TwistedEngine {
    field: FreeField,
    lifted: HashMap<(HeisMonomial, i64), Vec<(i64, Poly)>>,
}

impl TwistedEngine {
    pub(crate) fn new(k: u32) -> Self {
        TwistedEngine {
            field: FreeField::new(k, Grading::HalfOdd),
            lifted: HashMap::new(),
        }
    }

    /// One application of `Delta_z` to `z^{-d} p` on momentum `mom`.
    fn delta(&self, series: &BTreeMap<i64, Poly>, mom: &Rational) -> BTreeMap<i64, Poly> {
        let ufield = FreeField::new(self.field.k, Grading::Integral);
        let two_k = int(2 * self.field.k as i64);
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (&d, p) in series {
            let top = p.keys().flat_map(|m| m.levels().first().copied()).max().unwrap_or(0) as usize;
            let table = twist_coefficients(2 * top.max(1));
            // alpha(b) p for b = 0..=top
            let mut first: Vec<Poly> = Vec::with_capacity(top + 1);
            first.push(p.iter().map(|(m, c)| (m.clone(), c * mom)).collect());
            for b in 1..=top {
                first.push(ufield.annihilate(b as u32, p));
            }
            for (b, pb) in first.iter().enumerate() {
                if pb.is_empty() {
                    continue;
                }
                for a in 0..=top {
                    if a + b == 0 || table[a][b].is_zero() {
                        continue;
                    }
                    let pab: Poly = if a == 0 {
                        pb.iter().map(|(m, c)| (m.clone(), c * mom)).collect()
                    } else {
                        ufield.annihilate(a as u32, pb)
                    };
                    if pab.is_empty() {
                        continue;
                    }
                    add_scaled(out.entry(d + (a + b) as i64).or_default(), &pab, &(&table[a][b] / &two_k));
                }
            }
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// `e^{Delta_z}(mono ⊗ e^{m alpha})` as pairs `(d, v)` for `z^{-d} v`.
    fn lift(&mut self, mono: &HeisMonomial, m: i64) -> Vec<(i64, Poly)> {
        let key = (mono.clone(), m);
        if let Some(v) = self.lifted.get(&key) {
            return v.clone();
        }
        let mom = int(2 * self.field.k as i64 * m);
        let out = self.exp_delta(mono, &mom);
        self.lifted.insert(key, out.clone());
        out
    }

    fn exp_delta(&self, mono: &HeisMonomial, mom: &Rational) -> Vec<(i64, Poly)> {
        let mut cur: BTreeMap<i64, Poly> = BTreeMap::new();
        cur.insert(0, [(mono.clone(), Rational::one())].into_iter().collect());
        let mut total = cur.clone();
        let mut j = 1i64;
        loop {
            let next = self.delta(&cur, mom);
            if next.is_empty() {
                break;
            }
            let inv = rat(1, j);
            cur = next
                .into_iter()
                .map(|(d, p)| (d, p.into_iter().map(|(m, c)| (m, c * &inv)).collect()))
                .collect();
            for (d, p) in &cur {
                add_scaled(total.entry(*d).or_default(), p, &Rational::one());
            }
            j += 1;
        }
        total.into_iter().filter(|(_, p)| !p.is_empty()).collect()
    }

    /// `u_n w` with `n = n2 / 2`.
    pub(crate) fn mode(&mut self, u: &LatticeState, n2: i64, w: &TwistedState) -> Result<TwistedState> {
        let k = self.field.k;
        if u.k() != k || w.k != k {
            return Err(Error::KMismatch(u.k(), w.k));
        }
        if !u.is_integral() {
            return Err(Error::NonIntegralSource);
        }
        let two_k = 2 * k as i64;
        let s = if w.sector == 1 { 1 } else { -1 };
        let mut out = Poly::new();
        for (&num, pu) in &u.sectors {
            let m = num / two_k;
            if m.abs() > 1 {
                return Err(Error::UnsupportedTwist(m));
            }
            let shift2 = -2 * k as i64 * m * m;
            let norm = if m == 0 {
                Rational::one()
            } else {
                pow2(-2 * k as i64) * int(if m % 2 == 0 { 1 } else { s })
            };
            for (mono, c) in pu {
                for (d, v) in self.lift(mono, m) {
                    let target2 = -n2 - 2 + 2 * d;
                    for (vm, vc) in &v {
                        let part = self.field.normal_ordered(vm, m, &w.terms, None, shift2, target2);
                        add_scaled(&mut out, &part, &(c * vc * &norm));
                    }
                }
            }
        }
        Ok(w.with_terms(out))
    }

    /// `o(u) w` summed over homogeneous components of `u`.
    pub(crate) fn zero_mode(&mut self, u: &LatticeState, w: &TwistedState) -> Result<TwistedState> {
        let mut acc = w.with_terms(Poly::new());
        for (wt, comp) in u.components() {
            if !is_integer(&wt) {
                return Err(Error::NonIntegralSource);
            }
            let n: i64 = wt.to_integer().try_into().unwrap_or(i64::MAX);
            acc.add_scaled_assign(&self.mode(&comp, 2 * (n - 1), w)?, &Rational::one());
        }
        Ok(acc)
    }
}

/// `u_n w` on a twisted module, `n = n2 / 2`; `u` may only involve
/// `e^{m alpha}` with `|m| <= 1`.
pub fn twisted_mode(u: &LatticeState, n2: i64, w: &TwistedState) -> Result<TwistedState> {
    TwistedEngine::new(w.k).mode(u, n2, w)
}

/// `L(n) w` on a twisted module.
pub fn twisted_virasoro(n: i64, w: &TwistedState) -> Result<TwistedState> {
    twisted_mode(&build_generators(w.k).omega, 2 * (n + 1), w)
}

/// `o(E^{±})` for `e^{±alpha}` alone.
pub fn twisted_exp_mode(sign: i32, n2: i64, w: &TwistedState) -> Result<TwistedState> {
    let num = 2 * w.k as i64 * sign.signum() as i64;
    twisted_mode(&LatticeState::exp(num, w.k), n2, w)
}

/// Top vector of `(V_L^{T_i})^{parity}`.
pub fn twisted_top(k: u32, sector: u8, parity: i8) -> Result<TwistedState> {
    match parity {
        1 => TwistedState::top(k, sector),
        -1 => TwistedState::monomial(k, sector, &[1], Rational::one()),
        _ => Err(Error::WrongModule(format!("T{sector} parity {parity}"))),
    }
}

pub(crate) fn twisted_eigenvalue(
    engine: &mut TwistedEngine,
    u: &LatticeState,
    sector: u8,
    parity: i8,
) -> Result<Rational> {
    let top = twisted_top(engine.field.k, sector, parity)?;
    let image = engine.zero_mode(u, &top)?;
    let (m, c) = top.terms().next().expect("nonzero top");
    let lambda = image.coeff(m.levels()) / c;
    if image.sub(&top.scale(&lambda)).is_zero() {
        Ok(lambda)
    } else {
        Err(Error::Singular("top vector is not an eigenvector".into()))
    }
}

/// `(lambda_omega, lambda_E, lambda_J)` on the top of `(V_L^{T_i})^{parity}`.
pub fn twisted_top_scalars(k: u32, sector: u8, parity: i8) -> Result<Character> {
    let g = build_generators(k);
    let mut engine = TwistedEngine::new(k);
    Ok(Character {
        omega: twisted_eigenvalue(&mut engine, &g.omega, sector, parity)?,
        e: twisted_eigenvalue(&mut engine, &g.e, sector, parity)?,
        j: twisted_eigenvalue(&mut engine, &g.j, sector, parity)?,
    })
}
