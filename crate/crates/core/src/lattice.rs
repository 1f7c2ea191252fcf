//! States of `V_{L°} = M(1) ⊗ C[L°]` for `L = Z alpha`, `<alpha, alpha> = 2k`,
//! vertex operators with a trivial 2-cocycle, the theta involution, the
//! generators of V_L^+ and the top-level scalars of the untwisted modules.
//!
//! A lattice label `e^{r alpha}` is stored as the integer `2kr`, which is
//! also the eigenvalue of `alpha(0)` on it.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binom_gen, int, is_integer, rat, Rational};
use crate::fock::{render_levels, write_terms, FockVector, HeisMonomial, NamedHeisState};
use crate::freefield::{add_scaled, add_term, schur, FreeField, Grading, Poly};

/// `e^{r alpha}` with `2kr` stored as `num`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeLabel {
    pub num: i64,
    pub k: u32,
}

impl LatticeLabel {
    pub fn new(num: i64, k: u32) -> Self {
        LatticeLabel { num, k }
    }

    pub fn from_r(r: &Rational, k: u32) -> Result<Self> {
        let num = r * int(2 * k as i64);
        if !is_integer(&num) {
            return Err(Error::BadLabel(r.to_string()));
        }
        Ok(LatticeLabel::new(num.to_integer().try_into().map_err(|_| Error::BadLabel(r.to_string()))?, k))
    }

    pub fn r(&self) -> Rational {
        rat(self.num, 2 * self.k as i64)
    }

    /// `alpha(0)` eigenvalue `2kr`.
    pub fn momentum(&self) -> i64 {
        self.num
    }

    /// `<r alpha, r alpha> / 2 = k r^2`.
    pub fn weight(&self) -> Rational {
        rat(self.num * self.num, 4 * self.k as i64)
    }

    pub fn is_integral(&self) -> bool {
        self.num % (2 * self.k as i64) == 0
    }

    /// `m` for labels `e^{m alpha}` in L.
    pub fn multiple(&self) -> Option<i64> {
        self.is_integral().then(|| self.num / (2 * self.k as i64))
    }
}

/// Rational combination of `alpha(-n_1)...alpha(-n_r) ⊗ e^{r alpha}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeState {
    k: u32,
    /// label numerator -> Heisenberg part
    pub(crate) sectors: BTreeMap<i64, Poly>,
}

impl LatticeState {
    pub fn zero(k: u32) -> Self {
        LatticeState {
            k,
            sectors: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `e^{(num/2k) alpha}`.
    pub fn exp(num: i64, k: u32) -> Self {
        Self::from_fock(&FockVector::vacuum(), num, k)
    }

    pub fn vacuum(k: u32) -> Self {
        Self::exp(0, k)
    }

    pub fn from_fock(v: &FockVector, num: i64, k: u32) -> Self {
        let mut s = Self::zero(k);
        if !v.is_zero() {
            s.sectors.insert(num, v.terms.clone());
        }
        s
    }

    pub fn term(levels: &[u32], num: i64, c: Rational, k: u32) -> Self {
        Self::from_fock(&FockVector::monomial(levels, c), num, k)
    }

    pub(crate) fn from_sectors(k: u32, mut sectors: BTreeMap<i64, Poly>) -> Self {
        sectors.retain(|_, p| !p.is_empty());
        LatticeState { k, sectors }
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (LatticeLabel, &HeisMonomial, &Rational)> {
        let k = self.k;
        self.sectors
            .iter()
            .flat_map(move |(&num, p)| p.iter().map(move |(m, c)| (LatticeLabel::new(num, k), m, c)))
    }

    pub fn len(&self) -> usize {
        self.sectors.values().map(|p| p.len()).sum()
    }

    pub fn coeff(&self, levels: &[u32], num: i64) -> Rational {
        self.sectors
            .get(&num)
            .and_then(|p| p.get(&HeisMonomial::new(levels.to_vec())))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Heisenberg part on the label `num`.
    pub fn sector(&self, num: i64) -> FockVector {
        FockVector::from_poly(self.sectors.get(&num).cloned().unwrap_or_default())
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        self.sectors.keys().copied()
    }

    fn check_k(&self, other: &Self) {
        assert_eq!(self.k, other.k, "states for different k");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &int(-1))
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.add_scaled_assign(other, c);
        out
    }

    /// `self += c * other` without copying `self`.
    pub fn add_scaled_assign(&mut self, other: &Self, c: &Rational) {
        self.check_k(other);
        for (num, p) in &other.sectors {
            add_scaled(self.sectors.entry(*num).or_default(), p, c);
        }
        self.sectors.retain(|_, p| !p.is_empty());
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::zero(self.k).add_scaled(self, c)
    }

    fn term_weight(&self, num: i64, m: &HeisMonomial) -> Rational {
        int(m.raw_weight() as i64) + LatticeLabel::new(num, self.k).weight()
    }

    /// Homogeneous components keyed by weight.
    pub fn components(&self) -> BTreeMap<Rational, LatticeState> {
        let mut out: BTreeMap<Rational, BTreeMap<i64, Poly>> = BTreeMap::new();
        for (&num, p) in &self.sectors {
            for (m, c) in p {
                let w = self.term_weight(num, m);
                add_term(out.entry(w).or_default().entry(num).or_default(), m.clone(), c.clone());
            }
        }
        out.into_iter()
            .map(|(w, s)| (w, Self::from_sectors(self.k, s)))
            .collect()
    }

    /// The common weight of all terms, if homogeneous and nonzero.
    pub fn weight(&self) -> Option<Rational> {
        let comps = self.components();
        (comps.len() == 1).then(|| comps.into_keys().next().unwrap())
    }

    pub fn max_weight(&self) -> Option<Rational> {
        self.components().into_keys().next_back()
    }

    pub fn is_integral(&self) -> bool {
        self.sectors.keys().all(|&n| n % (2 * self.k as i64) == 0)
    }

    /// Whether all labels lie in one coset of L.
    pub fn coset(&self) -> Result<Option<i64>> {
        let two_k = 2 * self.k as i64;
        let mut cosets = self.sectors.keys().map(|n| n.rem_euclid(two_k));
        let Some(first) = cosets.next() else {
            return Ok(None);
        };
        if cosets.all(|c| c == first) {
            Ok(Some(first))
        } else {
            Err(Error::MixedCoset)
        }
    }

    /// `theta(u ⊗ e^g) = theta(u) ⊗ e^{-g}`.
    pub fn theta(&self) -> Self {
        let sectors = self
            .sectors
            .iter()
            .map(|(&num, p)| {
                let q: Poly = p
                    .iter()
                    .map(|(m, c)| (m.clone(), c * int(m.parity() as i64)))
                    .collect();
                (-num, q)
            })
            .collect();
        Self::from_sectors(self.k, sectors)
    }

    /// Projection onto the theta-eigenspace `sign`.
    pub fn theta_project(&self, sign: i32) -> Self {
        let t = self.theta();
        let s = self.add_scaled(&t, &int(sign.signum() as i64));
        s.scale(&rat(1, 2))
    }

    pub fn is_theta_invariant(&self) -> bool {
        self.theta() == *self
    }
}

impl fmt::Display for LatticeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms().map(|(lab, m, c)| {
                let tail = if lab.num == 0 {
                    "one".to_string()
                } else {
                    format!("e({})", lab.r())
                };
                (c, render_levels(m, &tail))
            }),
        )
    }
}

/// Untwisted vertex operators, with a creation-coefficient cache shared
/// across calls for one `k`.
pub(crate) struct UntwistedEngine {
    field: FreeField,
}

impl UntwistedEngine {
    pub(crate) fn new(k: u32) -> Self {
        UntwistedEngine {
            field: FreeField::new(k, Grading::Integral),
        }
    }

    pub(crate) fn k(&self) -> u32 {
        self.field.k
    }

    /// `u_n w` for homogeneous `u` on integral labels.
    pub(crate) fn mode(&mut self, u: &LatticeState, n: i64, w: &LatticeState) -> Result<LatticeState> {
        let k = self.k();
        if u.k != k || w.k != k {
            return Err(Error::KMismatch(u.k, w.k));
        }
        if !u.is_integral() {
            return Err(Error::NonIntegralSource);
        }
        if !u.is_zero() && u.weight().is_none() {
            return Err(Error::NotHomogeneous);
        }
        w.coset()?;
        Ok(self.mode_unchecked(u, n, w))
    }

    pub(crate) fn mode_unchecked(&mut self, u: &LatticeState, n: i64, w: &LatticeState) -> LatticeState {
        let two_k = 2 * self.k() as i64;
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (&num_u, pu) in &u.sectors {
            let m = num_u / two_k;
            for (&num_w, pw) in &w.sectors {
                let p0 = int(num_w);
                let target = out.entry(num_w + num_u).or_default();
                for (mono, c) in pu {
                    let part = self.field.normal_ordered(
                        mono,
                        m,
                        pw,
                        Some(&p0),
                        2 * m * num_w,
                        2 * (-n - 1),
                    );
                    add_scaled(target, &part, c);
                }
            }
        }
        LatticeState::from_sectors(self.k(), out)
    }

    /// `o(u) w = sum over homogeneous parts u_(wt - 1) w`.
    pub(crate) fn zero_mode(&mut self, u: &LatticeState, w: &LatticeState) -> Result<LatticeState> {
        let mut acc = LatticeState::zero(self.k());
        for (wt, comp) in u.components() {
            if !is_integer(&wt) {
                return Err(Error::NonIntegralSource);
            }
            let n = wt.to_integer().try_into().unwrap_or(i64::MAX) - 1;
            acc.add_scaled_assign(&self.mode(&comp, n, w)?, &Rational::one());
        }
        Ok(acc)
    }
}

/// `u_n w` where `Y(u, z) = sum u_n z^{-n-1}`.
///
/// `u` must be homogeneous and supported on labels of L; `w` must lie in a
/// single coset `V_{L + lambda}`. Modes are integral because
/// `<m alpha, lambda>` is an integer for every `lambda` in the dual lattice.
pub fn vertex_mode(u: &LatticeState, n: i64, w: &LatticeState) -> Result<LatticeState> {
    UntwistedEngine::new(u.k).mode(u, n, w)
}

/// The coefficient of `z^{2kms + j}` in `Y(e^{m alpha}, z) e^{s alpha}`,
/// namely `p_j(m alpha) ⊗ e^{(m+s) alpha}`.
pub fn exp_exp_expansion(m: i64, s: i64, j: u32, k: u32) -> LatticeState {
    let p = schur(Grading::Integral, &int(m), 2 * j as i64);
    LatticeState::from_fock(&FockVector::from_poly(p), 2 * k as i64 * (m + s), k)
}

/// `E^m = e^{m alpha} + e^{-m alpha}`.
pub fn em(m: i64, k: u32) -> LatticeState {
    let n = 2 * k as i64 * m;
    LatticeState::exp(n, k).add(&LatticeState::exp(-n, k))
}

/// `F^m = e^{m alpha} - e^{-m alpha}`.
pub fn fm(m: i64, k: u32) -> LatticeState {
    let n = 2 * k as i64 * m;
    LatticeState::exp(n, k).sub(&LatticeState::exp(-n, k))
}

/// The generators `omega, J, E` of V_L^+ together with `F`.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub k: u32,
    pub omega: LatticeState,
    pub j: LatticeState,
    pub e: LatticeState,
    pub f: LatticeState,
}

impl GeneratorSet {
    pub fn em(&self, m: i64) -> LatticeState {
        em(m, self.k)
    }

    pub fn fm(&self, m: i64) -> LatticeState {
        fm(m, self.k)
    }
}

pub fn build_generators(k: u32) -> GeneratorSet {
    GeneratorSet {
        k,
        omega: LatticeState::from_fock(&NamedHeisState::Omega.value(k), 0, k),
        j: LatticeState::from_fock(&NamedHeisState::J.value(k), 0, k),
        e: em(1, k),
        f: fm(1, k),
    }
}

/// `L(n) w`.
pub fn virasoro_mode(n: i64, w: &LatticeState) -> Result<LatticeState> {
    vertex_mode(&build_generators(w.k).omega, n + 1, w)
}

/// An irreducible V_L^+-module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleId {
    VlPlus,
    VlMinus,
    /// `V_{L + r alpha / 2k}`, `1 <= r <= k - 1`.
    Coset(u32),
    HalfPlus,
    HalfMinus,
    /// `(V_L^{T_i})^{±}`: sector `i` in {1, 2}, parity ±1.
    Twisted { sector: u8, parity: i8 },
}

impl ModuleId {
    pub fn is_twisted(&self) -> bool {
        matches!(self, ModuleId::Twisted { .. })
    }

    /// The k + 7 modules in table order.
    pub fn all(k: u32) -> Vec<ModuleId> {
        let mut v = vec![ModuleId::VlPlus, ModuleId::VlMinus];
        v.extend((1..k).map(ModuleId::Coset));
        v.extend([
            ModuleId::HalfPlus,
            ModuleId::HalfMinus,
            ModuleId::Twisted { sector: 1, parity: 1 },
            ModuleId::Twisted { sector: 1, parity: -1 },
            ModuleId::Twisted { sector: 2, parity: 1 },
            ModuleId::Twisted { sector: 2, parity: -1 },
        ]);
        v
    }

    pub fn top_weight(&self, k: u32) -> Rational {
        match *self {
            ModuleId::VlPlus => int(0),
            ModuleId::VlMinus => int(1),
            ModuleId::Coset(r) => rat((r * r) as i64, 4 * k as i64),
            ModuleId::HalfPlus | ModuleId::HalfMinus => rat(k as i64, 4),
            ModuleId::Twisted { parity, .. } => {
                if parity > 0 {
                    rat(1, 16)
                } else {
                    rat(9, 16)
                }
            }
        }
    }

    /// Whether this id names a module for the given k.
    pub fn valid_for(&self, k: u32) -> bool {
        match *self {
            ModuleId::Coset(r) => r >= 1 && r < k,
            ModuleId::Twisted { sector, parity } => {
                (sector == 1 || sector == 2) && (parity == 1 || parity == -1)
            }
            _ => true,
        }
    }

    /// The explicit top-level vector of an untwisted module.
    pub fn untwisted_top(&self, k: u32) -> Result<LatticeState> {
        let kk = k as i64;
        Ok(match *self {
            ModuleId::VlPlus => LatticeState::vacuum(k),
            ModuleId::VlMinus => LatticeState::term(&[1], 0, int(1), k),
            ModuleId::Coset(r) => LatticeState::exp(r as i64, k),
            ModuleId::HalfPlus => LatticeState::exp(kk, k).add(&LatticeState::exp(-kk, k)),
            ModuleId::HalfMinus => LatticeState::exp(kk, k).sub(&LatticeState::exp(-kk, k)),
            ModuleId::Twisted { .. } => return Err(Error::WrongModule(self.to_string())),
        })
    }
}

impl fmt::Display for ModuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModuleId::VlPlus => write!(f, "VL+"),
            ModuleId::VlMinus => write!(f, "VL-"),
            ModuleId::Coset(r) => write!(f, "VL({r})"),
            ModuleId::HalfPlus => write!(f, "VLhalf+"),
            ModuleId::HalfMinus => write!(f, "VLhalf-"),
            ModuleId::Twisted { sector, parity } => {
                write!(f, "T{sector}{}", if parity > 0 { '+' } else { '-' })
            }
        }
    }
}

impl std::str::FromStr for ModuleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::WrongModule(s.to_string());
        Ok(match s {
            "VL+" => ModuleId::VlPlus,
            "VL-" => ModuleId::VlMinus,
            "VLhalf+" => ModuleId::HalfPlus,
            "VLhalf-" => ModuleId::HalfMinus,
            "T1+" => ModuleId::Twisted { sector: 1, parity: 1 },
            "T1-" => ModuleId::Twisted { sector: 1, parity: -1 },
            "T2+" => ModuleId::Twisted { sector: 2, parity: 1 },
            "T2-" => ModuleId::Twisted { sector: 2, parity: -1 },
            _ => {
                let r = s
                    .strip_prefix("VL(")
                    .and_then(|t| t.strip_suffix(')'))
                    .and_then(|t| t.parse::<u32>().ok())
                    .ok_or_else(bad)?;
                ModuleId::Coset(r)
            }
        })
    }
}

/// Scalars by which `omega`, `E`, `J` act on a one-dimensional top level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub omega: Rational,
    pub e: Rational,
    pub j: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDescriptor {
    pub id: ModuleId,
    pub top_weight: Rational,
    pub character: Character,
}

/// `lambda` with `image = lambda * top`, or an error when `image` is not a
/// multiple of `top`.
pub(crate) fn eigenvalue_on(top: &LatticeState, image: &LatticeState) -> Result<Rational> {
    let (lab, m, c) = top
        .terms()
        .next()
        .ok_or_else(|| Error::Singular("zero top vector".into()))?;
    let lambda = image.coeff(m.levels(), lab.num) / c;
    if image.sub(&top.scale(&lambda)).is_zero() {
        Ok(lambda)
    } else {
        Err(Error::Singular("top vector is not an eigenvector".into()))
    }
}

/// Eigenvalue of `o(u)` on the top level of an untwisted module.
pub(crate) fn untwisted_eigenvalue(
    engine: &mut UntwistedEngine,
    u: &LatticeState,
    id: ModuleId,
) -> Result<Rational> {
    let top = id.untwisted_top(engine.k())?;
    let image = engine.zero_mode(u, &top)?;
    eigenvalue_on(&top, &image)
}

/// `(lambda_omega, lambda_E, lambda_J)` on an untwisted module, computed by
/// applying `o(u) = u_{wt u - 1}` to the explicit top vector.
pub fn untwisted_top_scalars(k: u32, id: ModuleId) -> Result<Character> {
    if id.is_twisted() {
        return Err(Error::WrongModule(id.to_string()));
    }
    let g = build_generators(k);
    let mut engine = UntwistedEngine::new(k);
    Ok(Character {
        omega: untwisted_eigenvalue(&mut engine, &g.omega, id)?,
        e: untwisted_eigenvalue(&mut engine, &g.e, id)?,
        j: untwisted_eigenvalue(&mut engine, &g.j, id)?,
    })
}

/// Notice emitted for `k = 1`.
pub const RANK_ONE_NOTICE: &str = "k = 1: V_L^+ is isomorphic to the lattice VOA V_L' with \
L' = Z beta, <beta, beta> = 8 (the k = 4 lattice); it has exactly 8 irreducible modules, \
the irreducible V_L'-modules. Run with k = 4 for the explicit computation.";

/// The k + 7 irreducible V_L^+-modules with their computed characters.
pub fn module_catalog(k: u32) -> Result<Vec<ModuleDescriptor>> {
    if k < 2 {
        return Err(Error::BadK { k, min: 2 });
    }
    ModuleId::all(k)
        .into_iter()
        .map(|id| {
            let character = match id {
                ModuleId::Twisted { sector, parity } => {
                    crate::twisted::twisted_top_scalars(k, sector, parity)?
                }
                _ => untwisted_top_scalars(k, id)?,
            };
            Ok(ModuleDescriptor {
                id,
                top_weight: id.top_weight(k),
                character,
            })
        })
        .collect()
}

/// `sum_i C(wt u, i) u_{i - shift} v` for homogeneous `u` of integral weight.
pub(crate) fn residue_sum(
    engine: &mut UntwistedEngine,
    u: &LatticeState,
    v: &LatticeState,
    shift: i64,
) -> Result<LatticeState> {
    let mut acc = LatticeState::zero(engine.k());
    for (wt, comp) in u.components() {
        if !is_integer(&wt) {
            return Err(Error::NonIntegralSource);
        }
        let wt: i64 = wt.to_integer().try_into().unwrap_or(i64::MAX);
        for i in 0..=wt.max(0) {
            let b = binom_gen(wt, i as u32);
            if b.is_zero() {
                continue;
            }
            let term = engine.mode(&comp, i - shift, v)?;
            acc.add_scaled_assign(&term, &b);
        }
    }
    Ok(acc)
}
