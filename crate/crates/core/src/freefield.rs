//! Normal-ordered products of free bosonic fields, shared by the untwisted
//! Fock space (integral modes) and the twisted one (half-odd modes).
//!
//! A Fock vector is a polynomial in commuting creation variables `x_l`
//! (`alpha(-l)`), and `alpha(l)` acts as `2k l d/dx_l`. Monomials store raw
//! mode indices: the level itself for integral modes, twice the level for
//! half-odd modes. All z-exponents are tracked doubled.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{binom_q, int, rat, Rational};

/// Multiset of raw mode indices, sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HeisMonomial {
    levels: Vec<u32>,
}

impl HeisMonomial {
    pub fn new(mut levels: Vec<u32>) -> Self {
        levels.sort_unstable_by(|a, b| b.cmp(a));
        HeisMonomial { levels }
    }

    pub fn vacuum() -> Self {
        HeisMonomial { levels: vec![] }
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Sum of raw indices.
    pub fn raw_weight(&self) -> u64 {
        self.levels.iter().map(|&l| l as u64).sum()
    }

    pub fn parity(&self) -> i32 {
        if self.levels.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub(crate) fn times(&self, other: &HeisMonomial) -> HeisMonomial {
        let mut out = Vec::with_capacity(self.levels.len() + other.levels.len());
        let (mut i, mut j) = (0, 0);
        while i < self.levels.len() && j < other.levels.len() {
            if self.levels[i] >= other.levels[j] {
                out.push(self.levels[i]);
                i += 1;
            } else {
                out.push(other.levels[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.levels[i..]);
        out.extend_from_slice(&other.levels[j..]);
        HeisMonomial { levels: out }
    }

    pub(crate) fn with(&self, idx: u32) -> HeisMonomial {
        let pos = self.levels.partition_point(|&l| l >= idx);
        let mut levels = self.levels.clone();
        levels.insert(pos, idx);
        HeisMonomial { levels }
    }

    pub(crate) fn multiplicity(&self, idx: u32) -> usize {
        self.levels.iter().filter(|&&l| l == idx).count()
    }

    /// Removes one copy of `idx`; returns the multiplicity before removal.
    pub(crate) fn without(&self, idx: u32) -> Option<(usize, HeisMonomial)> {
        let mult = self.multiplicity(idx);
        if mult == 0 {
            return None;
        }
        let pos = self.levels.iter().position(|&l| l == idx).unwrap();
        let mut levels = self.levels.clone();
        levels.remove(pos);
        Some((mult, HeisMonomial { levels }))
    }

    /// Distinct indices with multiplicities.
    pub(crate) fn grouped(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &l in &self.levels {
            match out.last_mut() {
                Some((v, c)) if *v == l => *c += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }
}

pub(crate) type Poly = BTreeMap<HeisMonomial, Rational>;

pub(crate) fn add_term(p: &mut Poly, m: HeisMonomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match p.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn add_scaled(acc: &mut Poly, p: &Poly, c: &Rational) {
    if c.is_zero() {
        return;
    }
    if acc.is_empty() && c.is_one() {
        acc.extend(p.iter().map(|(m, v)| (m.clone(), v.clone())));
        return;
    }
    for (m, v) in p {
        let v = if c.is_one() { v.clone() } else { v * c };
        add_term(acc, m.clone(), v);
    }
}

pub(crate) fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if b.len() == 1 && b.keys().all(HeisMonomial::is_empty) {
        let cb = &b[&HeisMonomial::vacuum()];
        return a.iter().map(|(m, c)| (m.clone(), c * cb)).collect();
    }
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_term(&mut out, ma.times(mb), ca * cb);
        }
    }
    out
}

pub(crate) fn poly_one() -> Poly {
    let mut p = Poly::new();
    p.insert(HeisMonomial::vacuum(), Rational::one());
    p
}

/// Mode grading of the free boson.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Grading {
    Integral,
    HalfOdd,
}

impl Grading {
    /// Twice the level carried by a raw index.
    pub(crate) fn level2(self, idx: u32) -> i64 {
        match self {
            Grading::Integral => 2 * idx as i64,
            Grading::HalfOdd => idx as i64,
        }
    }

    pub(crate) fn level(self, idx: u32) -> Rational {
        rat(self.level2(idx), 2)
    }

    /// Raw index for a doubled level, if that level is a mode of this grading.
    pub(crate) fn index(self, level2: i64) -> Option<u32> {
        if level2 <= 0 {
            return None;
        }
        match self {
            Grading::Integral if level2 % 2 == 0 => Some((level2 / 2) as u32),
            Grading::HalfOdd if level2 % 2 == 1 => Some(level2 as u32),
            _ => None,
        }
    }

    fn min_level2(self) -> i64 {
        match self {
            Grading::Integral => 2,
            Grading::HalfOdd => 1,
        }
    }

    /// Smallest doubled z-exponent carried by the creation half of
    /// `d^{(n-1)} alpha(z)`.
    fn min_creation_exp2(self, n: u32) -> i64 {
        match self {
            Grading::Integral => 0,
            Grading::HalfOdd => 1 - 2 * n as i64,
        }
    }
}

/// Doubled weight of a monomial.
pub(crate) fn weight2(g: Grading, m: &HeisMonomial) -> i64 {
    m.levels().iter().map(|&i| g.level2(i)).sum()
}

/// Coefficient of `z^{d2/2}` in `exp(c sum_l x_l z^l / l)`: a sum over
/// partitions of `d2/2` into levels of the grading.
pub(crate) fn schur(g: Grading, c: &Rational, d2: i64) -> Poly {
    let mut out = Poly::new();
    if d2 < 0 {
        return out;
    }
    if c.is_zero() {
        if d2 == 0 {
            out = poly_one();
        }
        return out;
    }
    // each part of doubled level l2 at multiplicity j contributes 2c / (l2 j)
    let step_num = BigInt::from(2) * c.numer();
    let mut parts = Vec::new();
    let mut acc = SchurAcc {
        g,
        step_num: &step_num,
        step_den: c.denom(),
        parts: &mut parts,
        out: &mut out,
    };
    acc.rec(d2, i64::MAX, 0, &BigInt::one(), &BigInt::one());
    out
}

/// Partition walk for `schur`. Parts are emitted in nonincreasing order, so
/// `run` counts the trailing copies of the last part; `num / den` is the
/// coefficient accumulated over the parts chosen so far.
struct SchurAcc<'a> {
    g: Grading,
    step_num: &'a BigInt,
    step_den: &'a BigInt,
    parts: &'a mut Vec<u32>,
    out: &'a mut Poly,
}

impl SchurAcc<'_> {
    fn rec(&mut self, remaining: i64, max_part: i64, run: i64, num: &BigInt, den: &BigInt) {
        if remaining == 0 {
            let mono = HeisMonomial { levels: self.parts.clone() };
            add_term(self.out, mono, Rational::new(num.clone(), den.clone()));
            return;
        }
        let next_num = num * self.step_num;
        let mut l2 = remaining.min(max_part);
        while l2 >= self.g.min_level2() {
            if let Some(idx) = self.g.index(l2) {
                let mult = if l2 == max_part { run + 1 } else { 1 };
                let next_den = den * self.step_den * (l2 * mult);
                self.parts.push(idx);
                self.rec(remaining - l2, l2, mult, &next_num, &next_den);
                self.parts.pop();
            }
            l2 -= 1;
        }
    }
}

/// z-graded family of Fock vectors, keyed by doubled exponent.
pub(crate) type ZSeries = BTreeMap<i64, Poly>;

/// Engine for one free boson with `<alpha, alpha> = 2k`.
pub(crate) struct FreeField {
    pub k: u32,
    pub grading: Grading,
    creation: HashMap<(Vec<u32>, i64, i64), Poly>,
}

impl FreeField {
    pub(crate) fn new(k: u32, grading: Grading) -> Self {
        FreeField {
            k,
            grading,
            creation: HashMap::new(),
        }
    }

    fn two_k(&self) -> Rational {
        int(2 * self.k as i64)
    }

    /// `alpha(l) = 2k l d/dx_l` for a positive raw index.
    pub(crate) fn annihilate(&self, idx: u32, p: &Poly) -> Poly {
        let scale = self.two_k() * self.grading.level(idx);
        let mut out = Poly::new();
        for (m, c) in p {
            if let Some((mult, rest)) = m.without(idx) {
                add_term(&mut out, rest, c * &scale * int(mult as i64));
            }
        }
        out
    }

    pub(crate) fn create(&self, idx: u32, p: &Poly) -> Poly {
        p.iter().map(|(m, c)| (m.with(idx), c.clone())).collect()
    }

    /// `E^+(-m alpha, z)` acting on `p`: the shift `x_l -> x_l - 2km z^{-l}`.
    fn translate(&self, m: i64, p: &Poly) -> ZSeries {
        let mut out = ZSeries::new();
        if m == 0 {
            out.insert(0, p.clone());
            return out;
        }
        let shift = -self.two_k() * int(m);
        for (mono, c) in p {
            let groups = mono.grouped();
            // choose how many copies of each variable get replaced by the shift
            let mut partial: Vec<(i64, HeisMonomial, Rational)> =
                vec![(0, HeisMonomial::vacuum(), c.clone())];
            for (idx, mult) in groups {
                let l2 = self.grading.level2(idx);
                let mut next = Vec::new();
                for (e, m0, c0) in &partial {
                    let mut sp = Rational::one();
                    for a in 0..=mult {
                        let keep = HeisMonomial {
                            levels: vec![idx; mult - a],
                        };
                        let coef = c0 * binom_q(&int(mult as i64), a as u32) * &sp;
                        next.push((e - a as i64 * l2, m0.times(&keep), coef));
                        sp *= &shift;
                    }
                }
                partial = next;
            }
            for (e, m0, c0) in partial {
                add_term(out.entry(e).or_default(), m0, c0);
            }
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// Applies the annihilation half of `d^{(n-1)} alpha(z)`:
    /// `sum_{j>0} C(-j-1, n-1) alpha(j) z^{-j-n}` plus, on untwisted sectors,
    /// `(-1)^{n-1} alpha(0) z^{-n}` with `alpha(0)` the momentum `p0`.
    fn annihilation_field(&self, n: u32, series: &ZSeries, p0: Option<&Rational>) -> ZSeries {
        let mut out = ZSeries::new();
        let n2 = 2 * n as i64;
        for (e, p) in series {
            let mut idxs: Vec<u32> = p.keys().flat_map(|m| m.levels().iter().copied()).collect();
            idxs.sort_unstable();
            idxs.dedup();
            for idx in idxs {
                let j = self.grading.level(idx);
                let coef = binom_q(&(-&j - int(1)), n - 1);
                if coef.is_zero() {
                    continue;
                }
                let a = self.annihilate(idx, p);
                add_scaled(
                    out.entry(e - self.grading.level2(idx) - n2).or_default(),
                    &a,
                    &coef,
                );
            }
            if let Some(p0) = p0 {
                if !p0.is_zero() {
                    let sign = if n % 2 == 1 { int(1) } else { int(-1) };
                    add_scaled(out.entry(e - n2).or_default(), p, &(sign * p0));
                }
            }
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// Coefficient of `z^{d2/2}` in `prod_i A^-_{n_i}(z) E^-(-m alpha, z)`
    /// where `A^-_n` is the creation half of `d^{(n-1)} alpha(z)`.
    fn creation_coeff(&mut self, creators: &[u32], m: i64, d2: i64) -> Poly {
        if creators.is_empty() {
            // leaf partition sums are cheap to rebuild and can be large
            return schur(self.grading, &int(m), d2);
        }
        let key = (creators.to_vec(), m, d2);
        if let Some(p) = self.creation.get(&key) {
            return p.clone();
        }
        let out = match creators.split_first() {
            None => schur(self.grading, &int(m), d2),
            Some((&n, rest)) => {
                let rest_min: i64 = rest
                    .iter()
                    .map(|&r| self.grading.min_creation_exp2(r))
                    .sum();
                let mut acc = Poly::new();
                let mut e1 = self.grading.min_creation_exp2(n);
                while e1 <= d2 - rest_min {
                    let l2 = e1 + 2 * n as i64;
                    if let Some(idx) = self.grading.index(l2) {
                        let coef = binom_q(&(rat(l2, 2) - int(1)), n - 1);
                        if !coef.is_zero() {
                            let sub = self.creation_coeff(rest, m, d2 - e1);
                            if !sub.is_empty() {
                                add_scaled(&mut acc, &self.create(idx, &sub), &coef);
                            }
                        }
                    }
                    e1 += 1;
                }
                acc
            }
        };
        self.creation.insert(key, out.clone());
        out
    }

    /// Coefficient of `z^{target2/2}` in
    /// `:prod_i d^{(n_i-1)} alpha(z) E^-(-m alpha,z) E^+(-m alpha,z): z^{shift2/2}`
    /// applied to `w`. Zero modes (untwisted only) act on `w` with eigenvalue
    /// `p0` before any lattice translation.
    pub(crate) fn normal_ordered(
        &mut self,
        orders: &HeisMonomial,
        m: i64,
        w: &Poly,
        p0: Option<&Rational>,
        shift2: i64,
        target2: i64,
    ) -> Poly {
        let groups = orders.grouped();
        let base = self.translate(m, w);
        let mut out = Poly::new();
        // choose how many fields of each order act as annihilators
        let mut choice = vec![0usize; groups.len()];
        loop {
            let mut factor = Rational::one();
            let mut series = base.clone();
            let mut creators = Vec::new();
            for (g, &a) in groups.iter().zip(&choice) {
                factor *= binom_q(&int(g.1 as i64), a as u32);
                for _ in 0..a {
                    series = self.annihilation_field(g.0, &series, p0);
                }
                creators.extend(std::iter::repeat_n(g.0, g.1 - a));
            }
            for (e, p) in &series {
                let d2 = target2 - shift2 - e;
                let c = self.creation_coeff(&creators, m, d2);
                if !c.is_empty() {
                    add_scaled(&mut out, &poly_mul(&c, p), &factor);
                }
            }
            // next choice
            let mut i = 0;
            loop {
                if i == groups.len() {
                    return out;
                }
                if choice[i] < groups[i].1 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(l: &[u32]) -> HeisMonomial {
        HeisMonomial::new(l.to_vec())
    }

    #[test]
    fn monomial_ops() {
        let a = mono(&[1, 3, 2]);
        assert_eq!(a.levels(), &[3, 2, 1]);
        assert_eq!(a.times(&mono(&[2])).levels(), &[3, 2, 2, 1]);
        assert_eq!(a.with(2).levels(), &[3, 2, 2, 1]);
        assert_eq!(mono(&[2, 2, 1]).grouped(), vec![(2, 2), (1, 1)]);
        let (mult, rest) = mono(&[2, 2, 1]).without(2).unwrap();
        assert_eq!((mult, rest.levels()), (2, &[2u32, 1][..]));
        assert!(a.without(5).is_none());
    }

    #[test]
    fn schur_second_order() {
        let p = schur(Grading::Integral, &int(1), 4);
        assert_eq!(p.get(&mono(&[1, 1])), Some(&rat(1, 2)));
        assert_eq!(p.get(&mono(&[2])), Some(&rat(1, 2)));
        assert_eq!(p.len(), 2);
        // half-odd: exp(c(2 x_{1/2} z^{1/2} + ...)), coefficient of z^{1/2} is 2c x_{1/2}
        let t = schur(Grading::HalfOdd, &int(1), 1);
        assert_eq!(t.get(&mono(&[1])), Some(&int(2)));
    }

    #[test]
    fn translation_expands_binomially() {
        let f = FreeField::new(1, Grading::Integral);
        // x_1^2 -> (x_1 - 2 z^{-1})^2
        let mut p = Poly::new();
        p.insert(mono(&[1, 1]), int(1));
        let s = f.translate(1, &p);
        assert_eq!(s[&0].get(&mono(&[1, 1])), Some(&int(1)));
        assert_eq!(s[&-2].get(&mono(&[1])), Some(&int(-4)));
        assert_eq!(s[&-4].get(&HeisMonomial::vacuum()), Some(&int(4)));
    }
}
