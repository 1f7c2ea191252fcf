use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{int, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q; `coeffs[i]` is the coefficient of x^i.
/// The leading coefficient is nonzero unless the polynomial is zero (empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolynomialQ {
    coeffs: Vec<Rational>,
}

impl PolynomialQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolynomialQ { coeffs }
    }

    pub fn zero() -> Self {
        PolynomialQ { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x - root`
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    /// `lead * prod (x - r)`
    pub fn from_roots(lead: Rational, roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Self::constant(lead), |acc, r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.lead().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }
}

impl Add for &PolynomialQ {
    type Output = PolynomialQ;
    fn add(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PolynomialQ {
    type Output = PolynomialQ;
    fn sub(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &PolynomialQ {
    type Output = PolynomialQ;
    fn mul(self, rhs: &PolynomialQ) -> PolynomialQ {
        if self.is_zero() || rhs.is_zero() {
            return PolynomialQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialQ::new(out)
    }
}

impl Neg for &PolynomialQ {
    type Output = PolynomialQ;
    fn neg(self) -> PolynomialQ {
        PolynomialQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for PolynomialQ {
            type Output = PolynomialQ;
            fn $f(self, rhs: PolynomialQ) -> PolynomialQ {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `u*f + v*g = gcd` with `gcd` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub gcd: PolynomialQ,
    pub u: PolynomialQ,
    pub v: PolynomialQ,
}

/// Extended Euclid over Q.
pub fn poly_gcd_bezout(f: &PolynomialQ, g: &PolynomialQ) -> Result<Bezout> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomials);
    }
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (PolynomialQ::one(), PolynomialQ::zero());
    let (mut t0, mut t1) = (PolynomialQ::zero(), PolynomialQ::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s2 = &s0 - &(&q * &s1);
        let t2 = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = r0.lead().recip();
    Ok(Bezout {
        gcd: r0.scale(&inv),
        u: s0.scale(&inv),
        v: t0.scale(&inv),
    })
}

#[allow(dead_code)]
pub(crate) fn monomial(c: Rational, deg: usize) -> PolynomialQ {
    let mut v = vec![Rational::zero(); deg + 1];
    v[deg] = c;
    PolynomialQ::new(v)
}

#[allow(dead_code)]
pub(crate) fn from_ints(cs: &[i64]) -> PolynomialQ {
    PolynomialQ::new(cs.iter().map(|&c| int(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn check_bezout(f: &PolynomialQ, g: &PolynomialQ) -> Bezout {
        let b = poly_gcd_bezout(f, g).unwrap();
        assert_eq!(&(&b.u * f) + &(&b.v * g), b.gcd);
        assert!(b.gcd.divides(f));
        assert!(b.gcd.divides(g));
        assert!(b.gcd.lead().is_one());
        b
    }

    #[test]
    fn coprime_linears() {
        let f = from_ints(&[-1, 1]);
        let g = from_ints(&[1, 1]);
        let b = check_bezout(&f, &g);
        assert_eq!(b.gcd, PolynomialQ::one());
        assert_eq!(b.u, PolynomialQ::constant(rat(-1, 2)));
        assert_eq!(b.v, PolynomialQ::constant(rat(1, 2)));
    }

    #[test]
    fn self_gcd() {
        let f = from_ints(&[2, 0, 4]);
        let b = check_bezout(&f, &f);
        assert_eq!(b.gcd, f.monic());
    }

    #[test]
    fn both_zero_is_error() {
        let z = PolynomialQ::zero();
        assert_eq!(poly_gcd_bezout(&z, &z), Err(Error::ZeroPolynomials));
        let b = check_bezout(&z, &from_ints(&[3, 6]));
        assert_eq!(b.gcd, from_ints(&[1, 2]).monic());
    }

    #[test]
    fn common_factor() {
        let common = from_ints(&[-3, 1]);
        let f = &common * &from_ints(&[1, 0, 1]);
        let g = &common * &from_ints(&[5, 2]);
        assert_eq!(check_bezout(&f, &g).gcd, common);
    }

    #[test]
    fn display() {
        let p = PolynomialQ::new(vec![rat(-27, 28), rat(247, 14), rat(-206, 7)]);
        assert_eq!(p.to_string(), "-206/7*x^2 + 247/14*x - 27/28");
        assert_eq!(PolynomialQ::x().to_string(), "x");
    }

    #[test]
    fn roots_and_eval() {
        let p = PolynomialQ::from_roots(int(2), &[rat(1, 16), rat(9, 16)]);
        assert!(p.eval(&rat(9, 16)).is_zero());
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.lead(), int(2));
    }

    fn small_poly() -> impl Strategy<Value = PolynomialQ> {
        proptest::collection::vec((-6i64..6, 1i64..4), 0..5)
            .prop_map(|v| PolynomialQ::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn bezout_identity(f in small_poly(), g in small_poly()) {
            prop_assume!(!(f.is_zero() && g.is_zero()));
            check_bezout(&f, &g);
        }

        #[test]
        fn division(f in small_poly(), g in small_poly()) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.div_rem(&g);
            prop_assert_eq!(&(&q * &g) + &r, f);
            prop_assert!(r.degree() < g.degree());
        }
    }
}
