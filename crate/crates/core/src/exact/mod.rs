//! Exact arithmetic: rationals, generalized binomials, dense univariate
//! polynomials and dense matrices over Q.

mod matrix;
mod poly;

pub use matrix::{determinant, linear_solve, MatrixQ, Solution};
pub use poly::{poly_gcd_bezout, Bezout, PolynomialQ};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let two = int(2);
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        num_traits::pow(two, (-e) as usize).recip()
    }
}

pub fn pow(base: &Rational, e: u32) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

/// Generalized binomial `a(a-1)...(a-n+1)/n!` for an integer upper index.
pub fn binom_gen(a: i64, n: u32) -> Rational {
    binom_q(&int(a), n)
}

/// Generalized binomial with a rational upper index.
pub fn binom_q(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..n {
        acc = acc * (a - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Renders `n` or `n/d`.
pub fn fmt_rat(q: &Rational) -> String {
    q.to_string()
}

/// Parses `n` or `n/d` (optionally signed).
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Decimal approximation for display only.
pub fn approx(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom_gen(4, 2), int(6));
        assert_eq!(binom_gen(-2, 1), int(-2));
        // (-4)(-5)(-6)/6
        assert_eq!(binom_gen(-4, 3), int(-20));
        assert_eq!(binom_gen(5, 0), int(1));
        assert_eq!(binom_gen(3, 5), int(0));
        assert_eq!(binom_q(&rat(1, 2), 2), rat(-1, 8));
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow2(10), int(1024));
        assert_eq!(pow2(0), int(1));
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rat("-45/128"), Some(rat(-45, 128)));
        assert_eq!(parse_rat("6/4"), Some(rat(3, 2)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(fmt_rat(&rat(-45, 128)), "-45/128");
        assert_eq!(fmt_rat(&int(7)), "7");
    }

    proptest::proptest! {
        #[test]
        fn pascal(a in -30i64..30, n in 1u32..12) {
            proptest::prop_assert_eq!(
                binom_gen(a, n),
                binom_gen(a - 1, n) + binom_gen(a - 1, n - 1)
            );
        }

        #[test]
        fn integer_valued(a in -30i64..30, n in 0u32..12) {
            proptest::prop_assert!(is_integer(&binom_gen(a, n)));
        }
    }
}
