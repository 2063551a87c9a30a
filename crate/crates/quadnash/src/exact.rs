//! Exact arithmetic: arbitrary-precision rationals and real quadratic
//! extensions `a + b*sqrt(d)` with square-free radicand.
//!
//! All comparisons are exact. A value mixes at most one radicand; combining
//! two distinct irrational radicands is an error, not a silent approximation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Canonical rational: numerator/denominator in lowest terms, denominator > 0.
/// `num_rational::Ratio<BigInt>` maintains exactly that invariant.
pub type Rational = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p` or `p/q` with optional sign. Denominator must be nonzero.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Syntax(format!("bad rational literal `{s}`"));
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad())?;
    let den: BigInt = den_s.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Syntax(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` form, denominator always written (`-4/1`, `2/3`).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Splits `n` into `(s, f)` with `n = s^2 * f`, `f` square-free.
fn squarefree_split(n: &BigUint) -> Result<(BigUint, u64)> {
    let mut rem = n.clone();
    let mut root = BigUint::one();
    let mut free: u64 = 1;
    if rem.is_zero() {
        return Ok((root, 0));
    }
    let mut p: u64 = 2;
    while p <= 1_000_000 {
        let pb = BigUint::from(p);
        if &pb * &pb > rem {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rem.div_rem(&pb);
            if r.is_zero() {
                rem = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            root *= pb.pow(e / 2);
            if e % 2 == 1 {
                free = free.checked_mul(p).ok_or(Error::RadicandTooLarge)?;
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    // rem now has no prime factor <= 1e6: it is 1, prime, a prime square,
    // or a product of two distinct large primes. Only the square folds.
    if !rem.is_one() {
        let s = rem.sqrt();
        if &s * &s == rem {
            root *= s;
        } else {
            let f = rem.to_u64().ok_or(Error::RadicandTooLarge)?;
            free = free.checked_mul(f).ok_or(Error::RadicandTooLarge)?;
        }
    }
    Ok((root, free))
}

/// Exact element of a real quadratic extension: `a + b*sqrt(d)`.
///
/// Canonical form: `d` square-free; `d == 0` iff the value is rational
/// (then `b == 0`); `d` is never 1. Equality and hashing rely on this.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadAlgebraic {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadAlgebraic {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        if b.is_zero() || d == 0 {
            return Ok(Self { a, b: Rational::zero(), d: 0 });
        }
        if d == 1 {
            return Ok(Self { a: a + b, b: Rational::zero(), d: 0 });
        }
        let (root, free) = squarefree_split(&BigUint::from(d))?;
        if free == 1 {
            let shift = b * Rational::from_integer(BigInt::from(root));
            return Ok(Self { a: a + shift, b: Rational::zero(), d: 0 });
        }
        let b = b * Rational::from_integer(BigInt::from(root));
        Ok(Self { a, b, d: free })
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(rat_int(n))
    }

    /// Exact square root of a nonnegative rational, as an element of Q(sqrt d).
    pub fn sqrt_of(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let p = r.numer().magnitude().clone();
        let q = r.denom().magnitude().clone();
        let (root, free) = squarefree_split(&(&p * &q))?;
        let coeff = Rational::new(BigInt::from(root), BigInt::from(q));
        Self::new(Rational::zero(), coeff, free)
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_coeff(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.a.is_zero()
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.d == 0 { Some(&self.a) } else { None }
    }

    fn unify_radicand(&self, other: &Self) -> Result<u64> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d1, d2) if d1 == d2 => Ok(d1),
            (d1, d2) => Err(Error::MixedRadicands(d1, d2)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.unify_radicand(other)?;
        Ok(Self { a: &self.a + &other.a, b: &self.b + &other.b, d }.renorm())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let d = self.unify_radicand(other)?;
        Ok(Self { a: &self.a - &other.a, b: &self.b - &other.b, d }.renorm())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.unify_radicand(other)?;
        let dr = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * &dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self { a, b, d }.renorm())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivideByZero);
        }
        let d = self.unify_radicand(other)?;
        let dr = Rational::from_integer(BigInt::from(d));
        // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - b^2 d)
        let denom = &other.a * &other.a - &other.b * &other.b * &dr;
        debug_assert!(!denom.is_zero(), "nonzero quadratic element with zero norm");
        let conj = Self { a: other.a.clone(), b: -other.b.clone(), d };
        let prod = self.try_mul(&conj)?;
        Ok(Self { a: prod.a / &denom, b: prod.b / &denom, d: prod.d }.renorm())
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    fn renorm(self) -> Self {
        if self.b.is_zero() && self.d != 0 {
            Self { a: self.a, b: self.b, d: 0 }
        } else {
            self
        }
    }

    /// Exact sign: -1, 0, or 1.
    pub fn sign(&self) -> i8 {
        if self.b.is_zero() {
            return if self.a.is_zero() {
                0
            } else if self.a.is_positive() {
                1
            } else {
                -1
            };
        }
        let bs = if self.b.is_positive() { 1i8 } else { -1 };
        if self.a.is_zero() {
            return bs;
        }
        let as_ = if self.a.is_positive() { 1i8 } else { -1 };
        if as_ == bs {
            return as_;
        }
        // Opposite signs: |a| vs |b| sqrt(d); compare a^2 with b^2 d.
        let dr = Rational::from_integer(BigInt::from(self.d));
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * dr;
        match lhs.cmp(&rhs) {
            Ordering::Greater => as_,
            Ordering::Less => bs,
            // a^2 = b^2 d with a,b nonzero is impossible for square-free d >= 2.
            Ordering::Equal => 0,
        }
    }

    /// Exact total-order comparison. Errors only if the two irrational parts
    /// live in different extensions.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        let diff = self.try_sub(other)?;
        Ok(match diff.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn to_float(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.d == 0 {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

impl From<Rational> for QuadAlgebraic {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl From<&Rational> for QuadAlgebraic {
    fn from(r: &Rational) -> Self {
        Self::rational(r.clone())
    }
}

// Operator impls panic on mixed radicands; callers that cannot guarantee a
// single extension (parsers, public eval entry points) validate first and
// use the try_* forms.
impl std::ops::Add for &QuadAlgebraic {
    type Output = QuadAlgebraic;
    fn add(self, rhs: &QuadAlgebraic) -> QuadAlgebraic {
        self.try_add(rhs).expect("mixed radicands in add")
    }
}

impl std::ops::Sub for &QuadAlgebraic {
    type Output = QuadAlgebraic;
    fn sub(self, rhs: &QuadAlgebraic) -> QuadAlgebraic {
        self.try_sub(rhs).expect("mixed radicands in sub")
    }
}

impl std::ops::Mul for &QuadAlgebraic {
    type Output = QuadAlgebraic;
    fn mul(self, rhs: &QuadAlgebraic) -> QuadAlgebraic {
        self.try_mul(rhs).expect("mixed radicands in mul")
    }
}

impl std::ops::Neg for &QuadAlgebraic {
    type Output = QuadAlgebraic;
    fn neg(self) -> QuadAlgebraic {
        QuadAlgebraic::neg(self)
    }
}

impl fmt::Display for QuadAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        if self.b.is_negative() {
            write!(
                f,
                "{} - {}*sqrt({})",
                fmt_rational(&self.a),
                fmt_rational(&-self.b.clone()),
                self.d
            )
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                fmt_rational(&self.a),
                fmt_rational(&self.b),
                self.d
            )
        }
    }
}

impl fmt::Debug for QuadAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(a: (i64, i64), b: (i64, i64), d: u64) -> QuadAlgebraic {
        QuadAlgebraic::new(rat(a.0, a.1), rat(b.0, b.1), d).unwrap()
    }

    #[test]
    fn sums_stay_in_the_extension() {
        // (3 - sqrt6) + (3 - sqrt6) = 6 - 2 sqrt6
        let x = alg((3, 1), (-1, 1), 6);
        let y = x.try_add(&x).unwrap();
        assert_eq!(y, alg((6, 1), (-2, 1), 6));
    }

    #[test]
    fn rationalizes_reciprocals() {
        // 1 - 1/sqrt(6) = 1 - (1/6) sqrt 6
        let one = QuadAlgebraic::one();
        let sqrt6 = alg((0, 1), (1, 1), 6);
        let inv = one.try_div(&sqrt6).unwrap();
        assert_eq!(inv, alg((0, 1), (1, 6), 6));
        let v = one.try_sub(&inv).unwrap();
        assert_eq!(v, alg((1, 1), (-1, 6), 6));
    }

    #[test]
    fn conjugate_products_collapse_to_rationals() {
        let x = alg((3, 1), (-1, 1), 6);
        let y = alg((3, 1), (1, 1), 6);
        let p = x.try_mul(&y).unwrap();
        assert!(p.is_rational());
        assert_eq!(p, QuadAlgebraic::from_int(3));
    }

    #[test]
    fn compares_exactly_against_rationals() {
        let x = alg((3, 1), (-1, 1), 6); // ~0.5505
        let half = QuadAlgebraic::rational(rat(1, 2));
        assert_eq!(x.try_cmp(&half).unwrap(), Ordering::Greater);
        let f = x.to_float();
        assert!((f - 0.5505102572168219).abs() < 1e-12);
    }

    #[test]
    fn radicands_reduce_to_square_free_form() {
        assert_eq!(alg((0, 1), (1, 1), 8), alg((0, 1), (2, 1), 2));
        assert_eq!(alg((0, 1), (1, 1), 24), alg((0, 1), (2, 1), 6));
        assert_eq!(alg((2, 1), (3, 1), 1), QuadAlgebraic::from_int(5));
        assert_eq!(alg((2, 1), (3, 1), 0), QuadAlgebraic::from_int(2));
        assert_eq!(alg((0, 1), (1, 1), 36), QuadAlgebraic::from_int(6));
        // equal b-s cancelling leave a rational with d = 0
        let x = alg((1, 1), (2, 1), 5);
        let y = alg((4, 1), (-2, 1), 5);
        assert!(x.try_add(&y).unwrap().is_rational());
    }

    #[test]
    fn sqrt_of_rational() {
        // sqrt(1/2) = (1/2) sqrt 2
        let r = QuadAlgebraic::sqrt_of(&rat(1, 2)).unwrap();
        assert_eq!(r, alg((0, 1), (1, 2), 2));
        let sq = r.try_mul(&r).unwrap();
        assert_eq!(sq, QuadAlgebraic::rational(rat(1, 2)));
        assert!(QuadAlgebraic::sqrt_of(&rat(-1, 2)).is_err());
    }

    #[test]
    fn mixing_radicands_is_an_error() {
        let x = alg((0, 1), (1, 1), 2);
        let y = alg((0, 1), (1, 1), 3);
        assert!(matches!(x.try_add(&y), Err(Error::MixedRadicands(2, 3))));
        assert!(matches!(x.try_mul(&y), Err(Error::MixedRadicands(2, 3))));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let x = QuadAlgebraic::one();
        assert!(matches!(x.try_div(&QuadAlgebraic::zero()), Err(Error::DivideByZero)));
    }

    #[test]
    fn sign_handles_opposite_component_signs() {
        assert_eq!(alg((3, 1), (-1, 1), 6).sign(), 1); // 3 > sqrt6
        assert_eq!(alg((2, 1), (-1, 1), 6).sign(), -1); // 2 < sqrt6
        assert_eq!(alg((-2, 1), (1, 1), 6).sign(), 1);
        assert_eq!(alg((-3, 1), (1, 1), 6).sign(), -1);
        assert_eq!(QuadAlgebraic::zero().sign(), 0);
    }

    #[test]
    fn rational_literals_parse_and_print_canonically() {
        assert_eq!(parse_rational("-4/2").unwrap(), rat(-2, 1));
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert_eq!(fmt_rational(&rat(-4, 2)), "-2/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
