//! Small exact polynomial helpers for the support solver: multilinear
//! polynomials in at most three variables (dense over the 8 monomial
//! masks) and univariate quadratics with radical root extraction.

use crate::error::Result;
use crate::exact::{QuadAlgebraic, Rational};
use num_traits::Zero;

/// Multilinear polynomial in variables `t_0, t_1, t_2`. `c[mask]` is the
/// coefficient of the monomial multiplying `t_k` for every bit `k` in
/// `mask`; multilinearity means no variable ever appears squared.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly {
    c: [Rational; 8],
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            c: std::array::from_fn(|_| Rational::zero()),
        }
    }

    pub fn coeff_mut(&mut self, mask: usize) -> &mut Rational {
        &mut self.c[mask]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|r| r.is_zero())
    }

    /// Union of the variables with any nonzero coefficient.
    pub fn vars_mask(&self) -> usize {
        let mut m = 0;
        for (mask, r) in self.c.iter().enumerate() {
            if !r.is_zero() {
                m |= mask;
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = MPoly::zero();
        for mask in 0..8 {
            p.c[mask] = &self.c[mask] + &o.c[mask];
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut p = MPoly::zero();
        for mask in 0..8 {
            p.c[mask] = &self.c[mask] - &o.c[mask];
        }
        p
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut p = MPoly::zero();
        for mask in 0..8 {
            if !self.c[mask].is_zero() {
                p.c[mask] = &self.c[mask] * r;
            }
        }
        p
    }

    /// Product of two polynomials over disjoint variable sets; the result
    /// stays multilinear. Panics if the variable sets overlap, which would
    /// be a bug in the caller's elimination order.
    pub fn mul_disjoint(&self, o: &Self) -> Self {
        assert_eq!(
            self.vars_mask() & o.vars_mask(),
            0,
            "multilinear product requires disjoint variables"
        );
        let mut p = MPoly::zero();
        for m1 in 0..8 {
            if self.c[m1].is_zero() {
                continue;
            }
            for m2 in 0..8 {
                if o.c[m2].is_zero() {
                    continue;
                }
                p.c[m1 | m2] = &p.c[m1 | m2] + &(&self.c[m1] * &o.c[m2]);
            }
        }
        p
    }

    /// Write the polynomial as `A * t_k + B` with `A`, `B` free of `t_k`.
    pub fn split_var(&self, k: usize) -> (MPoly, MPoly) {
        let bit = 1usize << k;
        let mut a = MPoly::zero();
        let mut b = MPoly::zero();
        for mask in 0..8 {
            if self.c[mask].is_zero() {
                continue;
            }
            if mask & bit != 0 {
                a.c[mask & !bit] = self.c[mask].clone();
            } else {
                b.c[mask] = self.c[mask].clone();
            }
        }
        (a, b)
    }

    /// View as a linear polynomial `slope * t_k + intercept` when the only
    /// variable present is `t_k` (or none). `None` if other variables occur.
    pub fn as_linear_in(&self, k: usize) -> Option<(Rational, Rational)> {
        let bit = 1usize << k;
        if self.vars_mask() & !bit != 0 {
            return None;
        }
        Some((self.c[bit].clone(), self.c[0].clone()))
    }

    /// True when the two polynomials are rational scalar multiples of each
    /// other (all 2x2 coefficient minors vanish). Zero is proportional to
    /// everything; callers that care must screen it out first.
    pub fn proportional_to(&self, o: &Self) -> bool {
        for m1 in 0..8 {
            for m2 in m1 + 1..8 {
                if &self.c[m1] * &o.c[m2] != &self.c[m2] * &o.c[m1] {
                    return false;
                }
            }
        }
        true
    }

    pub fn eval(&self, vals: &[QuadAlgebraic]) -> Result<QuadAlgebraic> {
        let mut acc = QuadAlgebraic::zero();
        for mask in 0..8 {
            if self.c[mask].is_zero() {
                continue;
            }
            let mut term = QuadAlgebraic::rational(self.c[mask].clone());
            for k in 0..3 {
                if mask & (1 << k) != 0 {
                    term = term.try_mul(&vals[k])?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }
}

/// Real roots of `a x^2 + b x + c = 0` over the rationals, expressed in a
/// single quadratic extension. Degenerate cases reduce to the linear or
/// constant equation; an identically zero polynomial is the caller's
/// problem and reported as an empty root list here.
pub fn quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> Result<Vec<QuadAlgebraic>> {
    if a.is_zero() {
        if b.is_zero() {
            return Ok(Vec::new());
        }
        return Ok(vec![QuadAlgebraic::rational(-(c / b))]);
    }
    let disc = b * b - Rational::from_integer(4.into()) * a * c;
    if disc < Rational::zero() {
        return Ok(Vec::new());
    }
    let two_a = Rational::from_integer(2.into()) * a;
    let mid = QuadAlgebraic::rational(-(b / &two_a));
    if disc.is_zero() {
        return Ok(vec![mid]);
    }
    let root = QuadAlgebraic::sqrt_of(&disc)?;
    let half = root.try_div(&QuadAlgebraic::rational(two_a))?;
    Ok(vec![mid.try_sub(&half)?, mid.try_add(&half)?])
}
