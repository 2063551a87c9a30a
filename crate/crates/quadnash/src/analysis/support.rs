//! Exact solver for the fully mixed case with two-action supports: three
//! unknowns, one per player, each player's indifference condition a
//! multilinear polynomial in the other two unknowns. Successive elimination
//! ends in a single univariate quadratic, so every isolated solution lives
//! in one quadratic extension of the rationals.

use super::mpoly::{quadratic_roots, MPoly};
use crate::error::Result;
use crate::exact::{QuadAlgebraic, Rational};
use crate::game::StrategicGame;
use num_traits::Zero;

/// One coordinate of a solution candidate: pinned to an exact value, or
/// still free (part of a positive-dimensional component).
#[derive(Debug, Clone, PartialEq)]
pub enum Coord {
    Fixed(QuadAlgebraic),
    Free,
}

impl Coord {
    pub fn is_free(&self) -> bool {
        matches!(self, Coord::Free)
    }
}

/// A candidate solution of the indifference system. `component` groups
/// candidates sampled from the same positive-dimensional component so the
/// caller can keep a single representative.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub coords: Vec<Coord>,
    pub seed_isolated: bool,
    pub component: usize,
}

/// The indifference system for a support pattern, kept so callers can
/// re-impose the equalities after pinning a coordinate.
pub struct Support2System {
    pub fs: [MPoly; 3],
    pub candidates: Vec<Candidate>,
}

/// Ladder of sampling points in (0,1): midpoints at successively finer
/// dyadic scales. Deterministic, coarse first.
pub fn unit_ladder() -> Vec<Rational> {
    let mut out = Vec::new();
    let mut den = 2u64;
    while den <= 16 {
        let mut num = 1;
        while num < den {
            out.push(crate::exact::rat(num as i64, den as i64));
            num += 2;
        }
        den *= 2;
    }
    out
}

/// Symmetric ladder of sampling points for unbounded parameters.
pub fn symmetric_ladder() -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for (n, d) in [
        (1, 2),
        (1, 1),
        (1, 4),
        (3, 4),
        (3, 2),
        (2, 1),
        (1, 8),
        (3, 8),
        (5, 8),
        (7, 8),
        (5, 2),
        (3, 1),
        (4, 1),
    ] {
        out.push(crate::exact::rat(n, d));
        out.push(crate::exact::rat(-n, d));
    }
    out
}

/// `t_var` if `first`, else `1 - t_var`: the two support weights of a
/// two-action mixer.
fn support_weight(var: usize, first: bool) -> MPoly {
    let mut p = MPoly::zero();
    if first {
        *p.coeff_mut(1 << var) = Rational::from_integer(1.into());
    } else {
        *p.coeff_mut(0) = Rational::from_integer(1.into());
        *p.coeff_mut(1 << var) = Rational::from_integer((-1).into());
    }
    p
}

/// Payoff gap between two of player `p`'s actions, as a multilinear
/// polynomial in the other players' mixing variables.
fn payoff_gap_poly(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    p: usize,
    hi_action: usize,
    lo_action: usize,
) -> MPoly {
    let q = (p + 1) % 3;
    let r = (p + 2) % 3;
    let mut f = MPoly::zero();
    let mut profile = [0usize; 3];
    for (bi, &b) in supports[q].iter().enumerate() {
        for (ci, &c) in supports[r].iter().enumerate() {
            profile[q] = b;
            profile[r] = c;
            profile[p] = hi_action;
            let hi = game.payoff(&profile)[p].clone();
            profile[p] = lo_action;
            let lo = game.payoff(&profile)[p].clone();
            let diff = hi - lo;
            if diff.is_zero() {
                continue;
            }
            let w = support_weight(q, bi == 0).mul_disjoint(&support_weight(r, ci == 0));
            f = f.add(&w.scale(&diff));
        }
    }
    f
}

/// Player `p`'s indifference polynomial between the two actions of its
/// support, as a multilinear polynomial in the other players' variables.
fn indifference_poly(game: &StrategicGame, supports: &[Vec<usize>; 3], p: usize) -> MPoly {
    payoff_gap_poly(game, supports, p, supports[p][0], supports[p][1])
}

/// Off-support payoff gaps against the anchor support action, one polynomial
/// per (player, unused action). Wherever the indifference conditions hold
/// these equal the deviation gains, so an equilibrium hiding inside a
/// degenerate solution component must sit on the zero set of every one.
fn tie_polys(game: &StrategicGame, supports: &[Vec<usize>; 3]) -> Vec<MPoly> {
    let mut out = Vec::new();
    for p in 0..3 {
        for b in 0..game.action_count(p) {
            if !supports[p].contains(&b) {
                out.push(payoff_gap_poly(game, supports, p, b, supports[p][0]));
            }
        }
    }
    out
}

/// Roots of a polynomial that is at most linear in `var` (and constant in
/// everything else): `Free` if identically zero, one root, or none.
fn roots_or_free(p: &MPoly, var: usize) -> Vec<Coord> {
    if p.is_zero() {
        return vec![Coord::Free];
    }
    let (slope, intercept) = p
        .as_linear_in(var)
        .expect("caller guarantees a univariate polynomial");
    if slope.is_zero() {
        return Vec::new();
    }
    vec![Coord::Fixed(QuadAlgebraic::rational(-(&intercept / &slope)))]
}

pub struct Sol2 {
    pub u: Coord,
    pub v: Coord,
    pub isolated: bool,
    pub component: usize,
}

fn eval_lin(slope: &Rational, intercept: &Rational, at: &QuadAlgebraic) -> Result<QuadAlgebraic> {
    at.try_mul(&QuadAlgebraic::rational(slope.clone()))?
        .try_add(&QuadAlgebraic::rational(intercept.clone()))
}

/// Common roots of two polynomials in the variables `uvar`, `vvar`, each
/// linear in `uvar`. Eliminating `uvar` leaves one quadratic in `vvar`; a
/// vanishing resultant signals a shared curve, which is sampled and also cut
/// with the `ties` polynomials: on a shared component the equation system
/// alone cannot pin the point, but a best response there must additionally
/// kill every deviation gain, and those cuts recover algebraic points the
/// rational samples miss.
pub fn solve2(
    e1: &MPoly,
    e2: &MPoly,
    uvar: usize,
    vvar: usize,
    ties: &[MPoly],
) -> Result<Vec<Sol2>> {
    if e1.is_zero() && e2.is_zero() {
        let mut out = vec![Sol2 {
            u: Coord::Free,
            v: Coord::Free,
            isolated: false,
            component: 0,
        }];
        // The whole square is a solution plane; only pairs of tie cuts can
        // single out points on it.
        let live: Vec<&MPoly> = ties.iter().filter(|h| !h.is_zero()).collect();
        let mut next = 1;
        for (i, hi) in live.iter().enumerate() {
            for hj in &live[i + 1..] {
                if hi.proportional_to(hj) {
                    continue;
                }
                for s in solve2(hi, hj, uvar, vvar, &[])? {
                    let (Coord::Fixed(u), Coord::Fixed(v)) = (s.u, s.v) else {
                        continue;
                    };
                    out.push(Sol2 {
                        u: Coord::Fixed(u),
                        v: Coord::Fixed(v),
                        isolated: false,
                        component: next,
                    });
                    next += 1;
                }
            }
        }
        return Ok(out);
    }
    let (p, q) = e1.split_var(uvar);
    let (r, s) = e2.split_var(uvar);
    let (p1, p0) = p.as_linear_in(vvar).expect("elimination order broken");
    let (q1, q0) = q.as_linear_in(vvar).expect("elimination order broken");
    let (r1, r0) = r.as_linear_in(vvar).expect("elimination order broken");
    let (s1, s0) = s.as_linear_in(vvar).expect("elimination order broken");
    // Resultant of the two linear-in-u polynomials: deg <= 2 in v.
    let h2 = &p1 * &s1 - &q1 * &r1;
    let h1 = &p1 * &s0 + &p0 * &s1 - &q1 * &r0 - &q0 * &r1;
    let h0 = &p0 * &s0 - &q0 * &r0;

    let mut out = Vec::new();
    if h2.is_zero() && h1.is_zero() && h0.is_zero() {
        // Shared component: sample v, back-solve u linearly. All samples
        // belong to one component.
        for val in unit_ladder() {
            let pv = &p1 * &val + &p0;
            let qv = &q1 * &val + &q0;
            let rv = &r1 * &val + &r0;
            let sv = &s1 * &val + &s0;
            let v = Coord::Fixed(QuadAlgebraic::rational(val));
            if !pv.is_zero() {
                out.push(Sol2 {
                    u: Coord::Fixed(QuadAlgebraic::rational(-(&qv / &pv))),
                    v,
                    isolated: false,
                    component: 0,
                });
            } else if !rv.is_zero() {
                out.push(Sol2 {
                    u: Coord::Fixed(QuadAlgebraic::rational(-(&sv / &rv))),
                    v,
                    isolated: false,
                    component: 0,
                });
            } else if qv.is_zero() && sv.is_zero() {
                out.push(Sol2 {
                    u: Coord::Free,
                    v,
                    isolated: false,
                    component: 0,
                });
            }
        }
        // Cut the shared curve with each independent tie polynomial. Any
        // point found must still satisfy the equation that was not used as
        // the cutting base.
        let base = if e1.is_zero() { e2 } else { e1 };
        let other = if e1.is_zero() { e1 } else { e2 };
        let mut next = 1;
        for h in ties {
            if h.is_zero() || h.proportional_to(base) {
                continue;
            }
            for s in solve2(base, h, uvar, vvar, &[])? {
                let (Coord::Fixed(u), Coord::Fixed(v)) = (s.u, s.v) else {
                    continue;
                };
                let mut vals = vec![QuadAlgebraic::zero(); 3];
                vals[uvar] = u.clone();
                vals[vvar] = v.clone();
                if !other.eval(&vals)?.is_zero() {
                    continue;
                }
                out.push(Sol2 {
                    u: Coord::Fixed(u),
                    v: Coord::Fixed(v),
                    isolated: false,
                    component: next,
                });
                next += 1;
            }
        }
        return Ok(out);
    }

    for (idx, root) in quadratic_roots(&h2, &h1, &h0)?.into_iter().enumerate() {
        let pv = eval_lin(&p1, &p0, &root)?;
        let qv = eval_lin(&q1, &q0, &root)?;
        let rv = eval_lin(&r1, &r0, &root)?;
        let sv = eval_lin(&s1, &s0, &root)?;
        let component = idx + 1;
        if !pv.is_zero() {
            let u = qv.neg().try_div(&pv)?;
            // the other equation must agree
            let chk = rv.try_mul(&u)?.try_add(&sv)?;
            if chk.is_zero() {
                out.push(Sol2 {
                    u: Coord::Fixed(u),
                    v: Coord::Fixed(root),
                    isolated: true,
                    component,
                });
            }
        } else if !rv.is_zero() {
            let u = sv.neg().try_div(&rv)?;
            if qv.is_zero() {
                out.push(Sol2 {
                    u: Coord::Fixed(u),
                    v: Coord::Fixed(root),
                    isolated: true,
                    component,
                });
            }
        } else if qv.is_zero() && sv.is_zero() {
            out.push(Sol2 {
                u: Coord::Free,
                v: Coord::Fixed(root),
                isolated: false,
                component,
            });
        }
    }
    Ok(out)
}

/// Re-impose the equality system on a candidate: any polynomial left with a
/// single free variable pins it (or kills the candidate), repeated to a
/// fixpoint. Polynomials with two or more free variables are left for the
/// sampling stage. Returns false when the candidate is inconsistent.
pub fn refine(fs: &[MPoly; 3], coords: &mut [Coord]) -> Result<bool> {
    loop {
        let mut progress = false;
        for f in fs {
            let mask = f.vars_mask();
            let free: Vec<usize> = (0..3)
                .filter(|&k| mask & (1 << k) != 0 && coords[k].is_free())
                .collect();
            let assemble = |pin: Option<(usize, QuadAlgebraic)>| -> Vec<QuadAlgebraic> {
                (0..3)
                    .map(|k| match &coords[k] {
                        Coord::Fixed(v) => v.clone(),
                        Coord::Free => match &pin {
                            Some((kk, v)) if *kk == k => v.clone(),
                            _ => QuadAlgebraic::zero(),
                        },
                    })
                    .collect()
            };
            match free.len() {
                0 => {
                    if !f.eval(&assemble(None))?.is_zero() {
                        return Ok(false);
                    }
                }
                1 => {
                    let k = free[0];
                    let g0 = f.eval(&assemble(Some((k, QuadAlgebraic::zero()))))?;
                    let g1 = f.eval(&assemble(Some((k, QuadAlgebraic::one()))))?;
                    let slope = g1.try_sub(&g0)?;
                    if slope.is_zero() {
                        if !g0.is_zero() {
                            return Ok(false);
                        }
                    } else {
                        coords[k] = Coord::Fixed(g0.neg().try_div(&slope)?);
                        progress = true;
                    }
                }
                _ => {}
            }
        }
        if !progress {
            return Ok(true);
        }
    }
}

/// Solve the indifference system for a pattern where every player mixes
/// over exactly two actions. Returns the system (for later re-refining)
/// and the surviving candidates.
pub fn solve_support2(game: &StrategicGame, supports: &[Vec<usize>; 3]) -> Result<Support2System> {
    let fs = [
        indifference_poly(game, supports, 0),
        indifference_poly(game, supports, 1),
        indifference_poly(game, supports, 2),
    ];
    // Deviation gaps of the unused actions that do not involve t_0; used to
    // cut degenerate solution components down to candidate points.
    let ties12: Vec<MPoly> = tie_polys(game, supports)
        .into_iter()
        .filter(|h| h.vars_mask() & 0b001 == 0)
        .collect();
    // Eliminate t_0 from players 1 and 2's conditions.
    let (a, b) = fs[1].split_var(0);
    let (c, d) = fs[2].split_var(0);
    let mut raw: Vec<Candidate> = Vec::new();
    if a.is_zero() && c.is_zero() {
        // t_0 does not appear: the system is {f0(t1,t2), b(t2), d(t1)}.
        for c1 in roots_or_free(&d, 1) {
            for c2 in roots_or_free(&b, 2) {
                let iso = !c1.is_free() && !c2.is_free();
                raw.push(Candidate {
                    coords: vec![Coord::Free, c1.clone(), c2.clone()],
                    seed_isolated: iso,
                    component: raw.len(),
                });
            }
        }
        if b.is_zero() && d.is_zero() {
            // Players 1 and 2 impose nothing at all; f0's zero curve is cut
            // by the tie polynomials.
            let base = raw.len();
            for s in solve2(&fs[0], &MPoly::zero(), 1, 2, &ties12)? {
                raw.push(Candidate {
                    coords: vec![Coord::Free, s.u, s.v],
                    seed_isolated: false,
                    component: base + s.component,
                });
            }
        }
    } else {
        let g = a.mul_disjoint(&d).sub(&b.mul_disjoint(&c));
        for s in solve2(&fs[0], &g, 1, 2, &ties12)? {
            raw.push(Candidate {
                coords: vec![Coord::Free, s.u, s.v],
                seed_isolated: s.isolated,
                component: s.component,
            });
        }
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for mut cand in raw {
        if refine(&fs, &mut cand.coords)? && !candidates.iter().any(|c| c.coords == cand.coords) {
            candidates.push(cand);
        }
    }
    Ok(Support2System { fs, candidates })
}

/// Accumulates one-variable affine constraints `slope*t + intercept <= 0`
/// (strict or weak) into an interval.
pub struct IntervalAcc {
    infeasible: bool,
    lo: Option<(QuadAlgebraic, bool)>,
    hi: Option<(QuadAlgebraic, bool)>,
}

pub enum IntervalOutcome {
    Empty,
    Point(QuadAlgebraic),
    Range(QuadAlgebraic, QuadAlgebraic),
}

impl IntervalAcc {
    /// Interval pre-seeded with the open unit interval.
    pub fn open_unit() -> Self {
        IntervalAcc {
            infeasible: false,
            lo: Some((QuadAlgebraic::zero(), true)),
            hi: Some((QuadAlgebraic::one(), true)),
        }
    }

    pub fn unbounded() -> Self {
        IntervalAcc {
            infeasible: false,
            lo: None,
            hi: None,
        }
    }

    pub fn add_le_zero(&mut self, slope: &QuadAlgebraic, intercept: &QuadAlgebraic, strict: bool) -> Result<()> {
        if self.infeasible {
            return Ok(());
        }
        match slope.sign() {
            0 => {
                let s = intercept.sign();
                if s > 0 || (strict && s == 0) {
                    self.infeasible = true;
                }
            }
            1 => {
                let bound = intercept.neg().try_div(slope)?;
                self.tighten_hi(bound, strict)?;
            }
            _ => {
                let bound = intercept.neg().try_div(slope)?;
                self.tighten_lo(bound, strict)?;
            }
        }
        Ok(())
    }

    fn tighten_hi(&mut self, bound: QuadAlgebraic, strict: bool) -> Result<()> {
        match &self.hi {
            None => self.hi = Some((bound, strict)),
            Some((cur, cur_strict)) => match bound.try_cmp(cur)? {
                std::cmp::Ordering::Less => self.hi = Some((bound, strict)),
                std::cmp::Ordering::Equal => {
                    if strict && !cur_strict {
                        self.hi = Some((bound, true));
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
        Ok(())
    }

    fn tighten_lo(&mut self, bound: QuadAlgebraic, strict: bool) -> Result<()> {
        match &self.lo {
            None => self.lo = Some((bound, strict)),
            Some((cur, cur_strict)) => match bound.try_cmp(cur)? {
                std::cmp::Ordering::Greater => self.lo = Some((bound, strict)),
                std::cmp::Ordering::Equal => {
                    if strict && !cur_strict {
                        self.lo = Some((bound, true));
                    }
                }
                std::cmp::Ordering::Less => {}
            },
        }
        Ok(())
    }

    pub fn outcome(self) -> Result<IntervalOutcome> {
        if self.infeasible {
            return Ok(IntervalOutcome::Empty);
        }
        // Callers always bound the interval (probability or interiority
        // constraints); an unbounded side means those were missing, and we
        // refuse to pick a representative.
        let (Some((lo, lo_strict)), Some((hi, hi_strict))) = (self.lo, self.hi) else {
            return Ok(IntervalOutcome::Empty);
        };
        Ok(match lo.try_cmp(&hi)? {
            std::cmp::Ordering::Greater => IntervalOutcome::Empty,
            std::cmp::Ordering::Equal => {
                if lo_strict || hi_strict {
                    IntervalOutcome::Empty
                } else {
                    IntervalOutcome::Point(lo)
                }
            }
            std::cmp::Ordering::Less => IntervalOutcome::Range(lo, hi),
        })
    }
}

pub fn midpoint(lo: &QuadAlgebraic, hi: &QuadAlgebraic) -> Result<QuadAlgebraic> {
    lo.try_add(hi)?
        .try_mul(&QuadAlgebraic::rational(crate::exact::rat(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn ladders_are_interior_and_distinct() {
        let l = unit_ladder();
        assert_eq!(l.len(), 15);
        for v in &l {
            assert!(*v > Rational::zero() && *v < rat_int(1));
        }
        let mut sorted = l.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 15);
        assert_eq!(l[0], rat(1, 2));
    }

    #[test]
    fn interval_point_and_empty() {
        // t >= 1/3 (weak), t <= 1/3 (weak) inside (0,1): a point
        let mut acc = IntervalAcc::open_unit();
        acc.add_le_zero(
            &QuadAlgebraic::from_int(-3),
            &QuadAlgebraic::one(),
            false,
        )
        .unwrap();
        acc.add_le_zero(
            &QuadAlgebraic::from_int(3),
            &QuadAlgebraic::from_int(-1),
            false,
        )
        .unwrap();
        match acc.outcome().unwrap() {
            IntervalOutcome::Point(v) => assert_eq!(v, QuadAlgebraic::rational(rat(1, 3))),
            _ => panic!("expected a point"),
        }
        // contradictory strict constraints
        let mut acc = IntervalAcc::open_unit();
        acc.add_le_zero(&QuadAlgebraic::from_int(-1), &QuadAlgebraic::rational(rat(1, 2)), true)
            .unwrap();
        acc.add_le_zero(&QuadAlgebraic::from_int(1), &QuadAlgebraic::rational(rat(-1, 2)), true)
            .unwrap();
        assert!(matches!(acc.outcome().unwrap(), IntervalOutcome::Empty));
    }

    #[test]
    fn refine_pins_chained_variables() {
        // f0 = t1 + t2 - 1, f1 = 2 t2 - 1, f2 = 0
        let mut f0 = MPoly::zero();
        *f0.coeff_mut(0b010) = rat_int(1);
        *f0.coeff_mut(0b100) = rat_int(1);
        *f0.coeff_mut(0b000) = rat_int(-1);
        let mut f1 = MPoly::zero();
        *f1.coeff_mut(0b100) = rat_int(2);
        *f1.coeff_mut(0b000) = rat_int(-1);
        let fs = [f0, f1, MPoly::zero()];
        let mut coords = vec![Coord::Free, Coord::Free, Coord::Free];
        assert!(refine(&fs, &mut coords).unwrap());
        assert!(coords[0].is_free());
        assert_eq!(coords[1], Coord::Fixed(QuadAlgebraic::rational(rat(1, 2))));
        assert_eq!(coords[2], Coord::Fixed(QuadAlgebraic::rational(rat(1, 2))));
    }
}
