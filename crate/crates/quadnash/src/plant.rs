//! Seeded generator of quadratic systems with a planted rational solution.
//!
//! Round-trip exercises need systems whose exact solution is known up front
//! and lies inside the promise box [-1,1]^n. Each equation starts from
//! random integer terms and is then shifted by its own value at the planted
//! point: with eq(z) = p/q in lowest terms, the stored equation is
//! q*eq - p, which keeps integer coefficients and vanishes at z exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{rat, Rational};
use crate::systems::{QuadraticSystem, Term};

/// A generated system together with the point it was built around.
pub struct PlantedSystem {
    pub system: QuadraticSystem,
    pub solution: Vec<Rational>,
}

/// Draw a quadratic system over `var_count` variables with `eq_count`
/// equations and a rational point in [-1,1]^n solving all of them.
/// Deterministic in the arguments.
pub fn plant_system(var_count: usize, eq_count: usize, seed: u64) -> PlantedSystem {
    assert!(var_count >= 1, "need at least one variable");
    assert!(eq_count >= 1, "need at least one equation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solution: Vec<Rational> = (0..var_count)
        .map(|_| {
            let den = rng.gen_range(1..=4i64);
            let num = rng.gen_range(-den..=den);
            rat(num, den)
        })
        .collect();
    let equations: Vec<Vec<Term>> = (0..eq_count)
        .map(|_| draw_equation(&mut rng, var_count, &solution))
        .collect();
    let system =
        QuadraticSystem::new(var_count, equations).expect("generated indices are in range");
    PlantedSystem { system, solution }
}

/// One random equation vanishing at `z`. Terms are drawn with variable
/// index j >= 1, so the only constant term is the planted shift; a redraw
/// guards against the rare draw whose terms cancel outright.
fn draw_equation(rng: &mut ChaCha8Rng, var_count: usize, z: &[Rational]) -> Vec<Term> {
    loop {
        let term_count = rng.gen_range(1..=4usize);
        let mut raw: Vec<(i64, usize, usize)> = Vec::with_capacity(term_count);
        for _ in 0..term_count {
            let coeff = loop {
                let c = rng.gen_range(-3..=3i64);
                if c != 0 {
                    break c;
                }
            };
            let j = rng.gen_range(1..=var_count);
            let i = rng.gen_range(0..=j);
            raw.push((coeff, i, j));
        }
        let mut merged: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for &(c, i, j) in &raw {
            *merged.entry((i, j)).or_insert(0) += c;
        }
        if merged.values().all(|&c| c == 0) {
            continue;
        }

        let mut value = Rational::zero();
        for &(c, i, j) in &raw {
            let mut t = Rational::from_integer(c.into());
            if i > 0 {
                t *= &z[i - 1];
            }
            t *= &z[j - 1];
            value += t;
        }
        let scale = value.denom().clone();
        let offset = value.numer().clone();
        let mut terms: Vec<Term> = raw
            .iter()
            .map(|&(c, i, j)| Term::new(BigInt::from(c) * &scale, i, j))
            .collect();
        if !offset.is_zero() {
            terms.push(Term::new(-offset, 0, 0));
        }
        return terms;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QuadAlgebraic;
    use crate::systems::write_qsys;
    use num_traits::{One, Signed};

    #[test]
    fn planted_points_solve_their_systems() {
        for seed in 0..25u64 {
            let n = 1 + (seed as usize % 4);
            let l = 1 + (seed as usize / 5 % 4);
            let planted = plant_system(n, l, seed);
            assert_eq!(planted.system.var_count(), n);
            assert_eq!(planted.system.equation_count(), l);
            for c in &planted.solution {
                assert!(c.clone().abs() <= Rational::one());
            }
            let point: Vec<QuadAlgebraic> = planted
                .solution
                .iter()
                .map(|c| QuadAlgebraic::rational(c.clone()))
                .collect();
            let values = planted.system.eval(&point).unwrap();
            assert!(values.iter().all(|v| v.is_zero()), "seed {seed} leaves a residual");
        }
    }

    #[test]
    fn every_equation_keeps_a_variable_term() {
        for seed in 0..25u64 {
            let planted = plant_system(3, 4, seed);
            for eq in planted.system.equations() {
                assert!(eq.iter().any(|t| t.j > 0));
            }
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let a = plant_system(4, 4, 11);
        let b = plant_system(4, 4, 11);
        assert_eq!(write_qsys(&a.system), write_qsys(&b.system));
        assert_eq!(a.solution, b.solution);
        let c = plant_system(4, 4, 12);
        assert_ne!(write_qsys(&a.system), write_qsys(&c.system));
    }
}
