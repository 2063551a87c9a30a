//! Brute-force check of a coalition query on a uniform grid: an
//! independent oracle for the branch-and-bound search. Every deviator
//! strategy with coordinates that are multiples of `1/n` is tried, gains
//! evaluated exactly. A refutation is only good to the grid's resolution.

use super::coalition::CoalitionQuery;
use super::{Verdict, Witness};
use crate::error::Result;
use crate::exact::{rat, QuadAlgebraic, Rational};
use crate::game::{MixedProfile, StrategicGame};

/// All ways to place `total` grid steps on `slots` coordinates.
fn compositions(total: u32, slots: usize) -> Vec<Vec<u32>> {
    if slots == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, slots - 1) {
            let mut v = Vec::with_capacity(slots);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

pub fn grid_oracle(game: &StrategicGame, x: &MixedProfile, query: &CoalitionQuery, n: u32) -> Result<Verdict> {
    let deviators = {
        let mut d: Vec<usize> = query
            .strict_improvers
            .iter()
            .chain(&query.weak_improvers)
            .copied()
            .collect();
        d.sort_unstable();
        d
    };
    let base = game.eval_payoff(x)?;
    let eps = QuadAlgebraic::rational(query.eps.clone());
    let grids: Vec<Vec<Vec<u32>>> = deviators
        .iter()
        .map(|&p| compositions(n, game.action_count(p)))
        .collect();

    let mut weights: Vec<Vec<QuadAlgebraic>> = x.strategies().to_vec();
    let mut cursor = vec![0usize; deviators.len()];
    loop {
        let mut strategies: Vec<Vec<Rational>> = Vec::with_capacity(deviators.len());
        for (i, &p) in deviators.iter().enumerate() {
            let comp = &grids[i][cursor[i]];
            let v: Vec<Rational> = comp.iter().map(|&c| rat(c as i64, n as i64)).collect();
            weights[p] = v.iter().map(|r| QuadAlgebraic::rational(r.clone())).collect();
            strategies.push(v);
        }
        let pay = game.eval_strategy_vectors(&weights)?;
        let mut ok = true;
        for &j in &query.strict_improvers {
            let gain = pay[j].try_sub(&base[j])?;
            if gain.try_cmp(&eps)? == std::cmp::Ordering::Less {
                ok = false;
                break;
            }
        }
        if ok {
            for &j in &query.weak_improvers {
                let gain = pay[j].try_sub(&base[j])?;
                if gain.sign() < 0 {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let mut gains = Vec::with_capacity(deviators.len());
            for &j in &deviators {
                gains.push(pay[j].try_sub(&base[j])?);
            }
            return Ok(Verdict::Yes {
                witness: Some(Witness::Improvement {
                    deviators,
                    strategies,
                    gains,
                }),
            });
        }
        let mut i = cursor.len();
        loop {
            if i == 0 {
                return Ok(Verdict::No {
                    witness: None,
                    margin: Some(rat(1, n as i64)),
                });
            }
            i -= 1;
            cursor[i] += 1;
            if cursor[i] < grids[i].len() {
                break;
            }
            cursor[i] = 0;
        }
    }
}
