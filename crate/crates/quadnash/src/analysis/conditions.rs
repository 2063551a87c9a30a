//! Decision predicates on a single profile: does `x` witness a given
//! property of the game's equilibrium set? Every predicate first verifies
//! that `x` is an equilibrium at all, then checks the property itself,
//! both in exact arithmetic.

use super::enumerate::FoundEquilibrium;
use super::{check_ne, check_pareto, check_strong, Verdict};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::game::{MixedProfile, StrategicGame};
use num_traits::Zero;
use std::cmp::Ordering;

/// Thresholds and sets consumed by the predicates; unused fields are
/// ignored by predicates that do not need them.
#[derive(Debug, Clone)]
pub struct ConditionParams {
    /// Payoff or probability threshold.
    pub u: Rational,
    /// Support size threshold.
    pub k: usize,
    /// Per-player action sets for the support containment predicates.
    pub t_sets: Vec<Vec<usize>>,
}

impl Default for ConditionParams {
    fn default() -> Self {
        ConditionParams {
            u: Rational::zero(),
            k: 1,
            t_sets: Vec::new(),
        }
    }
}

/// Every id `check_condition` accepts.
pub const CONDITION_IDS: &[&str] = &[
    "large-payoffs",
    "small-payoffs",
    "large-total-payoff",
    "small-total-payoff",
    "ne-in-a-ball",
    "large-supports",
    "small-supports",
    "restricting-supports",
    "restricted-supports",
    "irrational",
    "rational",
    "pareto-optimal",
    "non-pareto-optimal",
    "strong",
    "non-strong",
];

/// Does `x` witness the property named by `id`?
///
/// The four optimality ids rest on the coalition search; when it cannot
/// resolve the question, this returns the unresolved error rather than
/// guessing.
pub fn check_condition(game: &StrategicGame, x: &MixedProfile, id: &str, params: &ConditionParams) -> Result<bool> {
    if !check_ne(game, x)?.is_yes() {
        return Ok(false);
    }
    let payoffs = || game.eval_payoff(x);
    let threshold = crate::exact::QuadAlgebraic::rational(params.u.clone());
    match id {
        "large-payoffs" => {
            for v in payoffs()? {
                if v.try_cmp(&threshold)? == Ordering::Less {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        "small-payoffs" => {
            for v in payoffs()? {
                if v.try_cmp(&threshold)? == Ordering::Greater {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        "large-total-payoff" | "small-total-payoff" => {
            let mut total = crate::exact::QuadAlgebraic::zero();
            for v in payoffs()? {
                total = total.try_add(&v)?;
            }
            let cmp = total.try_cmp(&threshold)?;
            Ok(if id == "large-total-payoff" {
                cmp != Ordering::Less
            } else {
                cmp != Ordering::Greater
            })
        }
        "ne-in-a-ball" => {
            for p in 0..game.player_count() {
                for w in x.strategy(p) {
                    if w.try_cmp(&threshold)? == Ordering::Greater {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        "large-supports" => Ok((0..game.player_count()).all(|p| x.support(p).len() >= params.k)),
        "small-supports" => Ok((0..game.player_count()).all(|p| x.support(p).len() <= params.k)),
        "restricting-supports" => {
            let m = game.player_count();
            if params.t_sets.len() != m {
                return Err(Error::BadParameter("need one action set per player".into()));
            }
            for p in 0..m {
                let supp = x.support(p);
                if !params.t_sets[p].iter().all(|a| supp.contains(a)) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        "restricted-supports" => {
            let m = game.player_count();
            if params.t_sets.len() != m {
                return Err(Error::BadParameter("need one action set per player".into()));
            }
            for p in 0..m {
                if !x.support(p).iter().all(|a| params.t_sets[p].contains(a)) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        "irrational" => Ok(!x.is_rational()),
        "rational" => Ok(x.is_rational()),
        "pareto-optimal" | "non-pareto-optimal" => {
            let verdict = check_pareto(game, x)?;
            resolve(id, verdict, id == "pareto-optimal")
        }
        "strong" | "non-strong" => {
            let verdict = check_strong(game, x)?;
            resolve(id, verdict, id == "strong")
        }
        _ => Err(Error::UnknownProblemId(id.to_string())),
    }
}

fn resolve(id: &str, verdict: Verdict, direct: bool) -> Result<bool> {
    match verdict {
        Verdict::Yes { .. } => Ok(direct),
        Verdict::No { .. } => Ok(!direct),
        Verdict::Unknown { resolution } => Err(Error::Unresolved(format!(
            "{id}: search stopped at resolution {}",
            crate::exact::fmt_rational(&resolution)
        ))),
    }
}

/// Set-level predicate: does the enumerated set contain an equilibrium
/// different from `x`?
pub fn exists_second_ne(found: &[FoundEquilibrium], x: &MixedProfile) -> bool {
    found.iter().any(|f| f.profile != *x)
}
