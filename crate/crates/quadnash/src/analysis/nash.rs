use super::{Verdict, Witness};
use crate::error::Result;
use crate::exact::QuadAlgebraic;
use crate::game::{MixedProfile, StrategicGame};

/// Exact Nash equilibrium check: `x` is an equilibrium iff no player gains
/// by deviating to any pure action.
///
/// On failure the witness is the most profitable deviation; ties break to
/// the smallest `(player, action)` pair so the answer is deterministic.
pub fn check_ne(game: &StrategicGame, x: &MixedProfile) -> Result<Verdict> {
    let base = game.eval_payoff(x)?;
    let mut best: Option<(usize, usize, QuadAlgebraic)> = None;
    for p in 0..game.player_count() {
        for a in 0..game.action_count(p) {
            let dev = game.eval_with_overrides(x, &[(p, a)])?;
            let gain = dev[p].try_sub(&base[p])?;
            if gain.sign() > 0 {
                let better = match &best {
                    None => true,
                    Some((_, _, g)) => gain.try_cmp(g)? == std::cmp::Ordering::Greater,
                };
                if better {
                    best = Some((p, a, gain));
                }
            }
        }
    }
    Ok(match best {
        None => Verdict::Yes { witness: None },
        Some((player, action, gain)) => Verdict::No {
            witness: Some(Witness::Deviation { player, action, gain }),
            margin: None,
        },
    })
}
