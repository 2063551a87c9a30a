//! Equilibrium analysis: exact best-reply checks, equilibrium enumeration
//! for small games, coalition deviation search, and decision predicates
//! built on top of those verdicts.
//!
//! Everything that can be decided in exact arithmetic is. Numeric fallbacks
//! are explicit: results carry an exactness flag, and refutations that rest
//! on a finite search resolution say so instead of claiming certainty.

mod conditions;
mod grid;
mod linsolve;
mod mpoly;
mod nash;
mod numeric;
mod support;


pub mod coalition;
pub mod enumerate;

pub use coalition::{
    build_auxiliary_game, check_pareto, check_pareto_with_margin, check_strong,
    check_strong_with_margin, coalition_feasible, CoalitionQuery,
};
pub use conditions::{check_condition, exists_second_ne, ConditionParams, CONDITION_IDS};
pub use enumerate::{find_equilibria, EnumerationOptions, Exactness, FoundEquilibrium};
pub use grid::grid_oracle;
pub use nash::check_ne;

use crate::exact::{QuadAlgebraic, Rational};

/// Outcome of a decision query.
///
/// `Yes`/`No` are exact claims (modulo the stated margin); `Unknown` means
/// the search bottomed out at its resolution floor without resolving the
/// question either way.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Yes {
        witness: Option<Witness>,
    },
    No {
        witness: Option<Witness>,
        /// `None` marks an unconditional refutation. `Some(eps)` means the
        /// search only rules out improvements of at least `eps`.
        margin: Option<Rational>,
    },
    Unknown {
        /// Cell size at which the search gave up.
        resolution: Rational,
    },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Yes { witness } => witness.as_ref(),
            Verdict::No { witness, .. } => witness.as_ref(),
            Verdict::Unknown { .. } => None,
        }
    }
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// A single player improves by switching to a pure action.
    Deviation {
        player: usize,
        action: usize,
        gain: QuadAlgebraic,
    },
    /// A coalition improves by jointly switching to new mixed strategies.
    /// `strategies[k]` is the new strategy of `deviators[k]`, and
    /// `gains[k]` is `deviators[k]`'s payoff change.
    Improvement {
        deviators: Vec<usize>,
        strategies: Vec<Vec<Rational>>,
        gains: Vec<QuadAlgebraic>,
    },
}
