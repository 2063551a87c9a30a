//! Finite strategic-form games with exact rational payoffs, and mixed
//! profiles whose probabilities live in a real quadratic extension.

pub mod format;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::{QuadAlgebraic, Rational};
use num_traits::{Signed, Zero};

/// An m-player game in strategic form. Payoffs are stored densely, one
/// rational vector per pure profile, indexed lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StrategicGame {
    labels: Vec<Vec<String>>,
    payoffs: Vec<Vec<Rational>>,
}

impl StrategicGame {
    pub fn new(labels: Vec<Vec<String>>, payoffs: Vec<Vec<Rational>>) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::BadParameter("game needs at least one player".into()));
        }
        if labels.iter().any(|l| l.is_empty()) {
            return Err(Error::BadParameter("every player needs at least one action".into()));
        }
        let cells: usize = labels.iter().map(|l| l.len()).product();
        if payoffs.len() != cells {
            return Err(Error::ShapeMismatch);
        }
        if payoffs.iter().any(|v| v.len() != m) {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self { labels, payoffs })
    }

    /// Builds the payoff table by calling `f` on every pure profile.
    pub fn from_fn<F>(labels: Vec<Vec<String>>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        let counts: Vec<usize> = labels.iter().map(|l| l.len()).collect();
        let mut payoffs = Vec::with_capacity(counts.iter().product());
        for profile in ProfileIter::new(&counts) {
            payoffs.push(f(&profile));
        }
        Self::new(labels, payoffs)
    }

    pub fn player_count(&self) -> usize {
        self.labels.len()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn action_count(&self, player: usize) -> usize {
        self.labels[player].len()
    }

    pub fn labels(&self, player: usize) -> &[String] {
        &self.labels[player]
    }

    pub fn label(&self, player: usize, action: usize) -> &str {
        &self.labels[player][action]
    }

    /// Index of the action with the given label, if present.
    pub fn action_by_label(&self, player: usize, label: &str) -> Option<usize> {
        self.labels[player].iter().position(|l| l == label)
    }

    pub fn profiles(&self) -> ProfileIter {
        ProfileIter::new(&self.action_counts())
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.labels.len());
        let mut idx = 0usize;
        for (p, &a) in profile.iter().enumerate() {
            debug_assert!(a < self.labels[p].len());
            idx = idx * self.labels[p].len() + a;
        }
        idx
    }

    pub fn payoff(&self, profile: &[usize]) -> &[Rational] {
        &self.payoffs[self.profile_index(profile)]
    }

    pub fn payoff_at(&self, flat: usize) -> &[Rational] {
        &self.payoffs[flat]
    }

    /// True when every pure payoff vector sums to zero exactly.
    pub fn is_zero_sum(&self) -> bool {
        self.payoffs
            .iter()
            .all(|v| v.iter().sum::<Rational>().is_zero())
    }

    /// Symmetry check: for every permutation pi of the players and every
    /// pure profile a, u_i(a_{pi(1)}, ..., a_{pi(m)}) = u_{pi(i)}(a).
    pub fn symmetry_violation(&self) -> SymmetryCheck {
        let m = self.player_count();
        let counts = self.action_counts();
        if counts.windows(2).any(|w| w[0] != w[1]) {
            return SymmetryCheck::UnequalActionSets;
        }
        for perm in permutations(m) {
            if perm.iter().enumerate().all(|(i, &p)| i == p) {
                continue;
            }
            for profile in self.profiles() {
                let permuted: Vec<usize> = (0..m).map(|k| profile[perm[k]]).collect();
                let u = self.payoff(&profile);
                let v = self.payoff(&permuted);
                for i in 0..m {
                    if v[i] != u[perm[i]] {
                        return SymmetryCheck::Violation { perm, profile };
                    }
                }
            }
        }
        SymmetryCheck::Symmetric
    }

    pub fn is_symmetric_game(&self) -> bool {
        matches!(self.symmetry_violation(), SymmetryCheck::Symmetric)
    }

    /// Expected payoff vector under a mixed profile. Exact; errors if the
    /// profile shape is wrong or probabilities mix incompatible radicands.
    pub fn eval_payoff(&self, x: &MixedProfile) -> Result<Vec<QuadAlgebraic>> {
        self.eval_with_overrides(x, &[])
    }

    /// Expected payoffs at explicit per-player weight vectors, with no
    /// validation that each vector is a probability distribution. Used by
    /// search code that evaluates the multilinear payoff extension at
    /// sub-simplex vertices it constructed itself.
    pub fn eval_strategy_vectors(&self, weights: &[Vec<QuadAlgebraic>]) -> Result<Vec<QuadAlgebraic>> {
        let m = self.player_count();
        if weights.len() != m {
            return Err(Error::ShapeMismatch);
        }
        for (p, w) in weights.iter().enumerate() {
            if w.len() != self.labels[p].len() {
                return Err(Error::ShapeMismatch);
            }
        }
        let choices: Vec<Vec<(usize, QuadAlgebraic)>> = weights
            .iter()
            .map(|w| {
                w.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(a, v)| (a, v.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut acc = vec![QuadAlgebraic::zero(); m];
        if choices.iter().any(|c| c.is_empty()) {
            return Ok(acc);
        }
        let one = QuadAlgebraic::one();
        let mut cursor = vec![0usize; m];
        let mut profile = vec![0usize; m];
        loop {
            let mut w = one.clone();
            for p in 0..m {
                let (a, ref prob) = choices[p][cursor[p]];
                profile[p] = a;
                w = w.try_mul(prob)?;
            }
            let pay = self.payoff(&profile);
            for i in 0..m {
                if !pay[i].is_zero() {
                    let term = w.try_mul(&QuadAlgebraic::from(&pay[i]))?;
                    acc[i] = acc[i].try_add(&term)?;
                }
            }
            let mut p = m;
            loop {
                if p == 0 {
                    return Ok(acc);
                }
                p -= 1;
                cursor[p] += 1;
                if cursor[p] < choices[p].len() {
                    break;
                }
                cursor[p] = 0;
            }
        }
    }

    /// Expected payoffs with some players pinned to pure actions; the rest
    /// play their mixed strategy from `x`.
    pub fn eval_with_overrides(
        &self,
        x: &MixedProfile,
        overrides: &[(usize, usize)],
    ) -> Result<Vec<QuadAlgebraic>> {
        let m = self.player_count();
        if x.strategies.len() != m {
            return Err(Error::ShapeMismatch);
        }
        for (p, s) in x.strategies.iter().enumerate() {
            if s.len() != self.labels[p].len() {
                return Err(Error::ShapeMismatch);
            }
        }
        for &(p, a) in overrides {
            if p >= m || a >= self.labels[p].len() {
                return Err(Error::IndexOutOfRange(format!("override ({p},{a})")));
            }
        }
        // Per-player choice lists: pinned players contribute one action with
        // weight 1, free players their support.
        let one = QuadAlgebraic::one();
        let mut choices: Vec<Vec<(usize, QuadAlgebraic)>> = Vec::with_capacity(m);
        for p in 0..m {
            if let Some(&(_, a)) = overrides.iter().find(|&&(q, _)| q == p) {
                choices.push(vec![(a, one.clone())]);
            } else {
                choices.push(
                    x.strategies[p]
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| !w.is_zero())
                        .map(|(a, w)| (a, w.clone()))
                        .collect(),
                );
            }
        }
        if choices.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidProfile("empty support".into()));
        }
        let mut acc = vec![QuadAlgebraic::zero(); m];
        let mut cursor = vec![0usize; m];
        let mut profile = vec![0usize; m];
        loop {
            let mut w = one.clone();
            for p in 0..m {
                let (a, ref prob) = choices[p][cursor[p]];
                profile[p] = a;
                w = w.try_mul(prob)?;
            }
            let pay = self.payoff(&profile);
            for i in 0..m {
                if !pay[i].is_zero() {
                    let term = w.try_mul(&QuadAlgebraic::from(&pay[i]))?;
                    acc[i] = acc[i].try_add(&term)?;
                }
            }
            // odometer
            let mut p = m;
            loop {
                if p == 0 {
                    return Ok(acc);
                }
                p -= 1;
                cursor[p] += 1;
                if cursor[p] < choices[p].len() {
                    break;
                }
                cursor[p] = 0;
            }
        }
    }

    pub fn transform_payoffs(&self, spec: &PayoffTransform) -> Result<StrategicGame> {
        match spec {
            PayoffTransform::TotalNeg | PayoffTransform::TotalPos => {
                if self.player_count() != 3 {
                    return Err(Error::BadPlayerCount(self.player_count()));
                }
                let three = Rational::from_integer(3.into());
                let payoffs = self
                    .payoffs
                    .iter()
                    .map(|v| {
                        let u1 = &v[0];
                        match spec {
                            PayoffTransform::TotalNeg => vec![u1.clone(), -u1, -u1],
                            _ => vec![u1 * &three, -u1, -u1],
                        }
                    })
                    .collect();
                StrategicGame::new(self.labels.clone(), payoffs)
            }
            PayoffTransform::ShiftScale { alpha, beta, players } => {
                if !alpha.is_positive() {
                    return Err(Error::BadParameter("scale must be positive".into()));
                }
                if let Some(set) = players {
                    if set.iter().any(|&p| p >= self.player_count()) {
                        return Err(Error::IndexOutOfRange("transform player set".into()));
                    }
                }
                let apply = |i: usize| players.as_ref().map_or(true, |s| s.contains(&i));
                let payoffs = self
                    .payoffs
                    .iter()
                    .map(|v| {
                        v.iter()
                            .enumerate()
                            .map(|(i, u)| if apply(i) { u * alpha + beta } else { u.clone() })
                            .collect()
                    })
                    .collect();
                StrategicGame::new(self.labels.clone(), payoffs)
            }
        }
    }
}

/// Payoff rewrites used by the reduction chain. The two total-payoff forms
/// keep Player 1's incentives and force the total to -u1 resp. +u1; the
/// affine form rescales designated players (None = everyone) by a positive
/// factor, which preserves best replies.
#[derive(Clone, Debug)]
pub enum PayoffTransform {
    TotalNeg,
    TotalPos,
    ShiftScale {
        alpha: Rational,
        beta: Rational,
        players: Option<BTreeSet<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryCheck {
    Symmetric,
    UnequalActionSets,
    Violation { perm: Vec<usize>, profile: Vec<usize> },
}

/// Lexicographic iterator over pure profiles.
pub struct ProfileIter {
    counts: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ProfileIter {
    pub fn new(counts: &[usize]) -> Self {
        let next = if counts.iter().any(|&c| c == 0) {
            None
        } else {
            Some(vec![0; counts.len()])
        };
        Self { counts: counts.to_vec(), next }
    }
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        let mut bump = current.clone();
        let mut p = bump.len();
        loop {
            if p == 0 {
                self.next = None;
                break;
            }
            p -= 1;
            bump[p] += 1;
            if bump[p] < self.counts[p] {
                self.next = Some(bump);
                break;
            }
            bump[p] = 0;
        }
        Some(current)
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..m).collect();
    fn rec(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(k + 1, items, out);
            items.swap(k, i);
        }
    }
    rec(0, &mut items, &mut out);
    out.sort();
    out
}

/// One mixed strategy per player. Entries are exact, nonnegative, and sum
/// to one per player; this is validated at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedProfile {
    strategies: Vec<Vec<QuadAlgebraic>>,
}

impl MixedProfile {
    pub fn new(strategies: Vec<Vec<QuadAlgebraic>>) -> Result<Self> {
        if strategies.is_empty() {
            return Err(Error::InvalidProfile("no players".into()));
        }
        for (p, s) in strategies.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidProfile(format!("player {} has no actions", p + 1)));
            }
            let mut sum = QuadAlgebraic::zero();
            for w in s {
                if w.is_negative() {
                    return Err(Error::InvalidProfile(format!(
                        "player {} has a negative probability",
                        p + 1
                    )));
                }
                sum = sum.try_add(w)?;
            }
            if sum != QuadAlgebraic::one() {
                return Err(Error::InvalidProfile(format!(
                    "player {} probabilities sum to {}",
                    p + 1,
                    sum
                )));
            }
        }
        Ok(Self { strategies })
    }

    /// The pure profile (a_1, ..., a_m) as a mixed profile for `game`.
    pub fn pure(game: &StrategicGame, profile: &[usize]) -> Result<Self> {
        if profile.len() != game.player_count() {
            return Err(Error::ShapeMismatch);
        }
        let mut strategies = Vec::new();
        for (p, &a) in profile.iter().enumerate() {
            let n = game.action_count(p);
            if a >= n {
                return Err(Error::IndexOutOfRange(format!("action {a} of player {}", p + 1)));
            }
            let mut s = vec![QuadAlgebraic::zero(); n];
            s[a] = QuadAlgebraic::one();
            strategies.push(s);
        }
        Ok(Self { strategies })
    }

    pub fn player_count(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy(&self, player: usize) -> &[QuadAlgebraic] {
        &self.strategies[player]
    }

    pub fn strategies(&self) -> &[Vec<QuadAlgebraic>] {
        &self.strategies
    }

    pub fn support(&self, player: usize) -> Vec<usize> {
        self.strategies[player]
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(a, _)| a)
            .collect()
    }

    pub fn is_rational(&self) -> bool {
        self.strategies
            .iter()
            .all(|s| s.iter().all(|w| w.is_rational()))
    }

    /// All strategies identical (the symmetry-of-profile predicate).
    pub fn is_symmetric(&self) -> bool {
        self.strategies.windows(2).all(|w| w[0] == w[1])
    }

    /// Largest probability assigned to any single action by any player.
    pub fn max_probability(&self) -> QuadAlgebraic {
        let mut best = QuadAlgebraic::zero();
        for s in &self.strategies {
            for w in s {
                if w.try_cmp(&best).map(|o| o.is_gt()).unwrap_or(false) {
                    best = w.clone();
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests;
