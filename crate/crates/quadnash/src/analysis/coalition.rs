//! Coalition deviation search.
//!
//! `coalition_feasible` decides whether a set of deviating players can
//! jointly switch to new mixed strategies so that every designated member
//! gains at least `eps` and no other member loses, with everyone outside
//! the coalition frozen at the profile under test. The search covers
//! products of strategy sub-simplices by branch and bound; deviation gains
//! are multilinear in the deviators' strategies, so their exact maximum
//! over such a product is attained at a vertex combination, which gives
//! both the pruning bound and the improvement witnesses.
//!
//! Soundness of the refutations: a feasible improvement, if one exists,
//! also exists with every deviator's support of size at most one more than
//! the coalition size (walk the deviators one by one: each player's
//! feasible set is a polytope cut out of its simplex by one halfspace per
//! coalition member, and some vertex of that polytope keeps all gains
//! while using at most that many nonzero coordinates). The search
//! therefore enumerates exactly the support patterns of that size.

use super::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::exact::{rat, QuadAlgebraic, Rational};
use crate::game::{MixedProfile, ProfileIter, StrategicGame};
use num_traits::Zero;

/// A coalition deviation query: the three player sets partition the game's
/// players, and `strict_improvers` together with `weak_improvers` form the
/// deviating coalition, which must not be empty.
#[derive(Debug, Clone)]
pub struct CoalitionQuery {
    /// Members that must gain at least `eps`.
    pub strict_improvers: Vec<usize>,
    /// Members that must not lose.
    pub weak_improvers: Vec<usize>,
    /// Players frozen at the tested profile.
    pub frozen: Vec<usize>,
    /// Improvement threshold for the strict members.
    pub eps: Rational,
}

impl CoalitionQuery {
    pub fn new(strict_improvers: Vec<usize>, weak_improvers: Vec<usize>, frozen: Vec<usize>) -> Self {
        CoalitionQuery {
            strict_improvers,
            weak_improvers,
            frozen,
            eps: rat(1, 1024),
        }
    }

    pub fn with_eps(mut self, eps: Rational) -> Self {
        self.eps = eps;
        self
    }

    fn validate(&self, player_count: usize) -> Result<Vec<usize>> {
        let mut seen = vec![false; player_count];
        for &p in self
            .strict_improvers
            .iter()
            .chain(&self.weak_improvers)
            .chain(&self.frozen)
        {
            if p >= player_count {
                return Err(Error::IndexOutOfRange(format!("player {p}")));
            }
            if seen[p] {
                return Err(Error::BadParameter(format!("player {p} listed twice in a coalition query")));
            }
            seen[p] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::BadParameter("coalition query must mention every player".into()));
        }
        // A query with no strict member is vacuous (not deviating already
        // satisfies it), and the weighted-sum prunes below rely on at
        // least one member needing a real gain.
        if self.strict_improvers.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        let mut deviators: Vec<usize> = self
            .strict_improvers
            .iter()
            .chain(&self.weak_improvers)
            .copied()
            .collect();
        deviators.sort_unstable();
        if self.eps <= Rational::zero() {
            return Err(Error::BadParameter("eps must be positive".into()));
        }
        Ok(deviators)
    }
}

/// Resolution floor: regions whose longest edge falls below 2^-20 are no
/// longer split, and an undecided query becomes `Unknown`.
fn resolution_floor() -> Rational {
    rat(1, 1 << 20)
}

/// Node budget across a whole query; hitting it reports `Unknown` rather
/// than looping without bound.
const MAX_NODES: u64 = 200_000;

struct Search<'a> {
    game: &'a StrategicGame,
    x: &'a MixedProfile,
    base: Vec<QuadAlgebraic>,
    deviators: Vec<usize>,
    strict: Vec<usize>,
    weak: Vec<usize>,
    eps: QuadAlgebraic,
    nodes: u64,
    any_qualified: bool,
    any_unresolved: bool,
}

/// Product of sub-simplices, one per deviator, each given by its vertices
/// as full-length strategy vectors.
#[derive(Clone)]
struct Region {
    simplices: Vec<Vec<Vec<Rational>>>,
}

pub fn coalition_feasible(game: &StrategicGame, x: &MixedProfile, query: &CoalitionQuery) -> Result<Verdict> {
    let deviators = query.validate(game.player_count())?;
    let base = game.eval_payoff(x)?;
    let mut search = Search {
        game,
        x,
        base,
        strict: query.strict_improvers.clone(),
        weak: query.weak_improvers.clone(),
        eps: QuadAlgebraic::rational(query.eps.clone()),
        deviators,
        nodes: 0,
        any_qualified: false,
        any_unresolved: false,
    };

    // Support patterns: size min(coalition size + 1, action count) per
    // deviator; smaller supports are faces of these closed regions.
    let k = search.deviators.len();
    let pattern_sets: Vec<Vec<Vec<usize>>> = search
        .deviators
        .iter()
        .map(|&p| {
            let n = game.action_count(p);
            combinations(n, (k + 1).min(n))
        })
        .collect();
    let mut pattern = vec![0usize; k];
    loop {
        let region = Region {
            simplices: (0..k)
                .map(|i| {
                    let p = search.deviators[i];
                    let n = game.action_count(p);
                    pattern_sets[i][pattern[i]]
                        .iter()
                        .map(|&a| {
                            let mut v = vec![Rational::zero(); n];
                            v[a] = Rational::from_integer(1.into());
                            v
                        })
                        .collect()
                })
                .collect(),
        };
        if let Some(witness) = search.explore(region)? {
            return Ok(Verdict::Yes { witness: Some(witness) });
        }
        // advance the pattern odometer
        let mut i = k;
        loop {
            if i == 0 {
                if search.any_unresolved {
                    return Ok(Verdict::Unknown {
                        resolution: resolution_floor(),
                    });
                }
                return Ok(Verdict::No {
                    witness: None,
                    margin: if search.any_qualified {
                        Some(query.eps.clone())
                    } else {
                        None
                    },
                });
            }
            i -= 1;
            pattern[i] += 1;
            if pattern[i] < pattern_sets[i].len() {
                break;
            }
            pattern[i] = 0;
        }
    }
}

fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    'combos: loop {
        out.push(cur.clone());
        let mut i = size;
        while i > 0 {
            i -= 1;
            if cur[i] < n - size + i {
                cur[i] += 1;
                for j in i + 1..size {
                    cur[j] = cur[j - 1] + 1;
                }
                continue 'combos;
            }
        }
        break;
    }
    out
}

impl<'a> Search<'a> {
    /// Depth-first branch and bound over one support pattern's region.
    /// Returns a witness on success; prunes record their kind in flags.
    fn explore(&mut self, root: Region) -> Result<Option<Witness>> {
        let mut stack = vec![root];
        while let Some(region) = stack.pop() {
            self.nodes += 1;
            if self.nodes > MAX_NODES {
                self.any_unresolved = true;
                return Ok(None);
            }
            match self.examine(&region)? {
                Examined::Witness(w) => return Ok(Some(w)),
                Examined::Pruned => {}
                Examined::Split => {
                    if let Some((a, b)) = self.bisect(&region)? {
                        stack.push(b);
                        stack.push(a);
                    } else {
                        // resolution floor reached without a decision
                        self.any_unresolved = true;
                    }
                }
            }
        }
        Ok(None)
    }

    /// Evaluate all vertex combinations of the region: exact per-member
    /// maxima, weighted-sum maxima for the absolute prunes, and a direct
    /// witness check at every combination.
    fn examine(&mut self, region: &Region) -> Result<Examined> {
        let members: Vec<usize> = self.strict.iter().chain(&self.weak).copied().collect();
        let mut max_gain: Vec<Option<QuadAlgebraic>> = vec![None; members.len()];
        let mut max_sum: Option<QuadAlgebraic> = None;
        // weighted combinations (1,2) and (2,1) for two-member coalitions
        let two_weights = members.len() == 2 && self.weak.is_empty();
        let mut max_w12: Option<QuadAlgebraic> = None;
        let mut max_w21: Option<QuadAlgebraic> = None;

        let counts = self.game.action_counts();
        let mut weights: Vec<Vec<QuadAlgebraic>> = self.x.strategies().to_vec();
        let sizes: Vec<usize> = region.simplices.iter().map(|s| s.len()).collect();
        let mut combo = vec![0usize; sizes.len()];
        loop {
            for (i, &p) in self.deviators.iter().enumerate() {
                weights[p] = region.simplices[i][combo[i]]
                    .iter()
                    .map(|r| QuadAlgebraic::rational(r.clone()))
                    .collect();
                debug_assert_eq!(weights[p].len(), counts[p]);
            }
            let pay = self.game.eval_strategy_vectors(&weights)?;
            let mut all_pass = true;
            let mut sum = QuadAlgebraic::zero();
            let mut gains = Vec::with_capacity(members.len());
            for (mi, &j) in members.iter().enumerate() {
                let gain = pay[j].try_sub(&self.base[j])?;
                sum = sum.try_add(&gain)?;
                let need_strict = mi < self.strict.len();
                if need_strict {
                    if gain.try_cmp(&self.eps)? == std::cmp::Ordering::Less {
                        all_pass = false;
                    }
                } else if gain.sign() < 0 {
                    all_pass = false;
                }
                track_max(&mut max_gain[mi], &gain)?;
                gains.push(gain);
            }
            if two_weights {
                let two = QuadAlgebraic::from_int(2);
                let w12 = gains[0].try_add(&gains[1].try_mul(&two)?)?;
                let w21 = gains[0].try_mul(&two)?.try_add(&gains[1])?;
                track_max_val(&mut max_w12, w12)?;
                track_max_val(&mut max_w21, w21)?;
            }
            track_max_val(&mut max_sum, sum)?;
            if all_pass {
                // belt: strict members must genuinely gain
                debug_assert!(gains[..self.strict.len()].iter().all(|g| g.sign() > 0));
                let strategies: Vec<Vec<Rational>> = (0..self.deviators.len())
                    .map(|i| region.simplices[i][combo[i]].clone())
                    .collect();
                // report gains in deviator order
                let ordered: Vec<QuadAlgebraic> = self
                    .deviators
                    .iter()
                    .map(|p| {
                        let mi = members.iter().position(|m| m == p).expect("member");
                        gains[mi].clone()
                    })
                    .collect();
                return Ok(Examined::Witness(Witness::Improvement {
                    deviators: self.deviators.clone(),
                    strategies,
                    gains: ordered,
                }));
            }
            // odometer
            let mut i = sizes.len();
            loop {
                if i == 0 {
                    // all combos seen: decide prune or split
                    return self.decide(&max_gain, &max_sum, &max_w12, &max_w21);
                }
                i -= 1;
                combo[i] += 1;
                if combo[i] < sizes[i] {
                    break;
                }
                combo[i] = 0;
            }
        }
    }

    fn decide(
        &mut self,
        max_gain: &[Option<QuadAlgebraic>],
        max_sum: &Option<QuadAlgebraic>,
        max_w12: &Option<QuadAlgebraic>,
        max_w21: &Option<QuadAlgebraic>,
    ) -> Result<Examined> {
        // absolute prunes: no point of the region improves, whatever eps
        for (mi, bound) in max_gain.iter().enumerate() {
            let bound = bound.as_ref().expect("nonempty region");
            if mi < self.strict.len() {
                if bound.sign() <= 0 {
                    return Ok(Examined::Pruned);
                }
            } else if bound.sign() < 0 {
                return Ok(Examined::Pruned);
            }
        }
        if max_sum.as_ref().expect("nonempty region").sign() <= 0 {
            return Ok(Examined::Pruned);
        }
        for w in [max_w12, max_w21].into_iter().flatten() {
            if w.sign() <= 0 {
                return Ok(Examined::Pruned);
            }
        }
        // eps-qualified prune: some strict member cannot reach eps
        for bound in max_gain.iter().take(self.strict.len()) {
            let bound = bound.as_ref().expect("nonempty region");
            if bound.try_cmp(&self.eps)? == std::cmp::Ordering::Less {
                self.any_qualified = true;
                return Ok(Examined::Pruned);
            }
        }
        Ok(Examined::Split)
    }

    /// Split the region at the midpoint of its longest edge; `None` when
    /// every edge is already below the resolution floor.
    fn bisect(&self, region: &Region) -> Result<Option<(Region, Region)>> {
        let mut best: Option<(Rational, usize, usize, usize)> = None;
        for (si, simplex) in region.simplices.iter().enumerate() {
            for a in 0..simplex.len() {
                for b in a + 1..simplex.len() {
                    let mut d2 = Rational::zero();
                    for (x, y) in simplex[a].iter().zip(&simplex[b]) {
                        let d = x - y;
                        d2 += &d * &d;
                    }
                    let better = match &best {
                        None => true,
                        Some((cur, _, _, _)) => d2 > *cur,
                    };
                    if better {
                        best = Some((d2, si, a, b));
                    }
                }
            }
        }
        let Some((d2, si, a, b)) = best else {
            return Ok(None);
        };
        let floor = resolution_floor();
        if d2 <= &floor * &floor {
            return Ok(None);
        }
        let half = rat(1, 2);
        let mid: Vec<Rational> = region.simplices[si][a]
            .iter()
            .zip(&region.simplices[si][b])
            .map(|(x, y)| (x + y) * &half)
            .collect();
        let mut left = region.clone();
        left.simplices[si][b] = mid.clone();
        let mut right = region.clone();
        right.simplices[si][a] = mid;
        Ok(Some((left, right)))
    }
}

enum Examined {
    Witness(Witness),
    Pruned,
    Split,
}

fn track_max(cur: &mut Option<QuadAlgebraic>, candidate: &QuadAlgebraic) -> Result<()> {
    track_max_val(cur, candidate.clone())
}

fn track_max_val(cur: &mut Option<QuadAlgebraic>, candidate: QuadAlgebraic) -> Result<()> {
    match cur {
        None => *cur = Some(candidate),
        Some(v) => {
            if candidate.try_cmp(v)? == std::cmp::Ordering::Greater {
                *cur = Some(candidate);
            }
        }
    }
    Ok(())
}

/// Is `x` Pareto optimal? One feasibility query per player: that player
/// strictly better, nobody worse. All queries refuted means optimal.
pub fn check_pareto(game: &StrategicGame, x: &MixedProfile) -> Result<Verdict> {
    check_pareto_with_margin(game, x, None)
}

/// `check_pareto` with an explicit strict-improvement margin for the
/// underlying coalition searches; `None` keeps each query's default.
pub fn check_pareto_with_margin(
    game: &StrategicGame,
    x: &MixedProfile,
    eps: Option<&Rational>,
) -> Result<Verdict> {
    let m = game.player_count();
    for i in 0..m {
        let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        let mut query = CoalitionQuery::new(vec![i], others, Vec::new());
        if let Some(e) = eps {
            query = query.with_eps(e.clone());
        }
        match coalition_feasible(game, x, &query)? {
            Verdict::Yes { witness } => {
                return Ok(Verdict::No { witness, margin: None });
            }
            Verdict::Unknown { resolution } => {
                return Ok(Verdict::Unknown { resolution });
            }
            Verdict::No { .. } => {}
        }
    }
    Ok(Verdict::Yes { witness: None })
}

/// Is `x` a strong equilibrium? Every nonempty coalition is tested for a
/// deviation that makes all of its members strictly better off, smallest
/// coalitions first.
pub fn check_strong(game: &StrategicGame, x: &MixedProfile) -> Result<Verdict> {
    check_strong_with_margin(game, x, None)
}

/// `check_strong` with an explicit strict-improvement margin for the
/// underlying coalition searches; `None` keeps each query's default.
pub fn check_strong_with_margin(
    game: &StrategicGame,
    x: &MixedProfile,
    eps: Option<&Rational>,
) -> Result<Verdict> {
    let m = game.player_count();
    let mut coalitions: Vec<Vec<usize>> = Vec::new();
    for size in 1..=m {
        coalitions.extend(combinations(m, size));
    }
    for coalition in coalitions {
        let frozen: Vec<usize> = (0..m).filter(|j| !coalition.contains(j)).collect();
        let mut query = CoalitionQuery::new(coalition, Vec::new(), frozen);
        if let Some(e) = eps {
            query = query.with_eps(e.clone());
        }
        match coalition_feasible(game, x, &query)? {
            Verdict::Yes { witness } => {
                return Ok(Verdict::No { witness, margin: None });
            }
            Verdict::Unknown { resolution } => {
                return Ok(Verdict::Unknown { resolution });
            }
            Verdict::No { .. } => {}
        }
    }
    Ok(Verdict::Yes { witness: None })
}

/// The deviation game for a query: deviators keep their full action sets,
/// frozen players collapse to a single action, and an extra player picks a
/// coalition member. The extra player's payoff at a pure deviation `a`
/// (against the frozen mixture) is that member's loss `u_j(x) - u_j(x^a)`
/// plus `eps` when the member must gain strictly; every original player's
/// payoff is zero. The deviation is feasible only if the extra player can
/// be pushed weakly below zero on every choice at once.
pub fn build_auxiliary_game(game: &StrategicGame, x: &MixedProfile, query: &CoalitionQuery) -> Result<StrategicGame> {
    let m = game.player_count();
    let deviators = query.validate(m)?;
    let base = game.eval_payoff(x)?;

    let mut labels: Vec<Vec<String>> = Vec::with_capacity(m + 1);
    for p in 0..m {
        if deviators.contains(&p) {
            labels.push(game.labels(p).to_vec());
        } else {
            labels.push(vec!["⊥".to_string()]);
        }
    }
    labels.push(deviators.iter().map(|p| (p + 1).to_string()).collect());

    let counts: Vec<usize> = labels.iter().map(|l| l.len()).collect();
    let mut payoffs: Vec<Vec<Rational>> = Vec::with_capacity(counts.iter().product());
    for profile in ProfileIter::new(&counts) {
        let overrides: Vec<(usize, usize)> = deviators.iter().map(|&p| (p, profile[p])).collect();
        let deviated = game.eval_with_overrides(x, &overrides)?;
        let j = deviators[profile[m]];
        let loss = base[j].try_sub(&deviated[j])?;
        let value = if query.strict_improvers.contains(&j) {
            loss.try_add(&QuadAlgebraic::rational(query.eps.clone()))?
        } else {
            loss
        };
        let Some(value) = value.as_rational() else {
            return Err(Error::IrrationalPayoff);
        };
        let mut row = vec![Rational::zero(); m + 1];
        row[m] = value.clone();
        payoffs.push(row);
    }
    StrategicGame::new(labels, payoffs)
}
