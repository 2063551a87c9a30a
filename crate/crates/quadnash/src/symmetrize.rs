//! Symmetrization of the three-player evaluation games.
//!
//! A positive shift first makes all payoffs positive: the sum variant
//! replaces the column players' payoffs with the negated matrix player's
//! payoff before shifting, the prime variant shifts everyone as they are.
//! The role-symmetric game then puts the three action sets side by side:
//! every player can act as any role, profiles whose actions cover the three
//! blocks pay the shifted game through the induced role assignment, and
//! everything else pays zero. Opt-out extensions add one shared ⊥ action
//! with flat payoffs keyed to how many players opted out.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat_int, QuadAlgebraic, Rational};
use crate::gadgets::BOT;
use crate::game::{MixedProfile, StrategicGame};
use crate::systems::BilinearSystem;

/// Which positive shift produced a game.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShiftVariant {
    /// Column players receive the negated matrix-player payoff, plus M.
    RoleSum,
    /// Every player keeps their own payoff, plus M.
    RolePrime,
}

/// Opt-out extensions of the role-symmetric games.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SymExtension {
    /// One ⊥ pays everyone K, more pay everyone K+1. Requires the sum shift.
    D1,
    /// One ⊥ pays the opter K and the rest K-3; two pay K-2; three pay K-1.
    /// Requires the sum shift.
    D4,
    /// One ⊥ pays everyone M, two M+1, three M+2. Requires the prime shift.
    DPrime1,
}

/// Bookkeeping for a symmetrization run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetrizationInfo {
    /// Smallest positive integer strictly bounding |u1| over pure profiles.
    pub m: BigInt,
    /// The target symmetric equilibrium payoff, 2M/9.
    pub k: Rational,
    pub variant: ShiftVariant,
}

impl SymmetrizationInfo {
    pub fn m_rational(&self) -> Rational {
        Rational::from_integer(self.m.clone())
    }
}

fn payoff_bound(game: &StrategicGame) -> BigInt {
    // M = floor(max |u1|) + 1 bounds strictly whether or not the max is
    // attained at an integer
    let mut best = Rational::zero();
    for p in game.profiles() {
        let v = game.payoff(&p)[0].abs();
        if v > best {
            best = v;
        }
    }
    best.numer().div_floor(best.denom()) + 1
}

fn info_for(game: &StrategicGame, variant: ShiftVariant) -> SymmetrizationInfo {
    let m = payoff_bound(game);
    let k = Rational::new(&m * 2, 9.into());
    SymmetrizationInfo { m, k, variant }
}

/// Positive sum-variant shift: (u1 + M, -u1 + M, -u1 + M) per cell.
pub fn build_gplus(g0: &StrategicGame) -> Result<(StrategicGame, SymmetrizationInfo)> {
    if g0.player_count() != 3 {
        return Err(Error::BadPlayerCount(g0.player_count()));
    }
    let info = info_for(g0, ShiftVariant::RoleSum);
    let m = Rational::from_integer(info.m.clone());
    let labels: Vec<Vec<String>> = (0..3).map(|i| g0.labels(i).to_vec()).collect();
    let game = StrategicGame::from_fn(labels, |p| {
        let u1 = &g0.payoff(p)[0];
        vec![u1 + &m, &m - u1, &m - u1]
    })?;
    Ok((game, info))
}

/// Positive prime-variant shift: every payoff moves up by M.
pub fn build_gplus_prime(g0: &StrategicGame) -> Result<(StrategicGame, SymmetrizationInfo)> {
    if g0.player_count() != 3 {
        return Err(Error::BadPlayerCount(g0.player_count()));
    }
    let info = info_for(g0, ShiftVariant::RolePrime);
    let m = Rational::from_integer(info.m.clone());
    let labels: Vec<Vec<String>> = (0..3).map(|i| g0.labels(i).to_vec()).collect();
    let game = StrategicGame::from_fn(labels, |p| {
        g0.payoff(p).iter().map(|u| u + &m).collect()
    })?;
    Ok((game, info))
}

/// Role-symmetric form on the disjoint union of the three action sets.
/// When the three chosen actions cover three distinct blocks, each player
/// is paid as the role their block represents; otherwise everyone gets 0.
pub fn build_d0(shifted: &StrategicGame) -> Result<StrategicGame> {
    if shifted.player_count() != 3 {
        return Err(Error::BadPlayerCount(shifted.player_count()));
    }
    let counts = shifted.action_counts();
    let mut labels_union = Vec::with_capacity(counts.iter().sum());
    let mut block_of = Vec::new();
    let mut within = Vec::new();
    for b in 0..3 {
        for (w, l) in shifted.labels(b).iter().enumerate() {
            labels_union.push(format!("{}:{l}", b + 1));
            block_of.push(b);
            within.push(w);
        }
    }
    let labels = vec![labels_union.clone(), labels_union.clone(), labels_union];
    StrategicGame::from_fn(labels, |p| {
        let blocks = [block_of[p[0]], block_of[p[1]], block_of[p[2]]];
        let mut seen = [false; 3];
        for &b in &blocks {
            seen[b] = true;
        }
        if seen != [true; 3] {
            return vec![rat_int(0); 3];
        }
        // actions cover all three blocks: arrange them by role
        let mut arranged = [0usize; 3];
        for i in 0..3 {
            arranged[blocks[i]] = within[p[i]];
        }
        let cell = shifted.payoff(&arranged);
        (0..3).map(|i| cell[blocks[i]].clone()).collect()
    })
}

/// Adds the shared opt-out action to a role-symmetric game. The variant
/// must match the shift that produced the source.
pub fn extend_symmetric(
    d0: &StrategicGame,
    info: &SymmetrizationInfo,
    variant: SymExtension,
) -> Result<StrategicGame> {
    if d0.player_count() != 3 {
        return Err(Error::BadPlayerCount(d0.player_count()));
    }
    let wanted = match variant {
        SymExtension::D1 | SymExtension::D4 => ShiftVariant::RoleSum,
        SymExtension::DPrime1 => ShiftVariant::RolePrime,
    };
    if info.variant != wanted {
        return Err(Error::BadVariantSource);
    }
    let base = d0.action_count(0);
    let labels: Vec<Vec<String>> = (0..3)
        .map(|i| {
            let mut l = d0.labels(i).to_vec();
            l.push(BOT.to_string());
            l
        })
        .collect();
    let k = &info.k;
    let m = info.m_rational();
    StrategicGame::from_fn(labels, |p| {
        let opted: Vec<bool> = p.iter().map(|&a| a == base).collect();
        let count = opted.iter().filter(|&&b| b).count();
        if count == 0 {
            return d0.payoff(p).to_vec();
        }
        match variant {
            SymExtension::D1 => {
                let v = if count == 1 { k.clone() } else { k + Rational::one() };
                vec![v; 3]
            }
            SymExtension::D4 => match count {
                1 => opted
                    .iter()
                    .map(|&b| if b { k.clone() } else { k - rat_int(3) })
                    .collect(),
                2 => vec![k - rat_int(2); 3],
                _ => vec![k - rat_int(1); 3],
            },
            SymExtension::DPrime1 => {
                vec![&m + rat_int(count as i64 - 1); 3]
            }
        }
    })
}

fn require_diagonal_solution(sys: &BilinearSystem, x: &[QuadAlgebraic]) -> Result<()> {
    let vals = sys.eval(x, x)?;
    for (k, v) in vals.iter().enumerate() {
        if !v.is_zero() {
            return Err(Error::NotASolution(k + 1, v.to_string()));
        }
    }
    Ok(())
}

fn block_sizes(sys: &BilinearSystem) -> (usize, usize) {
    (2 * sys.matrix_count(), sys.dim())
}

/// The symmetric certificate profile: every player mixes one third uniform
/// over the sign-form block and one third of the solution on each
/// coordinate block. Extra (opt-out) actions of the target get no mass.
pub fn lift_symmetric(
    sys: &BilinearSystem,
    x: &[QuadAlgebraic],
    target: &StrategicGame,
) -> Result<MixedProfile> {
    if target.player_count() != 3 {
        return Err(Error::BadPlayerCount(target.player_count()));
    }
    if x.len() != sys.dim() {
        return Err(Error::ShapeMismatch);
    }
    require_diagonal_solution(sys, x)?;
    let (ell2, d) = block_sizes(sys);
    let base = ell2 + 2 * d;
    let count = target.action_count(0);
    if count < base {
        return Err(Error::ShapeMismatch);
    }
    let third = QuadAlgebraic::rational(crate::exact::rat(1, 3));
    let mut y = Vec::with_capacity(count);
    let unif = QuadAlgebraic::rational(crate::exact::rat(1, 3 * ell2 as i64));
    y.extend(std::iter::repeat_n(unif, ell2));
    for _ in 0..2 {
        for xi in x {
            y.push(xi.try_mul(&third)?);
        }
    }
    y.resize(count, QuadAlgebraic::zero());
    MixedProfile::new(vec![y.clone(), y.clone(), y])
}

/// The nonsymmetric certificate profile for the prime-variant games:
/// player 1 plays uniform inside the sign-form block, players 2 and 3 play
/// the solution inside their own coordinate blocks.
pub fn lift_role_assigned(
    sys: &BilinearSystem,
    x: &[QuadAlgebraic],
    target: &StrategicGame,
) -> Result<MixedProfile> {
    if target.player_count() != 3 {
        return Err(Error::BadPlayerCount(target.player_count()));
    }
    if x.len() != sys.dim() {
        return Err(Error::ShapeMismatch);
    }
    require_diagonal_solution(sys, x)?;
    let (ell2, d) = block_sizes(sys);
    let base = ell2 + 2 * d;
    let count = target.action_count(0);
    if count < base {
        return Err(Error::ShapeMismatch);
    }
    let mut s1 = vec![QuadAlgebraic::rational(crate::exact::rat(1, ell2 as i64)); ell2];
    s1.resize(count, QuadAlgebraic::zero());
    let mut s2 = vec![QuadAlgebraic::zero(); ell2];
    s2.extend_from_slice(x);
    s2.resize(count, QuadAlgebraic::zero());
    let mut s3 = vec![QuadAlgebraic::zero(); ell2 + d];
    s3.extend_from_slice(x);
    s3.resize(count, QuadAlgebraic::zero());
    MixedProfile::new(vec![s1, s2, s3])
}

/// Per-block decomposition of one player's strategy in a role-symmetric
/// game: block masses, conditional distributions (absent where a block has
/// no mass), and the opt-out mass if the game has a ⊥ action.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricProjection {
    pub masses: Vec<QuadAlgebraic>,
    pub conditionals: Vec<Option<Vec<QuadAlgebraic>>>,
    pub bot_mass: QuadAlgebraic,
}

/// Splits a strategy of a role-symmetric game along its block-prefixed
/// labels.
pub fn project_symmetric(
    d_game: &StrategicGame,
    y: &[QuadAlgebraic],
) -> Result<SymmetricProjection> {
    if y.len() != d_game.action_count(0) {
        return Err(Error::ShapeMismatch);
    }
    let mut parts: Vec<Vec<QuadAlgebraic>> = vec![Vec::new(), Vec::new(), Vec::new()];
    let mut bot_mass = QuadAlgebraic::zero();
    for (idx, label) in d_game.labels(0).iter().enumerate() {
        if label == BOT {
            bot_mass = bot_mass.try_add(&y[idx])?;
            continue;
        }
        let block: usize = label
            .split(':')
            .next()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&b| (1..=3).contains(&b))
            .ok_or_else(|| {
                Error::BadParameter(format!("label `{label}` carries no block prefix"))
            })?;
        parts[block - 1].push(y[idx].clone());
    }
    let mut masses = Vec::with_capacity(3);
    let mut conditionals = Vec::with_capacity(3);
    for part in &parts {
        let mut mass = QuadAlgebraic::zero();
        for v in part {
            mass = mass.try_add(v)?;
        }
        if mass.is_zero() {
            conditionals.push(None);
        } else {
            let cond: Result<Vec<QuadAlgebraic>> =
                part.iter().map(|v| v.try_div(&mass)).collect();
            conditionals.push(Some(cond?));
        }
        masses.push(mass);
    }
    Ok(SymmetricProjection { masses, conditionals, bot_mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::gadgets::build_g0;
    use crate::systems::{QuadraticSystem, Term};

    fn q(r: Rational) -> QuadAlgebraic {
        QuadAlgebraic::rational(r)
    }

    fn pure_profile_is_equilibrium(g: &StrategicGame, p: &[usize]) -> bool {
        let base = g.payoff(p).to_vec();
        for i in 0..g.player_count() {
            for a in 0..g.action_count(i) {
                if a == p[i] {
                    continue;
                }
                let mut alt = p.to_vec();
                alt[i] = a;
                if g.payoff(&alt)[i] > base[i] {
                    return false;
                }
            }
        }
        true
    }

    /// x1^2 - x1 = 0 bilinearized: u1 values land in {-2, 0, 2}.
    fn demo() -> (BilinearSystem, StrategicGame) {
        let sys = QuadraticSystem::new(1, vec![vec![Term::new(1, 1, 1), Term::new(-1, 0, 1)]])
            .unwrap();
        let b = sys.bilinearize_homogenize();
        let g0 = build_g0(&b);
        (b, g0)
    }

    #[test]
    fn shift_constants_match_the_worked_example() {
        let (_, g0) = demo();
        let (gp, info) = build_gplus(&g0).unwrap();
        assert_eq!(info.m, BigInt::from(3));
        assert_eq!(info.k, rat(2, 3));
        // cell with u1 = 2 becomes (5, 1, 1)
        let cell = g0
            .profiles()
            .find(|p| g0.payoff(p)[0] == rat_int(2))
            .unwrap();
        assert_eq!(gp.payoff(&cell), &[rat_int(5), rat_int(1), rat_int(1)]);
        // total payoff identity: sum = 3M - u1
        for p in gp.profiles() {
            let total: Rational = gp.payoff(&p).iter().sum();
            assert_eq!(total, rat_int(9) - &g0.payoff(&p)[0]);
            assert!(gp.payoff(&p).iter().all(|v| v.is_positive()));
        }
    }

    #[test]
    fn prime_shift_raises_everyone() {
        let (_, g0) = demo();
        let (gpp, info) = build_gplus_prime(&g0).unwrap();
        assert_eq!(info.variant, ShiftVariant::RolePrime);
        let cell = g0
            .profiles()
            .find(|p| g0.payoff(p) == [rat_int(2), rat_int(-1), rat_int(-1)])
            .unwrap();
        assert_eq!(gpp.payoff(&cell), &[rat_int(5), rat_int(2), rat_int(2)]);
        let m = rat_int(3);
        for p in gpp.profiles() {
            assert!(gpp.payoff(&p).iter().all(|v| v.is_positive()));
            let total: Rational = gpp.payoff(&p).iter().sum();
            assert!(total <= &m * rat_int(3));
        }
    }

    #[test]
    fn shifts_preserve_best_reply_comparisons() {
        let (_, g0) = demo();
        let (gp, _) = build_gplus(&g0).unwrap();
        for p in g0.profiles() {
            for i in 0..3 {
                for a in 0..g0.action_count(i) {
                    let mut alt = p.clone();
                    alt[i] = a;
                    let d0 = &g0.payoff(&alt)[i] - &g0.payoff(&p)[i];
                    let dp = &gp.payoff(&alt)[i] - &gp.payoff(&p)[i];
                    assert_eq!(d0 > Rational::zero(), dp > Rational::zero());
                    assert_eq!(d0.is_zero(), dp.is_zero());
                }
            }
        }
    }

    #[test]
    fn role_symmetric_game_is_symmetric_and_block_structured() {
        let (_, g0) = demo();
        let (gp, _) = build_gplus(&g0).unwrap();
        let d0 = build_d0(&gp).unwrap();
        // blocks: 4 sign-form actions + 2 + 2 coordinates
        assert_eq!(d0.action_counts(), vec![8, 8, 8]);
        assert_eq!(d0.label(0, 0), "1:(+,1)");
        assert_eq!(d0.label(0, 4), "2:1");
        assert_eq!(d0.label(0, 6), "3:1");
        assert!(d0.is_symmetric_game());
        // identity arrangement pays the shifted game in original roles
        assert_eq!(d0.payoff(&[0, 4, 6]), gp.payoff(&[0, 0, 0]));
        // swapped roles pay through the permutation: player 1 acts as the
        // row player, player 2 as the matrix player
        let swapped = d0.payoff(&[4, 0, 6]);
        let cell = gp.payoff(&[0, 0, 0]);
        assert_eq!(swapped[0], cell[1]);
        assert_eq!(swapped[1], cell[0]);
        assert_eq!(swapped[2], cell[2]);
        // block collisions pay zero
        assert_eq!(d0.payoff(&[0, 1, 6]), &[rat_int(0), rat_int(0), rat_int(0)]);
        assert_eq!(d0.payoff(&[5, 4, 6]), vec![rat_int(0); 3].as_slice());
    }

    #[test]
    fn opt_out_extension_tables_are_pinned() {
        let (_, g0) = demo();
        let (gp, info) = build_gplus(&g0).unwrap();
        let d0 = build_d0(&gp).unwrap();
        let k = info.k.clone();
        let bot = d0.action_count(0); // index of ⊥ after extension

        let d1 = extend_symmetric(&d0, &info, SymExtension::D1).unwrap();
        assert!(d1.is_symmetric_game());
        assert_eq!(d1.payoff(&[bot, 0, 4]), vec![k.clone(); 3].as_slice());
        assert_eq!(d1.payoff(&[bot, bot, 4]), vec![&k + rat_int(1); 3].as_slice());
        assert_eq!(d1.payoff(&[bot, bot, bot]), vec![&k + rat_int(1); 3].as_slice());
        assert_eq!(d1.payoff(&[0, 4, 6]), gp.payoff(&[0, 0, 0]));
        assert!(pure_profile_is_equilibrium(&d1, &[bot, bot, bot]));

        let d4 = extend_symmetric(&d0, &info, SymExtension::D4).unwrap();
        assert!(d4.is_symmetric_game());
        assert_eq!(
            d4.payoff(&[bot, 0, 4]),
            &[k.clone(), &k - rat_int(3), &k - rat_int(3)]
        );
        assert_eq!(
            d4.payoff(&[0, bot, 4]),
            &[&k - rat_int(3), k.clone(), &k - rat_int(3)]
        );
        assert_eq!(d4.payoff(&[bot, bot, 4]), vec![&k - rat_int(2); 3].as_slice());
        assert_eq!(d4.payoff(&[bot, bot, bot]), vec![&k - rat_int(1); 3].as_slice());
        assert!(pure_profile_is_equilibrium(&d4, &[bot, bot, bot]));

        // variant mismatch is rejected
        assert!(matches!(
            extend_symmetric(&d0, &info, SymExtension::DPrime1),
            Err(Error::BadVariantSource)
        ));
    }

    #[test]
    fn prime_extension_pays_in_m() {
        let (_, g0) = demo();
        let (gpp, info) = build_gplus_prime(&g0).unwrap();
        let dp0 = build_d0(&gpp).unwrap();
        let dp1 = extend_symmetric(&dp0, &info, SymExtension::DPrime1).unwrap();
        assert!(dp1.is_symmetric_game());
        let m = info.m_rational();
        let bot = dp0.action_count(0);
        assert_eq!(dp1.payoff(&[bot, 0, 4]), vec![m.clone(); 3].as_slice());
        assert_eq!(dp1.payoff(&[bot, 4, bot]), vec![&m + rat_int(1); 3].as_slice());
        assert_eq!(dp1.payoff(&[bot, bot, bot]), vec![&m + rat_int(2); 3].as_slice());
        assert!(pure_profile_is_equilibrium(&dp1, &[bot, bot, bot]));
        assert!(matches!(
            extend_symmetric(&dp0, &info, SymExtension::D1),
            Err(Error::BadVariantSource)
        ));
    }

    #[test]
    fn symmetric_lift_pays_exactly_k() {
        let (b, g0) = demo();
        let (gp, info) = build_gplus(&g0).unwrap();
        let d0 = build_d0(&gp).unwrap();
        let x = vec![q(rat_int(1)), q(rat_int(0))];
        let lifted = lift_symmetric(&b, &x, &d0).unwrap();
        assert!(lifted.is_symmetric());
        let pay = d0.eval_payoff(&lifted).unwrap();
        let k = q(info.k.clone());
        assert_eq!(pay, vec![k.clone(), k.clone(), k]);
        // block masses are exactly one third
        let proj = project_symmetric(&d0, lifted.strategy(0)).unwrap();
        assert_eq!(proj.masses, vec![q(rat(1, 3)); 3]);
        assert_eq!(proj.bot_mass, QuadAlgebraic::zero());
        assert_eq!(proj.conditionals[0], Some(vec![q(rat(1, 4)); 4]));
        assert_eq!(proj.conditionals[1], Some(x.clone()));
        assert_eq!(proj.conditionals[2], Some(x.clone()));
        // lifting a non-solution is refused
        let bad = vec![q(rat(1, 2)), q(rat(1, 2))];
        assert!(matches!(
            lift_symmetric(&b, &bad, &d0),
            Err(Error::NotASolution(_, _))
        ));
        // in the opt-out extension the lift still pays K and is an NE-shaped
        // profile with no ⊥ mass
        let d1 = extend_symmetric(&d0, &info, SymExtension::D1).unwrap();
        let lifted1 = lift_symmetric(&b, &x, &d1).unwrap();
        let pay = d1.eval_payoff(&lifted1).unwrap();
        assert_eq!(pay, vec![q(info.k.clone()); 3]);
    }

    #[test]
    fn role_assigned_lift_is_nonsymmetric_and_pays_m() {
        let (b, g0) = demo();
        let (gpp, info) = build_gplus_prime(&g0).unwrap();
        let dp0 = build_d0(&gpp).unwrap();
        let dp1 = extend_symmetric(&dp0, &info, SymExtension::DPrime1).unwrap();
        let x = vec![q(rat_int(0)), q(rat_int(1))];
        let lifted = lift_role_assigned(&b, &x, &dp1).unwrap();
        assert!(!lifted.is_symmetric());
        let pay = dp1.eval_payoff(&lifted).unwrap();
        let m = q(info.m_rational());
        assert_eq!(pay, vec![m.clone(), m.clone(), m]);
    }

    #[test]
    fn product_of_block_masses_is_maximized_at_uniform() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let bound = rat(1, 27);
        for _ in 0..200 {
            let raw: Vec<i64> = (0..3).map(|_| rng.gen_range(0..12)).collect();
            let total: i64 = raw.iter().sum::<i64>().max(1);
            let p: Vec<Rational> = raw.iter().map(|&c| rat(c, total)).collect();
            let prod = &(&p[0] * &p[1]) * &p[2];
            assert!(prod <= bound);
            if p.iter().all(|v| *v == rat(1, 3)) {
                assert_eq!(prod, bound);
            }
        }
    }

    #[test]
    fn projection_flags_empty_blocks() {
        let (_, g0) = demo();
        let (gp, _) = build_gplus(&g0).unwrap();
        let d0 = build_d0(&gp).unwrap();
        // all mass on the sign-form block
        let mut y = vec![QuadAlgebraic::zero(); 8];
        y[0] = q(rat(1, 2));
        y[1] = q(rat(1, 2));
        let proj = project_symmetric(&d0, &y).unwrap();
        assert_eq!(proj.masses[0], QuadAlgebraic::one());
        assert!(proj.masses[1].is_zero());
        assert!(proj.conditionals[1].is_none());
        assert!(proj.conditionals[2].is_none());
    }
}
