//! Three-player gadget games.
//!
//! The H-family is a set of fixed small games used as behavioral building
//! blocks: opt-out dynamics (H1, H3, H4), forced large supports (H2), and a
//! forced irrational equilibrium (H5). The G-family encodes a bilinear
//! system: G0's mixed profiles evaluate the system's forms, and the extended
//! variants graft an H-gadget onto a fresh opt-out action per player so that
//! the game always has at least one equilibrium, while every other
//! equilibrium certifies a solution of the system.
//!
//! Conventions: player 1 picks the matrix, player 2 the row, player 3 the
//! column. The opt-out action is labeled `⊥` and always comes last.

use crate::error::{Error, Result};
use crate::exact::{rat_int, QuadAlgebraic, Rational};
use crate::game::{MixedProfile, StrategicGame};
use crate::systems::BilinearSystem;

/// Label of the opt-out action.
pub const BOT: &str = "⊥";

fn lbl(s: &str) -> String {
    s.to_string()
}

fn two_action_labels() -> Vec<Vec<String>> {
    vec![
        vec![lbl("G"), lbl(BOT)],
        vec![lbl("G"), lbl(BOT)],
        vec![lbl("G"), lbl(BOT)],
    ]
}

/// 2x2x2 game from eight payoff triples in lexicographic profile order.
fn h_table(cells: [[Rational; 3]; 8], labels: Vec<Vec<String>>) -> StrategicGame {
    let payoffs = cells.iter().map(|c| c.to_vec()).collect();
    StrategicGame::new(labels, payoffs).expect("fixed tables are well formed")
}

/// Opt-out gadget with a tunable stake. Zero-sum. For u > 0 the only
/// equilibrium is all-⊥; at u = 0 all-G appears as a second equilibrium,
/// and the all-⊥ one is a strong equilibrium while all-G is not.
pub fn build_h1(u: &Rational) -> StrategicGame {
    let u2 = u + u;
    let m = |v: i64| rat_int(v);
    h_table(
        [
            [u2, -u.clone(), -u.clone()],
            [m(1), m(-1), m(0)],
            [m(1), m(0), m(-1)],
            [m(-4), m(2), m(2)],
            [m(0), m(0), m(0)],
            [m(2), m(-3), m(1)],
            [m(2), m(1), m(-3)],
            [m(-2), m(1), m(1)],
        ],
        two_action_labels(),
    )
}

/// Cyclic pursuit game on k actions between players 2 and 3, embedded as a
/// three-player game by giving player 1 a single dummy action. Zero-sum;
/// its unique equilibrium mixes both real players uniformly.
pub fn build_h2(k: usize) -> Result<StrategicGame> {
    if k == 0 {
        return Err(Error::BadParameter("cyclic gadget needs at least one action".into()));
    }
    let side: Vec<String> = (0..k).map(|a| a.to_string()).collect();
    let labels = vec![vec![lbl("*")], side.clone(), side];
    StrategicGame::from_fn(labels, |p| {
        let (a2, a3) = (p[1], p[2]);
        let v = if a2 == a3 {
            rat_int(1)
        } else if a2 == (a3 + 1) % k {
            rat_int(-1)
        } else {
            rat_int(0)
        };
        vec![rat_int(0), v.clone(), -v]
    })
}

/// Opt-out gadget whose all-⊥ equilibrium is Pareto optimal while the
/// all-G equilibrium (present at u = 0) is Pareto dominated. Not zero-sum.
pub fn build_h3(u: &Rational) -> StrategicGame {
    let u2 = u + u;
    let m = |v: i64| rat_int(v);
    h_table(
        [
            [u2, -u.clone(), -u.clone()],
            [m(0), m(0), m(0)],
            [m(0), m(0), m(0)],
            [m(1), m(1), m(1)],
            [m(0), m(0), m(0)],
            [m(1), m(1), m(1)],
            [m(1), m(1), m(1)],
            [m(2), m(2), m(2)],
        ],
        two_action_labels(),
    )
}

/// Opt-out gadget where the all-G equilibrium (at u = 0) is both Pareto
/// optimal and strong: no payoff anywhere exceeds zero. Not zero-sum.
pub fn build_h4(u: &Rational) -> StrategicGame {
    let u2 = u + u;
    let m = |v: i64| rat_int(v);
    h_table(
        [
            [u2, -u.clone(), -u.clone()],
            [m(-3), m(-3), m(0)],
            [m(-3), m(0), m(-3)],
            [m(-2), m(-2), m(-2)],
            [m(0), m(-3), m(-3)],
            [m(-2), m(-2), m(-2)],
            [m(-2), m(-2), m(-2)],
            [m(-1), m(-1), m(-1)],
        ],
        two_action_labels(),
    )
}

/// Fixed zero-sum game whose unique equilibrium is irrational: player 1
/// plays its first action with probability 1 - 1/sqrt(6), players 2 and 3
/// with probability 3 - sqrt(6).
pub fn build_h5() -> StrategicGame {
    let m = |v: i64| rat_int(v);
    let side = vec![lbl("1"), lbl("2")];
    h_table(
        [
            [m(-4), m(2), m(2)],
            [m(-2), m(1), m(1)],
            [m(-2), m(1), m(1)],
            [m(0), m(0), m(0)],
            [m(0), m(0), m(0)],
            [m(-2), m(1), m(1)],
            [m(-2), m(1), m(1)],
            [m(-6), m(3), m(3)],
        ],
        vec![side.clone(), side.clone(), side],
    )
}

/// The unique equilibrium of [`build_h5`], exactly, over Q(sqrt(6)).
pub fn h5_equilibrium() -> MixedProfile {
    let sqrt6 = QuadAlgebraic::sqrt_of(&rat_int(6)).expect("positive radicand");
    let one = QuadAlgebraic::one();
    // p = 1 - 1/sqrt(6) = 1 - sqrt(6)/6
    let p = one
        .try_sub(&QuadAlgebraic::one().try_div(&sqrt6).unwrap())
        .unwrap();
    let q = QuadAlgebraic::from_int(3).try_sub(&sqrt6).unwrap();
    let s1 = vec![p.clone(), QuadAlgebraic::one().try_sub(&p).unwrap()];
    let s2 = vec![q.clone(), QuadAlgebraic::one().try_sub(&q).unwrap()];
    MixedProfile::new(vec![s1, s2.clone(), s2]).expect("valid distribution")
}

/// The evaluation game of a bilinear system. Player 1 chooses a form and a
/// sign, players 2 and 3 choose coordinates. With player 1 mixing sigma and
/// the others playing (x, y), half of player 1's expected payoff equals
/// sum_k (sigma(+,k) - sigma(-,k)) q_k(x, y), and players 2 and 3 each get
/// minus that. Uniform play by player 1 makes every payoff zero.
pub fn build_g0(sys: &BilinearSystem) -> StrategicGame {
    let ell = sys.matrix_count();
    let d = sys.dim();
    let mut s1 = Vec::with_capacity(2 * ell);
    for k in 1..=ell {
        s1.push(format!("(+,{k})"));
        s1.push(format!("(-,{k})"));
    }
    let side: Vec<String> = (1..=d).map(|i| i.to_string()).collect();
    let labels = vec![s1, side.clone(), side];
    StrategicGame::from_fn(labels, |p| {
        let k = p[0] / 2;
        let sign = if p[0] % 2 == 0 { 1 } else { -1 };
        let a = Rational::from_integer(sys.entry(k, p[1], p[2]).clone() * sign);
        vec![&a + &a, -&a, -a.clone()]
    })
    .expect("well-formed labels")
}

fn bot_last(game: &StrategicGame, player: usize) -> Result<usize> {
    let last = game.action_count(player) - 1;
    if game.label(player, last) != BOT {
        return Err(Error::BadParameter(format!(
            "player {} of the base game has no trailing {BOT} action",
            player + 1
        )));
    }
    Ok(last)
}

/// Appends an opt-out action to every player of a three-player base game.
/// Profiles that avoid ⊥ keep the base payoffs; profiles touching ⊥ take
/// the H-gadget's payoffs, reading every non-⊥ action as G.
pub fn extend_with_hgadget(base: &StrategicGame, h: &StrategicGame) -> Result<StrategicGame> {
    if base.player_count() != 3 {
        return Err(Error::BadPlayerCount(base.player_count()));
    }
    if h.player_count() != 3 || h.action_counts() != vec![2, 2, 2] {
        return Err(Error::BadParameter("the grafted gadget must be a 2x2x2 game".into()));
    }
    let counts = base.action_counts();
    let labels: Vec<Vec<String>> = (0..3)
        .map(|i| {
            let mut l = base.labels(i).to_vec();
            l.push(lbl(BOT));
            l
        })
        .collect();
    StrategicGame::from_fn(labels, |p| {
        if (0..3).all(|i| p[i] < counts[i]) {
            base.payoff(p).to_vec()
        } else {
            let t: Vec<usize> = (0..3).map(|i| usize::from(p[i] == counts[i])).collect();
            h.payoff(&t).to_vec()
        }
    })
}

/// Like [`extend_with_hgadget`], but every profile touching ⊥ pays zero to
/// everyone.
pub fn extend_with_simple_bot(base: &StrategicGame) -> Result<StrategicGame> {
    if base.player_count() != 3 {
        return Err(Error::BadPlayerCount(base.player_count()));
    }
    let counts = base.action_counts();
    let labels: Vec<Vec<String>> = (0..3)
        .map(|i| {
            let mut l = base.labels(i).to_vec();
            l.push(lbl(BOT));
            l
        })
        .collect();
    StrategicGame::from_fn(labels, |p| {
        if (0..3).all(|i| p[i] < counts[i]) {
            base.payoff(p).to_vec()
        } else {
            vec![rat_int(0); 3]
        }
    })
}

/// Refines the opt-out block of an H1-extended game with the cyclic gadget:
/// players 2 and 3 trade their single ⊥ action for k copies, where k is the
/// largest action count in the input game. Inside the all-⊥ block the
/// cyclic payoffs are added on top of the (-2, 1, 1) cell, which forces the
/// opt-out equilibrium to mix uniformly over all k copies. Zero-sum inputs
/// stay zero-sum.
pub fn build_g2(g1: &StrategicGame) -> Result<StrategicGame> {
    if g1.player_count() != 3 {
        return Err(Error::BadPlayerCount(g1.player_count()));
    }
    let bots: Vec<usize> = (0..3)
        .map(|i| bot_last(g1, i))
        .collect::<Result<_>>()?;
    let k = g1.action_counts().into_iter().max().unwrap();
    let h2 = build_h2(k)?;
    let mut labels = vec![g1.labels(0).to_vec()];
    for i in 1..3 {
        let mut l = g1.labels(i)[..bots[i]].to_vec();
        for a in 0..k {
            l.push(format!("({BOT},{a})"));
        }
        labels.push(l);
    }
    StrategicGame::from_fn(labels, |p| {
        let in_block = [p[0] == bots[0], p[1] >= bots[1], p[2] >= bots[2]];
        if in_block.iter().all(|&b| b) {
            let hp = h2.payoff(&[0, p[1] - bots[1], p[2] - bots[2]]);
            vec![rat_int(-2), rat_int(1) + &hp[1], rat_int(1) + &hp[2]]
        } else {
            let m: Vec<usize> = (0..3).map(|i| p[i].min(bots[i])).collect();
            g1.payoff(&m).to_vec()
        }
    })
}

/// Refines the opt-out block of an H1-extended game with the irrational
/// gadget: every player trades ⊥ for two copies, and inside the all-⊥ block
/// one sixth of the irrational gadget's payoffs is added on top of the
/// (-2, 1, 1) cell. The opt-out equilibrium is then forced to be the
/// irrational one. Zero-sum inputs stay zero-sum.
pub fn build_g5(g1: &StrategicGame) -> Result<StrategicGame> {
    if g1.player_count() != 3 {
        return Err(Error::BadPlayerCount(g1.player_count()));
    }
    let bots: Vec<usize> = (0..3)
        .map(|i| bot_last(g1, i))
        .collect::<Result<_>>()?;
    let h5 = build_h5();
    let sixth = crate::exact::rat(1, 6);
    let labels: Vec<Vec<String>> = (0..3)
        .map(|i| {
            let mut l = g1.labels(i)[..bots[i]].to_vec();
            l.push(format!("({BOT},1)"));
            l.push(format!("({BOT},2)"));
            l
        })
        .collect();
    StrategicGame::from_fn(labels, |p| {
        if (0..3).all(|i| p[i] >= bots[i]) {
            let hp = h5.payoff(&[p[0] - bots[0], p[1] - bots[1], p[2] - bots[2]]);
            vec![
                rat_int(-2) + &hp[0] * &sixth,
                rat_int(1) + &hp[1] * &sixth,
                rat_int(1) + &hp[2] * &sixth,
            ]
        } else {
            let m: Vec<usize> = (0..3).map(|i| p[i].min(bots[i])).collect();
            g1.payoff(&m).to_vec()
        }
    })
}

/// The canonical mixed profile certifying a solution (x, y) of the system:
/// player 1 uniform over its 2*ell sign-form actions, players 2 and 3 play
/// x and y, and any extra opt-out actions of the target game get no mass.
pub fn lift_solution(
    sys: &BilinearSystem,
    x: &[QuadAlgebraic],
    y: &[QuadAlgebraic],
    target: &StrategicGame,
) -> Result<MixedProfile> {
    if target.player_count() != 3 {
        return Err(Error::BadPlayerCount(target.player_count()));
    }
    let ell2 = 2 * sys.matrix_count();
    let d = sys.dim();
    if x.len() != d || y.len() != d {
        return Err(Error::ShapeMismatch);
    }
    let counts = target.action_counts();
    if counts[0] < ell2 || counts[1] < d || counts[2] < d {
        return Err(Error::ShapeMismatch);
    }
    let mut s1 = vec![QuadAlgebraic::rational(crate::exact::rat(1, ell2 as i64)); ell2];
    s1.resize(counts[0], QuadAlgebraic::zero());
    let mut s2 = x.to_vec();
    s2.resize(counts[1], QuadAlgebraic::zero());
    let mut s3 = y.to_vec();
    s3.resize(counts[2], QuadAlgebraic::zero());
    MixedProfile::new(vec![s1, s2, s3])
}

/// Result of projecting a mixed profile back onto the simplex pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Projection {
    /// Players 2 and 3 put positive mass on the coordinate actions; the
    /// vectors are their conditional distributions there.
    Vectors { x: Vec<QuadAlgebraic>, y: Vec<QuadAlgebraic> },
    /// Player 2 or 3 plays only opt-out actions, so no point is recovered.
    NoMass,
}

/// Restricts players 2 and 3 to their first `dim` actions and renormalizes.
pub fn project_profile(dim: usize, profile: &MixedProfile) -> Result<Projection> {
    if profile.player_count() != 3 {
        return Err(Error::BadPlayerCount(profile.player_count()));
    }
    let mut vecs = Vec::with_capacity(2);
    for player in [1, 2] {
        let s = profile.strategy(player);
        if s.len() < dim {
            return Err(Error::ShapeMismatch);
        }
        let mut mass = QuadAlgebraic::zero();
        for v in &s[..dim] {
            mass = mass.try_add(v)?;
        }
        if mass.is_zero() {
            return Ok(Projection::NoMass);
        }
        let scaled: Result<Vec<QuadAlgebraic>> =
            s[..dim].iter().map(|v| v.try_div(&mass)).collect();
        vecs.push(scaled?);
    }
    let y = vecs.pop().unwrap();
    let x = vecs.pop().unwrap();
    Ok(Projection::Vectors { x, y })
}
