//! Equilibrium enumeration for three-player games by support pattern.
//!
//! Every support pattern within the size limit is dispatched to the
//! cheapest solver that is exact for its shape:
//!
//! * at most two mixing players: rational linear algebra (any support
//!   sizes), including whole solution components via nullspaces;
//! * three mixing players, all supports of size two: symbolic elimination
//!   down to one quadratic, solutions in a single quadratic extension;
//! * three mixing players, some support larger: damped Newton iteration,
//!   results flagged as numeric.
//!
//! Positive-dimensional components are reported through one interior
//! representative with `isolated: false`. When the equation system
//! degenerates into a whole curve or plane of indifference, the deviation
//! gains of the unused actions are adjoined as extra equations and their
//! pairwise cuts searched exactly, so equilibria pinned only by ties (often
//! irrational) are still found. The residue the exact paths can miss is a
//! component of three or more free dimensions whose equilibria all avoid
//! the sampling ladders.

use super::linsolve::solve_affine;
use super::mpoly::MPoly;
use super::numeric;
use super::support::{
    midpoint, refine, solve2, solve_support2, symmetric_ladder, unit_ladder, Coord, IntervalAcc,
    IntervalOutcome,
};
use crate::error::{Error, Result};
use crate::exact::{QuadAlgebraic, Rational};
use crate::game::{MixedProfile, StrategicGame};
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::HashSet;

#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    /// Largest support size considered per player.
    pub max_support: usize,
    /// Upper bound on the number of support patterns; exceeding it is an
    /// error rather than a silent truncation.
    pub budget: u128,
    /// Residual tolerance for the numeric path.
    pub tolerance: f64,
    /// Seed for the numeric path's start points. Exact paths ignore it.
    pub seed: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            max_support: 2,
            budget: 200_000,
            tolerance: 1e-12,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Numeric,
}

#[derive(Debug, Clone)]
pub struct FoundEquilibrium {
    pub profile: MixedProfile,
    pub exactness: Exactness,
    /// True when the solution is locally unique within its support
    /// pattern; false marks a representative of a larger component.
    pub isolated: bool,
}

/// Enumerate Nash equilibria by support pattern.
pub fn find_equilibria(game: &StrategicGame, options: &EnumerationOptions) -> Result<Vec<FoundEquilibrium>> {
    let m = game.player_count();
    if m != 3 {
        return Err(Error::BadPlayerCount(m));
    }
    let counts = game.action_counts();
    let per_player: Vec<Vec<Vec<usize>>> = (0..3)
        .map(|p| subsets_by_size(counts[p], options.max_support.min(counts[p]).max(1)))
        .collect();
    let total = per_player
        .iter()
        .map(|s| s.len() as u128)
        .try_fold(1u128, |acc, n| acc.checked_mul(n))
        .ok_or(Error::BudgetExceeded(u128::MAX))?;
    if total > options.budget {
        return Err(Error::BudgetExceeded(total));
    }

    let mut found: Vec<FoundEquilibrium> = Vec::new();
    let mut pattern_idx = 0u64;
    for s0 in &per_player[0] {
        for s1 in &per_player[1] {
            for s2 in &per_player[2] {
                let supports = [s0.clone(), s1.clone(), s2.clone()];
                let idx = pattern_idx;
                pattern_idx += 1;
                if !pattern_viable(game, &supports) {
                    continue;
                }
                let mixers = supports.iter().filter(|s| s.len() >= 2).count();
                if mixers <= 2 {
                    affine_pattern(game, &supports, &mut found)?;
                } else if supports.iter().all(|s| s.len() == 2) {
                    support2_pattern(game, &supports, &mut found)?;
                } else {
                    numeric::newton_pattern(game, &supports, options, idx, &mut found)?;
                }
            }
        }
    }
    Ok(found)
}

/// Exact kill test run before the per-pattern solvers. Payoffs are
/// multilinear, so over the closed region spanned by the other players'
/// supports each payoff difference attains its extrema at vertices, that
/// is at pure profiles. A mixing player must tie all support actions
/// somewhere in that region, which is impossible when some difference
/// against the first support action is strictly one-signed at every
/// vertex. Likewise an outside action that strictly beats the support at
/// every vertex rules the whole pattern out. Equilibria of smaller
/// support are untouched: they show up under their own pattern.
fn pattern_viable(game: &StrategicGame, supports: &[Vec<usize>; 3]) -> bool {
    let counts = game.action_counts();
    let mut prof = [0usize; 3];
    for p in 0..3 {
        let q = (p + 1) % 3;
        let r = (p + 2) % 3;
        let anchor = supports[p][0];
        for b in 0..counts[p] {
            if b == anchor {
                continue;
            }
            // seen_le: payoff(b) <= payoff(anchor) at some vertex, seen_ge likewise
            let mut seen_le = false;
            let mut seen_ge = false;
            for &aq in &supports[q] {
                for &ar in &supports[r] {
                    prof[q] = aq;
                    prof[r] = ar;
                    prof[p] = anchor;
                    let at_anchor = &game.payoff(&prof)[p];
                    prof[p] = b;
                    match game.payoff(&prof)[p].cmp(at_anchor) {
                        Ordering::Less => seen_le = true,
                        Ordering::Greater => seen_ge = true,
                        Ordering::Equal => {
                            seen_le = true;
                            seen_ge = true;
                        }
                    }
                    if seen_le && seen_ge {
                        break;
                    }
                }
                if seen_le && seen_ge {
                    break;
                }
            }
            if supports[p].contains(&b) {
                if !(seen_le && seen_ge) {
                    return false;
                }
            } else if !seen_le {
                return false;
            }
        }
    }
    true
}

/// All nonempty subsets of `0..n` up to `limit` elements, ordered by size
/// then lexicographically.
fn subsets_by_size(n: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=limit.min(n) {
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
    }
    out
}

/// Strategy weight vectors (full length, zeros off support) for a mixer
/// block assignment, with pure players at their single action.
fn weights_from_blocks(
    counts: &[usize],
    supports: &[Vec<usize>; 3],
    blocks: &[Option<Vec<QuadAlgebraic>>; 3],
) -> Vec<Vec<QuadAlgebraic>> {
    (0..3)
        .map(|p| {
            let mut w = vec![QuadAlgebraic::zero(); counts[p]];
            match &blocks[p] {
                Some(b) => {
                    for (i, &a) in supports[p].iter().enumerate() {
                        w[a] = b[i].clone();
                    }
                }
                None => w[supports[p][0]] = QuadAlgebraic::one(),
            }
            w
        })
        .collect()
}

/// All off-support deviation gains at the given weights: one value per
/// (player, unused action), each required to be <= 0 at an equilibrium.
fn deviation_gains(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    weights: &[Vec<QuadAlgebraic>],
) -> Result<Vec<QuadAlgebraic>> {
    let base = game.eval_strategy_vectors(weights)?;
    let mut gains = Vec::new();
    let mut scratch = weights.to_vec();
    for p in 0..3 {
        for a in 0..game.action_count(p) {
            if supports[p].contains(&a) {
                continue;
            }
            let saved = std::mem::replace(&mut scratch[p], unit_vector(game.action_count(p), a));
            let dev = game.eval_strategy_vectors(&scratch)?;
            scratch[p] = saved;
            gains.push(dev[p].try_sub(&base[p])?);
        }
    }
    Ok(gains)
}

fn unit_vector(len: usize, at: usize) -> Vec<QuadAlgebraic> {
    let mut v = vec![QuadAlgebraic::zero(); len];
    v[at] = QuadAlgebraic::one();
    v
}

/// Verify a fully determined assignment and record it.
fn accept(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    blocks: &[Option<Vec<QuadAlgebraic>>; 3],
    isolated: bool,
    found: &mut Vec<FoundEquilibrium>,
) -> Result<bool> {
    // strict interiority on every support coordinate
    for b in blocks.iter().flatten() {
        for v in b {
            if v.sign() <= 0 {
                return Ok(false);
            }
        }
    }
    let weights = weights_from_blocks(&game.action_counts(), supports, blocks);
    let profile = match MixedProfile::new(weights) {
        Ok(p) => p,
        Err(_) => return Ok(false),
    };
    if !super::check_ne(game, &profile)?.is_yes() {
        return Ok(false);
    }
    if found.iter().any(|f| f.profile == profile) {
        return Ok(false);
    }
    found.push(FoundEquilibrium {
        profile,
        exactness: Exactness::Exact,
        isolated,
    });
    Ok(true)
}

// ---------------------------------------------------------------------
// Patterns with at most two mixing players: rational affine solving.
// ---------------------------------------------------------------------

struct MixerBlock {
    player: usize,
    particular: Vec<Rational>,
    dirs: Vec<Vec<Rational>>,
}

fn affine_pattern(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    found: &mut Vec<FoundEquilibrium>,
) -> Result<()> {
    let mixers: Vec<usize> = (0..3).filter(|&p| supports[p].len() >= 2).collect();
    if mixers.is_empty() {
        let actions: Vec<usize> = supports.iter().map(|s| s[0]).collect();
        let profile = MixedProfile::pure(game, &actions)?;
        if super::check_ne(game, &profile)?.is_yes() && !found.iter().any(|f| f.profile == profile) {
            found.push(FoundEquilibrium {
                profile,
                exactness: Exactness::Exact,
                isolated: true,
            });
        }
        return Ok(());
    }

    let mut blocks: Vec<MixerBlock> = Vec::new();
    if mixers.len() == 1 {
        let p = mixers[0];
        // With everyone else pure, p's payoffs per support action are
        // constants; indifference either holds identically or fails.
        let mut profile: Vec<usize> = supports.iter().map(|s| s[0]).collect();
        profile[p] = supports[p][0];
        let first = game.payoff(&profile)[p].clone();
        for &a in &supports[p][1..] {
            profile[p] = a;
            if game.payoff(&profile)[p] != first {
                return Ok(());
            }
        }
        let s = supports[p].len();
        let uniform = crate::exact::rat(1, s as i64);
        let mut dirs = Vec::new();
        for i in 1..s {
            let mut d = vec![Rational::zero(); s];
            d[0] = -Rational::from_integer(1.into());
            d[i] = Rational::from_integer(1.into());
            dirs.push(d);
        }
        blocks.push(MixerBlock {
            player: p,
            particular: vec![uniform; s],
            dirs,
        });
    } else {
        // Each mixer's indifference pins down the other mixer's block.
        let (p, q) = (mixers[0], mixers[1]);
        let r = 3 - p - q;
        let pure_r = supports[r][0];
        for (owner, other) in [(q, p), (p, q)] {
            // `other`'s indifference constrains `owner`'s block
            let so = &supports[owner];
            let st = &supports[other];
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            let mut rhs: Vec<Rational> = Vec::new();
            let mut prof = [0usize; 3];
            prof[r] = pure_r;
            for i in 1..st.len() {
                let mut row = Vec::with_capacity(so.len());
                for &b in so {
                    prof[owner] = b;
                    prof[other] = st[i];
                    let hi = game.payoff(&prof)[other].clone();
                    prof[other] = st[0];
                    let lo = game.payoff(&prof)[other].clone();
                    row.push(hi - lo);
                }
                rows.push(row);
                rhs.push(Rational::zero());
            }
            rows.push(vec![Rational::from_integer(1.into()); so.len()]);
            rhs.push(Rational::from_integer(1.into()));
            let Some(sol) = solve_affine(&rows, &rhs) else {
                return Ok(());
            };
            blocks.push(MixerBlock {
                player: owner,
                particular: sol.particular,
                dirs: sol.nullspace,
            });
        }
    }

    let dims: Vec<(usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(bi, b)| (0..b.dirs.len()).map(move |di| (bi, di)))
        .collect();
    let mut lambda: Vec<Option<Rational>> = vec![None; dims.len()];
    finalize_affine(game, supports, &blocks, &dims, &mut lambda, true, found)?;
    Ok(())
}

fn blocks_at_lambda(
    blocks: &[MixerBlock],
    dims: &[(usize, usize)],
    lambda: &[Rational],
) -> [Option<Vec<QuadAlgebraic>>; 3] {
    let mut out: [Option<Vec<QuadAlgebraic>>; 3] = [None, None, None];
    for (bi, b) in blocks.iter().enumerate() {
        let mut vals = b.particular.clone();
        for (k, (dbi, di)) in dims.iter().enumerate() {
            if *dbi == bi {
                for (c, dv) in vals.iter_mut().zip(&b.dirs[*di]) {
                    *c += &lambda[k] * dv;
                }
            }
        }
        out[b.player] = Some(vals.into_iter().map(QuadAlgebraic::rational).collect());
    }
    out
}

/// Constraint vector at a lambda assignment: interiority of all mixer
/// coordinates (strict) followed by off-support gains (weak), each
/// required `<= 0`.
fn affine_constraints(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    blocks: &[MixerBlock],
    dims: &[(usize, usize)],
    lambda: &[Rational],
) -> Result<(Vec<QuadAlgebraic>, usize)> {
    let assigned = blocks_at_lambda(blocks, dims, lambda);
    let mut vals = Vec::new();
    for b in assigned.iter().flatten() {
        for v in b {
            vals.push(v.neg());
        }
    }
    let strict_count = vals.len();
    let weights = weights_from_blocks(&game.action_counts(), supports, &assigned);
    vals.extend(deviation_gains(game, supports, &weights)?);
    Ok((vals, strict_count))
}

fn finalize_affine(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    blocks: &[MixerBlock],
    dims: &[(usize, usize)],
    lambda: &mut Vec<Option<Rational>>,
    isolated: bool,
    found: &mut Vec<FoundEquilibrium>,
) -> Result<bool> {
    let free: Vec<usize> = (0..lambda.len()).filter(|&k| lambda[k].is_none()).collect();
    match free.len() {
        0 => {
            let fixed: Vec<Rational> = lambda.iter().map(|v| v.clone().unwrap()).collect();
            let assigned = blocks_at_lambda(blocks, dims, &fixed);
            accept(game, supports, &assigned, isolated, found)
        }
        1 => {
            let k = free[0];
            let at = |v: i64, lambda: &[Option<Rational>]| -> Vec<Rational> {
                lambda
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        if i == k {
                            crate::exact::rat_int(v)
                        } else {
                            x.clone().unwrap()
                        }
                    })
                    .collect()
            };
            let (g0, strict_count) = affine_constraints(game, supports, blocks, dims, &at(0, lambda))?;
            let (g1, _) = affine_constraints(game, supports, blocks, dims, &at(1, lambda))?;
            let mut acc = IntervalAcc::unbounded();
            for (i, (a, b)) in g0.iter().zip(&g1).enumerate() {
                let slope = b.try_sub(a)?;
                acc.add_le_zero(&slope, a, i < strict_count)?;
            }
            match acc.outcome()? {
                IntervalOutcome::Empty => Ok(false),
                IntervalOutcome::Point(v) => {
                    lambda[k] = Some(v.as_rational().expect("rational path").clone());
                    let ok = finalize_affine(game, supports, blocks, dims, lambda, isolated, found)?;
                    lambda[k] = None;
                    Ok(ok)
                }
                IntervalOutcome::Range(lo, hi) => {
                    let mid = midpoint(&lo, &hi)?;
                    lambda[k] = Some(mid.as_rational().expect("rational path").clone());
                    let ok = finalize_affine(game, supports, blocks, dims, lambda, false, found)?;
                    lambda[k] = None;
                    Ok(ok)
                }
            }
        }
        _ => {
            let mut any = false;
            if free.len() == 2 {
                any |= affine_tie_pairs(game, supports, blocks, dims, lambda, &free, found)?;
            }
            let k = free[0];
            for v in symmetric_ladder() {
                lambda[k] = Some(v);
                if finalize_affine(game, supports, blocks, dims, lambda, false, found)? {
                    lambda[k] = None;
                    return Ok(true);
                }
            }
            lambda[k] = None;
            Ok(any)
        }
    }
}

/// On a two-dimensional solution box every constraint is multilinear in the
/// two free parameters, so the off-support gains can be interpolated exactly
/// from the four corners and intersected pairwise. This catches equilibria
/// that are pinned only by tie conditions, which are often irrational and
/// invisible to the rational sampling ladder.
fn affine_tie_pairs(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    blocks: &[MixerBlock],
    dims: &[(usize, usize)],
    lambda: &[Option<Rational>],
    free: &[usize],
    found: &mut Vec<FoundEquilibrium>,
) -> Result<bool> {
    let corner = |a: i64, b: i64| -> Vec<Rational> {
        lambda
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if i == free[0] {
                    crate::exact::rat_int(a)
                } else if i == free[1] {
                    crate::exact::rat_int(b)
                } else {
                    x.clone().unwrap()
                }
            })
            .collect()
    };
    let (v00, strict_count) = affine_constraints(game, supports, blocks, dims, &corner(0, 0))?;
    let (v10, _) = affine_constraints(game, supports, blocks, dims, &corner(1, 0))?;
    let (v01, _) = affine_constraints(game, supports, blocks, dims, &corner(0, 1))?;
    let (v11, _) = affine_constraints(game, supports, blocks, dims, &corner(1, 1))?;
    let mut hs: Vec<MPoly> = Vec::new();
    for i in strict_count..v00.len() {
        let g00 = v00[i].as_rational().expect("rational corners").clone();
        let g10 = v10[i].as_rational().expect("rational corners").clone();
        let g01 = v01[i].as_rational().expect("rational corners").clone();
        let g11 = v11[i].as_rational().expect("rational corners").clone();
        let mut h = MPoly::zero();
        *h.coeff_mut(0b001) = &g10 - &g00;
        *h.coeff_mut(0b010) = &g01 - &g00;
        *h.coeff_mut(0b011) = (&g11 - &g10) - (&g01 - &g00);
        *h.coeff_mut(0b000) = g00;
        hs.push(h);
    }
    let mut any = false;
    for (i, hi) in hs.iter().enumerate() {
        for hj in &hs[i + 1..] {
            if hi.is_zero() || hj.is_zero() || hi.proportional_to(hj) {
                continue;
            }
            for s in solve2(hi, hj, 0, 1, &[])? {
                let (Coord::Fixed(u), Coord::Fixed(v)) = (s.u, s.v) else {
                    continue;
                };
                let mut full: Vec<QuadAlgebraic> = lambda
                    .iter()
                    .map(|x| QuadAlgebraic::rational(x.clone().unwrap_or_else(Rational::zero)))
                    .collect();
                full[free[0]] = u;
                full[free[1]] = v;
                let assigned = blocks_at_lambda_qa(blocks, dims, &full)?;
                any |= accept(game, supports, &assigned, false, found)?;
            }
        }
    }
    Ok(any)
}

/// `blocks_at_lambda` over algebraic lambda values.
fn blocks_at_lambda_qa(
    blocks: &[MixerBlock],
    dims: &[(usize, usize)],
    lambda: &[QuadAlgebraic],
) -> Result<[Option<Vec<QuadAlgebraic>>; 3]> {
    let mut out: [Option<Vec<QuadAlgebraic>>; 3] = [None, None, None];
    for (bi, b) in blocks.iter().enumerate() {
        let mut vals: Vec<QuadAlgebraic> = b
            .particular
            .iter()
            .cloned()
            .map(QuadAlgebraic::rational)
            .collect();
        for (k, (dbi, di)) in dims.iter().enumerate() {
            if *dbi == bi {
                for (c, dv) in vals.iter_mut().zip(&b.dirs[*di]) {
                    *c = c.try_add(&lambda[k].try_mul(&QuadAlgebraic::rational(dv.clone()))?)?;
                }
            }
        }
        out[b.player] = Some(vals);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Three mixers over two-action supports: exact elimination.
// ---------------------------------------------------------------------

fn support2_pattern(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    found: &mut Vec<FoundEquilibrium>,
) -> Result<()> {
    let sys = solve_support2(game, supports)?;
    let mut hit: HashSet<usize> = HashSet::new();
    for cand in &sys.candidates {
        if hit.contains(&cand.component) {
            continue;
        }
        let mut coords = cand.coords.clone();
        if finalize_axis(game, supports, &sys.fs, &mut coords, cand.seed_isolated, found)? {
            hit.insert(cand.component);
        }
    }
    Ok(())
}

fn axis_blocks(coords: &[Coord]) -> Option<[Option<Vec<QuadAlgebraic>>; 3]> {
    let mut out: [Option<Vec<QuadAlgebraic>>; 3] = [None, None, None];
    for p in 0..3 {
        let Coord::Fixed(t) = &coords[p] else {
            return None;
        };
        let rest = QuadAlgebraic::one().try_sub(t).ok()?;
        out[p] = Some(vec![t.clone(), rest]);
    }
    Some(out)
}

fn finalize_axis(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    fs: &[super::mpoly::MPoly; 3],
    coords: &mut [Coord],
    isolated: bool,
    found: &mut Vec<FoundEquilibrium>,
) -> Result<bool> {
    // fixed coordinates must already be interior
    for c in coords.iter() {
        if let Coord::Fixed(v) = c {
            if v.sign() <= 0 || QuadAlgebraic::one().try_sub(v)?.sign() <= 0 {
                return Ok(false);
            }
        }
    }
    let free: Vec<usize> = (0..3).filter(|&k| coords[k].is_free()).collect();
    match free.len() {
        0 => {
            let blocks = axis_blocks(coords).expect("all fixed");
            accept(game, supports, &blocks, isolated, found)
        }
        1 => {
            let k = free[0];
            let eval_at = |v: QuadAlgebraic, coords: &[Coord]| -> Result<Vec<QuadAlgebraic>> {
                let mut full = coords.to_vec();
                full[k] = Coord::Fixed(v);
                let blocks = axis_blocks(&full).expect("all fixed");
                let weights = weights_from_blocks(&game.action_counts(), supports, &blocks);
                deviation_gains(game, supports, &weights)
            };
            let g0 = eval_at(QuadAlgebraic::zero(), coords)?;
            let g1 = eval_at(QuadAlgebraic::one(), coords)?;
            let mut acc = IntervalAcc::open_unit();
            for (a, b) in g0.iter().zip(&g1) {
                let slope = b.try_sub(a)?;
                acc.add_le_zero(&slope, a, false)?;
            }
            match acc.outcome()? {
                IntervalOutcome::Empty => Ok(false),
                IntervalOutcome::Point(v) => {
                    coords[k] = Coord::Fixed(v);
                    let ok = finalize_axis(game, supports, fs, coords, true, found)?;
                    coords[k] = Coord::Free;
                    Ok(ok)
                }
                IntervalOutcome::Range(lo, hi) => {
                    let mid = midpoint(&lo, &hi)?;
                    coords[k] = Coord::Fixed(mid);
                    let ok = finalize_axis(game, supports, fs, coords, false, found)?;
                    coords[k] = Coord::Free;
                    Ok(ok)
                }
            }
        }
        _ => {
            // Every off-support gain is multilinear in the free coordinates,
            // so it peaks at a vertex of the free box. A gain that stays
            // strictly positive at every vertex is positive on the whole box
            // and rules the candidate out before any sampling.
            let mut all_positive: Option<Vec<bool>> = None;
            for v in 0..1usize << free.len() {
                let mut full = coords.to_vec();
                for (bit, &k) in free.iter().enumerate() {
                    full[k] = Coord::Fixed(if v & (1 << bit) != 0 {
                        QuadAlgebraic::one()
                    } else {
                        QuadAlgebraic::zero()
                    });
                }
                let blocks = axis_blocks(&full).expect("all fixed");
                let weights = weights_from_blocks(&game.action_counts(), supports, &blocks);
                let gains = deviation_gains(game, supports, &weights)?;
                let flags = all_positive.get_or_insert_with(|| vec![true; gains.len()]);
                for (g, flag) in gains.iter().zip(flags.iter_mut()) {
                    if g.sign() <= 0 {
                        *flag = false;
                    }
                }
            }
            if all_positive.map_or(false, |f| f.iter().any(|&b| b)) {
                return Ok(false);
            }
            let k = free[0];
            for v in unit_ladder() {
                let mut trial = coords.to_vec();
                trial[k] = Coord::Fixed(QuadAlgebraic::rational(v));
                // re-impose the equality system along this slice
                if !refine(fs, &mut trial)? {
                    continue;
                }
                if finalize_axis(game, supports, fs, &mut trial, false, found)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}
