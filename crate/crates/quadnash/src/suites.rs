//! Named verification suites.
//!
//! Each suite bundles the pinned claims about one gadget family into a
//! reproducible run: equilibrium sets are enumerated and compared exactly,
//! optimality verdicts come from the coalition search, and every claim
//! reports pass or fail with a short printable detail. The command line
//! exposes these through `lemmas --suite <id>`.

use crate::analysis::{
    check_ne, check_pareto, check_strong, find_equilibria, EnumerationOptions, Exactness,
    FoundEquilibrium,
};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, QuadAlgebraic, Rational};
use crate::gadgets::{
    build_g0, build_h1, build_h2, build_h3, build_h4, build_h5, extend_with_hgadget,
    h5_equilibrium, lift_solution,
};
use crate::game::{MixedProfile, StrategicGame};
use crate::symmetrize::{
    build_d0, build_gplus, build_gplus_prime, extend_symmetric, lift_role_assigned,
    lift_symmetric, SymExtension,
};
use crate::systems::{embed_corner, promise_point, QuadraticSystem, Term};
use num_traits::ToPrimitive;

/// Outcome of one claim inside a suite.
#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub name: String,
    pub passed: bool,
    /// Short printable value backing the claim (payoffs, probabilities, counts).
    pub detail: String,
}

/// All claims of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub id: String,
    pub claims: Vec<ClaimResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

/// Every id `run_suite` accepts.
pub const SUITE_IDS: &[&str] = &["h1", "h2", "h3", "h4", "h5", "g1", "d0", "d1", "dp1"];

pub fn run_suite(id: &str) -> Result<SuiteReport> {
    let claims = match id {
        "h1" => suite_h1()?,
        "h2" => suite_h2()?,
        "h3" => suite_h3()?,
        "h4" => suite_h4()?,
        "h5" => suite_h5()?,
        "g1" => suite_g1()?,
        "d0" => suite_d0()?,
        "d1" => suite_d1()?,
        "dp1" => suite_dp1()?,
        _ => return Err(Error::UnknownProblemId(id.to_string())),
    };
    Ok(SuiteReport { id: id.to_string(), claims })
}

fn claim(name: &str, passed: bool, detail: impl Into<String>) -> ClaimResult {
    ClaimResult { name: name.to_string(), passed, detail: detail.into() }
}

fn pure3(game: &StrategicGame, action: usize) -> Result<MixedProfile> {
    MixedProfile::pure(game, &[action, action, action])
}

fn enumerate(game: &StrategicGame, max_support: usize) -> Result<Vec<FoundEquilibrium>> {
    let options = EnumerationOptions { max_support, ..Default::default() };
    find_equilibria(game, &options)
}

/// Exact set equality between an enumerated equilibrium list and the
/// claimed profiles, all results required exact.
fn set_matches(found: &[FoundEquilibrium], expected: &[MixedProfile]) -> bool {
    found.len() == expected.len()
        && found.iter().all(|f| f.exactness == Exactness::Exact)
        && expected.iter().all(|e| found.iter().any(|f| f.profile == *e))
}

fn approx(q: &QuadAlgebraic) -> f64 {
    q.rational_part().to_f64().unwrap_or(f64::NAN)
        + q.radical_coeff().to_f64().unwrap_or(f64::NAN) * (q.radicand() as f64).sqrt()
}

fn payoff_string(values: &[QuadAlgebraic]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn suite_h1() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let g = build_h1(&rat_int(1));
    let found = enumerate(&g, 2)?;
    claims.push(claim(
        "u=1: the opt-out profile is the only equilibrium",
        set_matches(&found, &[pure3(&g, 1)?]),
        format!("{} equilibria", found.len()),
    ));
    let g = build_h1(&rat_int(0));
    let found = enumerate(&g, 2)?;
    claims.push(claim(
        "u=0: exactly the two unanimous pure profiles are equilibria",
        set_matches(&found, &[pure3(&g, 0)?, pure3(&g, 1)?]),
        format!("{} equilibria", found.len()),
    ));
    let zero_sum = [0, 1, 7].iter().all(|&u| build_h1(&rat_int(u)).is_zero_sum());
    claims.push(claim("all shifts give zero-sum games", zero_sum, "u in {0, 1, 7}"));
    Ok(claims)
}

fn suite_h2() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    for k in 2..=5usize {
        let g = build_h2(k)?;
        let uniform = MixedProfile::new(vec![
            vec![QuadAlgebraic::one()],
            vec![QuadAlgebraic::rational(rat(1, k as i64)); k],
            vec![QuadAlgebraic::rational(rat(1, k as i64)); k],
        ])?;
        let found = enumerate(&g, k)?;
        claims.push(claim(
            &format!("k={k}: the uniform profile is the only equilibrium"),
            set_matches(&found, &[uniform]) && g.is_zero_sum(),
            format!("{} equilibria, weights 1/{k}", found.len()),
        ));
    }
    Ok(claims)
}

fn suite_h3() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let g1 = build_h3(&rat_int(1));
    let found = enumerate(&g1, 2)?;
    claims.push(claim(
        "u=1: the opt-out profile is the only equilibrium",
        set_matches(&found, &[pure3(&g1, 1)?]),
        format!("{} equilibria", found.len()),
    ));
    let g0 = build_h3(&rat_int(0));
    let found = enumerate(&g0, 2)?;
    claims.push(claim(
        "u=0: exactly the two unanimous pure profiles are equilibria",
        set_matches(&found, &[pure3(&g0, 0)?, pure3(&g0, 1)?]),
        format!("{} equilibria", found.len()),
    ));
    let bot_pareto = check_pareto(&g0, &pure3(&g0, 1)?)?.is_yes()
        && check_pareto(&g1, &pure3(&g1, 1)?)?.is_yes();
    claims.push(claim("the opt-out profile is Pareto optimal at u=0 and u=1", bot_pareto, ""));
    let verdict = check_pareto(&g0, &pure3(&g0, 0)?)?;
    claims.push(claim(
        "u=0: the all-G equilibrium is not Pareto optimal",
        verdict.is_no(),
        "dominated by the opt-out profile",
    ));
    Ok(claims)
}

fn suite_h4() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let g1 = build_h4(&rat_int(1));
    let found = enumerate(&g1, 2)?;
    claims.push(claim(
        "u=1: the opt-out profile is the only equilibrium",
        set_matches(&found, &[pure3(&g1, 1)?]),
        format!("{} equilibria", found.len()),
    ));
    let g0 = build_h4(&rat_int(0));
    let found = enumerate(&g0, 2)?;
    claims.push(claim(
        "u=0: exactly the two unanimous pure profiles are equilibria",
        set_matches(&found, &[pure3(&g0, 0)?, pure3(&g0, 1)?]),
        format!("{} equilibria", found.len()),
    ));
    let all_g = pure3(&g0, 0)?;
    claims.push(claim(
        "u=0: the all-G equilibrium is Pareto optimal",
        check_pareto(&g0, &all_g)?.is_yes(),
        "",
    ));
    claims.push(claim(
        "u=0: the all-G equilibrium is strong",
        check_strong(&g0, &all_g)?.is_yes(),
        "",
    ));
    Ok(claims)
}

fn suite_h5() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let g = build_h5();
    let expected = h5_equilibrium();
    let found = enumerate(&g, 2)?;
    claims.push(claim(
        "the perturbed game has exactly one equilibrium, exact over Q(sqrt(6))",
        set_matches(&found, &[expected.clone()]) && !expected.is_rational(),
        format!("{} equilibria", found.len()),
    ));
    let p1 = approx(&expected.strategy(0)[0]);
    let p2 = approx(&expected.strategy(1)[0]);
    let p3 = approx(&expected.strategy(2)[0]);
    claims.push(claim(
        "mixing weights are 1 - 1/sqrt(6) and 3 - sqrt(6)",
        (p1 - (1.0 - 1.0 / 6.0f64.sqrt())).abs() < 1e-12
            && (p2 - (3.0 - 6.0f64.sqrt())).abs() < 1e-12
            && (p3 - p2).abs() < 1e-12,
        format!("p1 = {p1:.10}, p2 = p3 = {p2:.10}"),
    ));
    let payoffs = g.eval_payoff(&expected)?;
    let u1 = QuadAlgebraic::new(rat_int(-12), rat_int(4), 6)?;
    let u2 = QuadAlgebraic::new(rat_int(6), rat_int(-2), 6)?;
    claims.push(claim(
        "equilibrium payoffs are (-12 + 4 sqrt(6), 6 - 2 sqrt(6), 6 - 2 sqrt(6))",
        payoffs == vec![u1, u2.clone(), u2],
        payoff_string(&payoffs),
    ));
    claims.push(claim("the game is zero-sum", g.is_zero_sum(), ""));
    Ok(claims)
}

/// Fixed desk-scale instance: x1^2 - x1 = 0 with roots 0 and 1.
fn demo_system() -> QuadraticSystem {
    QuadraticSystem::new(1, vec![vec![Term::new(1, 1, 1), Term::new(-1, 0, 1)]])
        .expect("valid system")
}

fn demo_solution(root: i64) -> Vec<QuadAlgebraic> {
    let z: Vec<QuadAlgebraic> = promise_point(&[rat_int(root)])
        .into_iter()
        .map(QuadAlgebraic::rational)
        .collect();
    embed_corner(&z).expect("promise points fit the simplex")
}

fn suite_g1() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let b = demo_system().normalize_to_promise().bilinearize_homogenize();
    let g1 = extend_with_hgadget(&build_g0(&b), &build_h1(&rat_int(0)))?;
    for root in [0, 1] {
        let z = demo_solution(root);
        let lifted = lift_solution(&b, &z, &z, &g1)?;
        let payoffs = g1.eval_payoff(&lifted)?;
        claims.push(claim(
            &format!("the lifted solution x1 = {root} is an equilibrium with zero payoffs"),
            check_ne(&g1, &lifted)?.is_yes() && payoffs.iter().all(|v| v.is_zero()),
            payoff_string(&payoffs),
        ));
    }
    let counts = g1.action_counts();
    let bot = MixedProfile::pure(&g1, &[counts[0] - 1, counts[1] - 1, counts[2] - 1])?;
    claims.push(claim(
        "the opt-out profile is an equilibrium",
        check_ne(&g1, &bot)?.is_yes(),
        "",
    ));

    // an unsolvable system: the constant equation 1 = 0
    let unsolvable = QuadraticSystem::new(1, vec![vec![Term::new(1, 0, 0)]])?;
    let b = unsolvable.normalize_to_promise().bilinearize_homogenize();
    let g1 = extend_with_hgadget(&build_g0(&b), &build_h1(&rat_int(0)))?;
    let counts = g1.action_counts();
    let bot = MixedProfile::pure(&g1, &[counts[0] - 1, counts[1] - 1, counts[2] - 1])?;
    let found = enumerate(&g1, 2)?;
    claims.push(claim(
        "for an unsolvable system, the opt-out profile is the only equilibrium",
        set_matches(&found, &[bot]),
        format!("{} equilibria", found.len()),
    ));
    Ok(claims)
}

fn suite_d0() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let b = demo_system().normalize_to_promise().bilinearize_homogenize();
    let g0 = build_g0(&b);
    let (gplus, info) = build_gplus(&g0)?;
    let d0 = build_d0(&gplus)?;
    claims.push(claim("the pooled game is symmetric", d0.is_symmetric_game(), ""));
    let z = demo_solution(1);
    let lifted = lift_symmetric(&b, &z, &d0)?;
    claims.push(claim(
        "the symmetric lift is an equilibrium",
        check_ne(&d0, &lifted)?.is_yes(),
        "",
    ));
    let payoffs = d0.eval_payoff(&lifted)?;
    let k = QuadAlgebraic::rational(info.k.clone());
    claims.push(claim(
        "every player receives exactly K = 2M/9",
        payoffs.iter().all(|v| *v == k),
        format!("K = {}, payoffs {}", crate::exact::fmt_rational(&info.k), payoff_string(&payoffs)),
    ));
    claims.push(claim(
        "the lifted profile is symmetric",
        lifted.is_symmetric(),
        "",
    ));
    Ok(claims)
}

fn suite_d1() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let b = demo_system().normalize_to_promise().bilinearize_homogenize();
    let g0 = build_g0(&b);
    let (gplus, info) = build_gplus(&g0)?;
    let d0 = build_d0(&gplus)?;
    let d1 = extend_symmetric(&d0, &info, SymExtension::D1)?;
    claims.push(claim("the opt-out extension is symmetric", d1.is_symmetric_game(), ""));
    let bot = d1.action_count(0) - 1;
    let all_bot = pure3(&d1, bot)?;
    let payoffs = d1.eval_payoff(&all_bot)?;
    let k_plus_one = QuadAlgebraic::rational(&info.k + Rational::from_integer(1.into()));
    claims.push(claim(
        "the all-opt-out profile is an equilibrium paying K + 1",
        check_ne(&d1, &all_bot)?.is_yes() && payoffs.iter().all(|v| *v == k_plus_one),
        payoff_string(&payoffs),
    ));
    let z = demo_solution(1);
    let lifted = lift_symmetric(&b, &z, &d1)?;
    let payoffs = d1.eval_payoff(&lifted)?;
    let k = QuadAlgebraic::rational(info.k.clone());
    claims.push(claim(
        "the symmetric lift stays an equilibrium paying K",
        check_ne(&d1, &lifted)?.is_yes() && payoffs.iter().all(|v| *v == k),
        payoff_string(&payoffs),
    ));
    let d4 = extend_symmetric(&d0, &info, SymExtension::D4)?;
    claims.push(claim("the penalized extension is symmetric", d4.is_symmetric_game(), ""));
    Ok(claims)
}

fn suite_dp1() -> Result<Vec<ClaimResult>> {
    let mut claims = Vec::new();
    let b = demo_system().normalize_to_promise().bilinearize_homogenize();
    let g0 = build_g0(&b);
    let (gplus, info) = build_gplus_prime(&g0)?;
    let d0 = build_d0(&gplus)?;
    let dp1 = extend_symmetric(&d0, &info, SymExtension::DPrime1)?;
    claims.push(claim("the prime extension is symmetric", dp1.is_symmetric_game(), ""));
    let z = demo_solution(1);
    let lifted = lift_role_assigned(&b, &z, &dp1)?;
    let payoffs = dp1.eval_payoff(&lifted)?;
    let m = QuadAlgebraic::rational(info.m_rational());
    claims.push(claim(
        "the role-assigned lift is an equilibrium paying M to everyone",
        check_ne(&dp1, &lifted)?.is_yes() && payoffs.iter().all(|v| *v == m),
        format!("M = {}, payoffs {}", info.m, payoff_string(&payoffs)),
    ));
    claims.push(claim(
        "the role-assigned profile is not symmetric",
        !lifted.is_symmetric(),
        "players occupy distinct blocks",
    ));
    let bot = dp1.action_count(0) - 1;
    let all_bot = pure3(&dp1, bot)?;
    claims.push(claim(
        "the all-opt-out profile is an equilibrium",
        check_ne(&dp1, &all_bot)?.is_yes(),
        payoff_string(&dp1.eval_payoff(&all_bot)?),
    ));
    Ok(claims)
}
