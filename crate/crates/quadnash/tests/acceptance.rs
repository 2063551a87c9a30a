//! Acceptance gate for the whole crate. Each test pins one advertised
//! guarantee end to end, at its stated tolerance, and prints a single
//! summary line; the test list doubles as the release checklist. All
//! arithmetic is exact unless a tolerance is named explicitly.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadnash::analysis::{
    check_ne, check_pareto, check_strong, coalition_feasible, find_equilibria, grid_oracle,
    CoalitionQuery, EnumerationOptions, Exactness, Verdict, Witness,
};
use quadnash::exact::{rat, QuadAlgebraic, Rational};
use quadnash::gadgets::{
    build_g0, build_g2, build_g5, build_h1, build_h2, build_h3, build_h4, build_h5,
    extend_with_hgadget, lift_solution,
};
use quadnash::game::{MixedProfile, StrategicGame};
use quadnash::plant::plant_system;
use quadnash::suites::run_suite;
use quadnash::symmetrize::{
    build_d0, build_gplus, build_gplus_prime, extend_symmetric, lift_role_assigned,
    lift_symmetric, SymExtension,
};
use quadnash::systems::{
    embed_corner, promise_point, BilinearSystem, QuadraticSystem, Term,
};

fn qa(r: Rational) -> QuadAlgebraic {
    QuadAlgebraic::rational(r)
}

fn qa_vec(v: &[Rational]) -> Vec<QuadAlgebraic> {
    v.iter().cloned().map(QuadAlgebraic::rational).collect()
}

fn unit(len: usize, hot: usize) -> Vec<QuadAlgebraic> {
    (0..len)
        .map(|i| if i == hot { QuadAlgebraic::one() } else { QuadAlgebraic::zero() })
        .collect()
}

/// plant -> promise normalization -> bilinearization, plus the embedded
/// simplex point certifying the planted solution.
fn planted_chain(n: usize, l: usize, seed: u64) -> (BilinearSystem, Vec<QuadAlgebraic>) {
    let planted = plant_system(n, l, seed);
    let promise = planted.system.normalize_to_promise();
    let bsys = promise.bilinearize_homogenize();
    let z = promise_point(&planted.solution);
    let e = embed_corner(&qa_vec(&z)).expect("promise points sit in the corner simplex");
    (bsys, e)
}

fn g1_of(bsys: &BilinearSystem) -> StrategicGame {
    extend_with_hgadget(&build_g0(bsys), &build_h1(&Rational::from_integer(0.into())))
        .expect("gadget extension is well formed")
}

fn pure_by_labels(game: &StrategicGame, label: &str) -> MixedProfile {
    let actions: Vec<usize> = (0..game.player_count())
        .map(|p| game.action_by_label(p, label).expect("label exists"))
        .collect();
    MixedProfile::pure(game, &actions).expect("pure profile")
}

fn all_zero(payoffs: &[QuadAlgebraic]) -> bool {
    payoffs.iter().all(|v| v.is_zero())
}

#[test]
fn criterion_01_opt_out_gadget_suites() {
    let mut slowest = 0.0f64;
    for id in ["h1", "h2", "h3", "h4", "h5"] {
        let t = Instant::now();
        let report = run_suite(id).expect("suite runs");
        let secs = t.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        for claim in &report.claims {
            assert!(claim.passed, "suite {id}, claim `{}`: {}", claim.name, claim.detail);
        }
        assert!(secs < 10.0, "suite {id} took {secs:.2}s, limit is 10s");
    }

    // independent float pin on the perturbed gadget's unique equilibrium
    let h5 = build_h5();
    let found = find_equilibria(&h5, &EnumerationOptions::default()).unwrap();
    assert_eq!(found.len(), 1);
    let eq = &found[0].profile;
    let p1 = 1.0 - 1.0 / 6.0f64.sqrt();
    let p23 = 3.0 - 6.0f64.sqrt();
    assert!((eq.strategy(0)[0].to_float() - p1).abs() <= 1e-12);
    assert!((eq.strategy(1)[0].to_float() - p23).abs() <= 1e-12);
    assert!((eq.strategy(2)[0].to_float() - p23).abs() <= 1e-12);

    println!("criterion 01 opt-out gadget suites: PASS (5 suites exact, slowest {slowest:.2}s)");
}

#[test]
fn criterion_02_planted_solutions_lift_to_equilibria() {
    let half = qa(rat(1, 2));
    for seed in 0..100u64 {
        let n = 1 + (seed % 4) as usize;
        let l = 1 + ((seed / 4) % 4) as usize;
        let (bsys, e) = planted_chain(n, l, seed);
        let g1 = g1_of(&bsys);
        let lifted = lift_solution(&bsys, &e, &e, &g1).expect("lift");

        let verdict = check_ne(&g1, &lifted).unwrap();
        assert!(verdict.is_yes(), "seed {seed}: lifted profile must be an equilibrium");
        let payoffs = g1.eval_payoff(&lifted).unwrap();
        assert!(all_zero(&payoffs), "seed {seed}: lifted payoffs must be exactly zero");
        for p in 0..3 {
            for c in lifted.strategy(p) {
                let over = c.try_sub(&half).unwrap();
                assert!(over.sign() <= 0, "seed {seed}: action probability above 1/2");
            }
        }
        let bot = pure_by_labels(&g1, "⊥");
        assert!(check_ne(&g1, &bot).unwrap().is_yes(), "seed {seed}: all-⊥ must stay an equilibrium");
    }
    println!("criterion 02 planted lifts: PASS (100/100 systems, n<=4, l<=4, exact zeros)");
}

#[test]
fn criterion_03_unsolvable_systems_leave_only_opt_out() {
    // 1 = 0, and a strictly positive quadratic: no solutions anywhere
    let infeasible = vec![
        QuadraticSystem::new(1, vec![vec![Term::new(1, 0, 0)]]).unwrap(),
        QuadraticSystem::new(
            2,
            vec![vec![Term::new(1, 1, 1), Term::new(1, 2, 2), Term::new(1, 0, 0)]],
        )
        .unwrap(),
    ];
    let expected_counts = [vec![9, 4, 4], vec![11, 5, 5]];
    for (sys, expected) in infeasible.iter().zip(&expected_counts) {
        let bsys = sys.normalize_to_promise().bilinearize_homogenize();
        let g1 = g1_of(&bsys);
        assert_eq!(&g1.action_counts(), expected);
        let found = find_equilibria(&g1, &EnumerationOptions::default()).unwrap();
        assert_eq!(found.len(), 1, "exactly one equilibrium expected");
        let eq = &found[0];
        assert!(matches!(eq.exactness, Exactness::Exact));
        for p in 0..3 {
            let bot = g1.action_by_label(p, "⊥").unwrap();
            assert_eq!(eq.profile.strategy(p)[bot], QuadAlgebraic::one(), "all mass on ⊥");
        }
    }
    println!("criterion 03 unsolvable systems: PASS (2 systems, only the all-⊥ equilibrium)");
}

#[test]
fn criterion_04_sign_matrix_payoff_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut samples = 0usize;
    for inst in 0..20 {
        let dim = 2 + inst % 3;
        let mc = 1 + (inst / 3) % 3;
        let matrices: Vec<Vec<Vec<BigInt>>> = (0..mc)
            .map(|_| {
                (0..dim)
                    .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(-3..=3i64))).collect())
                    .collect()
            })
            .collect();
        let bsys = BilinearSystem::new(dim, matrices).unwrap();
        let g0 = build_g0(&bsys);

        for _ in 0..50 {
            let x = random_simplex(&mut rng, dim);
            let y = random_simplex(&mut rng, dim);
            let a = rng.gen_range(0..2 * mc);
            let k = a / 2;
            let q = bsys.eval(&x, &y).unwrap().remove(k);
            let sq = if a % 2 == 0 { q } else { QuadAlgebraic::zero().try_sub(&q).unwrap() };

            let weights = vec![unit(2 * mc, a), x, y];
            let pay = g0.eval_strategy_vectors(&weights).unwrap();
            assert_eq!(pay[0], sq.try_add(&sq).unwrap(), "u1 = 2 s q_k");
            let neg = QuadAlgebraic::zero().try_sub(&sq).unwrap();
            assert_eq!(pay[1], neg, "u2 = -s q_k");
            assert_eq!(pay[2], neg, "u3 = -s q_k");
            samples += 1;
        }
    }
    assert_eq!(samples, 1000);
    println!("criterion 04 payoff identity: PASS (1000 samples over 20 instances, exact)");
}

fn random_simplex(rng: &mut ChaCha8Rng, len: usize) -> Vec<QuadAlgebraic> {
    loop {
        let nums: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=8)).collect();
        let total: i64 = nums.iter().sum();
        if total == 0 {
            continue;
        }
        return nums.into_iter().map(|v| qa(rat(v, total))).collect();
    }
}

#[test]
fn criterion_05_strong_and_pareto_certification() {
    let one = Rational::from_integer(1.into());
    let zero = Rational::from_integer(0.into());

    let t = Instant::now();
    let h1_pos = build_h1(&one);
    let bot = pure_by_labels(&h1_pos, "⊥");
    let verdict = check_strong(&h1_pos, &bot).unwrap();
    assert!(verdict.is_yes(), "all-⊥ is a strong equilibrium at positive stake");
    assert!(t.elapsed().as_secs_f64() < 30.0);

    let t = Instant::now();
    let h1_zero = build_h1(&zero);
    let ggg = pure_by_labels(&h1_zero, "G");
    let verdict = check_strong(&h1_zero, &ggg).unwrap();
    let Verdict::No { witness: Some(Witness::Improvement { deviators, strategies, .. }), .. } =
        verdict
    else {
        panic!("all-G at zero stake must fail with an improvement witness");
    };
    // replay the witness: every deviator must strictly gain
    let base_pay = h1_zero.eval_payoff(&ggg).unwrap();
    let mut weights: Vec<Vec<QuadAlgebraic>> = ggg.strategies().to_vec();
    for (d, s) in deviators.iter().zip(&strategies) {
        weights[*d] = qa_vec(s);
    }
    let dev_pay = h1_zero.eval_strategy_vectors(&weights).unwrap();
    for &d in &deviators {
        let gain = dev_pay[d].try_sub(&base_pay[d]).unwrap();
        assert!(gain.sign() > 0, "witness must strictly improve player {d}");
    }
    assert!(t.elapsed().as_secs_f64() < 30.0);

    let t = Instant::now();
    for u in [&zero, &one] {
        let h3 = build_h3(u);
        assert!(check_pareto(&h3, &pure_by_labels(&h3, "⊥")).unwrap().is_yes());
    }
    let h3 = build_h3(&zero);
    assert!(!check_pareto(&h3, &pure_by_labels(&h3, "G")).unwrap().is_yes());
    let h4 = build_h4(&zero);
    let ggg4 = pure_by_labels(&h4, "G");
    assert!(check_pareto(&h4, &ggg4).unwrap().is_yes());
    assert!(check_strong(&h4, &ggg4).unwrap().is_yes());
    assert!(!check_strong(&h4, &pure_by_labels(&h4, "⊥")).unwrap().is_yes());
    assert!(t.elapsed().as_secs_f64() < 30.0);

    // joint-deviation wedge with no feasible point: gains 3, -2 / -2, 1 /
    // 4, -4 / 0, 0 at the strategy-box corners interpolate to
    // p1 p2 + 4 p2 - 2 p1 and p1 p2 - 4 p2 + p1, which cannot both be
    // positive anywhere on the box
    let t = Instant::now();
    let labels = vec![vec!["A".to_string(), "B".to_string()]; 2];
    let u1 = [[3, -2], [4, 0]];
    let u2 = [[-2, 1], [-4, 0]];
    let wedge = StrategicGame::from_fn(labels, |p| {
        vec![rat(u1[p[0]][p[1]], 1), rat(u2[p[0]][p[1]], 1)]
    })
    .unwrap();
    let x = MixedProfile::pure(&wedge, &[1, 1]).unwrap();
    let query = CoalitionQuery::new(vec![0, 1], Vec::new(), Vec::new());
    let verdict = coalition_feasible(&wedge, &x, &query).unwrap();
    assert!(
        matches!(verdict, Verdict::No { .. }),
        "the wedge system must be reported infeasible"
    );
    assert!(t.elapsed().as_secs_f64() < 30.0);

    println!("criterion 05 strong/pareto certification: PASS (exact verdicts, replayed witness, wedge infeasible)");
}

#[test]
fn criterion_06_coalition_search_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let mut checked = 0usize;
    let mut borderline = 0usize;
    let mut disagreements = Vec::new();

    for game_idx in 0..50 {
        let labels = vec![vec!["A".to_string(), "B".to_string()]; 3];
        let game = StrategicGame::from_fn(labels, |_| {
            (0..3).map(|_| rat(rng.gen_range(-24..=24), 8)).collect()
        })
        .unwrap();
        let x = MixedProfile::new(
            (0..3)
                .map(|_| {
                    let w = rat(rng.gen_range(0..=8), 8);
                    vec![qa(w.clone()), qa(Rational::from_integer(1.into()) - w)]
                })
                .collect(),
        )
        .unwrap();

        let coalitions: Vec<Vec<usize>> =
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]];
        for coalition in coalitions {
            let frozen: Vec<usize> = (0..3).filter(|p| !coalition.contains(p)).collect();
            let query = CoalitionQuery::new(coalition.clone(), Vec::new(), frozen);
            let eps = query.eps.numer().to_f64().unwrap() / query.eps.denom().to_f64().unwrap();
            let bnb = coalition_feasible(&game, &x, &query).unwrap();
            checked += 1;

            match &bnb {
                Verdict::Yes { witness } => {
                    let oracle = grid_oracle(&game, &x, &query, 256).unwrap();
                    if !oracle.is_yes() {
                        let margin = witness_margin(witness, eps);
                        if margin > 1e-6 {
                            disagreements.push((game_idx, coalition, "yes-vs-grid-no"));
                        } else {
                            borderline += 1;
                        }
                    }
                }
                Verdict::No { .. } => {
                    let oracle = grid_oracle(&game, &x, &query, 64).unwrap();
                    if let Verdict::Yes { witness } = oracle {
                        let margin = witness_margin(&witness, eps);
                        if margin > 1e-6 {
                            disagreements.push((game_idx, coalition, "no-vs-grid-yes"));
                        } else {
                            borderline += 1;
                        }
                    }
                }
                Verdict::Unknown { .. } => {
                    disagreements.push((game_idx, coalition, "unknown"));
                }
            }
        }
    }
    assert!(disagreements.is_empty(), "oracle disagreements: {disagreements:?}");
    println!(
        "criterion 06 oracle agreement: PASS ({checked} queries on 50 games, {borderline} borderline skipped, 0 disagreements)"
    );
}

/// How far the witness's worst gain sits from the query threshold; tiny
/// values mark borderline instances the grid cannot be trusted on.
fn witness_margin(witness: &Option<Witness>, eps: f64) -> f64 {
    match witness {
        Some(Witness::Improvement { gains, .. }) => gains
            .iter()
            .map(|g| (g.to_float() - eps).abs())
            .fold(f64::INFINITY, f64::min),
        _ => f64::INFINITY,
    }
}

#[test]
fn criterion_07_symmetrized_lifts_pay_the_shift_constant() {
    for seed in 0..50u64 {
        let n = 1 + (seed % 2) as usize;
        let l = 1 + ((seed / 2) % 2) as usize;
        let (bsys, e) = planted_chain(n, l, seed);
        let g0 = build_g0(&bsys);

        let (shifted, info) = build_gplus(&g0).unwrap();
        let d0 = build_d0(&shifted).unwrap();
        let lifted = lift_symmetric(&bsys, &e, &d0).unwrap();
        let k = qa(info.k.clone());
        for v in d0.eval_payoff(&lifted).unwrap() {
            assert_eq!(v, k, "seed {seed}: symmetric lift must pay exactly 2M/9");
        }

        let d1 = extend_symmetric(&d0, &info, SymExtension::D1).unwrap();
        let d4 = extend_symmetric(&d0, &info, SymExtension::D4).unwrap();
        let (shifted_p, info_p) = build_gplus_prime(&g0).unwrap();
        let d0p = build_d0(&shifted_p).unwrap();
        let dp1 = extend_symmetric(&d0p, &info_p, SymExtension::DPrime1).unwrap();
        assert!(d0.is_symmetric_game(), "seed {seed}");
        assert!(d1.is_symmetric_game(), "seed {seed}");
        assert!(d4.is_symmetric_game(), "seed {seed}");
        assert!(dp1.is_symmetric_game(), "seed {seed}");

        let bot = pure_by_labels(&d1, "⊥");
        let k_plus_one = qa(&info.k + Rational::from_integer(1.into()));
        for v in d1.eval_payoff(&bot).unwrap() {
            assert_eq!(v, k_plus_one, "seed {seed}: all-⊥ pays exactly K+1");
        }
        assert!(check_ne(&d1, &bot).unwrap().is_yes(), "seed {seed}");
    }
    println!("criterion 07 symmetrization: PASS (50 systems, exact K = 2M/9 and K+1 payoffs)");
}

#[test]
fn criterion_08_role_assigned_lifts_break_symmetry() {
    for seed in 0..20u64 {
        let n = 1 + (seed % 2) as usize;
        let l = 1 + ((seed / 2) % 2) as usize;
        let (bsys, e) = planted_chain(n, l, seed);
        let g0 = build_g0(&bsys);
        let (shifted, info) = build_gplus_prime(&g0).unwrap();
        let d0 = build_d0(&shifted).unwrap();
        let dp1 = extend_symmetric(&d0, &info, SymExtension::DPrime1).unwrap();

        let lifted = lift_role_assigned(&bsys, &e, &dp1).unwrap();
        assert!(check_ne(&dp1, &lifted).unwrap().is_yes(), "seed {seed}");
        let m = qa(info.m_rational());
        for v in dp1.eval_payoff(&lifted).unwrap() {
            assert_eq!(v, m, "seed {seed}: role-assigned lift must pay exactly M");
        }
        assert!(!lifted.is_symmetric(), "seed {seed}: the lift must not be symmetric");

        let bot = pure_by_labels(&dp1, "⊥");
        assert!(check_ne(&dp1, &bot).unwrap().is_yes(), "seed {seed}");
    }
    println!("criterion 08 role-assigned lifts: PASS (20 systems, exact M payoffs, asymmetric)");
}

#[test]
fn criterion_09_irrational_and_rational_pipelines() {
    // forcing an irrational coordinate: the augmented systems pin one
    // variable to 0 and force the fresh one to 1/sqrt(2)
    let bases = [
        QuadraticSystem::new(1, vec![vec![Term::new(1, 0, 1)]]).unwrap(),
        QuadraticSystem::new(1, vec![vec![Term::new(1, 1, 1)]]).unwrap(),
    ];
    for (idx, base) in bases.iter().enumerate() {
        let augmented = base.augment_irrational();
        assert!(augmented.var_count() <= 2, "desk scale");
        let bsys = augmented.bilinearize_homogenize();
        let g1 = g1_of(&bsys);
        let found = find_equilibria(&g1, &EnumerationOptions::default()).unwrap();
        let mut zero_payoff = 0usize;
        for f in &found {
            if !all_zero(&g1.eval_payoff(&f.profile).unwrap()) {
                continue;
            }
            zero_payoff += 1;
            assert!(matches!(f.exactness, Exactness::Exact), "base {idx}");
            let has_sqrt2 = (0..3).any(|p| {
                f.profile.strategy(p).iter().any(|c| !c.is_rational() && c.radicand() == 2)
            });
            assert!(has_sqrt2, "base {idx}: zero-payoff equilibrium without a sqrt(2) coordinate");
        }
        assert!(zero_payoff > 0, "base {idx}: the solution equilibria must be enumerable");
    }

    // rational solutions stay rational through the perturbed extension
    for seed in [0u64, 1, 2] {
        let (bsys, e) = planted_chain(2, 2, seed);
        let g5 = build_g5(&g1_of(&bsys)).unwrap();
        let lifted = lift_solution(&bsys, &e, &e, &g5).unwrap();
        assert!(check_ne(&g5, &lifted).unwrap().is_yes(), "seed {seed}");
        for p in 0..3 {
            assert!(lifted.strategy(p).iter().all(|c| c.is_rational()), "seed {seed}");
        }
    }

    // unsolvable input: the perturbed extension leaves only the forced
    // irrational equilibrium, exact over Q(sqrt(6))
    let unsolvable = QuadraticSystem::new(1, vec![vec![Term::new(1, 0, 0)]]).unwrap();
    let bsys = unsolvable.normalize_to_promise().bilinearize_homogenize();
    let g5 = build_g5(&g1_of(&bsys)).unwrap();
    let found = find_equilibria(&g5, &EnumerationOptions::default()).unwrap();
    assert_eq!(found.len(), 1, "only the perturbed opt-out equilibrium survives");
    let eq = &found[0];
    assert!(matches!(eq.exactness, Exactness::Exact));
    let has_sqrt6 = (0..3)
        .any(|p| eq.profile.strategy(p).iter().any(|c| !c.is_rational() && c.radicand() == 6));
    assert!(has_sqrt6, "the surviving equilibrium must live in Q(sqrt(6))");

    println!("criterion 09 irrational/rational pipelines: PASS (sqrt(2) forced, rational lifts verified, sqrt(6) fallback)");
}

#[test]
fn criterion_10_zero_sum_and_size_laws() {
    let mut zero_sum_checked = 0usize;
    let mut bsys_pool: Vec<BilinearSystem> = Vec::new();
    for seed in 0..5u64 {
        let n = 1 + (seed % 2) as usize;
        let l = 1 + ((seed / 2) % 2) as usize;
        bsys_pool.push(planted_chain(n, l, seed).0);
    }
    bsys_pool.push(
        QuadraticSystem::new(1, vec![vec![Term::new(1, 0, 0)]])
            .unwrap()
            .normalize_to_promise()
            .bilinearize_homogenize(),
    );
    bsys_pool.push(
        QuadraticSystem::new(1, vec![vec![Term::new(1, 0, 1)]])
            .unwrap()
            .augment_irrational()
            .bilinearize_homogenize(),
    );

    for bsys in &bsys_pool {
        let g0 = build_g0(bsys);
        let g1 = g1_of(bsys);
        let g2 = build_g2(&g1).unwrap();
        let g5 = build_g5(&g1).unwrap();
        for (name, game) in [("g0", &g0), ("g1", &g1), ("g2", &g2), ("g5", &g5)] {
            assert!(game.is_zero_sum(), "{name} must be zero-sum");
            zero_sum_checked += 1;
        }
        let cells: usize = g0.action_counts().iter().product();
        assert_eq!(
            cells,
            2 * bsys.matrix_count() * bsys.dim() * bsys.dim(),
            "the sign-form table must have 2*l*(n+1)^2 cells"
        );
    }

    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let mut gadgets: Vec<StrategicGame> = vec![build_h1(&zero), build_h1(&one), build_h5()];
    for k in 2..=5 {
        gadgets.push(build_h2(k).unwrap());
    }
    for game in &gadgets {
        assert!(game.is_zero_sum());
        zero_sum_checked += 1;
    }

    println!("criterion 10 zero-sum/size laws: PASS ({zero_sum_checked} games zero-sum, cell counts exact)");
}
