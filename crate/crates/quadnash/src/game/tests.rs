use super::format::{parse_game, parse_profile, write_game, write_game_with_comments, write_profile};
use super::*;
use crate::exact::{rat, rat_int};
use proptest::prelude::*;

fn labels2(names: [&str; 2]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// 2x2x2 game from a table in lexicographic profile order.
fn game222(cells: [[i64; 3]; 8]) -> StrategicGame {
    let labels = vec![labels2(["G", "⊥"]), labels2(["G", "⊥"]), labels2(["G", "⊥"])];
    let payoffs = cells
        .iter()
        .map(|row| row.iter().map(|&v| rat_int(v)).collect())
        .collect();
    StrategicGame::new(labels, payoffs).unwrap()
}

fn matching_pennies_like() -> StrategicGame {
    // zero-sum two-player embedded as rows/cols
    let labels = vec![labels2(["h", "t"]), labels2(["h", "t"])];
    let payoffs = vec![
        vec![rat_int(1), rat_int(-1)],
        vec![rat_int(-1), rat_int(1)],
        vec![rat_int(-1), rat_int(1)],
        vec![rat_int(1), rat_int(-1)],
    ];
    StrategicGame::new(labels, payoffs).unwrap()
}

#[test]
fn profile_iteration_is_lexicographic() {
    let g = matching_pennies_like();
    let profiles: Vec<Vec<usize>> = g.profiles().collect();
    assert_eq!(profiles, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert_eq!(g.profile_index(&[1, 0]), 2);
}

#[test]
fn expected_payoffs_are_multilinear() {
    let g = matching_pennies_like();
    let x = MixedProfile::new(vec![
        vec![QuadAlgebraic::rational(rat(1, 2)), QuadAlgebraic::rational(rat(1, 2))],
        vec![QuadAlgebraic::rational(rat(1, 3)), QuadAlgebraic::rational(rat(2, 3))],
    ])
    .unwrap();
    let u = g.eval_payoff(&x).unwrap();
    assert_eq!(u[0], QuadAlgebraic::zero());
    assert_eq!(u[1], QuadAlgebraic::zero());
    // pin player 1 to pure h: u1 = 1/3 - 2/3 = -1/3
    let u = g.eval_with_overrides(&x, &[(0, 0)]).unwrap();
    assert_eq!(u[0], QuadAlgebraic::rational(rat(-1, 3)));
}

#[test]
fn zero_sum_detection_is_exact() {
    assert!(matching_pennies_like().is_zero_sum());
    let g = game222([
        [0, 0, 0],
        [1, -1, 0],
        [1, 0, -1],
        [-4, 2, 2],
        [0, 0, 0],
        [2, -3, 1],
        [2, 1, -3],
        [-2, 1, 1],
    ]);
    assert!(g.is_zero_sum());
    let h = game222([
        [0, 0, 0],
        [0, 0, 0],
        [0, 0, 0],
        [1, 1, 1],
        [0, 0, 0],
        [1, 1, 1],
        [1, 1, 1],
        [2, 2, 2],
    ]);
    assert!(!h.is_zero_sum());
}

#[test]
fn symmetry_check_catches_violations() {
    // u_i = own action index: symmetric
    let labels = vec![labels2(["a", "b"]), labels2(["a", "b"])];
    let sym = StrategicGame::from_fn(labels.clone(), |p| {
        vec![rat_int(p[0] as i64), rat_int(p[1] as i64)]
    })
    .unwrap();
    assert!(sym.is_symmetric_game());

    // u_1 = other player's action: not symmetric unless matched by u_2
    let asym = StrategicGame::from_fn(labels, |p| {
        vec![rat_int(p[1] as i64), rat_int(p[1] as i64)]
    })
    .unwrap();
    assert!(!asym.is_symmetric_game());
    assert!(matches!(
        asym.symmetry_violation(),
        SymmetryCheck::Violation { .. }
    ));

    let uneven = StrategicGame::new(
        vec![labels2(["a", "b"]), vec!["a".into()]],
        vec![vec![rat_int(0), rat_int(0)], vec![rat_int(0), rat_int(0)]],
    )
    .unwrap();
    assert_eq!(uneven.symmetry_violation(), SymmetryCheck::UnequalActionSets);
}

#[test]
fn total_payoff_transforms() {
    let g = game222([
        [2, -1, -1],
        [1, -1, 0],
        [1, 0, -1],
        [-4, 2, 2],
        [0, 0, 0],
        [2, -3, 1],
        [2, 1, -3],
        [-2, 1, 1],
    ]);
    let neg = g.transform_payoffs(&PayoffTransform::TotalNeg).unwrap();
    let pos = g.transform_payoffs(&PayoffTransform::TotalPos).unwrap();
    for profile in g.profiles() {
        let u1 = &g.payoff(&profile)[0];
        let n = neg.payoff(&profile);
        assert_eq!(n[0], u1.clone());
        assert_eq!(n.iter().sum::<Rational>(), -u1);
        let p = pos.payoff(&profile);
        assert_eq!(p[0], u1 * rat_int(3));
        assert_eq!(p.iter().sum::<Rational>(), u1.clone());
    }
}

#[test]
fn shift_scale_preserves_best_replies() {
    let g = game222([
        [2, -1, -1],
        [1, -1, 0],
        [1, 0, -1],
        [-4, 2, 2],
        [0, 0, 0],
        [2, -3, 1],
        [2, 1, -3],
        [-2, 1, 1],
    ]);
    let t = g
        .transform_payoffs(&PayoffTransform::ShiftScale {
            alpha: rat(3, 2),
            beta: rat(-7, 3),
            players: None,
        })
        .unwrap();
    // same ordering of any two cells for any player
    for a in g.profiles() {
        for b in g.profiles() {
            for i in 0..3 {
                assert_eq!(
                    g.payoff(&a)[i].cmp(&g.payoff(&b)[i]),
                    t.payoff(&a)[i].cmp(&t.payoff(&b)[i])
                );
            }
        }
    }
    assert!(g
        .transform_payoffs(&PayoffTransform::ShiftScale {
            alpha: rat_int(0),
            beta: rat_int(1),
            players: None,
        })
        .is_err());
}

#[test]
fn game_files_round_trip_bit_exactly() {
    let g = game222([
        [2, -1, -1],
        [1, -1, 0],
        [1, 0, -1],
        [-4, 2, 2],
        [0, 0, 0],
        [2, -3, 1],
        [2, 1, -3],
        [-2, 1, 1],
    ]);
    let text = write_game(&g);
    let g2 = parse_game(&text).unwrap();
    assert_eq!(g, g2);
    assert_eq!(write_game(&g2), text);

    let with_comments = write_game_with_comments(&g, &["M 3/1".into(), "K 2/3".into()]);
    let g3 = parse_game(&with_comments).unwrap();
    assert_eq!(g, g3);
}

#[test]
fn game_parser_reports_line_numbers() {
    let bad = "game 1\nplayers 2\nactions 2 2\nlabels 1 a b\nlabels 2 a b\npayoff 1 1 : 0/1\n";
    let err = parse_game(bad).unwrap_err();
    assert!(err.to_string().contains("line 6"), "{err}");

    let dup = "game 1\nplayers 1\nactions 1\nlabels 1 a\npayoff 1 : 0/1\npayoff 1 : 0/1\n";
    assert!(parse_game(dup).is_err());

    let missing = "game 1\nplayers 1\nactions 2\nlabels 1 a b\npayoff 1 : 0/1\n";
    assert!(parse_game(missing).is_err());
}

#[test]
fn profiles_round_trip_including_algebraic_entries() {
    let q = |a: (i64, i64), b: (i64, i64), d: u64| QuadAlgebraic::new(rat(a.0, a.1), rat(b.0, b.1), d).unwrap();
    let p = MixedProfile::new(vec![
        vec![q((3, 1), (-1, 1), 6), q((-2, 1), (1, 1), 6)],
        vec![QuadAlgebraic::rational(rat(1, 2)), QuadAlgebraic::rational(rat(1, 2))],
    ])
    .unwrap();
    let text = write_profile(&p);
    let p2 = parse_profile(&text).unwrap();
    assert_eq!(p, p2);
    assert_eq!(write_profile(&p2), text);
}

#[test]
fn invalid_profiles_are_rejected() {
    let half = QuadAlgebraic::rational(rat(1, 2));
    assert!(MixedProfile::new(vec![vec![half.clone()]]).is_err()); // sums to 1/2
    let neg = QuadAlgebraic::rational(rat(-1, 2));
    let three_halves = QuadAlgebraic::rational(rat(3, 2));
    assert!(MixedProfile::new(vec![vec![neg, three_halves]]).is_err());
}

proptest! {
    #[test]
    fn random_games_round_trip(seed_payoffs in proptest::collection::vec(-9i64..=9, 8),
                               denoms in proptest::collection::vec(1i64..=4, 8)) {
        let labels = vec![labels2(["a", "b"]), labels2(["l", "r"]), labels2(["x", "y"])];
        let payoffs: Vec<Vec<Rational>> = (0..8)
            .map(|c| {
                (0..3)
                    .map(|i| rat(seed_payoffs[(c + i) % 8], denoms[(c * 3 + i) % 8]))
                    .collect()
            })
            .collect();
        let g = StrategicGame::new(labels, payoffs).unwrap();
        let text = write_game(&g);
        let g2 = parse_game(&text).unwrap();
        prop_assert_eq!(&g, &g2);
        prop_assert_eq!(write_game(&g2), text);
    }

    #[test]
    fn mixing_is_multilinear_in_each_player(pn in 1i64..=7, qn in 1i64..=7) {
        // u_i(x with player pinned) interpolates linearly in the pin weight
        let g = game222([
            [2, -1, -1], [1, -1, 0], [1, 0, -1], [-4, 2, 2],
            [0, 0, 0], [2, -3, 1], [2, 1, -3], [-2, 1, 1],
        ]);
        let w = |n: i64, d: i64| QuadAlgebraic::rational(rat(n, d));
        let x = MixedProfile::new(vec![
            vec![w(pn, 8), w(8 - pn, 8)],
            vec![w(qn, 8), w(8 - qn, 8)],
            vec![w(3, 8), w(5, 8)],
        ]).unwrap();
        let full = g.eval_payoff(&x).unwrap();
        for i in 0..3 {
            let hi = g.eval_with_overrides(&x, &[(0, 0)]).unwrap();
            let lo = g.eval_with_overrides(&x, &[(0, 1)]).unwrap();
            let blend = hi[i]
                .try_mul(&w(pn, 8)).unwrap()
                .try_add(&lo[i].try_mul(&w(8 - pn, 8)).unwrap())
                .unwrap();
            prop_assert_eq!(&blend, &full[i]);
        }
    }
}
