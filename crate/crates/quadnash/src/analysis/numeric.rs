//! Floating-point Newton iteration for support patterns the exact solvers
//! do not cover: three mixing players with at least one support of size
//! three or more. Solutions found here are flagged `Numeric`.

use super::enumerate::{EnumerationOptions, Exactness, FoundEquilibrium};
use crate::error::Result;
use crate::exact::Rational;
use crate::game::{MixedProfile, StrategicGame};
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STARTS: usize = 48;
const MAX_ITERS: usize = 100;
const INTERIOR_EPS: f64 = 1e-9;

pub(super) fn newton_pattern(
    game: &StrategicGame,
    supports: &[Vec<usize>; 3],
    options: &EnumerationOptions,
    pattern_idx: u64,
    found: &mut Vec<FoundEquilibrium>,
) -> Result<()> {
    let sizes: Vec<usize> = supports.iter().map(|s| s.len()).collect();
    let dim: usize = sizes.iter().map(|s| s - 1).sum();
    // payoff tensor restricted to the support actions
    let mut tensor = vec![[0.0f64; 3]; sizes[0] * sizes[1] * sizes[2]];
    for (i0, &a0) in supports[0].iter().enumerate() {
        for (i1, &a1) in supports[1].iter().enumerate() {
            for (i2, &a2) in supports[2].iter().enumerate() {
                let pay = game.payoff(&[a0, a1, a2]);
                let cell = &mut tensor[(i0 * sizes[1] + i1) * sizes[2] + i2];
                for p in 0..3 {
                    cell[p] = pay[p].to_f64().unwrap_or(f64::NAN);
                }
            }
        }
    }
    let at = |i0: usize, i1: usize, i2: usize, p: usize| tensor[(i0 * sizes[1] + i1) * sizes[2] + i2][p];

    // full per-player weight vectors over support indices from the
    // unknown vector (coordinate 0 is the dependent one)
    let unpack = |theta: &[f64]| -> [Vec<f64>; 3] {
        let mut out: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        let mut off = 0;
        for p in 0..3 {
            let mut v = vec![0.0; sizes[p]];
            let mut rest = 1.0;
            for i in 1..sizes[p] {
                v[i] = theta[off];
                rest -= theta[off];
                off += 1;
            }
            v[0] = rest;
            out[p] = v;
        }
        out
    };

    // residual: per player, payoff of each support action minus the first
    let residual = |y: &[Vec<f64>; 3]| -> Vec<f64> {
        let mut r = Vec::with_capacity(dim);
        for p in 0..3 {
            let (q, s) = ((p + 1) % 3, (p + 2) % 3);
            for i in 1..sizes[p] {
                let mut acc = 0.0;
                for (j, wq) in y[q].iter().enumerate() {
                    for (k, ws) in y[s].iter().enumerate() {
                        let mut idx = [0usize; 3];
                        idx[p] = i;
                        idx[q] = j;
                        idx[s] = k;
                        let hi = at(idx[0], idx[1], idx[2], p);
                        idx[p] = 0;
                        let lo = at(idx[0], idx[1], idx[2], p);
                        acc += wq * ws * (hi - lo);
                    }
                }
                r.push(acc);
            }
        }
        r
    };

    let jacobian = |y: &[Vec<f64>; 3]| -> Vec<Vec<f64>> {
        let mut jac = vec![vec![0.0; dim]; dim];
        let mut row = 0;
        for p in 0..3 {
            for i in 1..sizes[p] {
                // derivative wrt theta[q][j] and theta[s][k]
                let mut col = 0;
                for dp in 0..3 {
                    for dj in 1..sizes[dp] {
                        if dp != p {
                            let other = 3 - p - dp;
                            let mut acc = 0.0;
                            for (k, w) in y[other].iter().enumerate() {
                                let cell = |pi: usize, di: usize| -> f64 {
                                    let mut idx = [0usize; 3];
                                    idx[p] = pi;
                                    idx[dp] = di;
                                    idx[other] = k;
                                    at(idx[0], idx[1], idx[2], p)
                                };
                                acc += w * ((cell(i, dj) - cell(i, 0)) - (cell(0, dj) - cell(0, 0)));
                            }
                            jac[row][col] = acc;
                        }
                        col += 1;
                    }
                }
                row += 1;
            }
        }
        jac
    };

    let norm2 = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(
        options
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(pattern_idx),
    );

    let mut solutions: Vec<Vec<f64>> = Vec::new();
    for start in 0..STARTS {
        let mut theta = Vec::with_capacity(dim);
        for p in 0..3 {
            let mut w: Vec<f64> = (0..sizes[p])
                .map(|_| if start == 0 { 1.0 } else { rng.gen_range(0.05..1.0) })
                .collect();
            let total: f64 = w.iter().sum();
            for v in &mut w {
                *v /= total;
            }
            theta.extend_from_slice(&w[1..]);
        }

        let mut converged = false;
        for _ in 0..MAX_ITERS {
            let y = unpack(&theta);
            let r = residual(&y);
            if r.iter().all(|v| v.abs() < options.tolerance) {
                converged = true;
                break;
            }
            let jac = jacobian(&y);
            let Some(step) = solve_dense(&jac, &r) else {
                break;
            };
            // damped update on the squared residual
            let base = norm2(&r);
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let trial: Vec<f64> = theta.iter().zip(&step).map(|(t, d)| t - alpha * d).collect();
                let rt = residual(&unpack(&trial));
                if norm2(&rt) < base {
                    theta = trial;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if !converged {
            continue;
        }
        let y = unpack(&theta);
        if y.iter().any(|v| v.iter().any(|&w| w < INTERIOR_EPS)) {
            continue;
        }
        if !off_support_ok(game, supports, &y) {
            continue;
        }
        if solutions
            .iter()
            .any(|s| s.iter().zip(&theta).all(|(a, b)| (a - b).abs() < 1e-9))
        {
            continue;
        }
        solutions.push(theta.clone());

        if let Some(profile) = rationalize(game, supports, &y) {
            if !found.iter().any(|f| f.profile == profile) {
                found.push(FoundEquilibrium {
                    profile,
                    exactness: Exactness::Numeric,
                    isolated: true,
                });
            }
        }
    }
    Ok(())
}

/// Off-support deviation gains, evaluated in floating point against the
/// mixed payoff of the support actions.
fn off_support_ok(game: &StrategicGame, supports: &[Vec<usize>; 3], y: &[Vec<f64>; 3]) -> bool {
    let counts = game.action_counts();
    let expand = |p: usize| -> Vec<f64> {
        let mut v = vec![0.0; counts[p]];
        for (i, &a) in supports[p].iter().enumerate() {
            v[a] = y[p][i];
        }
        v
    };
    let full: Vec<Vec<f64>> = (0..3).map(expand).collect();
    for p in 0..3 {
        let (q, s) = ((p + 1) % 3, (p + 2) % 3);
        let value_of = |a: usize| -> f64 {
            let mut acc = 0.0;
            for (b, wq) in full[q].iter().enumerate() {
                if *wq == 0.0 {
                    continue;
                }
                for (c, ws) in full[s].iter().enumerate() {
                    if *ws == 0.0 {
                        continue;
                    }
                    let mut idx = [0usize; 3];
                    idx[p] = a;
                    idx[q] = b;
                    idx[s] = c;
                    acc += wq * ws * game.payoff(&idx)[p].to_f64().unwrap_or(f64::NAN);
                }
            }
            acc
        };
        let base = value_of(supports[p][0]);
        for a in 0..counts[p] {
            if supports[p].contains(&a) {
                continue;
            }
            if value_of(a) > base + INTERIOR_EPS {
                return false;
            }
        }
    }
    true
}

/// Convert the float solution to an exact profile: every dependent
/// coordinate is recomputed so each strategy sums to one exactly.
fn rationalize(game: &StrategicGame, supports: &[Vec<usize>; 3], y: &[Vec<f64>; 3]) -> Option<MixedProfile> {
    let counts = game.action_counts();
    let mut strategies = Vec::with_capacity(3);
    for p in 0..3 {
        let mut v = vec![crate::exact::QuadAlgebraic::zero(); counts[p]];
        let mut rest = Rational::from_integer(1.into());
        for (i, &a) in supports[p].iter().enumerate().skip(1) {
            let r = Rational::from_float(y[p][i])?;
            rest -= &r;
            v[a] = crate::exact::QuadAlgebraic::rational(r);
        }
        if rest <= Rational::from_integer(0.into()) {
            return None;
        }
        v[supports[p][0]] = crate::exact::QuadAlgebraic::rational(rest);
        strategies.push(v);
    }
    MixedProfile::new(strategies).ok()
}

/// Gaussian elimination with partial pivoting; `None` on a singular matrix.
fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(*rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[pivot][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = m[r][n];
        for c in r + 1..n {
            acc -= m[r][c] * x[c];
        }
        x[r] = acc / m[r][r];
    }
    Some(x)
}
