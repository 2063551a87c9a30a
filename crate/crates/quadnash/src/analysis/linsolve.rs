//! Exact rational linear algebra: Gaussian elimination producing a
//! particular solution together with a nullspace basis, so callers can see
//! whole solution components instead of a single point.

use crate::exact::Rational;
use num_traits::Zero;

pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
}

/// Solve `A x = b` over the rationals. Returns `None` when inconsistent.
pub fn solve_affine(a: &[Vec<Rational>], b: &[Rational]) -> Option<AffineSolution> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    debug_assert!(a.iter().all(|r| r.len() == cols));
    debug_assert_eq!(b.len(), rows);

    // Reduced row echelon form on the augmented matrix.
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..=cols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    m[r][c] = &m[r][c] - &(&f * &m[row][c]);
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    // Inconsistent iff a zero row has nonzero rhs.
    for r in row..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }

    let mut is_pivot = vec![false; cols];
    for &c in &pivot_col_of_row {
        is_pivot[c] = true;
    }
    let mut particular = vec![Rational::zero(); cols];
    for (r, &c) in pivot_col_of_row.iter().enumerate() {
        particular[c] = m[r][cols].clone();
    }
    let mut nullspace = Vec::new();
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::from_integer(1.into());
        for (r, &c) in pivot_col_of_row.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        nullspace.push(v);
    }
    Some(AffineSolution { particular, nullspace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1 => (2, 1)
        let a = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]];
        let b = vec![rat_int(3), rat_int(1)];
        let s = solve_affine(&a, &b).unwrap();
        assert_eq!(s.particular, vec![rat_int(2), rat_int(1)]);
        assert!(s.nullspace.is_empty());
    }

    #[test]
    fn underdetermined_and_inconsistent() {
        // x + 2y + z = 1 (single equation): 2 free directions
        let a = vec![vec![rat_int(1), rat_int(2), rat_int(1)]];
        let b = vec![rat_int(1)];
        let s = solve_affine(&a, &b).unwrap();
        assert_eq!(s.nullspace.len(), 2);
        for dir in &s.nullspace {
            let dot: Rational = dir[0].clone() + rat_int(2) * &dir[1] + dir[2].clone();
            assert!(dot.is_zero());
        }
        assert_eq!(s.particular[0], rat_int(1));

        let a2 = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(2), rat_int(2)]];
        let b2 = vec![rat_int(1), rat_int(3)];
        assert!(solve_affine(&a2, &b2).is_none());

        // scaled consistent duplicate rows
        let b3 = vec![rat(1, 2), rat_int(1)];
        assert!(solve_affine(&a2, &b3).is_some());
    }
}
