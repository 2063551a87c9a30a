//! Quadratic polynomial systems over box variables and their bilinear,
//! homogeneous images over a product of simplices.
//!
//! The normalization step substitutes x_i = 8n z_i - 2 and pins a fresh
//! variable to 1/2, which moves every box solution into the open promise
//! region (all coordinates in (0, 1/2], coordinate sum in [1/2, 1)).
//! Bilinearization splits the two sides of every product, homogenizes with
//! the simplex constraint, and appends per-variable coupling equations that
//! force the two sides to agree on the simplex.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{QuadAlgebraic, Rational};

/// One monomial `coeff * x_i * x_j`. Index 0 marks an absent factor, so
/// (c,0,0) is a constant and (c,0,j) is linear. Invariant: i <= j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: BigInt,
    pub i: usize,
    pub j: usize,
}

impl Term {
    pub fn new(coeff: impl Into<BigInt>, i: usize, j: usize) -> Self {
        Self { coeff: coeff.into(), i, j }
    }
}

/// A system of quadratic equations `q_k(x) = 0` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticSystem {
    var_count: usize,
    equations: Vec<Vec<Term>>,
}

impl QuadraticSystem {
    pub fn new(var_count: usize, equations: Vec<Vec<Term>>) -> Result<Self> {
        if var_count == 0 {
            return Err(Error::BadParameter("system needs at least one variable".into()));
        }
        if equations.is_empty() {
            return Err(Error::BadParameter("system needs at least one equation".into()));
        }
        for eq in &equations {
            for t in eq {
                if t.i > t.j {
                    return Err(Error::BadParameter(format!(
                        "term indices must satisfy i <= j, got ({}, {})",
                        t.i, t.j
                    )));
                }
                if t.j > var_count {
                    return Err(Error::IndexOutOfRange(format!(
                        "term index {} exceeds variable count {var_count}",
                        t.j
                    )));
                }
            }
        }
        let equations = equations.into_iter().map(canonical_terms).collect();
        Ok(Self { var_count, equations })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn equation_count(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[Vec<Term>] {
        &self.equations
    }

    /// Exact evaluation of every equation at the given point.
    pub fn eval(&self, point: &[QuadAlgebraic]) -> Result<Vec<QuadAlgebraic>> {
        if point.len() != self.var_count {
            return Err(Error::ShapeMismatch);
        }
        let one = QuadAlgebraic::one();
        let mut out = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            let mut acc = QuadAlgebraic::zero();
            for t in eq {
                let mut v = QuadAlgebraic::rational(Rational::from_integer(t.coeff.clone()));
                if t.i > 0 {
                    v = v.try_mul(&point[t.i - 1])?;
                } else {
                    v = v.try_mul(&one)?;
                }
                if t.j > 0 {
                    v = v.try_mul(&point[t.j - 1])?;
                }
                acc = acc.try_add(&v)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Substitutes x_i = 8n z_i - 2 into every equation (n = current variable
    /// count), appends the pin equation 2 z_{n+1} - 1 = 0, and returns the
    /// system over n+1 variables. Box solutions land in the promise region;
    /// see [`promise_point`].
    pub fn normalize_to_promise(&self) -> QuadraticSystem {
        let n = self.var_count;
        let s = BigInt::from(8 * n as i64); // the substitution scale
        let mut equations: Vec<Vec<Term>> = Vec::with_capacity(self.equations.len() + 1);
        for eq in &self.equations {
            let mut out: Vec<Term> = Vec::new();
            for t in eq {
                let c = &t.coeff;
                match (t.i, t.j) {
                    (0, 0) => out.push(Term { coeff: c.clone(), i: 0, j: 0 }),
                    (0, j) => {
                        out.push(Term { coeff: c * &s, i: 0, j });
                        out.push(Term { coeff: c * -2, i: 0, j: 0 });
                    }
                    (i, j) => {
                        out.push(Term { coeff: c * &s * &s, i, j });
                        out.push(Term { coeff: c * &s * -2, i: 0, j: i });
                        out.push(Term { coeff: c * &s * -2, i: 0, j });
                        out.push(Term { coeff: c * 4, i: 0, j: 0 });
                    }
                }
            }
            equations.push(canonical_terms(out));
        }
        equations.push(vec![Term::new(2, 0, n + 1), Term::new(-1, 0, 0)]);
        QuadraticSystem { var_count: n + 1, equations }
    }

    /// Appends a fresh variable w and the equation 2 w^2 - 1 = 0, whose only
    /// real roots are +-1/sqrt(2). Both lie inside the solution box, so the
    /// augmented system is exactly as solvable as the original, but every
    /// solution has an irrational coordinate.
    pub fn augment_irrational(&self) -> QuadraticSystem {
        let w = self.var_count + 1;
        let mut equations = self.equations.clone();
        equations.push(vec![Term::new(2, w, w), Term::new(-1, 0, 0)]);
        QuadraticSystem { var_count: w, equations }
    }

    /// Splits products across the two simplex sides (x_i x_j -> x_i y_j),
    /// homogenizes lower-degree terms with the simplex sums, and appends one
    /// coupling equation per variable. Output dimension is n+1.
    pub fn bilinearize_homogenize(&self) -> BilinearSystem {
        let n = self.var_count;
        let dim = n + 1;
        let mut matrices = Vec::with_capacity(self.equations.len() + n);
        for eq in &self.equations {
            let mut m = vec![vec![BigInt::zero(); dim]; dim];
            for t in eq {
                match (t.i, t.j) {
                    (0, 0) => {
                        for row in m.iter_mut() {
                            for cell in row.iter_mut() {
                                *cell += &t.coeff;
                            }
                        }
                    }
                    (0, j) => {
                        for cell in m[j - 1].iter_mut() {
                            *cell += &t.coeff;
                        }
                    }
                    (i, j) => m[i - 1][j - 1] += &t.coeff,
                }
            }
            matrices.push(m);
        }
        for i in 0..n {
            let mut m = vec![vec![BigInt::zero(); dim]; dim];
            for k in 0..dim {
                if k != i {
                    m[i][k] += 1;
                    m[k][i] -= 1;
                }
            }
            matrices.push(m);
        }
        BilinearSystem { dim, matrices }
    }
}

fn canonical_terms(terms: Vec<Term>) -> Vec<Term> {
    let mut sorted = terms;
    sorted.sort_by_key(|t| (t.i, t.j));
    let mut out: Vec<Term> = Vec::with_capacity(sorted.len());
    for t in sorted {
        match out.last_mut() {
            Some(last) if last.i == t.i && last.j == t.j => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

/// Where the promise substitution sends a box point: z_i = (x_i + 2) / (8n),
/// plus the pinned coordinate 1/2.
pub fn promise_point(x: &[Rational]) -> Vec<Rational> {
    let n = x.len();
    let scale = Rational::from_integer(BigInt::from(8 * n as i64));
    let two = Rational::from_integer(2.into());
    let mut z: Vec<Rational> = x.iter().map(|xi| (xi + &two) / &scale).collect();
    z.push(Rational::new(1.into(), 2.into()));
    z
}

/// Embeds a corner-simplex point (nonnegative, sum <= 1) into the standard
/// simplex by appending the slack coordinate.
pub fn embed_corner(z: &[QuadAlgebraic]) -> Result<Vec<QuadAlgebraic>> {
    let mut sum = QuadAlgebraic::zero();
    for zi in z {
        if zi.is_negative() {
            return Err(Error::BadParameter("corner-simplex point has a negative coordinate".into()));
        }
        sum = sum.try_add(zi)?;
    }
    let slack = QuadAlgebraic::one().try_sub(&sum)?;
    if slack.is_negative() {
        return Err(Error::BadParameter("corner-simplex point has coordinate sum above one".into()));
    }
    let mut out = z.to_vec();
    out.push(slack);
    Ok(out)
}

/// Bilinear forms q_k(x, y) = x^T A_k y over a pair of (n+1)-simplices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BilinearSystem {
    dim: usize,
    matrices: Vec<Vec<Vec<BigInt>>>,
}

impl BilinearSystem {
    pub fn new(dim: usize, matrices: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadParameter("bilinear system needs positive dimension".into()));
        }
        if matrices.is_empty() {
            return Err(Error::BadParameter("bilinear system needs at least one matrix".into()));
        }
        for m in &matrices {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::ShapeMismatch);
            }
        }
        Ok(Self { dim, matrices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Vec<Vec<BigInt>>] {
        &self.matrices
    }

    pub fn matrix(&self, k: usize) -> &Vec<Vec<BigInt>> {
        &self.matrices[k]
    }

    pub fn entry(&self, k: usize, i: usize, j: usize) -> &BigInt {
        &self.matrices[k][i][j]
    }

    /// Exact evaluation of every form at (x, y).
    pub fn eval(&self, x: &[QuadAlgebraic], y: &[QuadAlgebraic]) -> Result<Vec<QuadAlgebraic>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::ShapeMismatch);
        }
        let mut out = Vec::with_capacity(self.matrices.len());
        for m in &self.matrices {
            let mut acc = QuadAlgebraic::zero();
            for (i, row) in m.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let mut rowsum = QuadAlgebraic::zero();
                for (j, c) in row.iter().enumerate() {
                    if c.is_zero() || y[j].is_zero() {
                        continue;
                    }
                    let term = QuadAlgebraic::rational(Rational::from_integer(c.clone()))
                        .try_mul(&y[j])?;
                    rowsum = rowsum.try_add(&term)?;
                }
                acc = acc.try_add(&x[i].try_mul(&rowsum)?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// True when (x, y) annihilates every form.
    pub fn is_solution(&self, x: &[QuadAlgebraic], y: &[QuadAlgebraic]) -> Result<bool> {
        Ok(self.eval(x, y)?.iter().all(|v| v.is_zero()))
    }
}

// ---------------------------------------------------------------------------
// text formats

fn err_at(line_no: usize, msg: impl std::fmt::Display) -> Error {
    Error::Syntax(format!("line {line_no}: {msg}"))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_qsys(sys: &QuadraticSystem) -> String {
    let mut out = String::from("qsys 1\n");
    out.push_str(&format!("vars {}\n", sys.var_count));
    for eq in &sys.equations {
        out.push_str("eq");
        for t in eq {
            out.push_str(&format!(" {}:{}:{}", t.coeff, t.i, t.j));
        }
        out.push('\n');
    }
    out
}

pub fn parse_qsys(text: &str) -> Result<QuadraticSystem> {
    let mut lines = content_lines(text);
    let (n0, header) = lines.next().ok_or_else(|| err_at(1, "empty system file"))?;
    if header != "qsys 1" {
        return Err(err_at(n0, format!("expected `qsys 1` header, got `{header}`")));
    }
    let (n1, vars_line) = lines.next().ok_or_else(|| err_at(n0, "missing vars line"))?;
    let vars: usize = vars_line
        .strip_prefix("vars ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err_at(n1, "expected `vars <n>`"))?;
    let mut equations = Vec::new();
    for (ln, line) in lines {
        let rest = line
            .strip_prefix("eq")
            .ok_or_else(|| err_at(ln, format!("unrecognized line `{line}`")))?;
        let mut terms = Vec::new();
        for tok in rest.split_whitespace() {
            let parts: Vec<&str> = tok.split(':').collect();
            if parts.len() != 3 {
                return Err(err_at(ln, format!("bad term `{tok}`, expected c:i:j")));
            }
            let coeff: BigInt = parts[0]
                .parse()
                .map_err(|_| err_at(ln, format!("bad coefficient in `{tok}`")))?;
            let i: usize = parts[1]
                .parse()
                .map_err(|_| err_at(ln, format!("bad index in `{tok}`")))?;
            let j: usize = parts[2]
                .parse()
                .map_err(|_| err_at(ln, format!("bad index in `{tok}`")))?;
            terms.push(Term { coeff, i, j });
        }
        equations.push(terms);
    }
    QuadraticSystem::new(vars, equations)
}

pub fn write_bsys(sys: &BilinearSystem) -> String {
    let mut out = String::from("bsys 1\n");
    out.push_str(&format!("dim {}\n", sys.dim));
    for m in &sys.matrices {
        out.push_str("mat\n");
        for row in m {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_bsys(text: &str) -> Result<BilinearSystem> {
    let mut lines = content_lines(text).peekable();
    let (n0, header) = lines.next().ok_or_else(|| err_at(1, "empty system file"))?;
    if header != "bsys 1" {
        return Err(err_at(n0, format!("expected `bsys 1` header, got `{header}`")));
    }
    let (n1, dim_line) = lines.next().ok_or_else(|| err_at(n0, "missing dim line"))?;
    let dim: usize = dim_line
        .strip_prefix("dim ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err_at(n1, "expected `dim <n>`"))?;
    let mut matrices = Vec::new();
    while let Some((ln, line)) = lines.next() {
        if line != "mat" {
            return Err(err_at(ln, format!("expected `mat`, got `{line}`")));
        }
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (rln, row_line) = lines
                .next()
                .ok_or_else(|| err_at(ln, "matrix block ended early"))?;
            let row: Vec<BigInt> = row_line
                .split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|_| err_at(rln, format!("bad integer `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != dim {
                return Err(err_at(rln, format!("expected {dim} entries, got {}", row.len())));
            }
            rows.push(row);
        }
        matrices.push(rows);
    }
    BilinearSystem::new(dim, matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn q(r: Rational) -> QuadAlgebraic {
        QuadAlgebraic::rational(r)
    }

    fn qv(v: &[Rational]) -> Vec<QuadAlgebraic> {
        v.iter().cloned().map(q).collect()
    }

    #[test]
    fn term_invariants_are_enforced() {
        assert!(QuadraticSystem::new(1, vec![vec![Term::new(1, 2, 1)]]).is_err());
        assert!(QuadraticSystem::new(1, vec![vec![Term::new(1, 1, 2)]]).is_err());
        assert!(QuadraticSystem::new(0, vec![vec![]]).is_err());
        assert!(QuadraticSystem::new(1, vec![]).is_err());
    }

    #[test]
    fn duplicate_terms_merge_canonically() {
        let sys = QuadraticSystem::new(
            2,
            vec![vec![
                Term::new(3, 1, 2),
                Term::new(-1, 0, 1),
                Term::new(2, 1, 2),
                Term::new(1, 0, 1),
            ]],
        )
        .unwrap();
        assert_eq!(sys.equations()[0], vec![Term::new(5, 1, 2)]);
    }

    #[test]
    fn promise_substitution_maps_box_points_into_the_region() {
        // n=1, x=0 -> z=(1/4, 1/2)
        assert_eq!(promise_point(&[rat_int(0)]), vec![rat(1, 4), rat(1, 2)]);
        // n=2, x=(-1,1) -> z=(1/16, 3/16, 1/2)
        assert_eq!(
            promise_point(&[rat_int(-1), rat_int(1)]),
            vec![rat(1, 16), rat(3, 16), rat(1, 2)]
        );
    }

    #[test]
    fn normalized_system_vanishes_exactly_on_mapped_solutions() {
        // x1^2 - x1 = 0 with solutions 0 and 1
        let sys = QuadraticSystem::new(
            1,
            vec![vec![Term::new(1, 1, 1), Term::new(-1, 0, 1)]],
        )
        .unwrap();
        let norm = sys.normalize_to_promise();
        assert_eq!(norm.var_count(), 2);
        assert_eq!(norm.equation_count(), 2);
        for x in [rat_int(0), rat_int(1)] {
            let z = promise_point(&[x]);
            let vals = norm.eval(&qv(&z)).unwrap();
            assert!(vals.iter().all(|v| v.is_zero()), "{vals:?}");
        }
        // non-solution stays a non-solution
        let z = promise_point(&[rat(1, 2)]);
        let vals = norm.eval(&qv(&z)).unwrap();
        assert!(!vals[0].is_zero());
        // pin equation forces the last coordinate
        let z_bad = vec![rat(1, 4), rat(1, 3)];
        let vals = norm.eval(&qv(&z_bad)).unwrap();
        assert!(!vals[1].is_zero());
    }

    #[test]
    fn irrational_augmentation_pins_one_over_sqrt2() {
        let sys = QuadraticSystem::new(
            1,
            vec![vec![Term::new(1, 0, 1)]], // x1 = 0
        )
        .unwrap();
        let aug = sys.augment_irrational();
        assert_eq!(aug.var_count(), 2);
        let root = QuadAlgebraic::sqrt_of(&rat(1, 2)).unwrap();
        let point = vec![q(rat_int(0)), root.clone()];
        assert!(aug.eval(&point).unwrap().iter().all(|v| v.is_zero()));
        let neg = vec![q(rat_int(0)), root.neg()];
        assert!(aug.eval(&neg).unwrap().iter().all(|v| v.is_zero()));
        let bad = vec![q(rat_int(0)), q(rat(7, 10))];
        assert!(!aug.eval(&bad).unwrap()[1].is_zero());
    }

    #[test]
    fn bilinearization_matches_the_worked_example() {
        // {x1^2 - x1 = 0}, n=1: equation matrix [[0,-1],[0,0]],
        // coupling [[0,1],[-1,0]]
        let sys = QuadraticSystem::new(
            1,
            vec![vec![Term::new(1, 1, 1), Term::new(-1, 0, 1)]],
        )
        .unwrap();
        let b = sys.bilinearize_homogenize();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.matrix_count(), 2);
        let m0: Vec<Vec<BigInt>> = vec![
            vec![BigInt::from(0), BigInt::from(-1)],
            vec![BigInt::from(0), BigInt::from(0)],
        ];
        assert_eq!(b.matrix(0), &m0);
        let m1: Vec<Vec<BigInt>> = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(-1), BigInt::from(0)],
        ];
        assert_eq!(b.matrix(1), &m1);

        // its two simplex solutions
        for sol in [[rat_int(1), rat_int(0)], [rat_int(0), rat_int(1)]] {
            let v = qv(&sol);
            assert!(b.is_solution(&v, &v).unwrap());
        }
        // an off-solution point
        let v = qv(&[rat(1, 2), rat(1, 2)]);
        assert!(!b.is_solution(&v, &v).unwrap());
    }

    #[test]
    fn bilinear_forms_agree_with_quadratic_evaluation_on_the_diagonal() {
        // q(x1,x2) = 2 x1 x2 - 3 x1 + 1, evaluated on corner-simplex points
        let sys = QuadraticSystem::new(
            2,
            vec![vec![Term::new(2, 1, 2), Term::new(-3, 0, 1), Term::new(1, 0, 0)]],
        )
        .unwrap();
        let b = sys.bilinearize_homogenize();
        let samples = [
            vec![rat(1, 3), rat(1, 3)],
            vec![rat(1, 2), rat(1, 4)],
            vec![rat_int(0), rat(2, 3)],
            vec![rat(1, 5), rat_int(0)],
        ];
        for z in samples {
            let quad = sys.eval(&qv(&z)).unwrap();
            let e = embed_corner(&qv(&z)).unwrap();
            let bil = b.eval(&e, &e).unwrap();
            assert_eq!(quad[0], bil[0], "disagree at {z:?}");
            // coupling forms vanish whenever the two sides coincide
            for k in 1..b.matrix_count() {
                assert!(bil[k].is_zero());
            }
        }
    }

    #[test]
    fn qsys_round_trips_with_line_errors() {
        let text = "qsys 1\nvars 2\neq -1:0:1 1:1:1\neq -1:0:0 2:2:2\n";
        let sys = parse_qsys(text).unwrap();
        assert_eq!(write_qsys(&sys), text);
        // non-canonical term order parses to the same system
        let shuffled = parse_qsys("qsys 1\nvars 2\neq 1:1:1 -1:0:1\neq 2:2:2 -1:0:0\n").unwrap();
        assert_eq!(shuffled, sys);
        let err = parse_qsys("qsys 1\nvars 1\neq 1:1\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_qsys("qsys 2\nvars 1\neq 1:0:0\n").is_err());
        assert!(parse_qsys("qsys 1\nvars 1\neq 1:0:2\n").is_err());
    }

    #[test]
    fn bsys_round_trips() {
        let sys = QuadraticSystem::new(
            1,
            vec![vec![Term::new(1, 1, 1), Term::new(-1, 0, 1)]],
        )
        .unwrap();
        let b = sys.bilinearize_homogenize();
        let text = write_bsys(&b);
        let b2 = parse_bsys(&text).unwrap();
        assert_eq!(b, b2);
        assert_eq!(write_bsys(&b2), text);
        assert!(parse_bsys("bsys 1\ndim 2\nmat\n0 1\n").is_err());
        assert!(parse_bsys("bsys 1\ndim 2\nmat\n0 1 2\n0 0\n").is_err());
    }
}
