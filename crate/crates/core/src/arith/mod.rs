//! Exact scalar tower: rationals, polynomials and rational functions in the
//! weight parameters, affine constraints, and a parametric linear solver that
//! splits into cases on pivot vanishing.

mod casetree;
mod constraint;
mod poly;
mod scalar;

pub use casetree::{parametric_row_reduce, CaseTree, Leaf, SolveError};
pub use constraint::{constraint_simplify, AffineConstraint, ConstraintKind, Simplified, solve_point};
pub use poly::{ArithError, Monomial, NonlinearFactor, ParamPoly};
pub use scalar::ParamScalar;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True iff `r` is a non-negative integer.
pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.denom().is_one() && !r.is_negative()
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    rational_echelon(rows).len()
}

/// Reduced row echelon form; returns the nonzero rows with their pivot column.
pub fn rational_echelon(rows: &[Vec<Rational>]) -> Vec<(usize, Vec<Rational>)> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut out: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        out.push((c, Vec::new()));
        r += 1;
        if r == m.len() {
            break;
        }
    }
    for (k, entry) in out.iter_mut().enumerate() {
        entry.1 = m[k].clone();
    }
    out
}

/// Basis of the right kernel of a dense rational matrix with `ncols` columns.
pub fn rational_kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let ech = rational_echelon(rows);
    let pivots: Vec<usize> = ech.iter().map(|(c, _)| *c).collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (pc, row) in &ech {
            v[*pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}
