use thiserror::Error;

use super::{constraint_simplify, AffineConstraint, ParamPoly, ParamScalar, Rational, Simplified};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("nonlinear branch: pivot {poly} (row {row}, column {col}) has a non-affine factor")]
    NonlinearBranch { poly: ParamPoly, row: usize, col: usize },
    #[error("matrix shape mismatch: expected {expected} columns, found {found}")]
    Shape { expected: usize, found: usize },
}

/// Result of a parametric solve: a binary tree of affine vanishing tests.
#[derive(Clone, Debug)]
pub struct CaseTree {
    pub unknowns: Vec<String>,
    pub nparams: usize,
    pub root: CaseNode,
}

#[derive(Clone, Debug)]
pub enum CaseNode {
    /// `test` is affine in the parameters still free on this path.
    Split { test: ParamPoly, zero: Box<CaseNode>, nonzero: Box<CaseNode> },
    Leaf(Leaf),
    /// Contradictory assumptions; no parameter point reaches it.
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct Leaf {
    /// Affine equalities on the parameters, reduced echelon form.
    pub equalities: Vec<AffineConstraint>,
    /// Affine polynomials assumed nonzero (in the parameters left free).
    pub inequations: Vec<ParamPoly>,
    /// Eliminated parameter -> affine expression in the free ones.
    pub substitution: Vec<(usize, ParamPoly)>,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    /// Pivot unknown -> combination of free unknowns.
    pub solution: Vec<(usize, Vec<(usize, ParamScalar)>)>,
}

impl Leaf {
    /// Whether the numeric parameter point satisfies this leaf's assumptions.
    pub fn contains(&self, point: &[Rational]) -> bool {
        self.equalities.iter().all(|c| c.holds_at(point))
            && self.inequations.iter().all(|p| !num_traits::Zero::is_zero(&p.eval(point)))
    }

    pub fn is_free(&self, col: usize) -> bool {
        self.free.contains(&col)
    }

    /// Parameters not fixed by the equalities.
    pub fn free_params(&self, nparams: usize) -> Vec<usize> {
        (0..nparams)
            .filter(|v| !self.substitution.iter().any(|(e, _)| e == v))
            .collect()
    }

    /// Completes values of the free parameters to a point on the leaf variety.
    pub fn point_from_free(&self, nparams: usize, free_values: &[Rational]) -> Vec<Rational> {
        let mut point = vec![Rational::default(); nparams];
        for (v, x) in self.free_params(nparams).into_iter().zip(free_values) {
            point[v] = x.clone();
        }
        for (v, e) in &self.substitution {
            point[*v] = e.eval(&point);
        }
        point
    }
}

impl CaseTree {
    pub fn leaves(&self) -> Vec<&Leaf> {
        fn walk<'a>(n: &'a CaseNode, out: &mut Vec<&'a Leaf>) {
            match n {
                CaseNode::Split { zero, nonzero, .. } => {
                    walk(zero, out);
                    walk(nonzero, out);
                }
                CaseNode::Leaf(l) => out.push(l),
                CaseNode::Infeasible => {}
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Follows the tests at a numeric point.
    pub fn descend(&self, point: &[Rational]) -> Option<&Leaf> {
        let mut node = &self.root;
        loop {
            match node {
                CaseNode::Split { test, zero, nonzero } => {
                    node = if num_traits::Zero::is_zero(&test.eval(point)) { zero } else { nonzero };
                }
                CaseNode::Leaf(l) => return Some(l),
                CaseNode::Infeasible => return None,
            }
        }
    }
}

#[derive(Clone)]
struct State {
    m: Vec<Vec<ParamPoly>>,
    pivot_of_row: Vec<Option<usize>>,
    col: usize,
    eqs: Vec<ParamPoly>,
    subst: Vec<(usize, ParamPoly)>,
    ineqs: Vec<ParamPoly>,
}

/// Parametric Gaussian elimination of `rows * x = 0`.
///
/// Columns are processed left to right. Within a column a constant pivot is
/// preferred, then the lowest-degree entry splitting into affine factors,
/// then the lowest row. A non-constant pivot branches on each of its affine
/// factors vanishing; zero branches substitute the factor away.
pub fn parametric_row_reduce(rows: &[Vec<ParamPoly>], unknowns: &[String]) -> Result<CaseTree, SolveError> {
    let ncols = unknowns.len();
    let nparams = rows
        .iter()
        .flatten()
        .next()
        .map_or(0, ParamPoly::nvars);
    for r in rows {
        if r.len() != ncols {
            return Err(SolveError::Shape { expected: ncols, found: r.len() });
        }
    }
    let state = State {
        m: rows.to_vec(),
        pivot_of_row: vec![None; rows.len()],
        col: 0,
        eqs: Vec::new(),
        subst: Vec::new(),
        ineqs: Vec::new(),
    };
    let root = solve(state, ncols, nparams)?;
    Ok(CaseTree { unknowns: unknowns.to_vec(), nparams, root })
}

fn solve(mut st: State, ncols: usize, nparams: usize) -> Result<CaseNode, SolveError> {
    loop {
        let free_rows: Vec<usize> = (0..st.m.len()).filter(|&r| st.pivot_of_row[r].is_none()).collect();
        let Some(c) = (st.col..ncols).find(|&c| free_rows.iter().any(|&r| !st.m[r][c].is_zero())) else {
            return Ok(CaseNode::Leaf(make_leaf(st, ncols, nparams)));
        };
        let cands: Vec<usize> = free_rows.iter().copied().filter(|&r| !st.m[r][c].is_zero()).collect();
        if let Some(&r) = cands.iter().find(|&&r| st.m[r][c].as_constant().is_some()) {
            pivot(&mut st, r, c);
            continue;
        }
        let mut best: Option<(u32, usize, Vec<ParamPoly>)> = None;
        for &r in &cands {
            let p = &st.m[r][c];
            if let Ok((_, fs)) = p.affine_factors() {
                let d = p.total_degree();
                if best.as_ref().map_or(true, |(bd, _, _)| d < *bd) {
                    best = Some((d, r, fs.into_iter().map(|(f, _)| f).collect()));
                }
            }
        }
        let Some((_, r, factors)) = best else {
            return Err(SolveError::NonlinearBranch { poly: st.m[cands[0]][c].clone(), row: cands[0], col: c });
        };
        let factors: Vec<ParamPoly> = factors.into_iter().filter(|f| !st.ineqs.contains(f)).collect();
        if factors.is_empty() {
            pivot(&mut st, r, c);
            continue;
        }
        return split_chain(st, &factors, r, c, ncols, nparams);
    }
}

fn split_chain(st: State, factors: &[ParamPoly], r: usize, c: usize, ncols: usize, nparams: usize) -> Result<CaseNode, SolveError> {
    let Some((f, rest)) = factors.split_first() else {
        let mut st = st;
        pivot(&mut st, r, c);
        return solve(st, ncols, nparams);
    };
    let zero = match with_zero(&st, f) {
        Some(z) => solve(z, ncols, nparams)?,
        None => CaseNode::Infeasible,
    };
    let mut nz = st;
    nz.ineqs.push(f.clone());
    // later factors are re-expressed only through substitution, so they stay valid here
    let nonzero = split_chain(nz, rest, r, c, ncols, nparams)?;
    Ok(CaseNode::Split { test: f.clone(), zero: Box::new(zero), nonzero: Box::new(nonzero) })
}

/// Imposes `f = 0` by eliminating its highest-index parameter.
fn with_zero(st: &State, f: &ParamPoly) -> Option<State> {
    let (lin, c0) = f.as_affine().expect("affine factor");
    let v = lin.iter().rposition(|x| !num_traits::Zero::is_zero(x))?;
    let n = f.nvars();
    let a = lin[v].clone();
    let expr = (&ParamPoly::var(n, v) - &f.scale(&a.recip())).clone();
    let _ = c0;
    let mut out = st.clone();
    for row in out.m.iter_mut() {
        for x in row.iter_mut() {
            *x = x.substitute(v, &expr);
        }
    }
    for (_, e) in out.subst.iter_mut() {
        *e = e.substitute(v, &expr);
    }
    out.subst.push((v, expr.clone()));
    out.eqs.push(f.clone());
    let mut ineqs = Vec::new();
    for g in &st.ineqs {
        let h = g.substitute(v, &expr);
        match h.as_constant() {
            Some(k) if num_traits::Zero::is_zero(&k) => return None,
            Some(_) => {}
            None => {
                let h = normalize(&h);
                if !ineqs.contains(&h) {
                    ineqs.push(h);
                }
            }
        }
    }
    out.ineqs = ineqs;
    // rows may now share a vanishing content
    for r in 0..out.m.len() {
        tidy_row(&mut out.m[r], &out.ineqs);
    }
    Some(out)
}

fn normalize(p: &ParamPoly) -> ParamPoly {
    let (lin, _) = p.as_affine().expect("affine");
    let lead = lin.iter().find(|x| !num_traits::Zero::is_zero(*x)).cloned().unwrap();
    p.scale(&lead.recip())
}

fn pivot(st: &mut State, r: usize, c: usize) {
    let p = st.m[r][c].clone();
    for r2 in 0..st.m.len() {
        if r2 == r || st.pivot_of_row[r2].is_some() || st.m[r2][c].is_zero() {
            continue;
        }
        eliminate(&mut st.m, r2, r, c, &p, &st.ineqs);
    }
    st.pivot_of_row[r] = Some(c);
    st.col = c + 1;
}

/// `row[target] := p * row[target] - row[target][c] * row[source]`.
fn eliminate(m: &mut [Vec<ParamPoly>], target: usize, source: usize, c: usize, p: &ParamPoly, ineqs: &[ParamPoly]) {
    let a = m[target][c].clone();
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(&src) {
        *x = &(p * &*x) - &(&a * s);
    }
    tidy_row(&mut m[target], ineqs);
}

/// Divides out known-nonzero affine factors and the rational content.
fn tidy_row(row: &mut [ParamPoly], ineqs: &[ParamPoly]) {
    if row.iter().all(ParamPoly::is_zero) {
        return;
    }
    for f in ineqs {
        loop {
            let q: Option<Vec<ParamPoly>> = row.iter().map(|x| x.div_affine(f)).collect();
            match q {
                Some(q) if q.iter().any(|x| !x.is_zero()) => row.clone_from_slice(&q),
                _ => break,
            }
        }
    }
    let nz: Vec<&ParamPoly> = row.iter().filter(|x| !x.is_zero()).collect();
    if nz.iter().all(|x| x.as_constant().is_some()) || nz.len() > 0 {
        let g = row_content(row);
        for x in row.iter_mut() {
            *x = x.scale(&g.recip());
        }
    }
}

fn row_content(row: &[ParamPoly]) -> Rational {
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for x in row {
        for (_, c) in x.terms() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
    }
    if num.is_zero() {
        Rational::one()
    } else {
        Rational::new(num, den)
    }
}

fn make_leaf(mut st: State, ncols: usize, nparams: usize) -> Leaf {
    let mut piv: Vec<(usize, usize)> = st
        .pivot_of_row
        .iter()
        .enumerate()
        .filter_map(|(r, c)| c.map(|c| (r, c)))
        .collect();
    piv.sort_by_key(|&(_, c)| c);
    // back substitution to reduced echelon form
    for k in (0..piv.len()).rev() {
        let (r, c) = piv[k];
        let p = st.m[r][c].clone();
        for &(r0, _) in &piv[..k] {
            if !st.m[r0][c].is_zero() {
                eliminate(&mut st.m, r0, r, c, &p, &st.ineqs);
            }
        }
    }
    let pivots: Vec<usize> = piv.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let solution = piv
        .iter()
        .map(|&(r, c)| {
            let p = st.m[r][c].clone();
            let combo = free
                .iter()
                .filter(|&&j| !st.m[r][j].is_zero())
                .map(|&j| (j, ParamScalar::new(-&st.m[r][j], p.clone())))
                .collect();
            (c, combo)
        })
        .collect();
    let eqs: Vec<AffineConstraint> = st.eqs.iter().map(AffineConstraint::equality).collect();
    let equalities = match constraint_simplify(&eqs) {
        Simplified::Constraints(c) => c,
        Simplified::EmptyVariety => unreachable!("substitution keeps equalities consistent"),
    };
    let _ = nparams;
    Leaf { equalities, inequations: st.ineqs, substitution: st.subst, pivots, free, solution }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, rational_rank};
    use proptest::prelude::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("x{i}")).collect()
    }

    fn lp(_n: usize, lin: &[i64], c: i64) -> ParamPoly {
        ParamPoly::affine(&lin.iter().map(|&x| int(x)).collect::<Vec<_>>(), int(c))
    }

    #[test]
    fn affine_system_pins_one_third() {
        // {l1 + 2 l2 - 1 = 0, 3 l1 + 3 l2 - 2 = 0} as consistency conditions on c
        let rows = vec![vec![lp(2, &[1, 2], -1)], vec![lp(2, &[3, 3], -2)]];
        let tree = parametric_row_reduce(&rows, &names(1)).unwrap();
        let with_solution: Vec<&Leaf> = tree.leaves().into_iter().filter(|l| l.is_free(0)).collect();
        assert_eq!(with_solution.len(), 1);
        let leaf = with_solution[0];
        assert_eq!(leaf.equalities.len(), 2);
        assert!(leaf.contains(&[rat(1, 3), rat(1, 3)]));
        let r: Vec<String> = leaf.equalities.iter().map(|c| c.render()).collect();
        assert_eq!(r, vec!["l1 = 1/3", "l2 = 1/3"]);
    }

    #[test]
    fn identity_does_not_branch() {
        let one = ParamPoly::one(1);
        let zero = ParamPoly::zero(1);
        let rows = vec![vec![one.clone(), zero.clone()], vec![zero, one]];
        let tree = parametric_row_reduce(&rows, &names(2)).unwrap();
        assert!(matches!(tree.root, CaseNode::Leaf(_)));
        let leaf = &tree.leaves()[0];
        assert!(leaf.free.is_empty());
        assert_eq!(leaf.pivots, vec![0, 1]);
    }

    #[test]
    fn scalar_times_unknown_splits() {
        let rows = vec![vec![ParamPoly::var(1, 0)]];
        let tree = parametric_row_reduce(&rows, &names(1)).unwrap();
        // oracle: plain elimination at l = 1 and l = 0
        for (l, expected_free) in [(int(1), 0usize), (int(0), 1)] {
            let numeric = vec![vec![l.clone()]];
            assert_eq!(1 - rational_rank(&numeric), expected_free);
            let leaf = tree.descend(&[l]).unwrap();
            assert_eq!(leaf.free.len(), expected_free);
        }
        assert_eq!(tree.leaves().len(), 2);
    }

    #[test]
    fn nonlinear_pivot_errors() {
        let q = &(&ParamPoly::var(2, 0) * &ParamPoly::var(2, 0)) + &ParamPoly::int(2, 1);
        let err = parametric_row_reduce(&[vec![q.clone()]], &names(1)).unwrap_err();
        assert!(matches!(err, SolveError::NonlinearBranch { poly, .. } if poly == q));
    }

    fn arb_entry(n: usize) -> impl Strategy<Value = ParamPoly> {
        // products of at most two affine forms with small coefficients
        (prop::collection::vec(-2i64..3, n + 1), prop::collection::vec(-2i64..3, n + 1), any::<bool>(), any::<bool>()).prop_map(
            move |(a, b, use_b, zero)| {
                if zero {
                    return ParamPoly::zero(n);
                }
                let pa = ParamPoly::affine(&a[..n].iter().map(|&x| int(x)).collect::<Vec<_>>(), int(a[n]));
                if use_b {
                    let pb = ParamPoly::affine(&b[..n].iter().map(|&x| int(x)).collect::<Vec<_>>(), int(b[n]));
                    &pa * &pb
                } else {
                    pa
                }
            },
        )
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<ParamPoly>>> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(arb_entry(2), c), r))
    }

    fn small_point() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-3i64..4, 1i64..3), 2).prop_map(|v| v.into_iter().map(|(a, b)| rat(a, b)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn tree_matches_numeric_rank(m in arb_matrix(), pt in small_point()) {
            let ncols = m[0].len();
            let tree = parametric_row_reduce(&m, &names(ncols));
            // a non-affine pivot is a legitimate refusal
            prop_assume!(tree.is_ok());
            let tree = tree.unwrap();
            let leaf = tree.descend(&pt).expect("descent reaches a feasible leaf");
            prop_assert!(leaf.contains(&pt));
            let numeric: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|x| x.eval(&pt)).collect()).collect();
            prop_assert_eq!(leaf.free.len(), ncols - rational_rank(&numeric));
            // exactly one leaf holds the point
            let holding = tree.leaves().iter().filter(|l| l.contains(&pt)).count();
            prop_assert_eq!(holding, 1);
            // the leaf solution really solves the instantiated system
            for &f in &leaf.free {
                let mut x = vec![Rational::default(); ncols];
                x[f] = int(1);
                for (p, combo) in &leaf.solution {
                    for (j, s) in combo {
                        if *j == f { x[*p] = s.eval(&pt).unwrap(); }
                    }
                }
                for row in &numeric {
                    let dot: Rational = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                    prop_assert_eq!(dot, int(0));
                }
            }
        }
    }
}
