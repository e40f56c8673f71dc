use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{fmt_rational, is_nonneg_integer, rational_echelon, ParamPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `value = 0`
    Equality,
    /// `value` is a non-negative integer
    Integrality,
    /// `value` is not a non-negative integer
    NonIntegrality,
}

/// `value = sum linear[i] * l{i+1} + constant`, constrained according to `kind`.
///
/// Equalities are normalized so the first nonzero linear coefficient is 1.
/// Integrality predicates are opaque: they are evaluated at numeric points
/// and printed, never solved.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineConstraint {
    pub linear: Vec<Rational>,
    pub constant: Rational,
    pub kind: ConstraintKind,
}

impl AffineConstraint {
    pub fn new(linear: Vec<Rational>, constant: Rational, kind: ConstraintKind) -> Self {
        let mut c = AffineConstraint { linear, constant, kind };
        if kind == ConstraintKind::Equality {
            if let Some(lead) = c.linear.iter().find(|x| !x.is_zero()).cloned() {
                let inv = lead.recip();
                c.linear.iter_mut().for_each(|x| *x = &*x * &inv);
                c.constant = &c.constant * &inv;
            }
        }
        c
    }

    pub fn equality(p: &ParamPoly) -> Self {
        let (lin, c) = p.as_affine().expect("equality constraint must be affine");
        Self::new(lin, c, ConstraintKind::Equality)
    }

    pub fn nvars(&self) -> usize {
        self.linear.len()
    }

    pub fn value(&self) -> ParamPoly {
        ParamPoly::affine(&self.linear, self.constant.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.linear.iter().all(Zero::is_zero) && self.constant.is_zero()
    }

    /// Satisfied at the numeric point?
    pub fn holds_at(&self, point: &[Rational]) -> bool {
        let v = self.value().eval(point);
        match self.kind {
            ConstraintKind::Equality => v.is_zero(),
            ConstraintKind::Integrality => is_nonneg_integer(&v),
            ConstraintKind::NonIntegrality => !is_nonneg_integer(&v),
        }
    }

    pub fn render(&self) -> String {
        match self.kind {
            ConstraintKind::Equality => {
                let Some(p) = self.linear.iter().position(|x| !x.is_zero()) else {
                    return format!("{} = 0", fmt_rational(&self.constant));
                };
                let mut rest = self.linear.clone();
                let lead = rest[p].clone();
                rest[p] = Rational::zero();
                let rhs = ParamPoly::affine(&rest, self.constant.clone()).scale(&(-lead.recip()));
                let lhs = if lead.is_one() { format!("l{}", p + 1) } else { format!("{}*l{}", fmt_rational(&lead), p + 1) };
                format!("{lhs} = {}", rhs.render())
            }
            ConstraintKind::Integrality => format!("{} in Z>=0", self.value().render()),
            ConstraintKind::NonIntegrality => format!("{} not in Z>=0", self.value().render()),
        }
    }
}

impl fmt::Display for AffineConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplified {
    Constraints(Vec<AffineConstraint>),
    EmptyVariety,
}

impl Simplified {
    pub fn constraints(&self) -> Option<&[AffineConstraint]> {
        match self {
            Simplified::Constraints(c) => Some(c),
            Simplified::EmptyVariety => None,
        }
    }
}

/// Puts the equalities in reduced echelon form, drops duplicates and trivial
/// records, and detects inconsistent equality systems.
pub fn constraint_simplify(set: &[AffineConstraint]) -> Simplified {
    let Some(n) = set.first().map(AffineConstraint::nvars) else {
        return Simplified::Constraints(Vec::new());
    };
    let rows: Vec<Vec<Rational>> = set
        .iter()
        .filter(|c| c.kind == ConstraintKind::Equality)
        .map(|c| {
            let mut r = c.linear.clone();
            r.push(c.constant.clone());
            r
        })
        .collect();
    let mut out = Vec::new();
    for (pivot, row) in rational_echelon(&rows) {
        if pivot == n {
            return Simplified::EmptyVariety;
        }
        out.push(AffineConstraint::new(row[..n].to_vec(), row[n].clone(), ConstraintKind::Equality));
    }
    let mut others: Vec<AffineConstraint> = Vec::new();
    for c in set.iter().filter(|c| c.kind != ConstraintKind::Equality) {
        if !others.contains(c) {
            others.push(c.clone());
        }
    }
    out.extend(others);
    Simplified::Constraints(out)
}

/// Numeric point satisfying the equalities, with free parameters from `free_values`
/// (consumed in order of the free parameters). `None` if inconsistent.
pub fn solve_point(eqs: &[AffineConstraint], n: usize, free_values: &[Rational]) -> Option<Vec<Rational>> {
    let simp = constraint_simplify(eqs);
    let cons = simp.constraints()?;
    let eqs: Vec<&AffineConstraint> = cons.iter().filter(|c| c.kind == ConstraintKind::Equality).collect();
    let pivots: Vec<usize> = eqs
        .iter()
        .map(|c| c.linear.iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    let mut point = vec![Rational::zero(); n];
    let mut k = 0;
    for (i, slot) in point.iter_mut().enumerate() {
        if !pivots.contains(&i) {
            *slot = free_values.get(k).cloned().unwrap_or_default();
            k += 1;
        }
    }
    for (c, &p) in eqs.iter().zip(&pivots) {
        let mut v = -c.constant.clone();
        for (j, a) in c.linear.iter().enumerate() {
            if j != p {
                v -= a * &point[j];
            }
        }
        point[p] = v;
    }
    debug_assert!(eqs.iter().all(|c| c.holds_at(&point)));
    Some(point)
}
