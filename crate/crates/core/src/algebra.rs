//! Polynomial vector fields on the superspace with coordinates
//! `u = (x1..xa, xi1..xib)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rational_kernel, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Pgl,
    Vect,
}

impl std::str::FromStr for Algebra {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pgl" => Ok(Algebra::Pgl),
            "vect" => Ok(Algebra::Vect),
            _ => Err(format!("unknown algebra `{s}` (expected pgl or vect)")),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::Pgl => "pgl",
            Algebra::Vect => "vect",
        })
    }
}

/// Monomial `x^even * xi^odd`, the odd part a bitmask in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SMono {
    pub even: Vec<u32>,
    pub odd: u32,
}

impl SMono {
    pub fn one(a: usize) -> Self {
        SMono { even: vec![0; a], odd: 0 }
    }

    /// The coordinate `u_i`.
    pub fn coord(a: usize, i: usize) -> Self {
        let mut m = Self::one(a);
        if i < a {
            m.even[i] = 1;
        } else {
            m.odd = 1 << (i - a);
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().sum::<u32>() + self.odd.count_ones()
    }

    pub fn parity(&self) -> u8 {
        (self.odd.count_ones() % 2) as u8
    }

    /// Product with the Koszul sign; `None` if an odd coordinate repeats.
    pub fn mul(&self, other: &SMono) -> Option<(i32, SMono)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut swaps = 0;
        for t in bits(other.odd) {
            swaps += (self.odd >> (t + 1)).count_ones();
        }
        let even = self.even.iter().zip(&other.even).map(|(p, q)| p + q).collect();
        Some((if swaps % 2 == 0 { 1 } else { -1 }, SMono { even, odd: self.odd | other.odd }))
    }

    /// Left derivative along `u_i`.
    pub fn deriv(&self, i: usize) -> Option<(Rational, SMono)> {
        let a = self.even.len();
        let mut m = self.clone();
        if i < a {
            if m.even[i] == 0 {
                return None;
            }
            let c = Rational::from_integer(m.even[i].into());
            m.even[i] -= 1;
            Some((c, m))
        } else {
            let j = i - a;
            if m.odd & (1 << j) == 0 {
                return None;
            }
            let before = (m.odd & ((1 << j) - 1)).count_ones();
            m.odd &= !(1 << j);
            let s = if before % 2 == 0 { 1 } else { -1 };
            Some((Rational::from_integer(s.into()), m))
        }
    }

    /// Exponent vector over all `n` coordinates.
    pub fn exponents(&self, b: usize) -> Vec<i32> {
        let mut v: Vec<i32> = self.even.iter().map(|&e| e as i32).collect();
        v.extend((0..b).map(|j| ((self.odd >> j) & 1) as i32));
        v
    }

    pub fn render(&self) -> String {
        let a = self.even.len();
        let mut parts = Vec::new();
        for (i, &e) in self.even.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(coord_name(a, i)),
                _ => parts.push(format!("{}^{e}", coord_name(a, i))),
            }
        }
        for j in bits(self.odd) {
            parts.push(coord_name(a, a + j as usize));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn bits(mask: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |j| mask & (1 << j) != 0)
}

pub fn coord_name(a: usize, i: usize) -> String {
    if i < a {
        format!("x{}", i + 1)
    } else {
        format!("xi{}", i - a + 1)
    }
}

/// Sum of `coef * mono * d/du_target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperField {
    pub a: usize,
    pub b: usize,
    pub terms: BTreeMap<(SMono, usize), Rational>,
}

impl SuperField {
    pub fn zero(a: usize, b: usize) -> Self {
        SuperField { a, b, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.a + self.b
    }

    pub fn monomial(a: usize, b: usize, mono: SMono, target: usize, coef: Rational) -> Self {
        let mut f = Self::zero(a, b);
        f.add_term(mono, target, coef);
        f
    }

    /// `d/du_i`.
    pub fn partial(a: usize, b: usize, i: usize) -> Self {
        Self::monomial(a, b, SMono::one(a), i, Rational::one())
    }

    /// `E_ij = u_i d/du_j`.
    pub fn gl(a: usize, b: usize, i: usize, j: usize) -> Self {
        Self::monomial(a, b, SMono::coord(a, i), j, Rational::one())
    }

    /// The Euler field `sum u_i d/du_i`.
    pub fn euler(a: usize, b: usize) -> Self {
        let mut e = Self::zero(a, b);
        for i in 0..a + b {
            e.add_term(SMono::coord(a, i), i, Rational::one());
        }
        e
    }

    pub fn add_term(&mut self, mono: SMono, target: usize, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let key = (mono, target);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coord_parity(&self, i: usize) -> u8 {
        u8::from(i >= self.a)
    }

    fn term_parity(&self, m: &SMono, t: usize) -> u8 {
        (m.parity() + self.coord_parity(t)) % 2
    }

    /// `Some(p)` when every term has parity `p`.
    pub fn parity(&self) -> Option<u8> {
        let mut ps = self.terms.keys().map(|(m, t)| self.term_parity(m, *t));
        let p = ps.next().unwrap_or(0);
        ps.all(|q| q == p).then_some(p)
    }

    /// `Some(d)` when homogeneous of degree `d` in the standard grading.
    pub fn degree(&self) -> Option<i32> {
        let mut ds = self.terms.keys().map(|(m, _)| m.degree() as i32 - 1);
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }

    /// Weight in the basis `eps_1..eps_n` if homogeneous.
    pub fn weight(&self) -> Option<Vec<i32>> {
        let mut ws = self.terms.keys().map(|(m, t)| {
            let mut w = m.exponents(self.b);
            w[*t] -= 1;
            w
        });
        let w = ws.next()?;
        ws.all(|v| v == w).then_some(w)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut f = Self::zero(self.a, self.b);
        for ((m, t), x) in &self.terms {
            f.add_term(m.clone(), *t, x * c);
        }
        f
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut f = self.clone();
        for ((m, t), x) in &other.terms {
            f.add_term(m.clone(), *t, x.clone());
        }
        f
    }

    /// Applies the field to a function given as `mono -> coef`.
    fn apply(&self, g: &BTreeMap<SMono, Rational>) -> BTreeMap<SMono, Rational> {
        let mut out: BTreeMap<SMono, Rational> = BTreeMap::new();
        for ((f, i), c) in &self.terms {
            for (gm, gc) in g {
                let Some((dc, dm)) = gm.deriv(*i) else { continue };
                let Some((s, pm)) = f.mul(&dm) else { continue };
                let v = c * gc * dc * Rational::from_integer(s.into());
                let slot = out.entry(pm).or_insert_with(Rational::zero);
                *slot += v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// The supercommutator, extended bilinearly over homogeneous terms.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.a, self.b);
        for ((fm, i), fc) in &self.terms {
            let x = Self::monomial(self.a, self.b, fm.clone(), *i, fc.clone());
            let px = self.term_parity(fm, *i);
            for ((gm, j), gc) in &other.terms {
                let y = Self::monomial(self.a, self.b, gm.clone(), *j, gc.clone());
                let py = self.term_parity(gm, *j);
                let g_fn = BTreeMap::from([(gm.clone(), gc.clone())]);
                for (m, c) in x.apply(&g_fn) {
                    out.add_term(m, *j, c);
                }
                let f_fn = BTreeMap::from([(fm.clone(), fc.clone())]);
                let sign = if px * py == 1 { Rational::one() } else { -Rational::one() };
                for (m, c) in y.apply(&f_fn) {
                    out.add_term(m, *i, c * &sign);
                }
            }
        }
        out
    }

    /// Coordinates in a list of fields that together span a subspace containing `self`.
    pub fn coordinates_in(&self, basis: &[SuperField]) -> Option<Vec<Rational>> {
        let keys: Vec<(SMono, usize)> = {
            let mut ks: Vec<_> = basis.iter().flat_map(|f| f.terms.keys().cloned()).collect();
            ks.extend(self.terms.keys().cloned());
            ks.sort();
            ks.dedup();
            ks
        };
        // columns: basis elements then the target
        let rows: Vec<Vec<Rational>> = keys
            .iter()
            .map(|k| {
                let mut r: Vec<Rational> = basis.iter().map(|f| f.terms.get(k).cloned().unwrap_or_default()).collect();
                r.push(self.terms.get(k).cloned().unwrap_or_default());
                r
            })
            .collect();
        let ker = rational_kernel(&rows, basis.len() + 1);
        let v = ker.into_iter().find(|v| !v[basis.len()].is_zero())?;
        let t = -v[basis.len()].clone();
        Some(v[..basis.len()].iter().map(|x| x / &t).collect())
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, ((m, t), c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                s.push_str(&crate::arith::fmt_rational(&mag));
                s.push('*');
            }
            if m.degree() > 0 {
                s.push_str(&m.render());
                s.push('*');
            }
            s.push_str(&format!("d_{}", coord_name(self.a, *t)));
        }
        s
    }
}

impl fmt::Display for SuperField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// All monomial fields of a given degree.
pub fn fields_of_degree(a: usize, b: usize, d: i32) -> Vec<SuperField> {
    let k = d + 1;
    if k < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for odd in 0u32..(1 << b) {
        let r = k - odd.count_ones() as i32;
        if r < 0 {
            continue;
        }
        for even in compositions(r as u32, a) {
            for t in 0..a + b {
                out.push(SuperField::monomial(a, b, SMono { even: even.clone(), odd }, t, Rational::one()));
            }
        }
    }
    out
}

/// Exponent vectors of length `parts` summing to `total`.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Raising,
    Lowering,
    Cartan,
}

/// `g_{-1} + g_0` of `vect(a|b)` in the standard grading.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub a: usize,
    pub b: usize,
    pub partials: Vec<SuperField>,
    /// `gl[i][j] = E_ij`
    pub gl: Vec<Vec<SuperField>>,
}

pub fn standard_basis(a: usize, b: usize) -> GradedBasis {
    let n = a + b;
    GradedBasis {
        a,
        b,
        partials: (0..n).map(|i| SuperField::partial(a, b, i)).collect(),
        gl: (0..n).map(|i| (0..n).map(|j| SuperField::gl(a, b, i, j)).collect()).collect(),
    }
}

impl GradedBasis {
    pub fn n(&self) -> usize {
        self.a + self.b
    }

    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i >= self.a)
    }

    pub fn role(i: usize, j: usize) -> Role {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Role::Raising,
            std::cmp::Ordering::Greater => Role::Lowering,
            std::cmp::Ordering::Equal => Role::Cartan,
        }
    }

    pub fn simple_raising(&self) -> Vec<(usize, usize)> {
        (0..self.n().saturating_sub(1)).map(|i| (i, i + 1)).collect()
    }

    pub fn simple_lowering(&self) -> Vec<(usize, usize)> {
        (0..self.n().saturating_sub(1)).map(|i| (i + 1, i)).collect()
    }

    /// Checks the commutation relations of `g_{-1} + g_0` against the gl formulas.
    pub fn verify_structure(&self) -> Result<(), String> {
        let n = self.n();
        let p = |i: usize| self.parity(i) as i32;
        for i in 0..n {
            for j in 0..n {
                if !self.partials[i].bracket(&self.partials[j]).is_zero() {
                    return Err(format!("[d{i}, d{j}] != 0"));
                }
                for k in 0..n {
                    // [E_ij, d_k] = -(-1)^{(p_i+p_j) p_k} delta_ik d_j
                    let got = self.gl[i][j].bracket(&self.partials[k]);
                    let mut want = SuperField::zero(self.a, self.b);
                    if i == k {
                        let s = if ((p(i) + p(j)) * p(k)) % 2 == 0 { -1 } else { 1 };
                        want = self.partials[j].scale(&Rational::from_integer(s.into()));
                    }
                    if got != want {
                        return Err(format!("[E{i}{j}, d{k}] = {got}, expected {want}"));
                    }
                    for l in 0..n {
                        let got = self.gl[i][j].bracket(&self.gl[k][l]);
                        let mut want = SuperField::zero(self.a, self.b);
                        if j == k {
                            want = want.add(&self.gl[i][l]);
                        }
                        if l == i {
                            let s = if ((p(i) + p(j)) * (p(k) + p(l))) % 2 == 0 { -1 } else { 1 };
                            want = want.add(&self.gl[k][j].scale(&Rational::from_integer(s.into())));
                        }
                        if got != want {
                            return Err(format!("[E{i}{j}, E{k}{l}] = {got}, expected {want}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A positive-degree field whose annihilation, together with that of the
/// simple raising operators, characterizes singular vectors.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub field: SuperField,
    pub degree: i32,
    pub weight: Vec<i32>,
}

/// Lowest weight vectors of `g_1` (and of `g_2` when required or requested).
///
/// For `pgl` the search is restricted to `span(u_i E)`; `g_2` is empty there.
pub fn invariance_generators(basis: &GradedBasis, algebra: Algebra, include_g2: bool) -> Vec<Generator> {
    let (a, b) = (basis.a, basis.b);
    let mut out = Vec::new();
    let euler = SuperField::euler(a, b);
    let g1: Vec<SuperField> = match algebra {
        Algebra::Pgl => (0..basis.n())
            .map(|i| mul_coord(&euler, i))
            .collect(),
        Algebra::Vect => fields_of_degree(a, b, 1),
    };
    out.extend(lowest_vectors(basis, &g1, 1));
    let need_g2 = algebra == Algebra::Vect && (include_g2 || (a, b) == (1, 0));
    if need_g2 {
        out.extend(lowest_vectors(basis, &fields_of_degree(a, b, 2), 2));
    }
    out
}

/// `u_i * X`.
pub fn mul_coord(x: &SuperField, i: usize) -> SuperField {
    let c = SMono::coord(x.a, i);
    let mut f = SuperField::zero(x.a, x.b);
    for ((m, t), v) in &x.terms {
        if let Some((s, pm)) = c.mul(m) {
            f.add_term(pm, *t, v * Rational::from_integer(s.into()));
        }
    }
    f
}

fn lowest_vectors(basis: &GradedBasis, space: &[SuperField], degree: i32) -> Vec<Generator> {
    let mut by_weight: BTreeMap<Vec<i32>, Vec<SuperField>> = BTreeMap::new();
    for f in space {
        if let Some(w) = f.weight() {
            by_weight.entry(w).or_default().push(f.clone());
        }
    }
    let mut out = Vec::new();
    for (w, fields) in by_weight {
        let lowered: Vec<Vec<SuperField>> = basis
            .simple_lowering()
            .iter()
            .map(|&(i, j)| fields.iter().map(|f| basis.gl[i][j].bracket(f)).collect())
            .collect();
        let mut keys: Vec<(SMono, usize)> = lowered.iter().flatten().flat_map(|f| f.terms.keys().cloned()).collect();
        keys.sort();
        keys.dedup();
        let mut rows = Vec::new();
        for imgs in &lowered {
            for k in &keys {
                rows.push(imgs.iter().map(|f| f.terms.get(k).cloned().unwrap_or_default()).collect());
            }
        }
        for v in rational_kernel(&rows, fields.len()) {
            let mut g = SuperField::zero(basis.a, basis.b);
            for (f, c) in fields.iter().zip(&v) {
                g = g.add(&f.scale(c));
            }
            let g = normalize_field(g);
            if g.is_zero() {
                continue;
            }
            out.push(Generator { name: format!("g{}[{}]", degree, out.len() + 1), field: g, degree, weight: w.clone() });
        }
    }
    out
}

/// Scales so the leading coefficient is 1.
fn normalize_field(f: SuperField) -> SuperField {
    match f.terms.values().next_back().cloned() {
        Some(c) => f.scale(&c.recip()),
        None => f,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn odd_sign_conventions() {
        // [xi1 d_xi2, d_xi1] = -d_xi2
        let x = SuperField::gl(0, 3, 0, 1);
        let y = SuperField::partial(0, 3, 0);
        assert_eq!(x.bracket(&y), SuperField::partial(0, 3, 1).scale(&int(-1)));
        // [xi3 E, d_xi3] = H1 + H2
        let s3 = mul_coord(&SuperField::euler(0, 3), 2);
        let h = SuperField::gl(0, 3, 0, 0).add(&SuperField::gl(0, 3, 1, 1));
        assert_eq!(s3.bracket(&SuperField::partial(0, 3, 2)), h);
    }

    #[test]
    fn structure_constants() {
        for (a, b) in [(1, 0), (2, 0), (0, 2), (1, 1), (0, 3), (2, 1)] {
            standard_basis(a, b).verify_structure().unwrap();
        }
    }

    #[test]
    fn super_jacobi_on_random_triples() {
        let (a, b) = (1, 2);
        let mut pool = fields_of_degree(a, b, -1);
        pool.extend(fields_of_degree(a, b, 0));
        pool.extend(fields_of_degree(a, b, 1).into_iter().step_by(3));
        let par = |f: &SuperField| f.parity().unwrap() as i32;
        for x in pool.iter().step_by(2) {
            for y in pool.iter().step_by(3) {
                for z in pool.iter().step_by(5) {
                    // [x,[y,z]] = [[x,y],z] + (-1)^{p(x)p(y)} [y,[x,z]]
                    let lhs = x.bracket(&y.bracket(z));
                    let s = if par(x) * par(y) % 2 == 0 { int(1) } else { int(-1) };
                    let rhs = x.bracket(y).bracket(z).add(&y.bracket(&x.bracket(z)).scale(&s));
                    assert_eq!(lhs, rhs, "x={x} y={y} z={z}");
                }
            }
        }
    }

    #[test]
    fn pgl_lowest_is_last_s() {
        let basis = standard_basis(0, 3);
        let g = invariance_generators(&basis, Algebra::Pgl, false);
        assert_eq!(g.len(), 1);
        let s3 = mul_coord(&SuperField::euler(0, 3), 2);
        assert!(g[0].field.coordinates_in(&[s3]).is_some());
    }

    #[test]
    fn vect_generators() {
        let g = invariance_generators(&standard_basis(0, 3), Algebra::Vect, false);
        let u1 = SuperField::monomial(0, 3, SMono { even: vec![], odd: 0b110 }, 0, int(1));
        assert!(g.iter().any(|x| x.field.coordinates_in(&[u1.clone()]).is_some()), "{g:?}");
        let g = invariance_generators(&standard_basis(2, 0), Algebra::Vect, false);
        let u = SuperField::monomial(2, 0, SMono { even: vec![0, 2], odd: 0 }, 0, int(1));
        assert!(g.iter().any(|x| x.field.coordinates_in(&[u.clone()]).is_some()));
        let g = invariance_generators(&standard_basis(1, 0), Algebra::Vect, false);
        assert_eq!(g.iter().map(|x| x.degree).collect::<Vec<_>>(), vec![1, 2]);
        // (1|1): x^2 d_x + 2 x xi d_xi
        let g = invariance_generators(&standard_basis(1, 1), Algebra::Vect, false);
        let u1 = SuperField::monomial(1, 1, SMono { even: vec![2], odd: 0 }, 0, int(1))
            .add(&SuperField::monomial(1, 1, SMono { even: vec![1], odd: 1 }, 1, int(2)));
        assert!(g.iter().any(|x| x.field.coordinates_in(&[u1.clone()]).is_some()), "{:?}", g.iter().map(|x| x.field.render()).collect::<Vec<_>>());
    }
}
