//! Highest weight modules over `gl(a|b)` with a symbolic highest weight
//! `(l1, ..., ln)`, in the PBW basis of lowering words applied to `v0`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::Zero;

use crate::arith::{int, is_nonneg_integer, ParamPoly, Rational};

/// Lowering root indices, non-increasing from left to right.
pub type Word = Vec<u16>;

pub type Weight = Vec<i32>;

/// `E_ij` with `i > j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleElement {
    pub terms: BTreeMap<Word, ParamPoly>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: Word, coef: ParamPoly) -> Self {
        let mut m = Self::zero();
        m.add_term(w, coef);
        m
    }

    pub fn add_term(&mut self, w: Word, coef: ParamPoly) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(c) => {
                *c = &*c + &coef;
                if c.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, coef);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleElement, s: &ParamPoly) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u16]) -> Option<&ParamPoly> {
        self.terms.get(w)
    }
}

/// The Verma module `M(l)` over `gl(a|b)`; its irreducible quotient is seen
/// through [`VermaModule::pairing`].
pub struct VermaModule {
    pub a: usize,
    pub b: usize,
    roots: Vec<Root>,
    index: HashMap<(usize, usize), u16>,
    act_memo: Mutex<HashMap<(usize, usize, Word), ModuleElement>>,
    mul_memo: Mutex<HashMap<(u16, Word), Vec<(Word, i64)>>>,
}

impl VermaModule {
    pub fn new(a: usize, b: usize) -> Self {
        let n = a + b;
        let mut roots: Vec<Root> = (0..n).flat_map(|i| (0..i).map(move |j| Root { i, j })).collect();
        roots.sort_by_key(|r| (r.i - r.j, r.i, r.j));
        let index = roots.iter().enumerate().map(|(k, r)| ((r.i, r.j), k as u16)).collect();
        VermaModule { a, b, roots, index, act_memo: Mutex::default(), mul_memo: Mutex::default() }
    }

    pub fn n(&self) -> usize {
        self.a + self.b
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    fn p(&self, i: usize) -> i64 {
        i64::from(i >= self.a)
    }

    fn parity(&self, i: usize, j: usize) -> i64 {
        (self.p(i) + self.p(j)) % 2
    }

    fn root_parity(&self, r: u16) -> i64 {
        let Root { i, j } = self.roots[r as usize];
        self.parity(i, j)
    }

    /// Weight of `w v0` minus the highest weight.
    pub fn word_offset(&self, w: &[u16]) -> Weight {
        let mut off = vec![0; self.n()];
        for &r in w {
            let Root { i, j } = self.roots[r as usize];
            off[i] += 1;
            off[j] -= 1;
        }
        off
    }

    /// `[E_ij, E_kl]` as a list of `((i, j), coef)`.
    pub fn gl_bracket(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Vec<((usize, usize), i64)> {
        let mut out = Vec::new();
        if j == k {
            out.push(((i, l), 1));
        }
        if l == i {
            let s = if self.parity(i, j) * self.parity(k, l) % 2 == 0 { -1 } else { 1 };
            out.push(((k, j), s));
        }
        // merge equal keys
        let mut merged: Vec<((usize, usize), i64)> = Vec::new();
        for (key, c) in out {
            match merged.iter_mut().find(|(k2, _)| *k2 == key) {
                Some((_, c2)) => *c2 += c,
                None => merged.push((key, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        merged
    }

    /// Normal-ordered product `y * (w v0)`.
    fn left_mul(&self, y: u16, w: &[u16]) -> Vec<(Word, i64)> {
        if w.first().map_or(true, |&z| y >= z) {
            if w.first() == Some(&y) && self.root_parity(y) == 1 {
                return Vec::new();
            }
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(y);
            v.extend_from_slice(w);
            return vec![(v, 1)];
        }
        let key = (y, w.to_vec());
        if let Some(r) = self.mul_memo.lock().unwrap().get(&key) {
            return r.clone();
        }
        let z = w[0];
        let rest = &w[1..];
        let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
        // y z rest = (-1)^{p(y)p(z)} z (y rest) + [y, z] rest
        let s = if self.root_parity(y) * self.root_parity(z) == 1 { -1 } else { 1 };
        for (w1, c1) in self.left_mul(y, rest) {
            for (w2, c2) in self.left_mul(z, &w1) {
                *acc.entry(w2).or_default() += s * c1 * c2;
            }
        }
        let ry = self.roots[y as usize];
        let rz = self.roots[z as usize];
        for ((i, j), c) in self.gl_bracket((ry.i, ry.j), (rz.i, rz.j)) {
            let r = self.index[&(i, j)];
            for (w2, c2) in self.left_mul(r, rest) {
                *acc.entry(w2).or_default() += c * c2;
            }
        }
        let out: Vec<(Word, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        self.mul_memo.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `E_ij (w v0)`.
    pub fn act_word(&self, (i, j): (usize, usize), w: &[u16]) -> ModuleElement {
        let n = self.n();
        if i > j {
            let mut m = ModuleElement::zero();
            for (w2, c) in self.left_mul(self.index[&(i, j)], w) {
                m.add_term(w2, ParamPoly::int(n, c));
            }
            return m;
        }
        if i == j {
            let off = self.word_offset(w);
            let c = &ParamPoly::var(n, i) + &ParamPoly::int(n, off[i].into());
            return ModuleElement::basis(w.to_vec(), c);
        }
        if w.is_empty() {
            return ModuleElement::zero();
        }
        let key = (i, j, w.to_vec());
        if let Some(r) = self.act_memo.lock().unwrap().get(&key) {
            return r.clone();
        }
        let y = w[0];
        let rest = &w[1..];
        let ry = self.roots[y as usize];
        let mut out = ModuleElement::zero();
        for (e, c) in self.gl_bracket((i, j), (ry.i, ry.j)) {
            out.add_scaled(&self.act_word(e, rest), &ParamPoly::int(n, c));
        }
        let s = if self.parity(i, j) * self.root_parity(y) == 1 { -1 } else { 1 };
        let inner = self.act_word((i, j), rest);
        for (w1, c1) in &inner.terms {
            for (w2, c2) in self.left_mul(y, w1) {
                out.add_term(w2, c1.scale(&int(s * c2)));
            }
        }
        self.act_memo.lock().unwrap().insert(key, out.clone());
        out
    }

    pub fn act_g0(&self, e: (usize, usize), m: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (w, c) in &m.terms {
            out.add_scaled(&self.act_word(e, w), c);
        }
        out
    }

    /// PBW words of weight offset `offset` (which must be minus a sum of positive roots).
    pub fn weight_basis(&self, offset: &[i32]) -> Vec<Word> {
        let Some(budget) = simple_coords(offset) else { return Vec::new() };
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.enumerate(self.roots.len(), &budget, &mut cur, &mut out);
        out
    }

    fn enumerate(&self, upto: usize, budget: &[i32], cur: &mut Word, out: &mut Vec<Word>) {
        if budget.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for r in (0..upto).rev() {
            let Root { i, j } = self.roots[r];
            // the root spans simple roots j..i-1
            if (j..i).any(|k| budget[k] == 0) {
                continue;
            }
            let mut nb = budget.to_vec();
            (j..i).for_each(|k| nb[k] -= 1);
            cur.push(r as u16);
            let next = if self.root_parity(r as u16) == 1 { r } else { r + 1 };
            self.enumerate(next, &nb, cur, out);
            cur.pop();
        }
    }

    /// Raising counterpart of a lowering word, applied right to left.
    pub fn raising_letters(&self, w: &[u16]) -> Vec<(usize, usize)> {
        w.iter().map(|&r| (self.roots[r as usize].j, self.roots[r as usize].i)).collect()
    }

    /// `<p, m>`: coefficient of `v0` in `p m`, for the raising word `p`
    /// attached to the lowering word `pw`.
    pub fn pairing(&self, pw: &[u16], m: &ModuleElement) -> ParamPoly {
        let mut cur = m.clone();
        for e in self.raising_letters(pw).into_iter().rev() {
            cur = self.act_g0(e, &cur);
            if cur.is_zero() {
                break;
            }
        }
        cur.coeff(&[]).cloned().unwrap_or_else(|| ParamPoly::zero(self.n()))
    }

    /// Gram matrix of the contravariant form on a weight space.
    pub fn gram(&self, offset: &[i32]) -> Vec<Vec<ParamPoly>> {
        let basis = self.weight_basis(offset);
        basis
            .iter()
            .map(|p| basis.iter().map(|w| self.pairing(p, &ModuleElement::basis(w.clone(), ParamPoly::one(self.n())))).collect())
            .collect()
    }

    pub fn render_word(&self, w: &[u16]) -> String {
        if w.is_empty() {
            return "v0".into();
        }
        let mut s: Vec<String> = w
            .iter()
            .map(|&r| {
                let Root { i, j } = self.roots[r as usize];
                format!("E{}{}", i + 1, j + 1)
            })
            .collect();
        s.push("v0".into());
        s.join("*")
    }
}

/// `offset = -sum c_k (eps_k - eps_{k+1})` with `c_k >= 0`; returns `c`.
pub fn simple_coords(offset: &[i32]) -> Option<Vec<i32>> {
    if offset.iter().sum::<i32>() != 0 {
        return None;
    }
    let mut c = Vec::with_capacity(offset.len().saturating_sub(1));
    let mut acc = 0;
    for &o in &offset[..offset.len().saturating_sub(1)] {
        acc -= o;
        if acc < 0 {
            return None;
        }
        c.push(acc);
    }
    Some(c)
}

/// `L(l)` is finite dimensional iff `l` is dominant integral on each block.
pub fn finite_dim_admissible(a: usize, weight: &[Rational]) -> bool {
    (0..weight.len().saturating_sub(1))
        .filter(|&i| i + 1 != a)
        .all(|i| is_nonneg_integer(&(&weight[i] - &weight[i + 1])))
}

/// Evaluates a module element at a numeric highest weight.
pub fn eval_element(m: &ModuleElement, point: &[Rational]) -> BTreeMap<Word, Rational> {
    m.terms
        .iter()
        .map(|(w, c)| (w.clone(), c.eval(point)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}
