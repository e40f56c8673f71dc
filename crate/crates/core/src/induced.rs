//! The induced module `I(V) = U(g) (x)_{g_>=0} V`, realized as
//! `Lambda/S(g_{-1}) (x) V` with `V` a highest weight `gl(a|b)`-module.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::algebra::{SMono, SuperField};
use crate::arith::ParamPoly;
use crate::hw::{ModuleElement, VermaModule, Weight, Word};

/// Monomial `d_1^{e_1} ... d_n^{e_n}` in the partial derivatives, stored as
/// the exponent data of the corresponding coordinate monomial.
pub type DMonomial = SMono;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InducedElement {
    pub terms: BTreeMap<DMonomial, ModuleElement>,
}

impl InducedElement {
    pub fn add_scaled(&mut self, d: &DMonomial, m: &ModuleElement, s: &ParamPoly) {
        if m.is_zero() {
            return;
        }
        let slot = self.terms.entry(d.clone()).or_default();
        slot.add_scaled(m, s);
        if slot.is_zero() {
            self.terms.remove(d);
        }
    }

    pub fn add(&mut self, other: &InducedElement) {
        for (d, m) in &other.terms {
            let n = m.terms.values().next().map_or(0, ParamPoly::nvars);
            self.add_scaled(d, m, &ParamPoly::one(n));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// All monomials of total degree `k` in `a` even and `b` odd partials.
pub fn d_monomials(a: usize, b: usize, k: u32) -> Vec<DMonomial> {
    let mut out = Vec::new();
    for odd in 0u32..(1 << b) {
        let r = k as i64 - i64::from(odd.count_ones());
        if r < 0 {
            continue;
        }
        for even in crate::algebra::compositions(r as u32, a) {
            out.push(SMono { even, odd });
        }
    }
    out.sort();
    out
}

pub struct InducedModule<'a> {
    pub verma: &'a VermaModule,
    memo: Mutex<HashMap<(SuperField, DMonomial, Word), InducedElement>>,
}

impl<'a> InducedModule<'a> {
    pub fn new(verma: &'a VermaModule) -> Self {
        InducedModule { verma, memo: Mutex::default() }
    }

    fn a(&self) -> usize {
        self.verma.a
    }

    fn b(&self) -> usize {
        self.verma.b
    }

    /// Weight of `d^D (x) w v0` relative to the highest weight.
    pub fn weight_of(&self, d: &DMonomial, w: &[u16]) -> Weight {
        let e = d.exponents(self.b());
        self.verma.word_offset(w).iter().zip(&e).map(|(o, x)| o - x).collect()
    }

    /// `X (d^D (x) w v0)`.
    pub fn act(&self, x: &SuperField, d: &DMonomial, w: &[u16]) -> InducedElement {
        let mut out = InducedElement::default();
        for part in split_parity(x) {
            out.add(&self.act_homogeneous(&part, d, w));
        }
        out
    }

    fn act_homogeneous(&self, x: &SuperField, d: &DMonomial, w: &[u16]) -> InducedElement {
        let key = (x.clone(), d.clone(), w.to_vec());
        if let Some(r) = self.memo.lock().unwrap().get(&key) {
            return r.clone();
        }
        let n = self.verma.n();
        let mut out = InducedElement::default();
        let e = d.exponents(self.b());
        match e.iter().position(|&k| k > 0) {
            None => {
                let m = ModuleElement::basis(w.to_vec(), ParamPoly::one(n));
                for ((mono, t), c) in &x.terms {
                    let coef = ParamPoly::constant(n, c.clone());
                    match mono.degree() {
                        0 => out.add_scaled(&SMono::coord(self.a(), *t), &m, &coef),
                        1 => {
                            let k = (0..n).find(|&k| mono == &SMono::coord(self.a(), k)).unwrap();
                            out.add_scaled(&SMono::one(self.a()), &self.verma.act_word((k, *t), w), &coef);
                        }
                        _ => {}
                    }
                }
            }
            Some(j) => {
                // d^D = d_j d^{D'} with j the smallest index present
                let rest = d.deriv(j).map(|(_, m)| m).unwrap();
                let dj = SuperField::partial(self.a(), self.b(), j);
                let comm = x.bracket(&dj);
                out.add(&self.act(&comm, &rest, w));
                let px = x.parity().unwrap_or(0);
                let pj = u8::from(j >= self.a());
                let s = if px * pj == 1 { -1 } else { 1 };
                let inner = self.act_homogeneous(x, &rest, w);
                let cj = SMono::coord(self.a(), j);
                for (k, m) in &inner.terms {
                    if let Some((s2, prod)) = cj.mul(k) {
                        out.add_scaled(&prod, m, &ParamPoly::int(n, (s * s2).into()));
                    }
                }
            }
        }
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }
}

fn split_parity(x: &SuperField) -> Vec<SuperField> {
    let mut parts = [SuperField::zero(x.a, x.b), SuperField::zero(x.a, x.b)];
    for ((m, t), c) in &x.terms {
        let p = (m.parity() + u8::from(*t >= x.a)) % 2;
        parts[p as usize].add_term(m.clone(), *t, c.clone());
    }
    parts.into_iter().filter(|p| !p.is_zero()).collect()
}
