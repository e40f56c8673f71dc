//! Brute-force verifier at numeric highest weights.
//!
//! Elements of `U(g)` are words in monomial vector fields acting on `v0`;
//! normal forms come from adjacent swaps `XY = (-1)^{p(X)p(Y)} YX + [X,Y]`.
//! Nothing here uses the symbolic solver or its generator reduction: the
//! singularity test runs over every basis field of positive degree and every
//! raising operator.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::algebra::{compositions, fields_of_degree, mul_coord, Algebra, SMono, SuperField};
use crate::arith::{rational_kernel, rational_rank, Rational};
use crate::hw::simple_coords;

type Letter = usize;
type Vector = BTreeMap<Vec<Letter>, Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Class {
    Partial,
    Lowering,
    Other,
}

struct LetterInfo {
    mono: SMono,
    target: usize,
    class: Class,
    parity: u8,
    /// `Some(i)` for the Cartan element `u_i d_i`
    cartan: Option<usize>,
    weight: Vec<i32>,
}

/// Numeric rewriting engine for `U(vect(a|b))` acting on a highest weight vector.
pub struct RewritingEngine {
    pub a: usize,
    pub b: usize,
    pub weight: Vec<Rational>,
    letters: Mutex<Vec<LetterInfo>>,
    lookup: Mutex<HashMap<(SMono, usize), Letter>>,
    brackets: Mutex<HashMap<(Letter, Letter), Vec<(Letter, Rational)>>>,
    memo: Mutex<HashMap<Vec<Letter>, Vector>>,
}

impl RewritingEngine {
    pub fn new(a: usize, b: usize, weight: Vec<Rational>) -> Self {
        assert_eq!(weight.len(), a + b);
        RewritingEngine {
            a,
            b,
            weight,
            letters: Mutex::default(),
            lookup: Mutex::default(),
            brackets: Mutex::default(),
            memo: Mutex::default(),
        }
    }

    pub fn letter(&self, mono: &SMono, target: usize) -> Letter {
        if let Some(&l) = self.lookup.lock().unwrap().get(&(mono.clone(), target)) {
            return l;
        }
        let deg = mono.degree() as i32 - 1;
        let mut weight = mono.exponents(self.b);
        weight[target] -= 1;
        let src = (0..self.a + self.b).find(|&i| mono == &SMono::coord(self.a, i));
        let class = match (deg, src) {
            (-1, _) => Class::Partial,
            (0, Some(i)) if i > target => Class::Lowering,
            _ => Class::Other,
        };
        let cartan = if deg == 0 && src == Some(target) { Some(target) } else { None };
        let parity = (mono.parity() + u8::from(target >= self.a)) % 2;
        let mut letters = self.letters.lock().unwrap();
        let id = letters.len();
        letters.push(LetterInfo { mono: mono.clone(), target, class, parity, cartan, weight });
        self.lookup.lock().unwrap().insert((mono.clone(), target), id);
        id
    }

    pub fn partial(&self, i: usize) -> Letter {
        self.letter(&SMono::one(self.a), i)
    }

    /// `E_ij = u_i d_j`.
    pub fn gl(&self, i: usize, j: usize) -> Letter {
        self.letter(&SMono::coord(self.a, i), j)
    }

    /// A field as a combination of letters.
    pub fn letters_of(&self, f: &SuperField) -> Vec<(Letter, Rational)> {
        f.terms.iter().map(|((m, t), c)| (self.letter(m, *t), c.clone())).collect()
    }

    fn info<R>(&self, l: Letter, f: impl FnOnce(&LetterInfo) -> R) -> R {
        f(&self.letters.lock().unwrap()[l])
    }

    fn key(&self, l: Letter) -> (Class, Letter) {
        let (class, mono, target) = self.info(l, |x| (x.class, x.mono.clone(), x.target));
        match class {
            // partials ordered by coordinate, lowering operators by (source, target)
            Class::Partial => (class, target),
            Class::Lowering => {
                let src = (0..self.a + self.b).find(|&i| mono == SMono::coord(self.a, i)).unwrap();
                (class, src * 64 + target)
            }
            Class::Other => (class, l),
        }
    }

    pub fn parity(&self, l: Letter) -> u8 {
        self.info(l, |x| x.parity)
    }

    pub fn letter_weight(&self, l: Letter) -> Vec<i32> {
        self.info(l, |x| x.weight.clone())
    }

    fn bracket(&self, x: Letter, y: Letter) -> Vec<(Letter, Rational)> {
        if let Some(r) = self.brackets.lock().unwrap().get(&(x, y)) {
            return r.clone();
        }
        let fx = self.info(x, |i| SuperField::monomial(self.a, self.b, i.mono.clone(), i.target, Rational::one()));
        let fy = self.info(y, |i| SuperField::monomial(self.a, self.b, i.mono.clone(), i.target, Rational::one()));
        let out = self.letters_of(&fx.bracket(&fy));
        self.brackets.lock().unwrap().insert((x, y), out.clone());
        out
    }

    /// Normal form of `word v0`: partials, then lowering operators, each
    /// block sorted, with everything else moved right and evaluated on `v0`.
    pub fn reduce(&self, word: &[Letter]) -> Vector {
        if let Some(r) = self.memo.lock().unwrap().get(word) {
            return r.clone();
        }
        let out = self.reduce_uncached(word);
        self.memo.lock().unwrap().insert(word.to_vec(), out.clone());
        out
    }

    fn reduce_uncached(&self, word: &[Letter]) -> Vector {
        let mut out = Vector::new();
        let Some(&last) = word.last() else {
            out.insert(Vec::new(), Rational::one());
            return out;
        };
        if self.key(last).0 == Class::Other {
            if let Some(i) = self.info(last, |x| x.cartan) {
                let c = self.weight[i].clone();
                if !c.is_zero() {
                    for (w, v) in self.reduce(&word[..word.len() - 1]) {
                        out.insert(w, v * &c);
                    }
                }
            }
            return out;
        }
        // rightmost adjacent pair out of order
        let bad = (0..word.len() - 1).rev().find(|&i| {
            let (kx, ky) = (self.key(word[i]), self.key(word[i + 1]));
            ky.0 != Class::Other && (kx > ky || (kx == ky && self.parity(word[i]) == 1))
        });
        let Some(i) = bad else {
            out.insert(word.to_vec(), Rational::one());
            return out;
        };
        let (x, y) = (word[i], word[i + 1]);
        let mut add = |w: Vec<Letter>, c: Rational| {
            for (nw, v) in self.reduce(&w) {
                let slot = out.entry(nw).or_insert_with(Rational::zero);
                *slot += v * &c;
            }
        };
        if x == y {
            // X^2 = [X, X] / 2 for odd X
            for (z, c) in self.bracket(x, x) {
                let mut w = word[..i].to_vec();
                w.push(z);
                w.extend_from_slice(&word[i + 2..]);
                add(w, c / Rational::from_integer(2.into()));
            }
        } else {
            let sign = if self.parity(x) * self.parity(y) == 1 { -Rational::one() } else { Rational::one() };
            let mut swapped = word.to_vec();
            swapped.swap(i, i + 1);
            add(swapped, sign);
            for (z, c) in self.bracket(x, y) {
                let mut w = word[..i].to_vec();
                w.push(z);
                w.extend_from_slice(&word[i + 2..]);
                add(w, c);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Applies a combination of letters to a vector.
    pub fn apply(&self, x: &[(Letter, Rational)], v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (l, c) in x {
            for (w, cv) in v {
                let mut word = vec![*l];
                word.extend_from_slice(w);
                for (nw, r) in self.reduce(&word) {
                    let slot = out.entry(nw).or_insert_with(Rational::zero);
                    *slot += r * c * cv;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn split(&self, w: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
        let k = w.iter().take_while(|&&l| self.key(l).0 == Class::Partial).count();
        (w[..k].to_vec(), w[k..].to_vec())
    }
}

/// Depth-truncated realization of the `gl(a|b)` highest weight module at a
/// numeric weight: lowering words grouped by weight offset, with Gram matrices.
pub struct NumericRealization {
    pub engine: RewritingEngine,
    pub depth: usize,
    lowering: Vec<Letter>,
    bases: Mutex<HashMap<Vec<i32>, Vec<Vec<Letter>>>>,
}

/// Builds the realization; words longer than `depth` are outside the validity window.
pub fn realize(weight: &[Rational], a: usize, b: usize, depth: usize) -> NumericRealization {
    let engine = RewritingEngine::new(a, b, weight.to_vec());
    let n = a + b;
    let mut lowering: Vec<Letter> = Vec::new();
    for i in 0..n {
        for j in 0..i {
            lowering.push(engine.gl(i, j));
        }
    }
    lowering.sort_by_key(|&l| engine.key(l));
    NumericRealization { engine, depth, lowering, bases: Mutex::default() }
}

impl NumericRealization {
    /// Normal lowering words with the given weight offset, up to the depth bound.
    pub fn words(&self, offset: &[i32]) -> Vec<Vec<Letter>> {
        if let Some(r) = self.bases.lock().unwrap().get(offset) {
            return r.clone();
        }
        let mut out = Vec::new();
        if simple_coords(offset).is_some() {
            let mut cur = Vec::new();
            self.grow(0, &mut vec![0; offset.len()], offset, &mut cur, &mut out);
        }
        self.bases.lock().unwrap().insert(offset.to_vec(), out.clone());
        out
    }

    fn grow(&self, from: usize, acc: &mut Vec<i32>, target: &[i32], cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if acc.as_slice() == target {
            out.push(cur.clone());
        }
        if cur.len() >= self.depth {
            return;
        }
        for k in from..self.lowering.len() {
            let l = self.lowering[k];
            let w = self.engine.letter_weight(l);
            let next: Vec<i32> = acc.iter().zip(&w).map(|(x, y)| x + y).collect();
            // stay above the target in dominance order
            let diff: Vec<i32> = next.iter().zip(target).map(|(x, y)| y - x).collect();
            if simple_coords(&diff).is_none() {
                continue;
            }
            cur.push(l);
            let odd = self.engine.parity(l) == 1;
            let mut nacc = next;
            self.grow(if odd { k + 1 } else { k }, &mut nacc, target, cur, out);
            cur.pop();
        }
    }

    /// The raising word adjoint to a lowering word.
    fn adjoint(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter()
            .rev()
            .map(|&l| {
                let (mono, t) = self.engine.info(l, |x| (x.mono.clone(), x.target));
                let src = (0..self.engine.a + self.engine.b).find(|&i| mono == SMono::coord(self.engine.a, i)).unwrap();
                self.engine.gl(t, src)
            })
            .collect()
    }

    /// `<p, m>` where `p` is adjoint to the lowering word `pw`.
    pub fn pairing(&self, pw: &[Letter], m: &Vector) -> Rational {
        let p = self.adjoint(pw);
        let mut total = Rational::zero();
        for (w, c) in m {
            let mut word = p.clone();
            word.extend_from_slice(w);
            if let Some(v) = self.engine.reduce(&word).get(&Vec::new()) {
                total += v * c;
            }
        }
        total
    }

    pub fn gram(&self, offset: &[i32]) -> Vec<Vec<Rational>> {
        let ws = self.words(offset);
        ws.iter()
            .map(|p| ws.iter().map(|w| self.pairing(p, &BTreeMap::from([(w.clone(), Rational::one())]))).collect())
            .collect()
    }

    /// Dimension of the weight space of the irreducible quotient.
    pub fn quotient_dim(&self, offset: &[i32]) -> usize {
        rational_rank(&self.gram(offset))
    }
}

/// Every field of positive degree that can act nontrivially in degree `k`,
/// together with all raising operators of `g_0`.
pub fn test_fields(a: usize, b: usize, k: u32, algebra: Algebra) -> Vec<SuperField> {
    let n = a + b;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(SuperField::gl(a, b, i, j));
        }
    }
    match algebra {
        Algebra::Pgl => out.extend((0..n).map(|i| mul_coord(&SuperField::euler(a, b), i))),
        Algebra::Vect => {
            for d in 1..=k as i32 {
                out.extend(fields_of_degree(a, b, d));
            }
        }
    }
    out
}

/// Result of a brute-force search at one numeric weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Weight offset of `f` relative to the highest weight, with the singular dimension there.
    pub by_weight: Vec<(Vec<i32>, usize)>,
}

impl OracleResult {
    pub fn dimension(&self) -> usize {
        self.by_weight.iter().map(|(_, d)| d).sum()
    }
}

/// Singular vectors of degree `k` in `I(V)` at the numeric weight `weight`.
///
/// With `quotient`, `V` is the irreducible module `L(weight)` (every weight
/// space cut down by the contravariant form); without it, the Verma module.
pub fn brute_force_singular(a: usize, b: usize, k: u32, weight: &[Rational], algebra: Algebra, quotient: bool) -> OracleResult {
    let n = a + b;
    let height = (k as usize) * n.saturating_sub(1);
    // basis offsets reach twice the candidate height
    let real = realize(weight, a, b, 2 * height);
    let eng = &real.engine;
    let fields: Vec<Vec<(Letter, Rational)>> = test_fields(a, b, k, algebra).iter().map(|f| eng.letters_of(f)).collect();
    let partial_monos = partial_monomials(a, b, k);
    let mut by_weight = Vec::new();
    for offset in candidate_offsets(n, b, k, &partial_monos) {
        // unknown basis: d^I (x) w with weight(d^I) + weight(w) = offset
        let mut basis: Vec<Vec<Letter>> = Vec::new();
        let mut rad = 0;
        for mono in &partial_monos {
            let e = mono.exponents(b);
            let off: Vec<i32> = offset.iter().zip(&e).map(|(o, x)| o + x).collect();
            let ws = real.words(&off);
            if ws.is_empty() {
                continue;
            }
            if quotient {
                rad += ws.len() - real.quotient_dim(&off);
            }
            let ds = partial_word(eng, a, mono);
            for w in ws {
                let mut full = ds.clone();
                full.extend(w);
                basis.push(full);
            }
        }
        if basis.is_empty() {
            continue;
        }
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for x in &fields {
            let images: Vec<Vector> = basis.iter().map(|bw| eng.apply(x, &BTreeMap::from([(bw.clone(), Rational::one())]))).collect();
            // group by partial part
            let mut comps: BTreeMap<Vec<Letter>, Vec<Vector>> = BTreeMap::new();
            for (u, img) in images.iter().enumerate() {
                for (w, c) in img {
                    let (d, rest) = eng.split(w);
                    let slot = comps.entry(d).or_insert_with(|| vec![Vector::new(); basis.len()]);
                    slot[u].insert(rest, c.clone());
                }
            }
            for (_, per) in comps {
                if quotient {
                    let Some(w0) = per.iter().find_map(|m| m.keys().next().cloned()) else { continue };
                    let off: Vec<i32> = word_weight(eng, n, &w0);
                    for p in real.words(&off) {
                        rows.push(per.iter().map(|m| real.pairing(&p, m)).collect());
                    }
                } else {
                    let mut keys: Vec<&Vec<Letter>> = per.iter().flat_map(|m| m.keys()).collect();
                    keys.sort();
                    keys.dedup();
                    for key in keys {
                        rows.push(per.iter().map(|m| m.get(key).cloned().unwrap_or_default()).collect());
                    }
                }
            }
        }
        let ker = if rows.is_empty() { basis.len() } else { rational_kernel(&rows, basis.len()).len() };
        let dim = ker.checked_sub(rad).expect("radical lies in the kernel");
        if dim > 0 {
            by_weight.push((offset, dim));
        }
    }
    OracleResult { by_weight }
}

fn word_weight(eng: &RewritingEngine, n: usize, w: &[Letter]) -> Vec<i32> {
    let mut acc = vec![0; n];
    for &l in w {
        for (a, x) in acc.iter_mut().zip(eng.letter_weight(l)) {
            *a += x;
        }
    }
    acc
}

fn partial_monomials(a: usize, b: usize, k: u32) -> Vec<SMono> {
    let mut out = Vec::new();
    for odd in 0u32..(1 << b) {
        let r = k as i64 - i64::from(odd.count_ones());
        if r >= 0 {
            out.extend(compositions(r as u32, a).into_iter().map(|even| SMono { even, odd }));
        }
    }
    out
}

fn partial_word(eng: &RewritingEngine, a: usize, m: &SMono) -> Vec<Letter> {
    let mut w = Vec::new();
    for (i, &e) in m.even.iter().enumerate() {
        w.extend(std::iter::repeat(eng.partial(i)).take(e as usize));
    }
    for j in 0..32 {
        if m.odd & (1 << j) != 0 {
            w.push(eng.partial(a + j));
        }
    }
    w
}

/// Every weight offset `-eps_I - beta` with `beta` a sum of positive roots of
/// height at most the lowering depth needed in degree `k`.
fn candidate_offsets(n: usize, b: usize, k: u32, monos: &[SMono]) -> Vec<Vec<i32>> {
    let h = (k as i32) * (n as i32 - 1).max(0);
    let mut out: Vec<Vec<i32>> = Vec::new();
    for m in monos {
        let e = m.exponents(b);
        for beta in cone(n, h) {
            let off: Vec<i32> = e.iter().zip(&beta).map(|(x, y)| -x + y).collect();
            if !out.contains(&off) {
                out.push(off);
            }
        }
    }
    out
}

/// Offsets `-sum c_i alpha_i` with `sum c_i <= h`.
fn cone(n: usize, h: i32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let m = n.saturating_sub(1);
    let mut c = vec![0i32; m];
    loop {
        if c.iter().sum::<i32>() <= h {
            let mut off = vec![0; n];
            for (i, &ci) in c.iter().enumerate() {
                off[i] -= ci;
                off[i + 1] += ci;
            }
            out.push(off);
        }
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            c[i] += 1;
            if c[i] <= h {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn sl2_gram() {
        let r = realize(&[int(3), int(0)], 2, 0, 6);
        // L(3, 0) for gl(2) is 4-dimensional
        let dims: Vec<usize> = (0..6).map(|k| r.quotient_dim(&[-k, k])).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn berezin_and_de_rham() {
        let one = [int(1), int(1)];
        assert_eq!(brute_force_singular(0, 2, 2, &one, Algebra::Pgl, true).dimension(), 1);
        assert_eq!(brute_force_singular(1, 0, 1, &[int(0)], Algebra::Vect, true).dimension(), 1);
        assert_eq!(brute_force_singular(1, 0, 1, &[rat(1, 2)], Algebra::Vect, true).dimension(), 0);
    }
}
