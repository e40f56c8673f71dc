use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{fmt_rational, int, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("parameter lists differ: {0} vs {1} parameters")]
    ParamMismatch(usize, usize),
}

/// A factor of degree > 1 that does not split into affine factors over Q.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("polynomial {0} has a non-affine irreducible factor")]
pub struct NonlinearFactor(pub ParamPoly);

/// Exponent vector over the parameters. Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients in the weight parameters
/// `l1..l{nvars}`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPoly {
    pub fn zero(nvars: usize) -> Self {
        ParamPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, int(c))
    }

    /// The parameter `l{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "parameter index {i} out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial(e), Rational::one());
        p
    }

    /// `constant + sum linear[i] * l{i+1}`
    pub fn affine(linear: &[Rational], constant: Rational) -> Self {
        let n = linear.len();
        let mut p = Self::constant(n, constant);
        for (i, c) in linear.iter().enumerate() {
            if !c.is_zero() {
                p = p + Self::var(n, i).scale(c);
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.degree_in(v) > 0).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &ParamPoly) -> Result<ParamPoly, ArithError> {
        self.same_params(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &ParamPoly) -> Result<ParamPoly, ArithError> {
        self.same_params(other)?;
        let mut out = ParamPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    fn same_params(&self, other: &ParamPoly) -> Result<(), ArithError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(ArithError::ParamMismatch(self.nvars, other.nvars))
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(self.nvars);
        }
        ParamPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> ParamPoly {
        let mut out = ParamPoly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong length");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces the parameter `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &ParamPoly) -> ParamPoly {
        if self.degree_in(var) == 0 {
            return self.clone();
        }
        let coeffs = self.coeffs_in(var);
        // Horner
        let mut acc = ParamPoly::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Coefficients `a_k` with `self = sum a_k * var^k`; the `a_k` do not involve `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<ParamPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![ParamPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.clone();
            e.0[var] = 0;
            out[k].add_term(e, c.clone());
        }
        out
    }

    fn from_coeffs_in(var: usize, coeffs: &[ParamPoly]) -> ParamPoly {
        let n = coeffs[0].nvars;
        let t = ParamPoly::var(n, var);
        let mut acc = ParamPoly::zero(n);
        for c in coeffs.iter().rev() {
            acc = &(&acc * &t) + c;
        }
        acc
    }

    /// `(linear coefficients, constant)` when the total degree is at most 1.
    pub fn as_affine(&self) -> Option<(Vec<Rational>, Rational)> {
        if self.total_degree() > 1 {
            return None;
        }
        let mut lin = vec![Rational::zero(); self.nvars];
        let mut c0 = Rational::zero();
        for (m, c) in &self.terms {
            match m.0.iter().position(|&e| e == 1) {
                Some(i) => lin[i] = c.clone(),
                None => c0 = c.clone(),
            }
        }
        Some((lin, c0))
    }

    /// Rational content: the positive rational `c` with `self / c` having coprime
    /// integer coefficients and a positive leading coefficient (up to sign).
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        let lead_neg = self.terms.values().next_back().is_some_and(|c| c.is_negative());
        let c = Rational::new(num, den);
        if lead_neg {
            -c
        } else {
            c
        }
    }

    pub fn primitive(&self) -> ParamPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.content().recip())
    }

    /// Exact quotient by an affine polynomial, if it divides `self`.
    pub fn div_affine(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        let (lin, c0) = divisor.as_affine()?;
        let Some(v) = lin.iter().rposition(|c| !c.is_zero()) else {
            // constant divisor
            return (!c0.is_zero()).then(|| self.scale(&c0.recip()));
        };
        if self.is_zero() {
            return Some(self.clone());
        }
        // divisor = a*(t - r) with t = l_v
        let a = lin[v].clone();
        let r = (&ParamPoly::var(self.nvars, v) - &divisor.scale(&a.recip())).clone();
        let q = self.div_monic_linear(v, &r)?;
        Some(q.scale(&a.recip()))
    }

    /// Divides by `(t - r)` where `t = l_var` and `r` does not involve `t`.
    fn div_monic_linear(&self, var: usize, r: &ParamPoly) -> Option<ParamPoly> {
        let a = self.coeffs_in(var);
        let d = a.len() - 1;
        if d == 0 {
            return self.is_zero().then(|| self.clone());
        }
        let mut b = vec![ParamPoly::zero(self.nvars); d];
        b[d - 1] = a[d].clone();
        for k in (1..d).rev() {
            b[k - 1] = &a[k] + &(r * &b[k]);
        }
        let rem = &a[0] + &(r * &b[0]);
        rem.is_zero().then(|| Self::from_coeffs_in(var, &b))
    }

    /// Splits `self` as `unit * prod(factor^mult)` with every factor affine and
    /// normalized (first nonzero linear coefficient equal to 1).
    pub fn affine_factors(&self) -> Result<(Rational, Vec<(ParamPoly, u32)>), NonlinearFactor> {
        if self.is_zero() {
            return Err(NonlinearFactor(self.clone()));
        }
        let mut rest = self.clone();
        let mut factors: Vec<(ParamPoly, u32)> = Vec::new();
        for var in 0..self.nvars {
            while rest.degree_in(var) > 0 {
                let Some(root) = rest.find_affine_root(var) else {
                    return Err(NonlinearFactor(self.clone()));
                };
                rest = rest
                    .div_monic_linear(var, &root)
                    .expect("verified root must divide");
                let f = normalize_affine(&(&ParamPoly::var(self.nvars, var) - &root));
                match factors.iter_mut().find(|(g, _)| *g == f) {
                    Some((_, m)) => *m += 1,
                    None => factors.push((f, 1)),
                }
            }
        }
        let mut unit = rest.as_constant().expect("all variables divided out");
        // factors were normalized, so recover the unit from the leading term
        let mut prod = ParamPoly::one(self.nvars);
        for (f, m) in &factors {
            prod = &prod * &f.pow(*m);
        }
        if let Some((mono, c)) = prod.terms.iter().next_back() {
            let own = self.terms.get(mono).cloned().unwrap_or_default();
            unit = own / c;
        }
        factors.sort_by(|a, b| a.0.cmp_key().cmp(&b.0.cmp_key()));
        Ok((unit, factors))
    }

    fn cmp_key(&self) -> Vec<(Vec<u32>, String)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.0.clone(), fmt_rational(c)))
            .collect()
    }

    /// Finds `r` affine in the other parameters with `self(l_var = r) == 0`.
    fn find_affine_root(&self, var: usize) -> Option<ParamPoly> {
        let n = self.nvars;
        let others: Vec<usize> = self.vars().into_iter().filter(|&v| v != var).collect();
        let coeffs = self.coeffs_in(var);
        for base in base_points(n) {
            let univ_at = |pt: &[Rational]| -> Vec<Rational> { coeffs.iter().map(|c| c.eval(pt)).collect() };
            let u0 = univ_at(&base);
            if trim(&u0).len() < 2 {
                continue;
            }
            let mut shifted = Vec::new();
            let mut ok = true;
            for &j in &others {
                let mut p = base.clone();
                p[j] += Rational::one();
                let u = univ_at(&p);
                if trim(&u).len() < 2 {
                    ok = false;
                    break;
                }
                shifted.push(rational_roots(&u));
            }
            if !ok {
                continue;
            }
            let roots0 = rational_roots(&u0);
            let mut check = base.clone();
            for (k, &j) in others.iter().enumerate() {
                check[j] += rat(2 * k as i64 + 3, 5);
            }
            let u_check = univ_at(&check);
            let mut idx = vec![0usize; others.len()];
            for r0 in &roots0 {
                if shifted.iter().any(Vec::is_empty) && !others.is_empty() {
                    break;
                }
                loop {
                    // candidate r = r0 + sum (r_j - r0) (l_j - base_j)
                    let mut cand = ParamPoly::constant(n, r0.clone());
                    for (k, &j) in others.iter().enumerate() {
                        let slope = &shifted[k][idx[k]] - r0;
                        let term = &ParamPoly::var(n, j) - &ParamPoly::constant(n, base[j].clone());
                        cand = &cand + &term.scale(&slope);
                    }
                    let at_check = cand.eval(&check);
                    if horner(&u_check, &at_check).is_zero() && self.substitute(var, &cand).is_zero() {
                        return Some(cand);
                    }
                    // advance odometer
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            break;
                        }
                        idx[k] += 1;
                        if idx[k] < shifted[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == idx.len() {
                        break;
                    }
                }
            }
            return None;
        }
        None
    }

    /// Renders with parameters named `l1..ln` in the fixed expression grammar.
    pub fn render(&self) -> String {
        self.render_with(&|i| format!("l{}", i + 1))
    }

    pub fn render_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        // highest terms first, constant last
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    factors.push(name(i));
                }
            }
            if factors.is_empty() {
                s.push_str(&fmt_rational(&a));
            } else {
                if !a.is_one() {
                    factors.insert(0, fmt_rational(&a));
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

fn normalize_affine(p: &ParamPoly) -> ParamPoly {
    let (lin, _) = p.as_affine().expect("affine");
    let lead = lin.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
    p.scale(&lead.recip())
}

fn base_points(n: usize) -> Vec<Vec<Rational>> {
    const PRIMES: [i64; 8] = [7, 11, 13, 17, 19, 23, 29, 31];
    (0..4)
        .map(|s| {
            (0..n)
                .map(|i| rat(3 + 2 * i as i64 + 5 * s, PRIMES[(i + s as usize) % PRIMES.len()]))
                .collect()
        })
        .collect()
}

fn trim(c: &[Rational]) -> &[Rational] {
    let end = c.iter().rposition(|x| !x.is_zero()).map_or(0, |p| p + 1);
    &c[..end]
}

fn horner(c: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for a in c.iter().rev() {
        acc = acc * x + a;
    }
    acc
}

/// Distinct rational roots of a univariate polynomial given by ascending coefficients.
pub(crate) fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let c = trim(coeffs);
    if c.len() < 2 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let lead_zero = c.iter().position(|x| !x.is_zero()).unwrap();
    if lead_zero > 0 {
        roots.push(Rational::zero());
    }
    let c = &c[lead_zero..];
    if c.len() < 2 {
        return roots;
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let p_divs = divisors(&ints[0].abs());
    let q_divs = divisors(&ints[ints.len() - 1].abs());
    for p in &p_divs {
        for q in &q_divs {
            for sign in [1, -1] {
                let r = Rational::new(p * BigInt::from(sign), q.clone());
                if !roots.contains(&r) && horner(c, &r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &(&i * &i) <= n {
        if (n % &i).is_zero() {
            out.push(i.clone());
            let j = n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_add(rhs).expect("parameter lists must agree")
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: ParamPoly) -> ParamPoly {
        &self + &rhs
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: ParamPoly) -> ParamPoly {
        &self - &rhs
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.checked_mul(rhs).expect("parameter lists must agree")
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        &self * &rhs
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}
