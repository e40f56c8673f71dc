use std::collections::BTreeMap;

use num_traits::Zero;

use crate::arith::{fmt_rational, int, Monomial, ParamPoly, Rational};

use super::{classify, ClassifyError, Config};

/// Key of a case that persists as the degree grows: odd part of the top
/// monomial and degree minus the even exponent.
pub type PatternKey = (u32, u32);

/// Weight of `V` on one case as a function of the degree `n`.
#[derive(Clone, Debug)]
pub struct DegreePattern {
    pub key: PatternKey,
    /// Degrees where the case occurs.
    pub degrees: Vec<u32>,
    /// Per weight coordinate and parameter monomial: `(slope, intercept)` in `n`.
    pub components: Vec<BTreeMap<Monomial, (Rational, Rational)>>,
    /// False if the fitted form fails at some degree.
    pub affine: bool,
}

impl DegreePattern {
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(render_component).collect();
        format!("({})", parts.join(", "))
    }

    /// The weight at a given degree.
    pub fn at(&self, n: u32, nvars: usize) -> Vec<ParamPoly> {
        self.components
            .iter()
            .map(|c| {
                let mut p = ParamPoly::zero(nvars);
                for (m, (s, t)) in c {
                    p = &p + &ParamPoly::from_terms(nvars, [(m.clone(), s * int(n.into()) + t)]);
                }
                p
            })
            .collect()
    }
}

fn render_component(c: &BTreeMap<Monomial, (Rational, Rational)>) -> String {
    let mut out = String::new();
    // the constant first, then parameter terms
    let mut terms: Vec<_> = c.iter().filter(|(_, (s, t))| !(s.is_zero() && t.is_zero())).collect();
    terms.sort_by_key(|(m, _)| !m.is_one());
    for (m, (s, t)) in terms {
        let coef = affine_in_n(s, t);
        let body = if m.is_one() {
            coef.clone()
        } else {
            let name = ParamPoly::from_terms(m.0.len(), [((*m).clone(), int(1))]).render();
            match coef.as_str() {
                "1" => name,
                "-1" => format!("-{name}"),
                c if c.contains(' ') => format!("({c})*{name}"),
                c => format!("{c}*{name}"),
            }
        };
        if out.is_empty() {
            out = body;
        } else if let Some(rest) = body.strip_prefix('-') {
            out = format!("{out} - {rest}");
        } else {
            out = format!("{out} + {body}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn affine_in_n(s: &Rational, t: &Rational) -> String {
    let lin = match fmt_rational(s).as_str() {
        "0" => String::new(),
        "1" => "n".into(),
        "-1" => "-n".into(),
        x => format!("{x}*n"),
    };
    match (lin.is_empty(), t.is_zero()) {
        (true, _) => fmt_rational(t),
        (false, true) => lin,
        (false, false) if t < &Rational::zero() => format!("{lin} - {}", fmt_rational(&-t)),
        _ => format!("{lin} + {}", fmt_rational(t)),
    }
}

/// Classify at every degree `1..=max_degree` and fit each case's weight as
/// an affine function of the degree. Degree 1 is kept out of the fit when
/// later degrees exist, since low degrees may degenerate.
pub fn degree_patterns(base: &Config, max_degree: u32) -> Result<Vec<DegreePattern>, ClassifyError> {
    let n = base.n();
    let mut seen: BTreeMap<PatternKey, Vec<(u32, Vec<ParamPoly>)>> = BTreeMap::new();
    for k in 1..=max_degree {
        let cfg = Config { degree: k, ..base.clone() };
        for case in classify(&cfg)?.cases {
            let even: u32 = case.top.even.iter().sum();
            seen.entry((case.top.odd, k - even)).or_default().push((k, case.weight_v));
        }
    }
    let mut out = Vec::new();
    for (key, runs) in seen {
        let fit_runs: Vec<&(u32, Vec<ParamPoly>)> = if runs.len() > 2 { runs.iter().filter(|(k, _)| *k > 1).collect() } else { runs.iter().collect() };
        let mut components = Vec::new();
        let mut affine = true;
        for i in 0..n {
            let mut comp: BTreeMap<Monomial, (Rational, Rational)> = BTreeMap::new();
            let monos: Vec<Monomial> = {
                let mut v: Vec<Monomial> = fit_runs.iter().flat_map(|(_, w)| w[i].terms().map(|(m, _)| m.clone()).collect::<Vec<_>>()).collect();
                v.sort();
                v.dedup();
                v
            };
            for m in monos {
                let pts: Vec<(Rational, Rational)> = fit_runs.iter().map(|(k, w)| (int((*k).into()), w[i].coeff(&m))).collect();
                let (s, t) = if pts.len() == 1 {
                    (Rational::zero(), pts[0].1.clone())
                } else {
                    let s = (&pts[1].1 - &pts[0].1) / (&pts[1].0 - &pts[0].0);
                    let t = &pts[0].1 - &s * &pts[0].0;
                    (s, t)
                };
                affine &= pts.iter().all(|(x, y)| &s * x + &t == *y);
                comp.insert(m, (s, t));
            }
            components.push(comp);
        }
        out.push(DegreePattern { key, degrees: runs.iter().map(|(k, _)| *k).collect(), components, affine });
    }
    Ok(out)
}
