use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{int, rat, rational_echelon, AffineConstraint, Leaf, ParamPoly, ParamScalar, Rational};
use crate::hw::{finite_dim_admissible, VermaModule};

use super::{render_dmono, solve_all_tops, Ansatz, ClassifyError, Config, TopSolve};
use crate::induced::DMonomial;

/// One solution leaf of one top monomial.
#[derive(Clone, Debug)]
pub struct Case {
    pub top: DMonomial,
    pub top_label: String,
    pub leaf: Leaf,
    /// Highest weight of `V` on the case, in the free parameters.
    pub weight_v: Vec<ParamPoly>,
    pub weight_f: Vec<ParamPoly>,
    pub free_params: Vec<usize>,
    /// Per monomial of `f`: is its coefficient nonzero on the case?
    pub vanishing: Vec<(String, bool)>,
    /// Per monomial: coefficient of `f` as an expression in PBW words on `v0`.
    pub solution: Vec<(String, String)>,
    pub finiteness: Finiteness,
    pub interpretation: Interpretation,
}

impl Case {
    pub fn constraints(&self) -> &[AffineConstraint] {
        &self.leaf.equalities
    }

    pub fn codimension(&self) -> usize {
        self.weight_v.len() - self.free_params.len()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        self.leaf.contains(point)
    }

    pub fn render_weight(w: &[ParamPoly]) -> String {
        format!("({})", w.iter().map(ParamPoly::render).collect::<Vec<_>>().join(", "))
    }

    pub fn exclusions(&self) -> Vec<String> {
        self.leaf.inequations.iter().map(|p| format!("{} != 0", p.render())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Finiteness {
    /// `(i, l_i - l_{i+1})` for adjacent indices inside one parity block.
    pub dominance: Vec<(usize, ParamPoly)>,
    pub condition: String,
    /// A point of the case with finite-dimensional `V`, if one was found.
    pub finite_witness: Option<Vec<Rational>>,
}

impl Finiteness {
    pub fn verdict(&self) -> &'static str {
        if self.finite_witness.is_some() {
            "solutions exist with dim V < inf"
        } else {
            "no solutions if dim V < inf"
        }
    }
}

/// The invariant operator dual to a singular vector.
#[derive(Clone, Debug)]
pub struct Interpretation {
    pub order: u32,
    /// Lowest weights of the source and target tensor-field fibers.
    pub source: Vec<ParamPoly>,
    pub target: Vec<ParamPoly>,
    pub label: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Continuum {
    pub flag: bool,
    /// Smallest codimension among the cases, with the case realizing it.
    pub codimension: Option<usize>,
    pub case: Option<usize>,
    pub free_params: Vec<String>,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub config: Config,
    pub cases: Vec<Case>,
    pub continuum: Continuum,
}

impl Classification {
    /// Number of independent singular vectors of degree `k` at a numeric weight.
    pub fn predicted_dimension(&self, point: &[Rational]) -> usize {
        self.cases.iter().filter(|c| c.contains(point)).count()
    }
}

/// Search bound for dominant integral points.
const DOMINANCE_BOUND: i64 = 6;

pub fn classify(cfg: &Config) -> Result<Classification, ClassifyError> {
    let tops = solve_all_tops(cfg)?;
    let verma = VermaModule::new(cfg.a, cfg.b);
    let mut cases = Vec::new();
    for ts in &tops {
        for leaf in ts.solution_leaves() {
            cases.push(make_case(cfg, ts, leaf, &verma));
        }
    }
    let mut c = Classification { config: cfg.clone(), cases, continuum: Continuum::default_off() };
    c.continuum = detect_continuum(&c);
    Ok(c)
}

impl Continuum {
    fn default_off() -> Self {
        Continuum { flag: false, codimension: None, case: None, free_params: Vec::new(), witness: Vec::new() }
    }
}

fn make_case(cfg: &Config, ts: &TopSolve, leaf: &Leaf, verma: &VermaModule) -> Case {
    let n = cfg.n();
    let ansatz = &ts.ansatz;
    let weight_v: Vec<ParamPoly> = (0..n)
        .map(|i| leaf.substitution.iter().find(|(v, _)| *v == i).map_or_else(|| ParamPoly::var(n, i), |(_, e)| e.clone()))
        .collect();
    let top_e = ansatz.top.exponents(cfg.b);
    let weight_f: Vec<ParamPoly> = weight_v.iter().zip(&top_e).map(|(w, e)| w - &ParamPoly::int(n, (*e).into())).collect();
    let values = unknown_values(ansatz, leaf, n);
    let (vanishing, solution) = render_solution(cfg, ansatz, &values, verma);
    let finiteness = finiteness(cfg, leaf, &weight_v);
    let interpretation = render_operator(cfg, &ansatz.top, &weight_v, &weight_f);
    Case {
        top: ansatz.top.clone(),
        top_label: render_dmono(cfg.a, &ansatz.top),
        leaf: leaf.clone(),
        free_params: leaf.free_params(n),
        weight_v,
        weight_f,
        vanishing,
        solution,
        finiteness,
        interpretation,
    }
}

/// Values of all unknowns with the normalization set to 1 and every other
/// free unknown set to 0, scaled to clear denominators.
fn unknown_values(ansatz: &Ansatz, leaf: &Leaf, n: usize) -> Vec<ParamPoly> {
    let c0 = ansatz.normalization();
    let mut vals: Vec<ParamScalar> = vec![ParamScalar::from_poly(ParamPoly::zero(n)); ansatz.unknowns.len()];
    vals[c0] = ParamScalar::from_poly(ParamPoly::one(n));
    for (p, combo) in &leaf.solution {
        if let Some((_, s)) = combo.iter().find(|(j, _)| *j == c0) {
            vals[*p] = s.clone();
        }
    }
    // lcm of the denominators as a product of affine factors
    let mut lcm_factors: Vec<(ParamPoly, u32)> = Vec::new();
    for v in &vals {
        if let Ok((_, fs)) = v.den.affine_factors() {
            for (f, m) in fs {
                match lcm_factors.iter_mut().find(|(g, _)| *g == f) {
                    Some((_, k)) => *k = (*k).max(m),
                    None => lcm_factors.push((f, m)),
                }
            }
        }
    }
    let mut lcm = ParamPoly::one(n);
    for (f, m) in &lcm_factors {
        lcm = &lcm * &f.pow(*m);
    }
    vals.iter()
        .map(|v| {
            let mut q = lcm.clone();
            if let Ok((_, fs)) = v.den.affine_factors() {
                for (f, m) in fs {
                    for _ in 0..m {
                        q = q.div_affine(&f).expect("lcm contains every denominator factor");
                    }
                }
            }
            let unit = v.den.affine_factors().map(|(u, _)| u).unwrap_or_else(|_| Rational::one());
            (&v.num * &q).scale(&unit.recip())
        })
        .collect()
}

fn render_solution(cfg: &Config, ansatz: &Ansatz, values: &[ParamPoly], verma: &VermaModule) -> (Vec<(String, bool)>, Vec<(String, String)>) {
    let mut per_mono: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (u, &(ti, wi)) in ansatz.unknowns.iter().enumerate() {
        let c = &values[u];
        if c.is_zero() {
            continue;
        }
        let word = verma.render_word(&ansatz.templates[ti].words[wi]);
        let coef = c.render();
        let term = if c.as_constant().is_some_and(|x| x.is_one()) {
            word
        } else if c.terms().count() == 1 {
            format!("{coef}*{word}")
        } else {
            format!("({coef})*{word}")
        };
        per_mono.entry(ti).or_default().push(term);
    }
    let mut vanishing = Vec::new();
    let mut solution = Vec::new();
    for (ti, t) in ansatz.templates.iter().enumerate() {
        let name = render_dmono(cfg.a, &t.mono);
        match per_mono.get(&ti) {
            Some(terms) => {
                vanishing.push((name.clone(), true));
                solution.push((name, terms.join(" + ")));
            }
            None => vanishing.push((name, false)),
        }
    }
    (vanishing, solution)
}

fn dominance_pairs(a: usize, n: usize) -> Vec<usize> {
    (0..n.saturating_sub(1)).filter(|&i| i + 1 != a).collect()
}

fn finiteness(cfg: &Config, leaf: &Leaf, weight_v: &[ParamPoly]) -> Finiteness {
    let n = cfg.n();
    let dominance: Vec<(usize, ParamPoly)> = dominance_pairs(cfg.a, n).into_iter().map(|i| (i, &weight_v[i] - &weight_v[i + 1])).collect();
    let parts: Vec<String> = dominance
        .iter()
        .filter(|(_, d)| d.as_constant().is_none())
        .map(|(_, d)| format!("{} in Z>=0", d.render()))
        .collect();
    let fixed_bad = dominance
        .iter()
        .any(|(_, d)| d.as_constant().is_some_and(|c| !crate::arith::is_nonneg_integer(&c)));
    let condition = if fixed_bad {
        "dim V < inf never holds".to_string()
    } else if parts.is_empty() {
        "dim V < inf always holds".to_string()
    } else {
        format!("dim V < inf iff {}", parts.join(" and "))
    };
    let finite_witness = if fixed_bad { None } else { dominant_point(cfg, leaf, weight_v) };
    Finiteness { dominance, condition, finite_witness }
}

/// A point of the leaf with dominant integral weight, searching dominance
/// differences up to a fixed bound.
fn dominant_point(cfg: &Config, leaf: &Leaf, weight_v: &[ParamPoly]) -> Option<Vec<Rational>> {
    let n = cfg.n();
    let free = leaf.free_params(n);
    let pairs = dominance_pairs(cfg.a, n);
    let trial_values = [int(0), int(1), rat(1, 2), int(-1), rat(7, 3), int(5)];
    let accept = |p: &[Rational]| leaf.contains(p) && finite_dim_admissible(cfg.a, p);
    let expand = |fv: &[Rational]| leaf.point_from_free(n, fv);
    if pairs.is_empty() {
        return free_trials(free.len(), &trial_values).into_iter().map(|fv| expand(&fv)).find(|p| accept(p));
    }
    // rows of the map free values -> dominance differences
    let lin: Vec<(Vec<Rational>, Rational)> = pairs
        .iter()
        .map(|&i| {
            let d = &weight_v[i] - &weight_v[i + 1];
            let (l, c) = d.as_affine().expect("weights are affine on a leaf");
            (free.iter().map(|&v| l[v].clone()).collect(), c)
        })
        .collect();
    let m = pairs.len();
    let mut targets = vec![0i64; m];
    loop {
        let rows: Vec<Vec<Rational>> = lin
            .iter()
            .zip(&targets)
            .map(|((l, c), t)| {
                let mut r = l.clone();
                r.push(int(*t) - c);
                r
            })
            .collect();
        let ech = rational_echelon(&rows);
        if ech.iter().all(|(p, _)| *p < free.len()) {
            let pivots: Vec<usize> = ech.iter().map(|(p, _)| *p).collect();
            let nonpivots: Vec<usize> = (0..free.len()).filter(|j| !pivots.contains(j)).collect();
            for choice in free_trials(nonpivots.len(), &trial_values) {
                let mut fv = vec![Rational::zero(); free.len()];
                for (j, v) in nonpivots.iter().zip(&choice) {
                    fv[*j] = v.clone();
                }
                for (p, row) in &ech {
                    let mut v = row[free.len()].clone();
                    for j in &nonpivots {
                        v -= &row[*j] * &fv[*j];
                    }
                    fv[*p] = v;
                }
                let pt = expand(&fv);
                if accept(&pt) {
                    return Some(pt);
                }
            }
        }
        // next target tuple
        let mut i = 0;
        loop {
            if i == m {
                return None;
            }
            targets[i] += 1;
            if targets[i] <= DOMINANCE_BOUND {
                break;
            }
            targets[i] = 0;
            i += 1;
        }
    }
}

fn free_trials(k: usize, values: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for v in &out {
            for x in values {
                let mut w = v.clone();
                w.push(x.clone());
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Source and target fibers of the dual operator, with a label for the
/// classical operators.
pub fn render_operator(cfg: &Config, top: &DMonomial, weight_v: &[ParamPoly], weight_f: &[ParamPoly]) -> Interpretation {
    let n = cfg.n();
    let source: Vec<ParamPoly> = weight_v.iter().map(|w| -w).collect();
    let target: Vec<ParamPoly> = weight_f.iter().map(|w| -w).collect();
    let is_const = |p: &ParamPoly, c: i64| *p == ParamPoly::int(n, c);
    let k = cfg.degree;
    let mut label = None;
    if cfg.a == 0 && k as usize == cfg.b && weight_v.iter().all(|w| is_const(w, 1)) {
        label = Some(if k == 2 { "Berezin integral".to_string() } else { format!("Berezin integral, order {k}") });
    } else if k == 1 && cfg.b == 0 {
        // (0, .., 0, -1, .., -1) with i entries -1
        let i = weight_v.iter().rev().take_while(|w| is_const(w, -1)).count();
        if i < n && weight_v[..n - i].iter().all(|w| is_const(w, 0)) {
            let mut s = format!("exterior differential d: Ω^{i} → Ω^{}", i + 1);
            if n == 1 {
                s.push_str(", self-dual");
            }
            label = Some(s);
        }
    } else if k == 1 && weight_v.iter().all(|w| is_const(w, 0)) {
        label = Some("exterior differential d: Ω^0 → Ω^1".to_string());
    } else if k == 1 && cfg.a == 0 && cfg.b >= 2 {
        let first_free = top.odd == 1 && weight_v[1..].iter().all(|w| is_const(w, 1));
        let last_free = top.odd == 1 << (cfg.b - 1) && weight_v[..n - 1].iter().all(|w| is_const(w, 0));
        if first_free {
            label = Some(format!("exterior differential d: Ω^ℓ → Ω^(ℓ+1), ℓ = {}", weight_v[0].render()));
        } else if last_free {
            label = Some(format!("exterior differential d: Σ_(-k) → Σ_(-k+1), k = {}", weight_v[n - 1].render()));
        }
    }
    Interpretation { order: k, source, target, label }
}

/// Dimensions `(a, b)` whose case tables are tabulated, with the largest
/// number of free weight parameters a tabulated family has.
const EXPECTED_FREE: [((usize, usize), usize); 7] = [((0, 1), 0), ((0, 2), 1), ((0, 3), 2), ((1, 0), 0), ((2, 0), 1), ((1, 1), 1), ((0, 0), 0)];

pub fn detect_continuum(c: &Classification) -> Continuum {
    let n = c.config.n();
    // among the largest families, the one with the fewest nonzero coefficients
    let Some((idx, case)) = c.cases.iter().enumerate().min_by_key(|(_, k)| (k.codimension(), k.vanishing.iter().filter(|(_, nz)| *nz).count())) else {
        return Continuum::default_off();
    };
    let codim = case.codimension();
    let flag = match EXPECTED_FREE.iter().find(|(d, _)| *d == (c.config.a, c.config.b)) {
        Some((_, max_free)) => n - codim > *max_free,
        None => codim <= 2,
    };
    Continuum {
        flag,
        codimension: Some(codim),
        case: Some(idx),
        free_params: case.free_params.iter().map(|v| format!("l{}", v + 1)).collect(),
        witness: case.constraints().iter().map(AffineConstraint::render).collect(),
    }
}
