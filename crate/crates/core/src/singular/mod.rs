//! Singular vectors of degree `k` in `I(L(l))`, solved symbolically in `l`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{invariance_generators, standard_basis, Algebra, Generator, SuperField};
use crate::arith::{parametric_row_reduce, CaseTree, Leaf, ParamPoly, SolveError};
use crate::hw::{simple_coords, ModuleElement, VermaModule, Weight, Word};
use crate::induced::{d_monomials, DMonomial, InducedModule};

mod classify;
mod pattern;
pub use classify::*;
pub use pattern::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("top monomial {top}: {source}")]
    Solve { top: String, source: SolveError },
    #[error("depth bound {depth} too small: the ansatz needs lowering words of length {needed}")]
    DepthOverflow { depth: usize, needed: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub a: usize,
    pub b: usize,
    pub degree: u32,
    pub algebra: Algebra,
    /// Longest lowering word allowed in the ansatz; `None` means as long as needed.
    pub depth: Option<usize>,
    pub include_g2: bool,
}

impl Config {
    pub fn new(a: usize, b: usize, degree: u32, algebra: Algebra) -> Self {
        Config { a, b, degree, algebra, depth: None, include_g2: false }
    }

    pub fn n(&self) -> usize {
        self.a + self.b
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        let n = self.n();
        if n == 0 {
            return Err(ClassifyError::InvalidConfig("a + b must be positive".into()));
        }
        if n > 6 {
            return Err(ClassifyError::InvalidConfig(format!("a + b = {n} exceeds the supported size 6")));
        }
        if self.degree == 0 {
            return Err(ClassifyError::InvalidConfig("degree must be at least 1".into()));
        }
        if self.a == 0 && self.degree as usize > self.b {
            return Err(ClassifyError::InvalidConfig(format!("degree {} exceeds b = {} for a purely odd space", self.degree, self.b)));
        }
        if self.b == 0 && self.degree > 3 {
            return Err(ClassifyError::InvalidConfig("degrees above 3 are not supported for b = 0".into()));
        }
        if self.degree > 6 {
            return Err(ClassifyError::InvalidConfig("degree above 6 is not supported".into()));
        }
        Ok(())
    }
}

/// `v_I = sum_w c_{I,w} w v0` for one monomial `d^I`.
#[derive(Clone, Debug)]
pub struct Template {
    pub mono: DMonomial,
    pub words: Vec<Word>,
}

/// Singular vector ansatz with `d^top (x) c0 v0` as the component of highest weight.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub a: usize,
    pub b: usize,
    pub degree: u32,
    pub top: DMonomial,
    pub templates: Vec<Template>,
    /// `(template, word)` per unknown; the last one is `c0`.
    pub unknowns: Vec<(usize, usize)>,
}

impl Ansatz {
    pub fn names(&self) -> Vec<String> {
        self.unknowns
            .iter()
            .enumerate()
            .map(|(k, _)| if k + 1 == self.unknowns.len() { "c0".to_string() } else { format!("c{}", k + 1) })
            .collect()
    }

    pub fn normalization(&self) -> usize {
        self.unknowns.len() - 1
    }

    /// Weight of `f` minus the highest weight of `V`.
    pub fn offset(&self) -> Weight {
        self.top.exponents(self.b).iter().map(|e| -e).collect()
    }
}

/// Builds the ansatz whose highest component sits at `top`.
pub fn build_ansatz(a: usize, b: usize, degree: u32, top: &DMonomial, verma: &VermaModule, depth: Option<usize>) -> Result<Ansatz, ClassifyError> {
    let t = top.exponents(b);
    let mut templates = Vec::new();
    let mut unknowns = Vec::new();
    let mut top_idx = None;
    for mono in d_monomials(a, b, degree) {
        let e = mono.exponents(b);
        let off: Weight = e.iter().zip(&t).map(|(x, y)| x - y).collect();
        let words = if &mono == top { vec![Vec::new()] } else { verma.weight_basis(&off) };
        if words.is_empty() {
            continue;
        }
        let needed = words.iter().map(Vec::len).max().unwrap_or(0);
        if let Some(d) = depth {
            if needed > d {
                return Err(ClassifyError::DepthOverflow { depth: d, needed });
            }
        }
        let ti = templates.len();
        if &mono == top {
            top_idx = Some(ti);
        } else {
            unknowns.extend((0..words.len()).map(|w| (ti, w)));
        }
        templates.push(Template { mono, words });
    }
    unknowns.push((top_idx.expect("top monomial of the right degree"), 0));
    Ok(Ansatz { a, b, degree, top: top.clone(), templates, unknowns })
}

/// Where a row of the singular system comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowLabel {
    pub field: String,
    pub mono: DMonomial,
    pub pairing_word: Word,
}

pub struct SingularSystem {
    pub rows: Vec<Vec<ParamPoly>>,
    pub labels: Vec<RowLabel>,
}

/// The fields whose annihilation defines singularity: simple raising
/// operators of `g_0` and the invariance generators.
pub fn defining_fields(a: usize, b: usize, algebra: Algebra, include_g2: bool) -> Vec<(String, SuperField)> {
    let basis = standard_basis(a, b);
    let mut out: Vec<(String, SuperField)> =
        basis.simple_raising().into_iter().map(|(i, j)| (format!("E{}{}", i + 1, j + 1), basis.gl[i][j].clone())).collect();
    out.extend(invariance_generators(&basis, algebra, include_g2).into_iter().map(|g: Generator| (g.field.render(), g.field)));
    out
}

/// Rows: for each defining field `G`, each output monomial `d^J` and each
/// raising word `p` of the matching weight, the pairing `<p, (G f)_J>`.
/// These vanish iff `G f = 0` in `I(L(l))`.
pub fn singular_conditions(ansatz: &Ansatz, fields: &[(String, SuperField)], im: &InducedModule) -> SingularSystem {
    let verma = im.verma;
    let nunk = ansatz.unknowns.len();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (name, g) in fields {
        // output monomial -> per-unknown component
        let mut comps: BTreeMap<DMonomial, Vec<ModuleElement>> = BTreeMap::new();
        for (u, &(ti, wi)) in ansatz.unknowns.iter().enumerate() {
            let tpl = &ansatz.templates[ti];
            let out = im.act(g, &tpl.mono, &tpl.words[wi]);
            for (d, m) in out.terms {
                comps.entry(d).or_insert_with(|| vec![ModuleElement::zero(); nunk])[u] = m;
            }
        }
        for (d, per_unknown) in comps {
            let Some(off) = per_unknown.iter().find_map(|m| m.terms.keys().next().map(|w| verma.word_offset(w))) else {
                continue;
            };
            let pairing_words = if simple_coords(&off).is_some() { verma.weight_basis(&off) } else { Vec::new() };
            for p in pairing_words {
                let row: Vec<ParamPoly> = per_unknown.iter().map(|m| verma.pairing(&p, m)).collect();
                if row.iter().all(ParamPoly::is_zero) {
                    continue;
                }
                rows.push(row);
                labels.push(RowLabel { field: name.clone(), mono: d.clone(), pairing_word: p });
            }
        }
    }
    SingularSystem { rows, labels }
}

/// Solver output for one top monomial.
pub struct TopSolve {
    pub ansatz: Ansatz,
    pub tree: CaseTree,
}

impl TopSolve {
    /// Leaves carrying a singular vector: the normalization stays free.
    pub fn solution_leaves(&self) -> Vec<&Leaf> {
        let c0 = self.ansatz.normalization();
        self.tree.leaves().into_iter().filter(|l| l.is_free(c0)).collect()
    }
}

pub fn solve_all_tops(cfg: &Config) -> Result<Vec<TopSolve>, ClassifyError> {
    cfg.validate()?;
    let verma = VermaModule::new(cfg.a, cfg.b);
    let im = InducedModule::new(&verma);
    let fields = defining_fields(cfg.a, cfg.b, cfg.algebra, cfg.include_g2);
    let mut out = Vec::new();
    for top in d_monomials(cfg.a, cfg.b, cfg.degree) {
        let ansatz = build_ansatz(cfg.a, cfg.b, cfg.degree, &top, &verma, cfg.depth)?;
        let sys = singular_conditions(&ansatz, &fields, &im);
        let rows = if sys.rows.is_empty() { vec![vec![ParamPoly::zero(cfg.n()); ansatz.unknowns.len()]] } else { sys.rows };
        let tree = parametric_row_reduce(&rows, &ansatz.names())
            .map_err(|source| ClassifyError::Solve { top: render_dmono(cfg.a, &top), source })?;
        out.push(TopSolve { ansatz, tree });
    }
    Ok(out)
}

/// `d_x1^2*d_xi1`-style rendering of a partial-derivative monomial.
pub fn render_dmono(a: usize, d: &DMonomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in d.even.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("d_{}", crate::algebra::coord_name(a, i))),
            _ => parts.push(format!("d_{}^{e}", crate::algebra::coord_name(a, i))),
        }
    }
    for j in 0..32 {
        if d.odd & (1 << j) != 0 {
            parts.push(format!("d_{}", crate::algebra::coord_name(a, a + j)));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
