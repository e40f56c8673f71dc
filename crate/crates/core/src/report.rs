use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::arith::{fmt_rational, AffineConstraint, ConstraintKind};
use crate::crosscheck::CrossCheck;
use crate::singular::{Case, Classification, DegreePattern};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input: Input,
    pub cases: Vec<CaseReport>,
    pub continuum: ContinuumReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub crosscheck: Option<CrossCheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub degree_patterns: Vec<PatternReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub a: usize,
    pub b: usize,
    pub degree: u32,
    pub algebra: Algebra,
    pub depth: Option<usize>,
    pub seed: u64,
    pub include_g2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub linear: BTreeMap<String, String>,
    pub constant: String,
    pub kind: ConstraintKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub condition: String,
    pub dominance_data: Vec<ConstraintReport>,
    pub verdict: String,
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub order: u32,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub top: String,
    pub weight_v: String,
    pub weight_f: String,
    pub vanishing_pattern: BTreeMap<String, String>,
    pub constraints: Vec<ConstraintReport>,
    pub exclusions: Vec<String>,
    pub free_params: Vec<String>,
    pub solution: BTreeMap<String, String>,
    pub finiteness: FinitenessReport,
    pub interpretation: Option<String>,
    pub operator: OperatorReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuumReport {
    pub flag: bool,
    pub codimension: Option<usize>,
    pub free_params: Vec<String>,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchReport {
    pub weight: Vec<String>,
    pub predicted: usize,
    pub oracle: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub samples: usize,
    pub on_variety: usize,
    pub mismatches: Vec<MismatchReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternReport {
    pub degrees: Vec<u32>,
    pub weight_v: String,
    pub affine_in_n: bool,
}

fn param(i: usize) -> String {
    format!("l{}", i + 1)
}

fn constraint_report(c: &AffineConstraint) -> ConstraintReport {
    ConstraintReport {
        linear: c.linear.iter().enumerate().filter(|(_, x)| !num_traits::Zero::is_zero(*x)).map(|(i, x)| (param(i), fmt_rational(x))).collect(),
        constant: fmt_rational(&c.constant),
        kind: c.kind,
    }
}

fn case_report(c: &Case) -> CaseReport {
    let dominance_data = c
        .finiteness
        .dominance
        .iter()
        .filter_map(|(_, d)| d.as_affine())
        .map(|(lin, k)| constraint_report(&AffineConstraint::new(lin, k, ConstraintKind::Integrality)))
        .collect();
    CaseReport {
        top: c.top_label.clone(),
        weight_v: Case::render_weight(&c.weight_v),
        weight_f: Case::render_weight(&c.weight_f),
        vanishing_pattern: c.vanishing.iter().map(|(m, nz)| (m.clone(), if *nz { "nonzero" } else { "zero" }.to_string())).collect(),
        constraints: c.constraints().iter().map(constraint_report).collect(),
        exclusions: c.exclusions(),
        free_params: c.free_params.iter().map(|&i| param(i)).collect(),
        solution: c.solution.iter().cloned().collect(),
        finiteness: FinitenessReport {
            condition: c.finiteness.condition.clone(),
            dominance_data,
            verdict: c.finiteness.verdict().to_string(),
            witness: c.finiteness.finite_witness.as_ref().map(|w| w.iter().map(fmt_rational).collect()),
        },
        interpretation: c.interpretation.label.clone(),
        operator: OperatorReport {
            order: c.interpretation.order,
            source: Case::render_weight(&c.interpretation.source),
            target: Case::render_weight(&c.interpretation.target),
        },
    }
}

impl Report {
    pub fn new(c: &Classification, seed: u64) -> Self {
        let cfg = &c.config;
        Report {
            input: Input { a: cfg.a, b: cfg.b, degree: cfg.degree, algebra: cfg.algebra, depth: cfg.depth, seed, include_g2: cfg.include_g2 },
            cases: c.cases.iter().map(case_report).collect(),
            continuum: ContinuumReport {
                flag: c.continuum.flag,
                codimension: c.continuum.codimension,
                free_params: c.continuum.free_params.clone(),
                witness: c.continuum.witness.clone(),
            },
            crosscheck: None,
            degree_patterns: Vec::new(),
        }
    }

    pub fn with_crosscheck(mut self, x: &CrossCheck) -> Self {
        self.crosscheck = Some(CrossCheckReport {
            samples: x.samples,
            on_variety: x.on_variety,
            mismatches: x
                .mismatches
                .iter()
                .map(|m| MismatchReport { weight: m.weight.iter().map(fmt_rational).collect(), predicted: m.predicted, oracle: m.oracle })
                .collect(),
        });
        self
    }

    pub fn with_patterns(mut self, pats: &[DegreePattern]) -> Self {
        self.degree_patterns = pats.iter().map(|p| PatternReport { degrees: p.degrees.clone(), weight_v: p.render(), affine_in_n: p.affine }).collect();
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_markdown(&self) -> String {
        let i = &self.input;
        let mut s = String::new();
        let _ = writeln!(s, "# Singular vectors of degree {} in I(V) over {}", i.degree, algebra_name(i.algebra, i.a, i.b));
        let _ = writeln!(s);
        if self.cases.is_empty() {
            let _ = writeln!(s, "No singular vectors.");
        }
        for (k, c) in self.cases.iter().enumerate() {
            let _ = writeln!(s, "## Case {}: top monomial {}", k + 1, c.top);
            let _ = writeln!(s);
            let _ = writeln!(s, "- wht(v) = {} → wht(f) = {}", c.weight_v, c.weight_f);
            if !c.exclusions.is_empty() {
                let _ = writeln!(s, "- excluded: {}", c.exclusions.join(", "));
            }
            let _ = writeln!(s, "- {}; {}", c.finiteness.condition, c.finiteness.verdict);
            if let Some(l) = &c.interpretation {
                let _ = writeln!(s, "- operator: {l}");
            }
            let _ = writeln!(s, "- dual operator of order {}: {} → {}", c.operator.order, c.operator.source, c.operator.target);
            let _ = writeln!(s);
            let _ = writeln!(s, "| monomial | coefficient |");
            let _ = writeln!(s, "|---|---|");
            for (m, state) in &c.vanishing_pattern {
                let coef = c.solution.get(m).map_or("0", String::as_str);
                let _ = writeln!(s, "| {m} | {} |", if state == "zero" { "0" } else { coef });
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(
            s,
            "Continuum: {} (smallest codimension {}, free {})",
            if self.continuum.flag { "yes" } else { "no" },
            self.continuum.codimension.map_or("-".into(), |c| c.to_string()),
            if self.continuum.free_params.is_empty() { "none".into() } else { self.continuum.free_params.join(", ") }
        );
        if !self.degree_patterns.is_empty() {
            let _ = writeln!(s);
            let _ = writeln!(s, "## Families in the degree n");
            let _ = writeln!(s);
            for p in &self.degree_patterns {
                let _ = writeln!(s, "- wht = {} (degrees {:?}{})", p.weight_v, p.degrees, if p.affine_in_n { "" } else { ", not affine in n" });
            }
        }
        if let Some(x) = &self.crosscheck {
            let _ = writeln!(s);
            let _ = writeln!(s, "Oracle crosscheck: {} samples ({} on a solution variety), {} mismatches", x.samples, x.on_variety, x.mismatches.len());
            for m in &x.mismatches {
                let _ = writeln!(s, "- at ({}): predicted {}, oracle {}", m.weight.join(", "), m.predicted, m.oracle);
            }
        }
        s
    }
}

fn algebra_name(alg: Algebra, a: usize, b: usize) -> String {
    match alg {
        Algebra::Pgl => format!("pgl({}|{b})", a + 1),
        Algebra::Vect => format!("vect({a}|{b})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singular::{classify, Config};

    #[test]
    fn json_round_trips_and_is_stable() {
        let c = classify(&Config::new(0, 2, 1, Algebra::Pgl)).unwrap();
        let r = Report::new(&c, 1);
        let j = r.to_json();
        assert_eq!(Report::from_json(&j).unwrap(), r);
        let again = Report::new(&classify(&Config::new(0, 2, 1, Algebra::Pgl)).unwrap(), 1).to_json();
        assert_eq!(j, again);
        assert!(j.contains("\"l2\": \"1\""));
    }

    #[test]
    fn markdown_lists_families() {
        let c = classify(&Config::new(0, 2, 1, Algebra::Pgl)).unwrap();
        let md = Report::new(&c, 1).to_markdown();
        assert!(md.contains("wht(v) = (l1, 1) → wht(f) = (l1 - 1, 1)"), "{md}");
        assert!(md.contains("wht(v) = (0, l2) → wht(f) = (0, l2 - 1)"), "{md}");
    }
}
