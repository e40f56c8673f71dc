//! Degree-2 operators on the odd plane, checked against the oracle.

use bolops::algebra::Algebra;
use bolops::crosscheck::crosscheck;
use bolops::singular::{classify, Case, Config};

fn main() {
    let c = classify(&Config::new(0, 2, 2, Algebra::Pgl)).expect("small configuration");
    for case in &c.cases {
        println!(
            "{}: {} -> {}  [{}]",
            case.top_label,
            Case::render_weight(&case.weight_v),
            Case::render_weight(&case.weight_f),
            case.interpretation.label.as_deref().unwrap_or("-")
        );
    }
    let x = crosscheck(&c, 5, 1);
    println!("oracle agrees on {}/{} weights", x.samples - x.mismatches.len(), x.samples);
}
