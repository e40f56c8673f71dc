use bolops::algebra::Algebra;
use bolops::arith::{int, rat, Rational};
use bolops::oracle::brute_force_singular;
use bolops::report::Report;
use bolops::singular::{classify, Classification, Config};
use proptest::prelude::*;

fn run(a: usize, b: usize, k: u32, alg: Algebra) -> Classification {
    classify(&Config::new(a, b, k, alg)).unwrap()
}

const SMALL: &[(usize, usize, u32, Algebra)] = &[
    (0, 2, 1, Algebra::Pgl),
    (0, 3, 2, Algebra::Pgl),
    (2, 0, 1, Algebra::Pgl),
    (1, 1, 2, Algebra::Pgl),
    (1, 1, 1, Algebra::Vect),
    (0, 3, 1, Algebra::Vect),
];

fn free_values(i: usize, n: usize) -> Vec<Rational> {
    (0..n).map(|j| rat(7 * i as i64 + 3 * j as i64 - 11, 5 + (i + j) as i64 % 4)).collect()
}

#[test]
fn every_case_has_a_singular_vector_of_the_stated_weight() {
    for &(a, b, k, alg) in SMALL {
        let c = run(a, b, k, alg);
        let n = a + b;
        for case in &c.cases {
            for i in 0..5 {
                let w = case.leaf.point_from_free(n, &free_values(i, case.free_params.len()));
                if !case.contains(&w) {
                    continue;
                }
                let f: Vec<Rational> = case.weight_f.iter().map(|p| p.eval(&w)).collect();
                let r = brute_force_singular(a, b, k, &w, alg, true);
                let hit = r.by_weight.iter().any(|(off, d)| *d > 0 && w.iter().zip(off).zip(&f).all(|((x, o), y)| x + int((*o).into()) == *y));
                assert!(hit, "({a},{b},{k},{alg}) {} at {w:?}", case.top_label);
            }
        }
    }
}

#[test]
fn vect_cases_are_pgl_cases() {
    for (a, b) in [(0, 2), (0, 3), (1, 1), (2, 0)] {
        let p = run(a, b, 1, Algebra::Pgl);
        let v = run(a, b, 1, Algebra::Vect);
        for case in &v.cases {
            let w = case.leaf.point_from_free(a + b, &free_values(1, case.free_params.len()));
            assert!(p.predicted_dimension(&w) >= v.predicted_dimension(&w), "({a}|{b}) at {w:?}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for &(a, b, k, alg) in SMALL {
        let x = Report::new(&run(a, b, k, alg), 3).to_json();
        let y = Report::new(&run(a, b, k, alg), 3).to_json();
        assert_eq!(x, y);
        assert_eq!(Report::from_json(&x).unwrap().to_json(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn odd_plane_matches_oracle_everywhere(p in -40i64..40, q in 1i64..12, r in -40i64..40, s in 1i64..12, snap in 0u8..4) {
        let c = run(0, 2, 1, Algebra::Pgl);
        // land on the case lines a quarter of the time each
        let mut w = vec![rat(p, q), rat(r, s)];
        match snap {
            0 => w[0] = int(0),
            1 => w[1] = int(1),
            _ => {}
        }
        let oracle = brute_force_singular(0, 2, 1, &w, Algebra::Pgl, true).dimension();
        prop_assert_eq!(c.predicted_dimension(&w), oracle);
    }
}
