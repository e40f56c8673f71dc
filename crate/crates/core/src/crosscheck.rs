use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, Rational};
use crate::oracle::brute_force_singular;
use crate::singular::Classification;

/// Largest denominator of a sampled weight coordinate.
pub const MAX_DENOMINATOR: i64 = 97;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub weight: Vec<Rational>,
    pub predicted: usize,
    pub oracle: usize,
}

#[derive(Clone, Debug, Default)]
pub struct CrossCheck {
    pub samples: usize,
    /// Samples drawn on one of the solution varieties.
    pub on_variety: usize,
    pub mismatches: Vec<Mismatch>,
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.3) {
        return rat(rng.gen_range(-4..=4), 1);
    }
    rat(rng.gen_range(-300..=300), rng.gen_range(1..=MAX_DENOMINATOR))
}

/// For every case, `per_case` weights on its variety and `per_case` weights
/// obtained by moving one coordinate off it; an empty classification gets
/// `2 * per_case` random weights. Predicted dimensions are compared with the
/// brute-force oracle.
pub fn crosscheck(c: &Classification, per_case: usize, seed: u64) -> CrossCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = c.config.n();
    let mut out = CrossCheck::default();
    let check = |w: Vec<Rational>, out: &mut CrossCheck| {
        out.samples += 1;
        out.mismatches.extend(check_point(c, &w));
    };
    if c.cases.is_empty() {
        for _ in 0..2 * per_case {
            let w = (0..n).map(|_| random_rational(&mut rng)).collect();
            check(w, &mut out);
        }
        return out;
    }
    for case in &c.cases {
        for _ in 0..per_case {
            let free: Vec<Rational> = case.free_params.iter().map(|_| random_rational(&mut rng)).collect();
            let on = case.leaf.point_from_free(n, &free);
            let mut off = on.clone();
            off[rng.gen_range(0..n)] += random_rational(&mut rng) + rat(1, 101);
            out.on_variety += 1;
            check(on, &mut out);
            check(off, &mut out);
        }
    }
    out
}

/// Compare the classification with the oracle at one weight.
pub fn check_point(c: &Classification, weight: &[Rational]) -> Option<Mismatch> {
    let cfg = &c.config;
    let predicted = c.predicted_dimension(weight);
    let oracle = brute_force_singular(cfg.a, cfg.b, cfg.degree, weight, cfg.algebra, true).dimension();
    (predicted != oracle).then(|| Mismatch { weight: weight.to_vec(), predicted, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::singular::{classify, Config};

    #[test]
    fn odd_plane_agrees_with_oracle() {
        let c = classify(&Config::new(0, 2, 1, Algebra::Pgl)).unwrap();
        let r = crosscheck(&c, 4, 7);
        assert_eq!((r.samples, r.on_variety), (16, 8));
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    }

    #[test]
    fn corrupted_case_is_reported() {
        let mut c = classify(&Config::new(0, 2, 1, Algebra::Pgl)).unwrap();
        // the case now excludes every point of its own variety
        c.cases[0].leaf.inequations.push(crate::arith::ParamPoly::zero(2));
        let r = crosscheck(&c, 3, 7);
        assert!(!r.mismatches.is_empty());
        assert!(r.mismatches.iter().all(|m| m.predicted == 0 && m.oracle == 1));
    }
}
