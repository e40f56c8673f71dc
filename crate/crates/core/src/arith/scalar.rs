use std::fmt;

use super::{ParamPoly, Rational};

/// Element of Q(l1..ln), kept as an unreduced numerator/denominator pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamScalar {
    pub num: ParamPoly,
    pub den: ParamPoly,
}

impl ParamScalar {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut s = ParamScalar { num, den };
        s.tidy();
        s
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        let n = p.nvars();
        ParamScalar { num: p, den: ParamPoly::one(n) }
    }

    /// Cancels common affine factors of the denominator and normalizes the
    /// denominator's content.
    fn tidy(&mut self) {
        if self.num.is_zero() {
            self.den = ParamPoly::one(self.num.nvars());
            return;
        }
        if let Ok((_, factors)) = self.den.affine_factors() {
            for (f, m) in factors {
                for _ in 0..m {
                    match (self.num.div_affine(&f), self.den.div_affine(&f)) {
                        (Some(a), Some(b)) => {
                            self.num = a;
                            self.den = b;
                        }
                        _ => break,
                    }
                }
            }
        }
        let c = self.den.content();
        self.num = self.num.scale(&c.recip());
        self.den = self.den.scale(&c.recip());
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `None` when the denominator vanishes at `point`.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if num_traits::Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn render(&self) -> String {
        if self.den.as_constant().is_some_and(|c| num_traits::One::is_one(&c)) {
            return self.num.render();
        }
        format!("({})/({})", self.num.render(), self.den.render())
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
