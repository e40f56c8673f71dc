//! Structure and module-axiom checks shared by the self-test and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{mul_coord, standard_basis, SuperField};
use crate::arith::{int, ParamPoly};
use crate::hw::{VermaModule, Weight};
use crate::induced::{d_monomials, InducedElement, InducedModule};

/// Basis of `pgl(a+1|b)`: partials, `gl(a|b)`, and `u_i E`.
pub fn pgl_basis(a: usize, b: usize) -> Vec<SuperField> {
    let basis = standard_basis(a, b);
    let mut out = basis.partials.clone();
    out.extend(basis.gl.iter().flatten().cloned());
    let euler = SuperField::euler(a, b);
    out.extend((0..a + b).map(|i| mul_coord(&euler, i)));
    out
}

fn parity(f: &SuperField) -> i32 {
    f.parity().map_or(0, i32::from)
}

/// Super-Jacobi identity on every ordered basis triple; returns the number checked.
pub fn super_jacobi(a: usize, b: usize) -> Result<usize, String> {
    let basis = pgl_basis(a, b);
    let brackets: Vec<Vec<SuperField>> = basis.iter().map(|x| basis.iter().map(|y| x.bracket(y)).collect()).collect();
    let mut count = 0;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let s = if parity(x) * parity(y) % 2 == 0 { int(1) } else { int(-1) };
            for (k, z) in basis.iter().enumerate() {
                // [x,[y,z]] = [[x,y],z] + (-1)^{p(x)p(y)} [y,[x,z]]
                let lhs = x.bracket(&brackets[j][k]);
                let rhs = brackets[i][j].bracket(z).add(&y.bracket(&brackets[i][k]).scale(&s));
                if lhs != rhs {
                    return Err(format!("super-Jacobi fails for x={x}, y={y}, z={z}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

fn act_element(im: &InducedModule, x: &SuperField, v: &InducedElement) -> InducedElement {
    let mut out = InducedElement::default();
    for (d, m) in &v.terms {
        for (w, c) in &m.terms {
            for (d2, m2) in &im.act(x, d, w).terms {
                for (w2, c2) in &m2.terms {
                    let single = crate::hw::ModuleElement::basis(w2.clone(), c2 * c);
                    out.add_scaled(d2, &single, &ParamPoly::one(im.verma.n()));
                }
            }
        }
    }
    out
}

/// Lowering offsets of height at most 2.
fn small_offsets(n: usize) -> Vec<Weight> {
    let mut out = vec![vec![0; n]];
    for i in 0..n {
        for j in i + 1..n {
            let mut o = vec![0; n];
            o[i] -= 1;
            o[j] += 1;
            out.push(o.clone());
            for k in 0..n {
                for l in k + 1..n {
                    let mut p = o.clone();
                    p[k] -= 1;
                    p[l] += 1;
                    out.push(p);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `X(Y m) - (-1)^{p(X)p(Y)} Y(X m) = [X,Y] m` on random basis elements of `I(V)`
/// with symbolic highest weight; returns the number of triples checked.
pub fn module_axiom(a: usize, b: usize, samples: usize, seed: u64) -> Result<usize, String> {
    let n = a + b;
    let verma = VermaModule::new(a, b);
    let im = InducedModule::new(&verma);
    let basis = pgl_basis(a, b);
    let monos: Vec<_> = (0..=2).flat_map(|k| d_monomials(a, b, k)).collect();
    let words: Vec<_> = small_offsets(n).iter().flat_map(|o| verma.weight_basis(o)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = &basis[rng.gen_range(0..basis.len())];
        let y = &basis[rng.gen_range(0..basis.len())];
        let d = &monos[rng.gen_range(0..monos.len())];
        let w = &words[rng.gen_range(0..words.len())];
        let mut v = InducedElement::default();
        v.add_scaled(d, &crate::hw::ModuleElement::basis(w.clone(), ParamPoly::one(n)), &ParamPoly::one(n));
        let mut lhs = act_element(&im, x, &act_element(&im, y, &v));
        let s = if parity(x) * parity(y) % 2 == 0 { -1 } else { 1 };
        let yx = act_element(&im, y, &act_element(&im, x, &v));
        for (d2, m) in &yx.terms {
            lhs.add_scaled(d2, m, &ParamPoly::int(n, s));
        }
        let rhs = act_element(&im, &x.bracket(y), &v);
        if lhs != rhs {
            return Err(format!("module axiom fails for X={x}, Y={y} on {} (x) {}", d.render(), verma.render_word(w)));
        }
    }
    Ok(samples)
}

/// Every term of `X m` has weight `wht(X) + wht(m)`; returns the number of terms checked.
pub fn weight_additivity(a: usize, b: usize) -> Result<usize, String> {
    let n = a + b;
    let verma = VermaModule::new(a, b);
    let im = InducedModule::new(&verma);
    let words: Vec<_> = small_offsets(n).iter().flat_map(|o| verma.weight_basis(o)).collect();
    let mut count = 0;
    for x in pgl_basis(a, b) {
        let wx = x.weight().ok_or_else(|| format!("{x} is not a weight vector"))?;
        for d in (0..=2).flat_map(|k| d_monomials(a, b, k)) {
            for w in &words {
                let base = im.weight_of(&d, w);
                for (d2, m) in &im.act(&x, &d, w).terms {
                    for w2 in m.terms.keys() {
                        let got = im.weight_of(d2, w2);
                        let want: Weight = base.iter().zip(&wx).map(|(p, q)| p + q).collect();
                        if got != want {
                            return Err(format!("weight of {x} applied to {} (x) {} is {got:?}, expected {want:?}", d.render(), verma.render_word(w)));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}
