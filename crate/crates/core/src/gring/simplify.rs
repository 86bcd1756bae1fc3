//! Rewrite rules reducing Fermat generators with an exponent 1 or a
//! kind-0 defining equation.

use num_integer::Integer;

use super::class::{Monomial, MotClass};
use super::generator::{FermatCurve, FermatKind, Generator};
use super::lpoly::LPoly;

/// The reduced form of a single generator, or `None` if it is irreducible.
fn rewrite(g: &Generator) -> Option<MotClass> {
    let Generator::Fermat(c) = g else {
        return None;
    };
    let lm1 = MotClass::from_lpoly(LPoly::from_terms([(1, 1), (0, -1)]));
    match c.kind() {
        // {u^a = v^b} splits into gcd(a, b) tori permuted trivially
        FermatKind::Zero => {
            let g = c.a().gcd(&c.b());
            Some(&lm1 * &MotClass::generator(Generator::mu_trivial(g)))
        }
        FermatKind::One if c.a() == 1 && c.b() == 1 => {
            Some(MotClass::from_lpoly(LPoly::from_terms([(1, 1), (0, -2)])))
        }
        // u = 1 - v^b with v^b != 1
        FermatKind::One if c.a() == 1 => Some(&lm1 - &MotClass::mu(c.b())),
        FermatKind::One => None,
    }
}

/// Applies the rewrite system to every generator. Terminating and
/// confluent since every right-hand side is free of reducible generators.
pub fn simplify(x: &MotClass) -> MotClass {
    let any = x.generators().any(|g| rewrite(g).is_some());
    if !any {
        return x.clone();
    }
    let mut out = MotClass::zero();
    for (m, p) in x.numerator() {
        let mut kept = Vec::new();
        let mut factor = MotClass::one();
        for g in m.generators() {
            match rewrite(g) {
                Some(r) => factor = &factor * &r,
                None => kept.push(g.clone()),
            }
        }
        let term = MotClass::term(Monomial::new(kept), p.clone());
        out = &out + &(&term * &factor);
    }
    let mut result = out;
    for &i in x.denominator() {
        result = result.div_one_minus_l_pow(i);
    }
    if x.mode() == super::Mode::Localized {
        result = result.localized();
    }
    result
}

/// Whether a Fermat curve is left unchanged by [`simplify`].
pub fn is_irreducible(c: &FermatCurve) -> bool {
    rewrite(&Generator::Fermat(*c)).is_none()
}
