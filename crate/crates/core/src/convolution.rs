//! The convolution product on classes built from torsors, and the
//! Thom-Sebastiani combination of Milnor fibers.
//!
//! The fragment: every monomial holds at most one free torsor `Mu(a)` plus
//! any number of trivially acted torsors; `L`, denominators and trivial
//! torsors are central scalars. On generators
//! `Mu(a) * Mu(b) = -Fermat1(a, b) + Fermat0(a, b)`, with `1 = Mu(1)`.

use thiserror::Error;

use crate::gring::{
    simplify, vanishing_twist, FermatKind, Generator, LPoly, Mode, Monomial, MotClass,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvError {
    #[error("class outside the convolution fragment: {0}")]
    Fragment(String),
    #[error("combination routes disagree: {first} versus {second}")]
    RouteMismatch { first: String, second: String },
}

/// Splits a monomial into the size of its free torsor (1 if none) and its
/// central part.
fn split_monomial(m: &Monomial) -> Result<(u64, Monomial), ConvError> {
    let mut free = None;
    let mut central = Vec::new();
    for g in m.generators() {
        match g {
            Generator::MuTorsor { order: 1, .. } => central.push(g.clone()),
            Generator::MuTorsor { d, order } if order == d => {
                if free.replace(*d).is_some() {
                    return Err(ConvError::Fragment(format!("{m} has two free torsors")));
                }
            }
            _ => return Err(ConvError::Fragment(format!("generator {g} in {m}"))),
        }
    }
    Ok((free.unwrap_or(1), Monomial::new(central)))
}

/// Whether every monomial of `x` lies in the fragment.
pub fn in_fragment(x: &MotClass) -> bool {
    x.numerator().all(|(m, _)| split_monomial(m).is_ok())
}

fn generator_product(a: u64, b: u64) -> MotClass {
    let f1 = Generator::fermat(FermatKind::One, a, b).expect("positive exponents");
    let f0 = Generator::fermat(FermatKind::Zero, a, b).expect("positive exponents");
    MotClass::from(f0) - MotClass::from(f1)
}

/// The bilinear extension of the generator rule, before rewriting.
pub fn conv_unsimplified(x: &MotClass, y: &MotClass) -> Result<MotClass, ConvError> {
    let xs: Vec<_> = x
        .numerator()
        .map(|(m, p)| split_monomial(m).map(|(a, c)| (a, c, p.clone())))
        .collect::<Result<_, _>>()?;
    let ys: Vec<_> = y
        .numerator()
        .map(|(m, p)| split_monomial(m).map(|(b, c)| (b, c, p.clone())))
        .collect::<Result<_, _>>()?;
    let mut total = MotClass::zero();
    for (a, c1, p1) in &xs {
        for (b, c2, p2) in &ys {
            let scalar = MotClass::term(c1.concat(c2), p1 * p2);
            total = &total + &(&scalar * &generator_product(*a, *b));
        }
    }
    for &i in x.denominator().iter().chain(y.denominator()) {
        total = total.div_one_minus_l_pow(i);
    }
    if x.mode() == Mode::Localized || y.mode() == Mode::Localized {
        total = total.localized();
    }
    Ok(total)
}

/// `x * y`, rewritten to normal form.
pub fn conv(x: &MotClass, y: &MotClass) -> Result<MotClass, ConvError> {
    Ok(simplify(&conv_unsimplified(x, y)?))
}

/// Structural equality of `x * y` and `y * x`.
pub fn conv_commutativity_check(x: &MotClass, y: &MotClass) -> Result<bool, ConvError> {
    Ok(conv(x, y)? == conv(y, x)?)
}

/// Both combination routes for the Milnor fiber of `f + g` in separate
/// variables: `s_f + s_g - s_f * s_g`, and the class whose vanishing twist in
/// dimension `d1 + d2` is the convolution of the factors' vanishing twists.
pub fn ts_routes(
    s_f: &MotClass,
    s_g: &MotClass,
    d1: u32,
    d2: u32,
) -> Result<(MotClass, MotClass), ConvError> {
    let direct = &(s_f + s_g) - &conv(s_f, s_g)?;
    let twisted = conv(&vanishing_twist(s_f, d1), &vanishing_twist(s_g, d2))?;
    let sign = if (d1 + d2) % 2 == 1 { 1 } else { -1 };
    let from_twist = &MotClass::one() + &twisted.scale(&LPoly::constant(sign));
    Ok((direct, from_twist))
}

/// Milnor fiber of `f + g`: computed along both routes, which must agree.
pub fn ts_combine(s_f: &MotClass, s_g: &MotClass, d1: u32, d2: u32) -> Result<MotClass, ConvError> {
    let (direct, from_twist) = ts_routes(s_f, s_g, d1, d2)?;
    if direct != from_twist {
        return Err(ConvError::RouteMismatch {
            first: direct.to_string(),
            second: from_twist.to_string(),
        });
    }
    Ok(direct)
}
