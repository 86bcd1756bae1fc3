//! The monodromic Grothendieck ring: exact class arithmetic, the Fermat
//! rewrite system, and point-counting realizations over finite fields.

mod class;
mod generator;
mod lpoly;
mod realize;
mod simplify;

use thiserror::Error;

use crate::ff::FieldError;

pub use class::{Mode, Monomial, MotClass};
pub use generator::{ActionSpec, FermatCurve, FermatKind, Generator};
pub use lpoly::LPoly;
pub use realize::{
    count_fermat, euler_characteristic, realize_equal, realize_plain, realize_twisted,
    twisted_fermat_count, Bindings, Realizer,
};
pub use simplify::{is_irreducible, simplify};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GringError {
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("no value bound for opaque class {name:?} at q = {q}, k = {k}")]
    UnboundOpaque { name: String, q: u64, k: u64 },
    #[error("action order {order} does not divide q - 1 = {}", q - 1)]
    IncompatibleOrder { order: u64, q: u64 },
    #[error("Euler characteristic is only defined on L-polynomial classes")]
    EulerUndefined,
    #[error("bad binding line {line}: {message}")]
    BindingSyntax { line: usize, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `(-1)^(d-1) * (s - 1)`.
pub fn vanishing_twist(s: &MotClass, d: u32) -> MotClass {
    let shifted = s - &MotClass::one();
    if d % 2 == 1 {
        shifted
    } else {
        -shifted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_twist_examples() {
        assert_eq!(vanishing_twist(&MotClass::mu(2), 1), MotClass::mu(2) - MotClass::one());
        assert!(vanishing_twist(&MotClass::one(), 5).is_zero());
        assert_eq!(vanishing_twist(&MotClass::mu(3), 2), MotClass::one() - MotClass::mu(3));
    }
}
