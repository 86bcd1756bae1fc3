//! Laurent polynomials in `L` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A finite sum `sum c_e L^e` over `e` in `Z`. Zero coefficients are never
/// stored, so derived equality is structural equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly::default()
    }

    pub fn one() -> Self {
        LPoly::monomial(1, 0)
    }

    /// `c * L^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LPoly { terms }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LPoly::monomial(c, 0)
    }

    /// `L^e`.
    pub fn l_pow(e: i64) -> Self {
        LPoly::monomial(1, e)
    }

    /// `1 - L^i`.
    pub fn one_minus_l_pow(i: i64) -> Self {
        LPoly::one() - LPoly::l_pow(i)
    }

    /// Builds from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = LPoly::zero();
        for (e, c) in iter {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Exponent/coefficient pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `L^s`.
    pub fn shift(&self, s: i64) -> Self {
        LPoly {
            terms: self.terms.iter().map(|(&e, c)| (e + s, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            terms: self.terms.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(LPoly::one(), |acc, _| &acc * self)
    }

    /// Exact quotient by `1 - L^i` (`i >= 1`), or `None` when it does not divide.
    pub fn div_one_minus_l_pow(&self, i: i64) -> Option<Self> {
        assert!(i >= 1);
        if self.is_zero() {
            return Some(LPoly::zero());
        }
        let lo = self.min_exponent().unwrap();
        let hi = self.max_exponent().unwrap();
        let deg = hi - lo;
        if deg < i {
            return None;
        }
        // (1 - L^i) Q = P  gives  Q_j = P_j + Q_{j-i}
        let n = (deg - i + 1) as usize;
        let mut q = vec![BigInt::zero(); n];
        for j in 0..n {
            let mut v = self.coefficient(lo + j as i64);
            if j as i64 >= i {
                v += &q[j - i as usize];
            }
            q[j] = v;
        }
        let quotient = LPoly::from_terms(q.into_iter().enumerate().map(|(j, c)| (lo + j as i64, c)));
        (&quotient * &LPoly::one_minus_l_pow(i) == *self).then_some(quotient)
    }

    /// Value at `L = x`; `x` must be nonzero if negative exponents occur.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&e, c) in &self.terms {
            let pw = if e >= 0 {
                num_traits::pow(x.clone(), e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            };
            acc += pw * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Value at `L = 1`.
    pub fn sum_of_coefficients(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl From<i64> for LPoly {
    fn from(c: i64) -> Self {
        LPoly::constant(c)
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Add for LPoly {
    type Output = LPoly;
    fn add(self, rhs: LPoly) -> LPoly {
        &self + &rhs
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        -&self
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        self + &(-rhs)
    }
}

impl Sub for LPoly {
    type Output = LPoly;
    fn sub(self, rhs: LPoly) -> LPoly {
        &self - &rhs
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LPoly {
    type Output = LPoly;
    fn mul(self, rhs: LPoly) -> LPoly {
        &self * &rhs
    }
}

/// Highest exponent first, e.g. `L^2 - 2*L + 1`, `L^-1`, `-3`.
impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let power = match e {
                0 => String::new(),
                1 => "L".to_string(),
                _ => format!("L^{e}"),
            };
            if power.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{abs}*{power}")?;
            }
        }
        Ok(())
    }
}
