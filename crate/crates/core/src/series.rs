//! Rational series `c0 + sum_j c_j L^a_j T^b_j / (1 - L^a_j T^b_j)` with
//! class coefficients.
//!
//! Text syntax, one summand per bracketed class:
//! `[c0] + [c1] L^a T^b/(1-L^a T^b) + ...`. Products of several geometric
//! factors are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::convolution::{conv, ConvError};
use crate::expr::{parse_class, ExprError};
use crate::gring::MotClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("geometric term needs a positive T-exponent, got {0}")]
    BadPeriod(u64),
    #[error("multi-factor term {0:?} is not supported")]
    MultiFactor(String),
    #[error("malformed series: {0}")]
    Syntax(String),
    #[error(transparent)]
    Class(#[from] ExprError),
    #[error(transparent)]
    Conv(#[from] ConvError),
}

/// How the Hadamard product combines matching coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combiner {
    Product,
    Convolution,
}

impl Combiner {
    pub fn apply(self, x: &MotClass, y: &MotClass) -> Result<MotClass, ConvError> {
        match self {
            Combiner::Product => Ok(x * y),
            Combiner::Convolution => conv(x, y),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RationalSeries {
    constant: MotClass,
    /// `(a, b) -> c` for the term `c L^a T^b / (1 - L^a T^b)`.
    terms: BTreeMap<(i64, u64), MotClass>,
}

impl RationalSeries {
    pub fn zero() -> Self {
        RationalSeries::default()
    }

    pub fn constant(c: MotClass) -> Self {
        RationalSeries {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    /// The single term `c L^a T^b / (1 - L^a T^b)`.
    pub fn geometric(c: MotClass, a: i64, b: u64) -> Result<Self, SeriesError> {
        let mut s = RationalSeries::zero();
        s.add_term(c, a, b)?;
        Ok(s)
    }

    pub fn add_term(&mut self, c: MotClass, a: i64, b: u64) -> Result<(), SeriesError> {
        if b == 0 {
            return Err(SeriesError::BadPeriod(b));
        }
        let entry = self.terms.entry((a, b)).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
        Ok(())
    }

    pub fn constant_term(&self) -> &MotClass {
        &self.constant
    }

    /// `(coefficient, a, b)` in increasing `(a, b)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&MotClass, i64, u64)> + '_ {
        self.terms.iter().map(|(&(a, b), c)| (c, a, b))
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn add(&self, other: &RationalSeries) -> RationalSeries {
        let mut out = self.clone();
        out.constant = &out.constant + &other.constant;
        for (c, a, b) in other.terms() {
            out.add_term(c.clone(), a, b).expect("periods already validated");
        }
        out
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &MotClass) -> RationalSeries {
        let mut out = RationalSeries::constant(&self.constant * c);
        for (x, a, b) in self.terms() {
            out.add_term(x * c, a, b).expect("periods already validated");
        }
        out
    }

    /// Coefficient of `T^m`, `m >= 1`: `sum_{b | m} c L^(a m / b)`.
    pub fn coefficient(&self, m: u64) -> MotClass {
        assert!(m >= 1, "coefficients are indexed from T^1");
        self.terms()
            .filter(|&(_, _, b)| m.is_multiple_of(b))
            .fold(MotClass::zero(), |acc, (c, a, b)| &acc + &c.mul_l_pow(a * (m / b) as i64))
    }

    /// The limit `T -> infinity`, each geometric term tending to `-1`.
    pub fn limit_at_infinity(&self) -> MotClass {
        self.terms()
            .fold(self.constant.clone(), |acc, (c, _, _)| &acc - c)
    }

    /// The series of coefficientwise combinations. Geometric terms on
    /// periods `b`, `b'` meet on multiples of `l = lcm(b, b')`; constants
    /// contribute only to `T^0` and drop out.
    pub fn hadamard(
        &self,
        other: &RationalSeries,
        combiner: Combiner,
    ) -> Result<RationalSeries, SeriesError> {
        let mut out = RationalSeries::zero();
        for (c1, a1, b1) in self.terms() {
            for (c2, a2, b2) in other.terms() {
                let l = b1.lcm(&b2);
                let a = a1 * (l / b1) as i64 + a2 * (l / b2) as i64;
                out.add_term(combiner.apply(c1, c2)?, a, l)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.constant)?;
        for (c, a, b) in self.terms() {
            write!(f, " + [{c}] L^{a} T^{b}/(1-L^{a} T^{b})")?;
        }
        Ok(())
    }
}

fn parse_factor(text: &str) -> Result<(i64, u64), SeriesError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.matches("/(1-").count() > 1 || compact.contains(")*") || compact.contains(")(") {
        return Err(SeriesError::MultiFactor(text.trim().to_string()));
    }
    let bad = || SeriesError::Syntax(format!("expected L^a T^b/(1-L^a T^b), got {:?}", text.trim()));
    let (num, den) = compact.split_once("/(1-").ok_or_else(bad)?;
    let den = den.strip_suffix(')').ok_or_else(bad)?;
    let monomial = |s: &str| -> Option<(i64, u64)> {
        let rest = s.strip_prefix("L^")?;
        let (a, b) = rest.split_once("T^")?;
        Some((a.parse().ok()?, b.parse().ok()?))
    };
    let lhs = monomial(num).ok_or_else(bad)?;
    if monomial(den) != Some(lhs) {
        return Err(bad());
    }
    Ok(lhs)
}

impl FromStr for RationalSeries {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, SeriesError> {
        let mut out = RationalSeries::zero();
        let mut rest = s.trim();
        loop {
            let body = rest
                .strip_prefix('[')
                .ok_or_else(|| SeriesError::Syntax(format!("expected '[' at {rest:?}")))?;
            let close = body
                .find(']')
                .ok_or_else(|| SeriesError::Syntax("unclosed '['".into()))?;
            let class = parse_class(&body[..close])?;
            let after = &body[close + 1..];
            let next = after.find('[');
            let segment = after[..next.unwrap_or(after.len())].trim();
            let factor = match next {
                Some(_) => segment
                    .strip_suffix('+')
                    .ok_or_else(|| SeriesError::Syntax(format!("expected '+' in {segment:?}")))?
                    .trim(),
                None => segment,
            };
            if factor.is_empty() {
                out.constant = &out.constant + &class;
            } else {
                let (a, b) = parse_factor(factor)?;
                out.add_term(class, a, b)?;
            }
            match next {
                Some(i) => rest = &after[i..],
                None => return Ok(out),
            }
        }
    }
}
