//! Class expressions, shared by the command line and strata files.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' ['-'] integer)?
//! atom    := integer | 'L' | '(' expr ')'
//!          | 'Mu' '(' d [',' order ',' weight] ')'
//!          | 'Fermat0' '(' a ',' b ')' | 'Fermat1' '(' a ',' b ')'
//!          | 'Opaque' '(' "name" [',' order] ')'
//!          | 'conv' '(' expr ',' expr ')' | 'loc' '(' expr ')'
//! ```
//!
//! A divisor must be `+-L^s` times a product of factors `1 - L^i`.
//! `MotClass`'s `Display` output parses back to the same class.

use num_bigint::BigInt;
use thiserror::Error;

use crate::convolution::{conv, ConvError};
use crate::gring::{ActionSpec, FermatKind, Generator, GringError, LPoly, MotClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error(transparent)]
    Class(#[from] GringError),
    #[error(transparent)]
    Conv(#[from] ConvError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Str(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Int(text.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i].1 != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(ExprError::Syntax {
                    pos,
                    message: "unterminated string".into(),
                });
            }
            out.push((pos, Tok::Str(chars[start..i].iter().map(|&(_, c)| c).collect())));
            i += 1;
        } else if "+-*/^(),".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                pos,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        let neg = self.eat('-');
        match self.next() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            _ => {
                self.at -= 1;
                self.err("expected an integer")
            }
        }
    }

    fn small(&mut self) -> Result<i64, ExprError> {
        let n = self.integer()?;
        match i64::try_from(&n) {
            Ok(v) => Ok(v),
            Err(_) => self.err("integer out of range"),
        }
    }

    fn positive(&mut self) -> Result<u64, ExprError> {
        let v = self.small()?;
        if v <= 0 {
            self.at -= 1;
            return self.err("expected a positive integer");
        }
        Ok(v as u64)
    }

    fn expr(&mut self) -> Result<MotClass, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MotClass, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.unary()?;
                acc = divide(&acc, &d).map_err(|message| ExprError::Syntax { pos, message })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MotClass, ExprError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let e = self.small()?;
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        // negative powers only of units +-L^s
        let unit = base.as_lpoly().filter(|p| p.len() == 1).and_then(|p| {
            let (s, c) = p.terms().next().map(|(s, c)| (s, c.clone()))?;
            (c == BigInt::from(1) || c == BigInt::from(-1)).then_some((s, c))
        });
        match unit {
            Some((s, c)) => {
                let sign = if e % 2 == 0 { BigInt::from(1) } else { c };
                Ok(MotClass::from_lpoly(LPoly::monomial(sign, s * e)))
            }
            None => Err(ExprError::Syntax {
                pos,
                message: "negative powers are only defined for L".into(),
            }),
        }
    }

    fn args2(&mut self) -> Result<(u64, u64), ExprError> {
        self.expect('(')?;
        let a = self.positive()?;
        self.expect(',')?;
        let b = self.positive()?;
        self.expect(')')?;
        Ok((a, b))
    }

    fn atom(&mut self) -> Result<MotClass, ExprError> {
        let start = self.at;
        match self.next() {
            Some(Tok::Int(n)) => Ok(MotClass::from_lpoly(LPoly::constant(n))),
            Some(Tok::Sym('(')) => {
                let x = self.expr()?;
                self.expect(')')?;
                Ok(x)
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "L" => Ok(MotClass::l_pow(1)),
                "Mu" => {
                    self.expect('(')?;
                    let d = self.positive()?;
                    let g = if self.eat(',') {
                        let order = self.positive()?;
                        self.expect(',')?;
                        let w = self.small()?;
                        Generator::mu_with_action(d, ActionSpec::new(order, w)?)?
                    } else {
                        Generator::mu(d)
                    };
                    self.expect(')')?;
                    Ok(MotClass::generator(g))
                }
                "Fermat0" | "Fermat1" => {
                    let kind = if id == "Fermat0" { FermatKind::Zero } else { FermatKind::One };
                    let (a, b) = self.args2()?;
                    Ok(MotClass::from(Generator::fermat(kind, a, b)?))
                }
                "Opaque" => {
                    self.expect('(')?;
                    let name = match self.next() {
                        Some(Tok::Str(s)) => s,
                        _ => {
                            self.at -= 1;
                            return self.err("expected a quoted name");
                        }
                    };
                    let order = if self.eat(',') { self.positive()? } else { 1 };
                    self.expect(')')?;
                    Ok(MotClass::from(Generator::opaque(name, order)?))
                }
                "conv" => {
                    self.expect('(')?;
                    let x = self.expr()?;
                    self.expect(',')?;
                    let y = self.expr()?;
                    self.expect(')')?;
                    Ok(conv(&x, &y)?)
                }
                "loc" => {
                    self.expect('(')?;
                    let x = self.expr()?;
                    self.expect(')')?;
                    Ok(x.localized())
                }
                _ => {
                    self.at = start;
                    self.err(format!("unknown name {id:?}"))
                }
            },
            _ => {
                self.at = start;
                self.err("expected a class")
            }
        }
    }
}

/// `x / d` for `d = +-L^s * prod (1 - L^i)`.
fn divide(x: &MotClass, d: &MotClass) -> Result<MotClass, String> {
    let p = d
        .as_lpoly()
        .filter(|p| !p.is_zero())
        .ok_or_else(|| format!("cannot divide by {d}"))?;
    let s = p.min_exponent().expect("nonzero");
    let mut rest = p.shift(-s);
    let c0 = rest.coefficient(0);
    if c0 != BigInt::from(1) && c0 != BigInt::from(-1) {
        return Err(format!("cannot divide by {d}: not a product of 1 - L^i factors"));
    }
    rest = rest.scale(&c0);
    let mut factors = Vec::new();
    while !rest.is_one() {
        let i = rest
            .terms()
            .map(|(e, _)| e)
            .find(|&e| e > 0)
            .expect("non-constant remainder");
        match rest.div_one_minus_l_pow(i) {
            Some(q) => {
                factors.push(i as u32);
                rest = q;
            }
            None => return Err(format!("cannot divide by {d}: not a product of 1 - L^i factors")),
        }
    }
    let mut out = x.scale(&LPoly::monomial(c0, -s));
    for i in factors {
        out = out.div_one_minus_l_pow(i);
    }
    Ok(out)
}

/// Parses a class expression.
pub fn parse_class(s: &str) -> Result<MotClass, ExprError> {
    let mut p = Parser {
        toks: tokenize(s)?,
        at: 0,
        end: s.len(),
    };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let x = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::simplify;

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_class("Mu(3)").unwrap(), MotClass::mu(3));
        assert_eq!(parse_class("L^-2").unwrap(), MotClass::l_pow(-2));
        assert_eq!(parse_class("Mu(6,6,2)").unwrap().to_string(), "Mu(6,3,1)");
        let x = parse_class("conv(Mu(2), Mu(3))").unwrap();
        assert_eq!(x, simplify(&parse_class("-Fermat1(2,3) + Fermat0(3,2)").unwrap()));
        let y = parse_class("Mu(3)*L^-1/(1-L)").unwrap();
        assert_eq!(y, MotClass::mu(3).mul_l_pow(-1).div_one_minus_l_pow(1));
        let z = parse_class("2*Opaque(\"E1\", 6) - (L - 1)^2").unwrap();
        assert_eq!(z.to_string(), "2*Opaque(\"E1\",6) - L^2 + 2*L - 1");
    }

    #[test]
    fn division_by_denominator_products() {
        let x = parse_class("Mu(2)/((1 - L)*(1 - L^3))").unwrap();
        assert_eq!(x.denominator(), &[1, 3]);
        let y = parse_class("1/(L^2 - L^3)").unwrap();
        assert_eq!(y, MotClass::l_pow(-2).div_one_minus_l_pow(1));
        assert!(parse_class("Mu(2)/(1 + L)").is_err());
        assert!(parse_class("1/Mu(2)").is_err());
        assert!(parse_class("1/2").is_err());
    }

    #[test]
    fn round_trip() {
        for s in [
            "Mu(2) + Mu(3) - L + 1",
            "(L^-1*Mu(3))/((1 - L))",
            "loc(Mu(4,2,1)*Mu(5,1,0) - 3*L^-7)",
            "(L - 2)*Fermat1(2,3)*Mu(2) + Opaque(\"E\")",
            "((L + 1)*Mu(2) - L^4)/((1 - L^2)*(1 - L^3))",
            "0",
        ] {
            let x = parse_class(s).unwrap();
            assert_eq!(parse_class(&x.to_string()).unwrap(), x, "{s} -> {x}");
        }
    }

    #[test]
    fn syntax_errors() {
        for s in ["", "Mu(", "Mu(0)", "Fermat2(1,1)", "Foo", "L^", "1 +", "Opaque(E)", "Mu(2))"] {
            assert!(matches!(parse_class(s), Err(ExprError::Syntax { .. }) | Err(ExprError::Class(_))), "{s}");
        }
    }
}
