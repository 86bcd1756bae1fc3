//! Integer polynomials vanishing at the origin.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::ArcError;

/// `sum c_e x^e` over exponent vectors `e in N^d`, without constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyFn {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl PolyFn {
    pub fn new(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, i64)>,
    ) -> Result<Self, ArcError> {
        if nvars == 0 {
            return Err(ArcError::Parse("at least one variable is required".into()));
        }
        let mut map: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(ArcError::Parse(format!(
                    "exponent vector {e:?} does not have {nvars} entries"
                )));
            }
            if e.iter().all(|&x| x == 0) && c != 0 {
                return Err(ArcError::Parse("polynomial must vanish at the origin".into()));
            }
            let entry = map.entry(e.clone()).or_insert(0);
            *entry = entry
                .checked_add(c)
                .ok_or_else(|| ArcError::Parse("coefficient overflow".into()))?;
            if *entry == 0 {
                map.remove(&e);
            }
        }
        Ok(PolyFn { nvars, terms: map })
    }

    /// `x_1^n` in one variable.
    pub fn pure_power(n: u32) -> Self {
        PolyFn::new(1, [(vec![n], 1)]).expect("valid monomial")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// `f(x) + g(y)` in `nvars(f) + nvars(g)` variables.
    pub fn direct_sum(&self, g: &PolyFn) -> PolyFn {
        let n = self.nvars + g.nvars;
        let left = self.terms.iter().map(|(e, &c)| {
            let mut v = e.clone();
            v.resize(n, 0);
            (v, c)
        });
        let right = g.terms.iter().map(|(e, &c)| {
            let mut v = vec![0; self.nvars];
            v.extend_from_slice(e);
            (v, c)
        });
        PolyFn::new(n, left.chain(right)).expect("sum of valid polynomials")
    }

    /// Same polynomial in more variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<PolyFn, ArcError> {
        if nvars < self.nvars {
            return Err(ArcError::Parse(format!(
                "cannot drop variables: {} in use",
                self.nvars
            )));
        }
        PolyFn::new(
            nvars,
            self.terms.iter().map(|(e, &c)| {
                let mut v = e.clone();
                v.resize(nvars, 0);
                (v, c)
            }),
        )
    }

    /// `(variable index, exponent, coefficient)` if `f = c x_i^n`.
    pub fn as_pure_power(&self) -> Option<(usize, u32, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, &c) = self.terms.iter().next()?;
        let nonzero: Vec<usize> = (0..self.nvars).filter(|&i| e[i] > 0).collect();
        match nonzero[..] {
            [i] => Some((i, e[i], c)),
            _ => None,
        }
    }

    /// Drops every monomial of total degree above `m`. Such monomials vanish
    /// modulo `t^(m+1)` on arcs through the origin.
    pub fn truncate_for_level(&self, m: u32) -> PolyFn {
        PolyFn {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= m)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    /// Parses `x1^2*x2 + 3*x2^4 - x1`; the variable count is the largest index used.
    pub fn parse(s: &str) -> Result<PolyFn, ArcError> {
        parse_poly(s, None)
    }

    /// Parses with a fixed variable count.
    pub fn parse_in(s: &str, nvars: usize) -> Result<PolyFn, ArcError> {
        parse_poly(s, Some(nvars))
    }
}

impl FromStr for PolyFn {
    type Err = ArcError;
    fn from_str(s: &str) -> Result<Self, ArcError> {
        PolyFn::parse(s)
    }
}

fn parse_poly(s: &str, nvars: Option<usize>) -> Result<PolyFn, ArcError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(ArcError::Parse("empty polynomial".into()));
    }
    let mut raw: Vec<(BTreeMap<usize, u32>, i64)> = Vec::new();
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if !first {
            return Err(ArcError::Parse(format!("expected '+' or '-' at {rest:?}")));
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        if term.is_empty() {
            return Err(ArcError::Parse("empty term".into()));
        }
        let mut coeff = sign;
        let mut exps: BTreeMap<usize, u32> = BTreeMap::new();
        for factor in term.split('*') {
            if let Some(var) = factor.strip_prefix('x') {
                let (idx, pw) = match var.split_once('^') {
                    Some((i, p)) => (i, p),
                    None => (var, "1"),
                };
                let idx: usize = idx
                    .parse()
                    .ok()
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| ArcError::Parse(format!("bad variable {factor:?}")))?;
                let pw: u32 = pw
                    .parse()
                    .map_err(|_| ArcError::Parse(format!("bad exponent in {factor:?}")))?;
                *exps.entry(idx).or_insert(0) += pw;
            } else {
                let c: i64 = factor
                    .parse()
                    .map_err(|_| ArcError::Parse(format!("bad factor {factor:?}")))?;
                coeff = coeff
                    .checked_mul(c)
                    .ok_or_else(|| ArcError::Parse("coefficient overflow".into()))?;
            }
        }
        raw.push((exps, coeff));
    }
    let used = raw
        .iter()
        .flat_map(|(e, _)| e.keys().copied())
        .max()
        .unwrap_or(1);
    let n = match nvars {
        Some(n) if n < used => {
            return Err(ArcError::Parse(format!("variable x{used} exceeds {n} variables")))
        }
        Some(n) => n,
        None => used,
    };
    PolyFn::new(
        n,
        raw.into_iter().map(|(e, c)| {
            let mut v = vec![0u32; n];
            for (i, p) in e {
                v[i - 1] += p;
            }
            (v, c)
        }),
    )
}

/// Descending total degree, then descending exponent vector.
impl fmt::Display for PolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Vec<u32>, i64)> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        entries.sort_by(|(e1, _), (e2, _)| {
            let d1: u32 = e1.iter().sum();
            let d2: u32 = e2.iter().sum();
            d2.cmp(&d1).then_with(|| e2.cmp(e1))
        });
        for (idx, (e, c)) in entries.into_iter().enumerate() {
            if idx == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{}", i + 1) } else { format!("x{}^{p}", i + 1) })
                .collect();
            let abs = c.unsigned_abs();
            if abs == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
