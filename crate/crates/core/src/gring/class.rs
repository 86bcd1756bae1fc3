//! Elements of the monodromic Grothendieck ring and its `(1 - L^i)`-localization.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::generator::Generator;
use super::lpoly::LPoly;

/// A sorted product of generators. The empty monomial is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Generator>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut gens: Vec<Generator>) -> Self {
        gens.sort();
        Monomial(gens)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Monomial::new(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Plain,
    Localized,
}

/// `(sum_M P_M(L) * M) / prod_i (1 - L^i)`.
///
/// Always kept canonical: no zero numerator entries, a sorted denominator,
/// and a factor `1 - L^i` is cancelled exactly when every numerator
/// coefficient is divisible by it. Structural equality is derived equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MotClass {
    numerator: BTreeMap<Monomial, LPoly>,
    denominator: Vec<u32>,
    mode: Mode,
}

impl Default for MotClass {
    fn default() -> Self {
        MotClass::zero()
    }
}

impl MotClass {
    pub fn zero() -> Self {
        MotClass {
            numerator: BTreeMap::new(),
            denominator: Vec::new(),
            mode: Mode::Plain,
        }
    }

    pub fn one() -> Self {
        MotClass::from_lpoly(LPoly::one())
    }

    pub fn int(c: i64) -> Self {
        MotClass::from_lpoly(LPoly::constant(c))
    }

    /// `L^e`.
    pub fn l_pow(e: i64) -> Self {
        MotClass::from_lpoly(LPoly::l_pow(e))
    }

    pub fn from_lpoly(p: LPoly) -> Self {
        MotClass::term(Monomial::unit(), p)
    }

    pub fn term(m: Monomial, p: LPoly) -> Self {
        let mut numerator = BTreeMap::new();
        if !p.is_zero() {
            numerator.insert(m, p);
        }
        MotClass {
            numerator,
            denominator: Vec::new(),
            mode: Mode::Plain,
        }
    }

    /// The class of one generator; `None` stands for the unit.
    pub fn generator(g: Option<Generator>) -> Self {
        match g {
            Some(g) => MotClass::term(Monomial::new(vec![g]), LPoly::one()),
            None => MotClass::one(),
        }
    }

    /// The free torsor `Mu(d)`.
    pub fn mu(d: u64) -> Self {
        MotClass::generator(Generator::mu(d))
    }

    /// Assembles a class from raw parts and canonicalizes it.
    pub fn from_parts(
        numerator: impl IntoIterator<Item = (Monomial, LPoly)>,
        denominator: Vec<u32>,
        mode: Mode,
    ) -> Self {
        let mut num: BTreeMap<Monomial, LPoly> = BTreeMap::new();
        for (m, p) in numerator {
            let entry = num.entry(m.clone()).or_default();
            *entry = &*entry + &p;
            if entry.is_zero() {
                num.remove(&m);
            }
        }
        let mode = if denominator.is_empty() { mode } else { Mode::Localized };
        let mut x = MotClass {
            numerator: num,
            denominator,
            mode,
        };
        x.canonicalize();
        x
    }

    fn canonicalize(&mut self) {
        self.numerator.retain(|_, p| !p.is_zero());
        self.denominator.sort_unstable();
        if self.numerator.is_empty() {
            self.denominator.clear();
            return;
        }
        let mut kept = Vec::with_capacity(self.denominator.len());
        for &i in &self.denominator.clone() {
            let quotients: Option<Vec<(Monomial, LPoly)>> = self
                .numerator
                .iter()
                .map(|(m, p)| p.div_one_minus_l_pow(i as i64).map(|q| (m.clone(), q)))
                .collect();
            match quotients {
                Some(qs) => self.numerator = qs.into_iter().collect(),
                None => kept.push(i),
            }
        }
        self.denominator = kept;
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Same class, viewed in the localized ring.
    pub fn localized(&self) -> Self {
        let mut x = self.clone();
        x.mode = Mode::Localized;
        x
    }

    pub fn numerator(&self) -> impl Iterator<Item = (&Monomial, &LPoly)> + '_ {
        self.numerator.iter()
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denominator
    }

    /// The coefficient of the unit monomial when the class has no other
    /// monomials and no denominator.
    pub fn as_lpoly(&self) -> Option<LPoly> {
        if !self.denominator.is_empty() {
            return None;
        }
        match self.numerator.len() {
            0 => Some(LPoly::zero()),
            1 => self.numerator.get(&Monomial::unit()).cloned(),
            _ => None,
        }
    }

    /// Generators occurring anywhere in the class.
    pub fn generators(&self) -> impl Iterator<Item = &Generator> + '_ {
        self.numerator.keys().flat_map(|m| m.generators().iter())
    }

    /// Divides by `1 - L^i`, moving to the localized ring.
    pub fn div_one_minus_l_pow(&self, i: u32) -> Self {
        assert!(i >= 1, "denominator factors are 1 - L^i with i >= 1");
        let mut denominator = self.denominator.clone();
        denominator.push(i);
        MotClass::from_parts(self.numerator.clone(), denominator, Mode::Localized)
    }

    pub fn scale(&self, c: &LPoly) -> Self {
        MotClass::from_parts(
            self.numerator.iter().map(|(m, p)| (m.clone(), p * c)),
            self.denominator.clone(),
            self.mode,
        )
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&LPoly::constant(c))
    }

    /// Multiplies by `L^e`.
    pub fn mul_l_pow(&self, e: i64) -> Self {
        MotClass::from_parts(
            self.numerator.iter().map(|(m, p)| (m.clone(), p.shift(e))),
            self.denominator.clone(),
            self.mode,
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(MotClass::one(), |acc, _| &acc * self)
    }

    fn combined_mode(&self, other: &MotClass) -> Mode {
        if self.mode == Mode::Localized || other.mode == Mode::Localized {
            Mode::Localized
        } else {
            Mode::Plain
        }
    }

    /// Numerator rewritten over a larger denominator `target`, which must
    /// contain the current denominator as a sub-multiset.
    fn numerator_over(&self, target: &[u32]) -> BTreeMap<Monomial, LPoly> {
        let mut extra = LPoly::one();
        let mut mine = multiset(&self.denominator);
        for &i in target {
            match mine.get_mut(&i) {
                Some(c) if *c > 0 => *c -= 1,
                _ => extra = &extra * &LPoly::one_minus_l_pow(i as i64),
            }
        }
        self.numerator
            .iter()
            .map(|(m, p)| (m.clone(), p * &extra))
            .collect()
    }

    /// Expresses each monomial's contribution as its own class.
    pub fn split_terms(&self) -> Vec<MotClass> {
        self.numerator
            .iter()
            .map(|(m, p)| {
                MotClass::from_parts([(m.clone(), p.clone())], self.denominator.clone(), self.mode)
            })
            .collect()
    }
}

fn multiset(v: &[u32]) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for &i in v {
        *out.entry(i).or_insert(0) += 1;
    }
    out
}

/// Least common multiple of two denominators as multisets.
fn common_denominator(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (ma, mb) = (multiset(a), multiset(b));
    let mut out = Vec::new();
    for i in ma.keys().chain(mb.keys()).copied().collect::<std::collections::BTreeSet<_>>() {
        let n = ma.get(&i).copied().unwrap_or(0).max(mb.get(&i).copied().unwrap_or(0));
        out.extend(std::iter::repeat_n(i, n));
    }
    out
}

impl Add for &MotClass {
    type Output = MotClass;
    fn add(self, rhs: &MotClass) -> MotClass {
        let denom = common_denominator(&self.denominator, &rhs.denominator);
        let mut num = self.numerator_over(&denom);
        for (m, p) in rhs.numerator_over(&denom) {
            let entry = num.entry(m).or_default();
            *entry = &*entry + &p;
        }
        MotClass::from_parts(num, denom, self.combined_mode(rhs))
    }
}

impl Add for MotClass {
    type Output = MotClass;
    fn add(self, rhs: MotClass) -> MotClass {
        &self + &rhs
    }
}

impl Neg for &MotClass {
    type Output = MotClass;
    fn neg(self) -> MotClass {
        self.scale_int(-1)
    }
}

impl Neg for MotClass {
    type Output = MotClass;
    fn neg(self) -> MotClass {
        -&self
    }
}

impl Sub for &MotClass {
    type Output = MotClass;
    fn sub(self, rhs: &MotClass) -> MotClass {
        self + &(-rhs)
    }
}

impl Sub for MotClass {
    type Output = MotClass;
    fn sub(self, rhs: MotClass) -> MotClass {
        &self - &rhs
    }
}

impl Mul for &MotClass {
    type Output = MotClass;
    fn mul(self, rhs: &MotClass) -> MotClass {
        let mut num: Vec<(Monomial, LPoly)> = Vec::new();
        for (m1, p1) in &self.numerator {
            for (m2, p2) in &rhs.numerator {
                num.push((m1.concat(m2), p1 * p2));
            }
        }
        let mut denom = self.denominator.clone();
        denom.extend_from_slice(&rhs.denominator);
        MotClass::from_parts(num, denom, self.combined_mode(rhs))
    }
}

impl Mul for MotClass {
    type Output = MotClass;
    fn mul(self, rhs: MotClass) -> MotClass {
        &self * &rhs
    }
}

impl From<LPoly> for MotClass {
    fn from(p: LPoly) -> Self {
        MotClass::from_lpoly(p)
    }
}

impl From<Generator> for MotClass {
    fn from(g: Generator) -> Self {
        MotClass::generator(Some(g))
    }
}

fn write_term(out: &mut String, first: bool, m: &Monomial, p: &LPoly) {
    let single = p.len() == 1;
    let (e, c) = p.terms().next().expect("nonzero");
    let negative = single && *c < BigInt::zero();
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let mut factors: Vec<String> = Vec::new();
    if single {
        let abs = if negative { -c } else { c.clone() };
        if !abs.is_one() || (e == 0 && m.is_unit()) {
            factors.push(abs.to_string());
        }
        match e {
            0 => {}
            1 => factors.push("L".into()),
            _ => factors.push(format!("L^{e}")),
        }
    } else {
        factors.push(format!("({p})"));
    }
    if !m.is_unit() {
        factors.push(m.to_string());
    }
    out.push_str(&factors.join("*"));
}

/// Round-trips through the class-expression parser.
impl fmt::Display for MotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = String::new();
        if self.numerator.is_empty() {
            num.push('0');
        }
        // unit monomial last reads more naturally: Mu(2) + Mu(3) - L + 1
        let mut entries: Vec<(&Monomial, &LPoly)> = self.numerator.iter().collect();
        let unit_first = entries.first().is_some_and(|(m, _)| m.is_unit());
        entries.rotate_left(usize::from(unit_first));
        let mut first = true;
        for (m, p) in entries {
            if m.is_unit() {
                for (e, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
                    write_term(&mut num, first, m, &LPoly::monomial(c.clone(), e));
                    first = false;
                }
            } else {
                write_term(&mut num, first, m, p);
                first = false;
            }
        }
        if self.denominator.is_empty() {
            if self.mode == Mode::Localized {
                write!(f, "loc({num})")
            } else {
                write!(f, "{num}")
            }
        } else {
            let den: Vec<String> = self
                .denominator
                .iter()
                .map(|&i| if i == 1 { "(1 - L)".to_string() } else { format!("(1 - L^{i})") })
                .collect();
            write!(f, "({num})/({})", den.join("*"))
        }
    }
}
