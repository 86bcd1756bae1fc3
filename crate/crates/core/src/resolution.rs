//! Milnor fibers from embedded-resolution strata.
//!
//! A strata file lists, for every nonempty set `I` of components whose open
//! stratum meets the fiber over the point, the multiplicities `N_i`,
//! `m_I = gcd(N_i)` and the class of the unramified `m_I`-cover of the
//! stratum:
//!
//! ```text
//! # comment
//! dimension = 2
//!
//! [entry]
//! components = [E1, E3]
//! multiplicities = {E1: 2, E3: 6}
//! m = 2
//! class = Mu(2)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

use crate::expr::{parse_class, ExprError};
use crate::ff::{self, FieldError, FiniteField};
use crate::gring::{Bindings, LPoly, MotClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("m = {found} for {ids} but gcd of multiplicities is {expected}")]
    GcdMismatch { ids: String, expected: u64, found: u64 },
    #[error("duplicate component set {0}")]
    DuplicateIdSet(String),
    #[error("component {0} has inconsistent multiplicities")]
    InconsistentMultiplicity(String),
    #[error("action order {order} in the class of {ids} does not divide m = {m}")]
    ActionOrder { ids: String, order: u64, m: u64 },
    #[error("class of {ids}: {source}")]
    Class { ids: String, source: ExprError },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumEntry {
    ids: Vec<String>,
    multiplicities: BTreeMap<String, u64>,
    m: u64,
    class: MotClass,
}

impl StratumEntry {
    /// Validates `m = gcd(N_i)` and that action orders in `class` divide `m`.
    pub fn new(
        ids: Vec<String>,
        multiplicities: BTreeMap<String, u64>,
        m: u64,
        class: MotClass,
    ) -> Result<Self, ResolutionError> {
        let mut ids = ids;
        ids.sort();
        let label = format!("[{}]", ids.join(", "));
        let bad = |message: String| ResolutionError::Parse { line: 0, message };
        if ids.is_empty() {
            return Err(bad("empty component set".into()));
        }
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad(format!("repeated component in {label}")));
        }
        let keys: Vec<&String> = multiplicities.keys().collect();
        if keys != ids.iter().collect::<Vec<_>>() {
            return Err(bad(format!("multiplicities must list exactly the components of {label}")));
        }
        if multiplicities.values().any(|&n| n == 0) {
            return Err(bad(format!("zero multiplicity in {label}")));
        }
        let expected = multiplicities.values().fold(0u64, |g, &n| g.gcd(&n));
        if expected != m {
            return Err(ResolutionError::GcdMismatch { ids: label, expected, found: m });
        }
        if let Some(order) = class.generators().map(|g| g.action_order()).find(|o| !m.is_multiple_of(*o)) {
            return Err(ResolutionError::ActionOrder { ids: label, order, m });
        }
        Ok(StratumEntry { ids, multiplicities, m, class })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn multiplicities(&self) -> &BTreeMap<String, u64> {
        &self.multiplicities
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn class(&self) -> &MotClass {
        &self.class
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataData {
    dimension: u32,
    entries: Vec<StratumEntry>,
}

impl StrataData {
    /// Checks that component sets are distinct and multiplicities agree
    /// across entries.
    pub fn new(dimension: u32, entries: Vec<StratumEntry>) -> Result<Self, ResolutionError> {
        let mut seen = BTreeSet::new();
        let mut mult: BTreeMap<&str, u64> = BTreeMap::new();
        for e in &entries {
            if !seen.insert(e.ids.clone()) {
                return Err(ResolutionError::DuplicateIdSet(format!("[{}]", e.ids.join(", "))));
            }
            for (id, &n) in &e.multiplicities {
                if *mult.entry(id).or_insert(n) != n {
                    return Err(ResolutionError::InconsistentMultiplicity(id.clone()));
                }
            }
        }
        Ok(StrataData { dimension, entries })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn entries(&self) -> &[StratumEntry] {
        &self.entries
    }
}

fn parse_list(value: &str) -> Option<Vec<String>> {
    let inner = value.trim().strip_prefix('[')?.strip_suffix(']')?;
    inner
        .split(',')
        .map(|s| {
            let s = s.trim();
            (!s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')).then(|| s.to_string())
        })
        .collect()
}

fn parse_map(value: &str) -> Option<BTreeMap<String, u64>> {
    let inner = value.trim().strip_prefix('{')?.strip_suffix('}')?;
    let mut out = BTreeMap::new();
    for pair in inner.split(',') {
        let (k, v) = pair.split_once(':')?;
        if out.insert(k.trim().to_string(), v.trim().parse().ok()?).is_some() {
            return None;
        }
    }
    Some(out)
}

#[derive(Default)]
struct Pending {
    line: usize,
    components: Option<Vec<String>>,
    multiplicities: Option<BTreeMap<String, u64>>,
    m: Option<u64>,
    class: Option<MotClass>,
}

impl Pending {
    fn finish(self) -> Result<StratumEntry, ResolutionError> {
        let missing = |field: &str| ResolutionError::Parse {
            line: self.line,
            message: format!("entry is missing `{field}`"),
        };
        let ids = self.components.clone().ok_or_else(|| missing("components"))?;
        let mult = self.multiplicities.clone().ok_or_else(|| missing("multiplicities"))?;
        let m = self.m.ok_or_else(|| missing("m"))?;
        let class = self.class.clone().ok_or_else(|| missing("class"))?;
        StratumEntry::new(ids, mult, m, class).map_err(|e| match e {
            ResolutionError::Parse { message, .. } => ResolutionError::Parse { line: self.line, message },
            other => other,
        })
    }
}

/// Parses and validates a strata file.
pub fn parse_strata(text: &str) -> Result<StrataData, ResolutionError> {
    let mut dimension = None;
    let mut entries = Vec::new();
    let mut current: Option<Pending> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ResolutionError::Parse { line: line_no, message };
        if line == "[entry]" {
            if let Some(p) = current.take() {
                entries.push(p.finish()?);
            }
            current = Some(Pending { line: line_no, ..Pending::default() });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let Some(p) = current.as_mut() else {
            if key != "dimension" || dimension.is_some() {
                return Err(err(format!("unexpected `{key}` before the first [entry]")));
            }
            dimension = Some(value.parse::<u32>().map_err(|_| err("bad dimension".into()))?);
            continue;
        };
        let dup = || err(format!("repeated `{key}`"));
        match key {
            "components" => {
                let v = parse_list(value).ok_or_else(|| err("expected [id, ...]".into()))?;
                p.components.replace(v).map_or(Ok(()), |_| Err(dup()))?;
            }
            "multiplicities" => {
                let v = parse_map(value).ok_or_else(|| err("expected {id: N, ...}".into()))?;
                p.multiplicities.replace(v).map_or(Ok(()), |_| Err(dup()))?;
            }
            "m" => {
                let v = value.parse::<u64>().map_err(|_| err("bad m".into()))?;
                p.m.replace(v).map_or(Ok(()), |_| Err(dup()))?;
            }
            "class" => {
                let v = parse_class(value).map_err(|source| ResolutionError::Class {
                    ids: format!("entry at line {}", p.line),
                    source,
                })?;
                p.class.replace(v).map_or(Ok(()), |_| Err(dup()))?;
            }
            _ => return Err(err(format!("unknown key `{key}`"))),
        }
    }
    if let Some(p) = current.take() {
        entries.push(p.finish()?);
    }
    let dimension = dimension.ok_or(ResolutionError::Parse {
        line: 0,
        message: "missing `dimension`".into(),
    })?;
    StrataData::new(dimension, entries)
}

impl FromStr for StrataData {
    type Err = ResolutionError;
    fn from_str(s: &str) -> Result<Self, ResolutionError> {
        parse_strata(s)
    }
}

impl fmt::Display for StrataData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dimension = {}", self.dimension)?;
        for e in &self.entries {
            let mult: Vec<String> = e.multiplicities.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            writeln!(f)?;
            writeln!(f, "[entry]")?;
            writeln!(f, "components = [{}]", e.ids.join(", "))?;
            writeln!(f, "multiplicities = {{{}}}", mult.join(", "))?;
            writeln!(f, "m = {}", e.m)?;
            writeln!(f, "class = {}", e.class)?;
        }
        Ok(())
    }
}

/// `sum_I (1 - L)^(|I| - 1) [E_I cover]`, in plain mode.
pub fn milnor_from_strata(s: &StrataData) -> MotClass {
    let one_minus_l = LPoly::one_minus_l_pow(1);
    s.entries.iter().fold(MotClass::zero(), |acc, e| {
        let weight = one_minus_l.pow(e.ids.len() as u32 - 1);
        &acc + &e.class.scale(&weight)
    })
}

/// [`milnor_from_strata`] followed by localization.
pub fn milnor_from_strata_localized(s: &StrataData) -> MotClass {
    milnor_from_strata(s).localized()
}

/// Minimal resolution of the cusp `x1^2 + x2^3`.
pub const CUSP_MINIMAL: &str = include_str!("../data/cusp_minimal.strata");
/// The cusp resolution with one extra blow-up.
pub const CUSP_BLOWUP: &str = include_str!("../data/cusp_blowup.strata");
/// Name of the opaque class of the cover over the `N = 6` component.
pub const CUSP_COVER: &str = "E3cover";

/// Counts of the cover `z^m = c_s` summed over the given values `c_s`.
/// `k = None` counts `F_q`-points; `Some(k)` counts points over the
/// algebraic closure with `Frob(z) = zeta_m^(-k) z`, which needs `m | q - 1`:
/// such `z` satisfy `z^(q-1) = c_s^((q-1)/m)`, so each `s` contributes `m`
/// or nothing.
pub fn cover_count(
    field: &FiniteField,
    m: u64,
    k: Option<u64>,
    values: impl IntoIterator<Item = u64>,
) -> Result<u64, ResolutionError> {
    let q = field.order();
    match k {
        None => {
            let h = field.power_histogram(m);
            Ok(values.into_iter().map(|c| h[c as usize]).sum())
        }
        Some(k) => {
            let target = field.pow(field.root_of_unity(m)?, ((m - k % m) % m) as u128);
            let e = ((q - 1) / m) as u128;
            Ok(values.into_iter().filter(|&c| field.pow(c, e) == target).count() as u64 * m)
        }
    }
}

/// `c_s = u(s)^(-1)` with `u(s) = s^2 (1 + s)` for `s` in `F_q - {0, -1}`:
/// the unit of `f` along the `N = 6` component of the cusp resolution.
fn cusp_cover_values(field: &FiniteField) -> Vec<u64> {
    field
        .units()
        .filter(|&s| field.add(s, 1) != 0)
        .map(|s| field.inv(field.mul(field.mul(s, s), field.add(1, s))))
        .collect()
}

/// Bindings for [`CUSP_COVER`] at each `q`: every twist when `6 | q - 1`,
/// otherwise only the plain count.
pub fn cusp_cover_bindings(qs: &[u64]) -> Result<Bindings, ResolutionError> {
    let mut b = Bindings::new();
    for &q in qs {
        let field = ff::field(q)?;
        let values = cusp_cover_values(&field);
        let plain = cover_count(&field, 6, None, values.iter().copied())?;
        b.insert(CUSP_COVER, q, Some(0), BigRational::from_integer(plain.into()));
        if (q - 1) % 6 == 0 {
            for k in 1..6 {
                let n = cover_count(&field, 6, Some(k), values.iter().copied())?;
                b.insert(CUSP_COVER, q, Some(k), BigRational::from_integer(n.into()));
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::{FermatKind, Generator, Realizer};

    #[test]
    fn single_entry() {
        let s = parse_strata("dimension = 1\n[entry]\ncomponents = [1]\nmultiplicities = {1: 2}\nm = 2\nclass = Mu(2)\n").unwrap();
        assert_eq!(s.entries().len(), 1);
        assert_eq!(milnor_from_strata(&s), MotClass::mu(2));
    }

    #[test]
    fn validation_errors() {
        let entry = |ids: &str, mult: &str, m: u64, class: &str| {
            format!("[entry]\ncomponents = {ids}\nmultiplicities = {mult}\nm = {m}\nclass = {class}\n")
        };
        let file = |body: String| format!("dimension = 2\n{body}");
        assert!(matches!(
            parse_strata(&file(entry("[A, B]", "{A: 2, B: 4}", 4, "1"))),
            Err(ResolutionError::GcdMismatch { expected: 2, found: 4, .. })
        ));
        let twice = entry("[A]", "{A: 2}", 2, "1");
        assert!(matches!(
            parse_strata(&file(format!("{twice}{twice}"))),
            Err(ResolutionError::DuplicateIdSet(_))
        ));
        assert!(matches!(
            parse_strata(&file(format!("{}{}", entry("[A]", "{A: 2}", 2, "1"), entry("[A, B]", "{A: 3, B: 3}", 3, "1")))),
            Err(ResolutionError::InconsistentMultiplicity(_))
        ));
        assert!(matches!(
            parse_strata(&file(entry("[A]", "{A: 2}", 2, "Mu(3)"))),
            Err(ResolutionError::ActionOrder { order: 3, m: 2, .. })
        ));
        assert!(matches!(
            parse_strata(&file(entry("[A]", "{B: 2}", 2, "1"))),
            Err(ResolutionError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_strata(&file(entry("[A]", "{A: 2}", 2, "Mu("))), Err(ResolutionError::Class { .. })));
        assert!(parse_strata("[entry]\ncomponents = [A]\n").is_err());
        assert!(parse_strata("dimension = 2\nfoo = 1\n").is_err());
    }

    #[test]
    fn two_strata_formula() {
        let text = "dimension = 2\n\
            [entry]\ncomponents = [1]\nmultiplicities = {1: 2}\nm = 2\nclass = Mu(2)*L\n\
            [entry]\ncomponents = [2]\nmultiplicities = {2: 4}\nm = 4\nclass = L - 1\n\
            [entry]\ncomponents = [1, 2]\nmultiplicities = {1: 2, 2: 4}\nm = 2\nclass = Mu(2)\n";
        let s = parse_strata(text).unwrap();
        let expected = MotClass::mu(2).mul_l_pow(1) + MotClass::from_lpoly(LPoly::from_terms([(1, 1), (0, -1)]))
            + MotClass::mu(2).scale(&LPoly::one_minus_l_pow(1));
        assert_eq!(milnor_from_strata(&s), expected);
        assert!(milnor_from_strata_localized(&s).localized() == milnor_from_strata_localized(&s));
    }

    #[test]
    fn round_trip_and_cusp_files() {
        for text in [CUSP_MINIMAL, CUSP_BLOWUP] {
            let s = parse_strata(text).unwrap();
            assert_eq!(parse_strata(&s.to_string()).unwrap(), s);
        }
        let min = parse_strata(CUSP_MINIMAL).unwrap();
        assert_eq!(min.entries().len(), 6);
        let e3 = MotClass::from(Generator::opaque("E3cover", 6).unwrap());
        let expected = MotClass::mu(2) + MotClass::mu(3) + e3 + MotClass::one() - MotClass::l_pow(1);
        assert_eq!(milnor_from_strata(&min), expected);
        assert_eq!(milnor_from_strata(&parse_strata(CUSP_BLOWUP).unwrap()), expected);
    }

    #[test]
    fn additivity_in_one_stratum() {
        let split = CUSP_MINIMAL.replace("class = Mu(2)*L", "class = Mu(2)*L - Mu(2) + Mu(2)*1");
        assert_eq!(
            milnor_from_strata(&parse_strata(&split).unwrap()),
            milnor_from_strata(&parse_strata(CUSP_MINIMAL).unwrap())
        );
    }

    /// Oracle for the cover: search all `z` in an extension containing
    /// every sixth root, for each `s`.
    fn cover_brute(q: u64, k: u64) -> u64 {
        let base = ff::field(q).unwrap();
        let budget = ff::Budget::default();
        let tw = ff::TwistExtension::new(&base, 6, &budget).unwrap();
        let big = tw.field();
        let zeta = tw.embed(base.root_of_unity(6).unwrap());
        let shift = big.pow(zeta, ((6 - k % 6) % 6) as u128);
        let mut n = 0;
        for c in cusp_cover_values(&base) {
            let c = tw.embed(c);
            n += big
                .units()
                .filter(|&z| big.pow(z, 6) == c && big.pow(z, q as u128) == big.mul(shift, z))
                .count() as u64;
        }
        n
    }

    #[test]
    fn cover_counts_match_brute_force_and_fermat_curve() {
        let fermat = MotClass::from(Generator::fermat(FermatKind::One, 2, 3).unwrap());
        let r = Realizer::with_bindings(cusp_cover_bindings(&[7]).unwrap());
        let e3 = MotClass::from(Generator::opaque("E3cover", 6).unwrap());
        for k in 0..6 {
            let count = cover_brute(7, k);
            assert_eq!(r.twisted(&e3, 7, k).unwrap(), BigRational::from_integer(count.into()));
            assert_eq!(r.twisted(&fermat, 7, k).unwrap(), BigRational::from_integer(count.into()), "k={k}");
        }
        for q in [5u64, 11, 13] {
            let r = Realizer::with_bindings(cusp_cover_bindings(&[q]).unwrap());
            assert_eq!(r.plain(&e3, q).unwrap(), r.plain(&fermat, q).unwrap(), "q={q}");
        }
    }
}
